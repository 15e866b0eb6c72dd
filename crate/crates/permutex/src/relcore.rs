//! Finite carriers, binary relations as packed bit matrices, total
//! functions, and the calculus of relations (composition, opposite,
//! kernel pairs, images, epi/mono factorisation).

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelError {
    #[error("carrier must have at least one element")]
    EmptyCarrier,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("relation is not square ({src} x {dst})")]
    NotSquare { src: usize, dst: usize },
    #[error("function is not surjective")]
    NotSurjective,
    #[error("table entry {value} out of range for codomain of size {size}")]
    EntryOutOfRange { value: usize, size: usize },
    #[error("table length {len} does not match domain size {size}")]
    TableLength { len: usize, size: usize },
}

/// A finite object: its elements are `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Carrier {
    size: usize,
}

impl Carrier {
    pub fn new(size: usize) -> Result<Self, RelError> {
        if size == 0 {
            Err(RelError::EmptyCarrier)
        } else {
            Ok(Carrier { size })
        }
    }

    pub fn size(self) -> usize {
        self.size
    }

    pub fn elements(self) -> std::ops::Range<usize> {
        0..self.size
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{0..{}}}", self.size)
    }
}

/// Binary relation between two carriers, stored as a dense bit matrix
/// with 64-bit word rows so composition is a bit-parallel boolean
/// matrix product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    src: Carrier,
    dst: Carrier,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(src: Carrier, dst: Carrier) -> Self {
        let words_per_row = dst.size().div_ceil(64);
        Relation {
            src,
            dst,
            words_per_row,
            bits: vec![0; src.size() * words_per_row],
        }
    }

    pub fn identity(c: Carrier) -> Self {
        let mut r = Relation::empty(c, c);
        for x in c.elements() {
            r.set(x, x);
        }
        r
    }

    pub fn full(src: Carrier, dst: Carrier) -> Self {
        let mut r = Relation::empty(src, dst);
        for a in src.elements() {
            for b in dst.elements() {
                r.set(a, b);
            }
        }
        r
    }

    pub fn from_pairs<I>(src: Carrier, dst: Carrier, pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut r = Relation::empty(src, dst);
        for (a, b) in pairs {
            r.set(a, b);
        }
        r
    }

    pub fn src(&self) -> Carrier {
        self.src
    }

    pub fn dst(&self) -> Carrier {
        self.dst
    }

    fn set(&mut self, a: usize, b: usize) {
        assert!(a < self.src.size() && b < self.dst.size());
        self.bits[a * self.words_per_row + b / 64] |= 1 << (b % 64);
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words_per_row + b / 64] >> (b % 64) & 1 == 1
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.words_per_row..(a + 1) * self.words_per_row]
    }

    /// Pairs in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in self.src.elements() {
            for b in self.dst.elements() {
                if self.contains(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn pair_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Composite of `self: A -> B` with `s: B -> C`, written `SR` in
    /// right-to-left notation: `(a, c)` related iff some `b` has
    /// `(a, b) in self` and `(b, c) in s`.
    pub fn compose(&self, s: &Relation) -> Result<Relation, RelError> {
        if self.dst != s.src {
            return Err(RelError::DimensionMismatch(format!(
                "compose: inner carriers differ ({} vs {})",
                self.dst, s.src
            )));
        }
        let mut out = Relation::empty(self.src, s.dst);
        for a in self.src.elements() {
            for (wi, word) in self.row(a).iter().enumerate() {
                let mut w = *word;
                while w != 0 {
                    let b = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    let (lo, hi) = (a * out.words_per_row, (a + 1) * out.words_per_row);
                    for (o, sw) in out.bits[lo..hi].iter_mut().zip(s.row(b)) {
                        *o |= sw;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Transpose, conventionally written `R°`.
    pub fn opposite(&self) -> Relation {
        let mut out = Relation::empty(self.dst, self.src);
        for a in self.src.elements() {
            for b in self.dst.elements() {
                if self.contains(a, b) {
                    out.set(b, a);
                }
            }
        }
        out
    }

    pub fn is_subset_of(&self, other: &Relation) -> Result<bool, RelError> {
        if self.src != other.src || self.dst != other.dst {
            return Err(RelError::DimensionMismatch(
                "subset test on differently shaped relations".into(),
            ));
        }
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0))
    }

    /// First cell (row-major) where the two relations differ.
    pub fn first_difference(&self, other: &Relation) -> Option<(usize, usize)> {
        for a in self.src.elements() {
            for b in self.dst.elements() {
                if self.contains(a, b) != other.contains(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Reflexive/symmetric/transitive flags by the three inclusion
    /// tests `1_A <= R`, `R° <= R`, `RR <= R`.
    pub fn eq_props(&self) -> Result<EqClassification, RelError> {
        if self.src != self.dst {
            return Err(RelError::NotSquare {
                src: self.src.size(),
                dst: self.dst.size(),
            });
        }
        let reflexive = Relation::identity(self.src).is_subset_of(self)?;
        let symmetric = self.opposite().is_subset_of(self)?;
        let transitive = self.compose(self)?.is_subset_of(self)?;
        Ok(EqClassification {
            reflexive,
            symmetric,
            transitive,
            equivalence: reflexive && symmetric && transitive,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EqClassification {
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    pub equivalence: bool,
}

/// Total function between carriers; identified with its graph relation
/// when it meets the relational calculus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionArrow {
    src: Carrier,
    dst: Carrier,
    table: Vec<usize>,
}

impl FunctionArrow {
    pub fn new(src: Carrier, dst: Carrier, table: Vec<usize>) -> Result<Self, RelError> {
        if table.len() != src.size() {
            return Err(RelError::TableLength {
                len: table.len(),
                size: src.size(),
            });
        }
        if let Some(&v) = table.iter().find(|&&v| v >= dst.size()) {
            return Err(RelError::EntryOutOfRange {
                value: v,
                size: dst.size(),
            });
        }
        Ok(FunctionArrow { src, dst, table })
    }

    pub fn identity(c: Carrier) -> Self {
        FunctionArrow {
            src: c,
            dst: c,
            table: c.elements().collect(),
        }
    }

    pub fn constant(src: Carrier, dst: Carrier, value: usize) -> Result<Self, RelError> {
        FunctionArrow::new(src, dst, vec![value; src.size()])
    }

    pub fn src(&self) -> Carrier {
        self.src
    }

    pub fn dst(&self) -> Carrier {
        self.dst
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `g ∘ self`: apply `self` first, then `g`.
    pub fn then(&self, g: &FunctionArrow) -> Result<FunctionArrow, RelError> {
        if self.dst != g.src {
            return Err(RelError::DimensionMismatch(format!(
                "then: codomain {} does not match domain {}",
                self.dst, g.src
            )));
        }
        FunctionArrow::new(
            self.src,
            g.dst,
            self.table.iter().map(|&x| g.apply(x)).collect(),
        )
    }

    /// The relation `<1_A, f>`.
    pub fn graph(&self) -> Relation {
        Relation::from_pairs(
            self.src,
            self.dst,
            self.table.iter().enumerate().map(|(a, &b)| (a, b)),
        )
    }

    /// The relation `f° f = {(a, a') | f(a) = f(a')}`.
    pub fn kernel_pair(&self) -> Relation {
        let mut r = Relation::empty(self.src, self.src);
        for a in self.src.elements() {
            for a2 in self.src.elements() {
                if self.table[a] == self.table[a2] {
                    r.set(a, a2);
                }
            }
        }
        r
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.dst.size()];
        for &v in &self.table {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.dst.size()];
        for &v in &self.table {
            if hit[v] {
                return false;
            }
            hit[v] = true;
        }
        true
    }

    /// Regular epimorphisms coincide with surjections; `ff° = 1_B`
    /// gives the same answer (asserted by the test suite).
    pub fn is_regular_epi(&self) -> bool {
        self.is_surjective()
    }

    /// (regular epi, mono) factorisation `f = m ∘ e`.  The image
    /// carrier is ordered by first occurrence in the table.
    pub fn epi_mono_factor(&self) -> (FunctionArrow, FunctionArrow) {
        let mut image = Vec::new();
        let mut index_of = vec![usize::MAX; self.dst.size()];
        for &v in &self.table {
            if index_of[v] == usize::MAX {
                index_of[v] = image.len();
                image.push(v);
            }
        }
        let im = Carrier::new(image.len()).expect("domain is nonempty");
        let e = FunctionArrow {
            src: self.src,
            dst: im,
            table: self.table.iter().map(|&v| index_of[v]).collect(),
        };
        let m = FunctionArrow {
            src: im,
            dst: self.dst,
            table: image,
        };
        (e, m)
    }
}

/// Image `f<R>` of a relation on `X` along a surjection `f: X -> Y`:
/// the pairs `(f(x), f(x'))` for `(x, x')` in `r`, equal to the
/// composite `f R f°`.
pub fn image_along(r: &Relation, f: &FunctionArrow) -> Result<Relation, RelError> {
    if r.src() != f.src() || r.dst() != f.src() {
        return Err(RelError::DimensionMismatch(
            "image_along: relation is not on the domain of the map".into(),
        ));
    }
    if !f.is_regular_epi() {
        return Err(RelError::NotSurjective);
    }
    let mut out = Relation::empty(f.dst(), f.dst());
    for (x, x2) in r.pairs() {
        out.set(f.apply(x), f.apply(x2));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> Carrier {
        Carrier::new(n).unwrap()
    }

    fn arrow(src: usize, dst: usize, table: &[usize]) -> FunctionArrow {
        FunctionArrow::new(c(src), c(dst), table.to_vec()).unwrap()
    }

    #[test]
    fn empty_carrier_rejected() {
        assert_eq!(Carrier::new(0), Err(RelError::EmptyCarrier));
    }

    #[test]
    fn compose_identity_is_noop() {
        let r = Relation::from_pairs(c(3), c(3), [(0, 1), (2, 2)]);
        let id = Relation::identity(c(3));
        assert_eq!(id.compose(&r).unwrap(), r);
        assert_eq!(r.compose(&id).unwrap(), r);
    }

    #[test]
    fn compose_rejects_mismatched_carriers() {
        let r = Relation::full(c(2), c(3));
        let s = Relation::full(c(2), c(2));
        assert!(matches!(r.compose(&s), Err(RelError::DimensionMismatch(_))));
    }

    #[test]
    fn kernel_pair_by_enumeration() {
        // f = [0,1,1] identifies 1 and 2.
        let f = arrow(3, 2, &[0, 1, 1]);
        let expected = Relation::from_pairs(c(3), c(3), [(0, 0), (1, 1), (1, 2), (2, 1), (2, 2)]);
        assert_eq!(f.kernel_pair(), expected);
        // kernel pair is also f° f computed relationally
        let via_rel = f.graph().compose(&f.graph().opposite()).unwrap();
        assert_eq!(via_rel, expected);
    }

    #[test]
    fn surjection_gives_ff_op_identity() {
        let f = arrow(3, 2, &[0, 1, 1]);
        let ffo = f.graph().opposite().compose(&f.graph()).unwrap();
        assert_eq!(ffo, Relation::identity(c(2)));
    }

    #[test]
    fn non_surjective_ff_op_not_identity() {
        let f = arrow(1, 2, &[0]);
        assert!(!f.is_regular_epi());
        let ffo = f.graph().opposite().compose(&f.graph()).unwrap();
        assert_eq!(ffo, Relation::from_pairs(c(2), c(2), [(0, 0)]));
    }

    #[test]
    fn opposite_is_transpose_and_involution() {
        let r = Relation::from_pairs(c(2), c(2), [(0, 1)]);
        assert_eq!(r.opposite(), Relation::from_pairs(c(2), c(2), [(1, 0)]));
        assert_eq!(r.opposite().opposite(), r);
        assert_eq!(
            Relation::identity(c(4)).opposite(),
            Relation::identity(c(4))
        );
    }

    #[test]
    fn graph_is_a_map() {
        // maps satisfy id ⊆ f f° and f° f ⊆ id
        for table in [[0usize, 0, 0], [0, 1, 1], [2, 1, 0]] {
            let f = arrow(3, 3, &table);
            let g = f.graph();
            let ffo = g.compose(&g.opposite()).unwrap();
            let fof = g.opposite().compose(&g).unwrap();
            assert!(Relation::identity(c(3)).is_subset_of(&ffo).unwrap());
            assert!(fof.is_subset_of(&Relation::identity(c(3))).unwrap());
        }
    }

    #[test]
    fn image_along_pointwise() {
        let r = Relation::from_pairs(c(3), c(3), [(0, 0), (1, 1), (2, 2), (0, 2), (2, 0)]);
        let f = arrow(3, 2, &[0, 0, 1]);
        let expected = Relation::from_pairs(c(2), c(2), [(0, 0), (1, 1), (0, 1), (1, 0)]);
        assert_eq!(image_along(&r, &f).unwrap(), expected);
        // agrees with the composite f R f°
        let chain = f
            .graph()
            .opposite()
            .compose(&r)
            .unwrap()
            .compose(&f.graph())
            .unwrap();
        assert_eq!(chain, expected);
    }

    #[test]
    fn image_along_requires_surjectivity() {
        let r = Relation::identity(c(2));
        let f = arrow(2, 3, &[0, 1]);
        assert_eq!(image_along(&r, &f), Err(RelError::NotSurjective));
    }

    #[test]
    fn image_of_diagonal_is_diagonal() {
        let f = arrow(4, 2, &[0, 1, 0, 1]);
        assert_eq!(
            image_along(&Relation::identity(c(4)), &f).unwrap(),
            Relation::identity(c(2))
        );
    }

    #[test]
    fn eq_props_examples() {
        let diag = Relation::identity(c(3));
        let p = diag.eq_props().unwrap();
        assert!(p.reflexive && p.symmetric && p.transitive && p.equivalence);

        let order = Relation::from_pairs(c(2), c(2), [(0, 0), (0, 1), (1, 1)]);
        let p = order.eq_props().unwrap();
        assert!(p.reflexive && p.transitive && !p.symmetric && !p.equivalence);

        let rect = Relation::full(c(2), c(3));
        assert!(matches!(rect.eq_props(), Err(RelError::NotSquare { .. })));
    }

    #[test]
    fn epi_mono_factor_first_occurrence() {
        let f = arrow(2, 3, &[1, 1]);
        let (e, m) = f.epi_mono_factor();
        assert_eq!(e.table(), &[0, 0]);
        assert_eq!(m.table(), &[1]);
        assert_eq!(e.then(&m).unwrap(), f);
        assert!(e.is_surjective());
        assert!(m.is_injective());
        // R_f = R_e
        assert_eq!(f.kernel_pair(), e.kernel_pair());
    }

    #[test]
    fn epi_mono_factor_of_surjection_and_injection() {
        let f = arrow(3, 2, &[1, 0, 1]);
        let (e, m) = f.epi_mono_factor();
        assert_eq!(m.src().size(), 2);
        assert!(m.is_injective() && m.is_surjective());
        assert_eq!(e.then(&m).unwrap(), f);

        let g = arrow(2, 4, &[3, 0]);
        let (e, m) = g.epi_mono_factor();
        assert_eq!(e.src().size(), e.dst().size());
        assert_eq!(e.then(&m).unwrap(), g);
    }
}
