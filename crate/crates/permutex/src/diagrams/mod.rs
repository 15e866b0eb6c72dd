//! Diagram shapes over a pluggable finite backend (plain
//! sets or finite algebras of a fixed signature): exact forks, regular
//! pushouts, cube comparisons and cuboids.

mod cube;
mod cuboid;
mod square;

pub use cube::{cube_comparison, CubeDiagram};
pub use cuboid::{build_split_cuboid, check_cuboid, CuboidDiagram, CuboidReport, CuboidSections};
pub use square::{
    is_regular_pushout, regular_pushout_relational, set_counterexample_square, SquareDiagram,
};

use std::collections::HashMap;

use thiserror::Error;

use crate::algcore::{hom_check, AlgError, FiniteAlgebra, OpTable, Signature};
use crate::relcore::{Carrier, FunctionArrow, RelError, Relation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("morphism `{name}` does not fit its endpoints")]
    BadEndpoints { name: String },
    #[error("morphism `{name}` is not valid in this backend")]
    InvalidMorphism { name: String },
    #[error("object does not belong to this backend")]
    BackendObjectMismatch,
    #[error("required commutation `{0}` fails")]
    Commutation(String),
    #[error("`{name}` is not a section of `{of}`")]
    NotSection { name: String, of: String },
    #[error("morphism `{0}` must be surjective")]
    MustBeSurjective(String),
    #[error("pair `{0}` is not jointly injective")]
    NotJointlyInjective(String),
    #[error("element set is not closed under the operations (not a subalgebra)")]
    NotSubalgebra,
    #[error("construction would produce an empty object")]
    EmptyObject,
    #[error("cuboid hypotheses fail: {0}")]
    CuboidHypotheses(String),
}

/// An object of the ambient finite category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Object {
    Set(Carrier),
    Alg(FiniteAlgebra),
}

impl Object {
    pub fn carrier(&self) -> Carrier {
        match self {
            Object::Set(c) => *c,
            Object::Alg(a) => a.carrier(),
        }
    }

    pub fn algebra(&self) -> Option<&FiniteAlgebra> {
        match self {
            Object::Set(_) => None,
            Object::Alg(a) => Some(a),
        }
    }
}

/// The ambient category the diagrams live in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    Set,
    Algebra(Signature),
}

impl Backend {
    pub fn check_object(&self, obj: &Object) -> Result<(), DiagramError> {
        match (self, obj) {
            (Backend::Set, Object::Set(_)) => Ok(()),
            (Backend::Algebra(sig), Object::Alg(a)) if a.signature() == *sig => Ok(()),
            _ => Err(DiagramError::BackendObjectMismatch),
        }
    }

    /// A morphism is any total function for sets, and a homomorphism
    /// for algebras.
    pub fn check_morphism(
        &self,
        name: &str,
        src: &Object,
        dst: &Object,
        f: &FunctionArrow,
    ) -> Result<(), DiagramError> {
        self.check_object(src)?;
        self.check_object(dst)?;
        if f.src() != src.carrier() || f.dst() != dst.carrier() {
            return Err(DiagramError::BadEndpoints { name: name.into() });
        }
        if let (Object::Alg(a), Object::Alg(b)) = (src, dst) {
            if !hom_check(a, b, f)? {
                return Err(DiagramError::InvalidMorphism { name: name.into() });
            }
        }
        Ok(())
    }
}

pub(crate) fn require_commutes(
    label: &str,
    lhs: &FunctionArrow,
    rhs: &FunctionArrow,
) -> Result<(), DiagramError> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(DiagramError::Commutation(label.into()))
    }
}

pub(crate) fn require_section(
    name: &str,
    of: &str,
    section: &FunctionArrow,
    epi: &FunctionArrow,
) -> Result<(), DiagramError> {
    let round = section.then(epi).map_err(|_| DiagramError::NotSection {
        name: name.into(),
        of: of.into(),
    })?;
    if round == FunctionArrow::identity(section.src()) {
        Ok(())
    } else {
        Err(DiagramError::NotSection {
            name: name.into(),
            of: of.into(),
        })
    }
}

pub(crate) fn jointly_injective(p1: &FunctionArrow, p2: &FunctionArrow) -> bool {
    let mut seen = std::collections::HashSet::new();
    (0..p1.src().size()).all(|x| seen.insert((p1.apply(x), p2.apply(x))))
}

/// Index of each `(p1(x), p2(x))` pair, for locating induced elements.
pub(crate) fn pair_index(p1: &FunctionArrow, p2: &FunctionArrow) -> HashMap<(usize, usize), usize> {
    (0..p1.src().size())
        .map(|x| ((p1.apply(x), p2.apply(x)), x))
        .collect()
}

/// Builds the object whose elements are the given pairs of elements of
/// `left` and `right`, with the two projections.  For the algebra
/// backend the pair set must be a subalgebra of the product.
pub(crate) fn pair_subobject(
    b: &Backend,
    left: &Object,
    right: &Object,
    pairs: &[(usize, usize)],
) -> Result<(Object, FunctionArrow, FunctionArrow), DiagramError> {
    if pairs.is_empty() {
        return Err(DiagramError::EmptyObject);
    }
    let carrier = Carrier::new(pairs.len()).expect("nonempty");
    let p1 = FunctionArrow::new(carrier, left.carrier(), pairs.iter().map(|p| p.0).collect())?;
    let p2 = FunctionArrow::new(
        carrier,
        right.carrier(),
        pairs.iter().map(|p| p.1).collect(),
    )?;
    let object = match b {
        Backend::Set => Object::Set(carrier),
        Backend::Algebra(_) => {
            let (la, ra) = match (left, right) {
                (Object::Alg(la), Object::Alg(ra)) => (la, ra),
                _ => return Err(DiagramError::BackendObjectMismatch),
            };
            let index: HashMap<(usize, usize), usize> =
                pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
            let n = pairs.len();
            let mut ops = Vec::with_capacity(la.ops().len());
            for (op_l, op_r) in la.ops().iter().zip(ra.ops()) {
                let mut table = Vec::with_capacity(n.pow(op_l.arity as u32));
                let mut args = vec![0usize; op_l.arity];
                loop {
                    let largs: Vec<usize> = args.iter().map(|&i| pairs[i].0).collect();
                    let rargs: Vec<usize> = args.iter().map(|&i| pairs[i].1).collect();
                    let result = (op_l.apply(la.size(), &largs), op_r.apply(ra.size(), &rargs));
                    table.push(*index.get(&result).ok_or(DiagramError::NotSubalgebra)?);
                    let mut i = op_l.arity;
                    let mut advanced = false;
                    while i > 0 {
                        i -= 1;
                        args[i] += 1;
                        if args[i] < n {
                            advanced = true;
                            break;
                        }
                        args[i] = 0;
                    }
                    if !advanced {
                        break;
                    }
                }
                ops.push(OpTable {
                    name: op_l.name.clone(),
                    arity: op_l.arity,
                    table,
                });
            }
            Object::Alg(FiniteAlgebra::new("sub", carrier, ops)?)
        }
    };
    Ok((object, p1, p2))
}

/// Pullback of the cospan `f: A -> B`, `d: D -> B`: the pairs `(x, a)`
/// with `d(x) = f(a)`, ordered lexicographically, with projections
/// `p_d` and `p_a`.
pub fn pullback(
    b: &Backend,
    a_obj: &Object,
    b_obj: &Object,
    d_obj: &Object,
    f: &FunctionArrow,
    d: &FunctionArrow,
) -> Result<(Object, FunctionArrow, FunctionArrow), DiagramError> {
    b.check_morphism("f", a_obj, b_obj, f)?;
    b.check_morphism("d", d_obj, b_obj, d)?;
    let mut pairs = Vec::new();
    for x in d_obj.carrier().elements() {
        for a in a_obj.carrier().elements() {
            if d.apply(x) == f.apply(a) {
                pairs.push((x, a));
            }
        }
    }
    pair_subobject(b, d_obj, a_obj, &pairs)
}

/// A relation on `A` presented as a jointly-monic span of projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tabulation {
    pub object: Object,
    pub p1: FunctionArrow,
    pub p2: FunctionArrow,
}

/// Tabulates a relation on the given object: one element per pair, in
/// row-major order.
pub fn tabulate(b: &Backend, a_obj: &Object, r: &Relation) -> Result<Tabulation, DiagramError> {
    b.check_object(a_obj)?;
    if r.src() != a_obj.carrier() || r.dst() != a_obj.carrier() {
        return Err(DiagramError::BadEndpoints {
            name: "tabulate".into(),
        });
    }
    let (object, p1, p2) = pair_subobject(b, a_obj, a_obj, &r.pairs())?;
    Ok(Tabulation { object, p1, p2 })
}

/// A parallel pair into `A` followed by `f: A -> B` with `f r1 = f r2`
/// and `(r1, r2)` jointly injective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fork {
    pub r_obj: Object,
    pub a_obj: Object,
    pub b_obj: Object,
    pub r1: FunctionArrow,
    pub r2: FunctionArrow,
    pub f: FunctionArrow,
}

impl Fork {
    pub fn new(
        b: &Backend,
        r_obj: Object,
        a_obj: Object,
        b_obj: Object,
        r1: FunctionArrow,
        r2: FunctionArrow,
        f: FunctionArrow,
    ) -> Result<Self, DiagramError> {
        b.check_morphism("r1", &r_obj, &a_obj, &r1)?;
        b.check_morphism("r2", &r_obj, &a_obj, &r2)?;
        b.check_morphism("f", &a_obj, &b_obj, &f)?;
        require_commutes("f r1 = f r2", &r1.then(&f)?, &r2.then(&f)?)?;
        if !jointly_injective(&r1, &r2) {
            return Err(DiagramError::NotJointlyInjective("(r1, r2)".into()));
        }
        Ok(Fork {
            r_obj,
            a_obj,
            b_obj,
            r1,
            r2,
            f,
        })
    }

    /// The relation `{(r1(x), r2(x))}` on `A`.
    pub fn span_relation(&self) -> Relation {
        Relation::from_pairs(
            self.a_obj.carrier(),
            self.a_obj.carrier(),
            (0..self.r_obj.carrier().size()).map(|x| (self.r1.apply(x), self.r2.apply(x))),
        )
    }
}

/// Exactness: `f` is surjective and the span is precisely its kernel
/// pair.
pub fn is_exact_fork(_b: &Backend, fork: &Fork) -> bool {
    fork.f.is_regular_epi() && fork.span_relation() == fork.f.kernel_pair()
}

/// Pullback test for an arbitrary candidate span over a cospan: the
/// pairing must be injective and hit exactly the matching pairs.
pub(crate) fn is_pullback_span(
    p_left: &FunctionArrow,
    p_right: &FunctionArrow,
    left_leg: &FunctionArrow,
    right_leg: &FunctionArrow,
) -> bool {
    // p_left: P -> U, p_right: P -> V, left_leg: U -> Z, right_leg: V -> Z
    if !jointly_injective(p_left, p_right) {
        return false;
    }
    let mut expected = std::collections::HashSet::new();
    for x in left_leg.src().elements() {
        for y in right_leg.src().elements() {
            if left_leg.apply(x) == right_leg.apply(y) {
                expected.insert((x, y));
            }
        }
    }
    let actual: std::collections::HashSet<(usize, usize)> = (0..p_left.src().size())
        .map(|i| (p_left.apply(i), p_right.apply(i)))
        .collect();
    expected == actual
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> Carrier {
        Carrier::new(n).unwrap()
    }

    fn set(n: usize) -> Object {
        Object::Set(c(n))
    }

    fn arrow(src: usize, dst: usize, table: &[usize]) -> FunctionArrow {
        FunctionArrow::new(c(src), c(dst), table.to_vec()).unwrap()
    }

    #[test]
    fn pullback_along_identity_is_domain() {
        let b = Backend::Set;
        let f = arrow(3, 2, &[0, 1, 1]);
        let id = FunctionArrow::identity(c(2));
        let (p, p_d, p_a) = pullback(&b, &set(3), &set(2), &set(2), &f, &id).unwrap();
        assert_eq!(p.carrier().size(), 3);
        // projections commute: f p_a = id p_d
        assert_eq!(p_a.then(&f).unwrap(), p_d.then(&id).unwrap());
    }

    #[test]
    fn pullback_of_constants_is_product() {
        let b = Backend::Set;
        let f = arrow(2, 1, &[0, 0]);
        let d = arrow(2, 1, &[0, 0]);
        let (p, _, _) = pullback(&b, &set(2), &set(1), &set(2), &f, &d).unwrap();
        assert_eq!(p.carrier().size(), 4);
    }

    #[test]
    fn pullback_ordering_is_lexicographic() {
        let b = Backend::Set;
        let f = arrow(2, 1, &[0, 0]);
        let d = arrow(2, 1, &[0, 0]);
        let (_, p_d, p_a) = pullback(&b, &set(2), &set(1), &set(2), &f, &d).unwrap();
        assert_eq!(p_d.table(), &[0, 0, 1, 1]);
        assert_eq!(p_a.table(), &[0, 1, 0, 1]);
    }

    #[test]
    fn pullback_universal_property_small() {
        // every commuting cone factors uniquely through the pullback
        let b = Backend::Set;
        for f_table in [[0usize, 0, 1], [0, 1, 1], [1, 0, 0]] {
            let f = arrow(3, 2, &f_table);
            let d = arrow(3, 2, &[0, 1, 0]);
            let (p, p_d, p_a) = pullback(&b, &set(3), &set(2), &set(3), &f, &d).unwrap();
            let index = pair_index(&p_d, &p_a);
            // cones from a 3-element apex
            let n = 3usize;
            for q1 in 0..n.pow(3) {
                for q2 in 0..n.pow(3) {
                    let to_d: Vec<usize> = (0..3).map(|i| q1 / n.pow(i as u32) % n).collect();
                    let to_a: Vec<usize> = (0..3).map(|i| q2 / n.pow(i as u32) % n).collect();
                    let commutes = (0..3).all(|x| d.apply(to_d[x]) == f.apply(to_a[x]));
                    if !commutes {
                        continue;
                    }
                    // unique factorisation through p
                    let u: Vec<usize> = (0..3)
                        .map(|x| *index.get(&(to_d[x], to_a[x])).unwrap())
                        .collect();
                    for (x, &ui) in u.iter().enumerate() {
                        assert_eq!(p_d.apply(ui), to_d[x]);
                        assert_eq!(p_a.apply(ui), to_a[x]);
                    }
                    // uniqueness: joint injectivity of the projections
                    assert!(jointly_injective(&p_d, &p_a));
                }
            }
            let _ = p;
        }
    }

    #[test]
    fn tabulation_examples() {
        let b = Backend::Set;
        let diag = Relation::identity(c(2));
        let t = tabulate(&b, &set(2), &diag).unwrap();
        assert_eq!(t.object.carrier().size(), 2);
        assert_eq!(t.p1.table(), &[0, 1]);
        assert_eq!(t.p2.table(), &[0, 1]);

        let full = Relation::full(c(2), c(2));
        let t = tabulate(&b, &set(2), &full).unwrap();
        assert_eq!(t.object.carrier().size(), 4);

        let f = arrow(3, 2, &[0, 1, 1]);
        let t = tabulate(&b, &set(3), &f.kernel_pair()).unwrap();
        assert_eq!(t.p1.table(), &[0, 1, 1, 2, 2]);
        assert_eq!(t.p2.table(), &[0, 1, 2, 1, 2]);
        // re-imaging the legs reproduces the relation
        let fork = Fork::new(
            &b,
            t.object.clone(),
            set(3),
            set(2),
            t.p1.clone(),
            t.p2.clone(),
            f.clone(),
        )
        .unwrap();
        assert_eq!(fork.span_relation(), f.kernel_pair());
    }

    #[test]
    fn exact_fork_checks() {
        let b = Backend::Set;
        let f = arrow(3, 2, &[0, 1, 1]);
        let t = tabulate(&b, &set(3), &f.kernel_pair()).unwrap();
        let fork = Fork::new(&b, t.object, set(3), set(2), t.p1, t.p2, f.clone()).unwrap();
        assert!(is_exact_fork(&b, &fork));

        // diagonal span only: not exact (missing the (1,2) identification)
        let diag = tabulate(&b, &set(3), &Relation::identity(c(3))).unwrap();
        let fork = Fork::new(&b, diag.object, set(3), set(2), diag.p1, diag.p2, f).unwrap();
        assert!(!is_exact_fork(&b, &fork));

        // non-surjective coequalizer candidate: never exact
        let f = arrow(1, 2, &[0]);
        let t = tabulate(&b, &set(1), &f.kernel_pair()).unwrap();
        let fork = Fork::new(&b, t.object, set(1), set(2), t.p1, t.p2, f).unwrap();
        assert!(!is_exact_fork(&b, &fork));
    }

    #[test]
    fn fork_rejects_malformed() {
        let b = Backend::Set;
        // f r1 != f r2
        let r1 = arrow(1, 2, &[0]);
        let r2 = arrow(1, 2, &[1]);
        let f = FunctionArrow::identity(c(2));
        assert!(matches!(
            Fork::new(&b, set(1), set(2), set(2), r1, r2, f),
            Err(DiagramError::Commutation(_))
        ));

        // duplicated pair: not jointly injective
        let r1 = arrow(2, 2, &[0, 0]);
        let r2 = arrow(2, 2, &[0, 0]);
        let f = arrow(2, 1, &[0, 0]);
        assert!(matches!(
            Fork::new(&b, set(2), set(2), set(1), r1, r2, f),
            Err(DiagramError::NotJointlyInjective(_))
        ));
    }

    #[test]
    fn empty_pullback_rejected() {
        let b = Backend::Set;
        let f = arrow(1, 2, &[0]);
        let d = arrow(1, 2, &[1]);
        assert_eq!(
            pullback(&b, &set(1), &set(2), &set(1), &f, &d),
            Err(DiagramError::EmptyObject)
        );
    }
}
