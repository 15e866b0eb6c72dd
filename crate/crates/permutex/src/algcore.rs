//! Finite algebras given by operation tables, their congruences,
//! permutability classification, Mal'tsev term detection and quotients.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::relcore::{Carrier, FunctionArrow, RelError, Relation};

/// Largest operation arity accepted (constants through ternary).
pub const MAX_ARITY: usize = 3;

/// Carrier size up to which congruence enumeration goes through full
/// partition enumeration; larger carriers use join closure of
/// principal congruences.
pub const PARTITION_ENUM_LIMIT: usize = 8;

/// Default cap on the ternary-operation closure in Mal'tsev term
/// search.
pub const DEFAULT_MALTSEV_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error("operation {name}: table length {len}, expected {expected}")]
    BadTableLength {
        name: String,
        len: usize,
        expected: usize,
    },
    #[error("operation {name}: entry {value} out of range for carrier of size {size}")]
    EntryOutOfRange {
        name: String,
        value: usize,
        size: usize,
    },
    #[error("operation {name}: arity {arity} exceeds the supported maximum {max}", max = MAX_ARITY)]
    ArityTooLarge { name: String, arity: usize },
    #[error("relation is not a congruence of the algebra")]
    NotACongruence,
    #[error("relation carrier does not match the algebra carrier")]
    CarrierMismatch,
    #[error("signature mismatch between the two algebras")]
    SignatureMismatch,
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("element {0} out of range")]
    ElementOutOfRange(usize),
}

/// One operation table, row-major with the leftmost argument varying
/// slowest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpTable {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

impl OpTable {
    pub fn apply(&self, size: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        let mut idx = 0;
        for &a in args {
            idx = idx * size + a;
        }
        self.table[idx]
    }
}

#[derive(Debug, Clone, Eq, Hash)]
pub struct FiniteAlgebra {
    pub name: String,
    carrier: Carrier,
    ops: Vec<OpTable>,
}

/// Structural equality: the name is a label only.
impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier && self.ops == other.ops
    }
}

/// Operation names and arities, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature(pub Vec<(String, usize)>);

impl FiniteAlgebra {
    pub fn new(name: &str, carrier: Carrier, ops: Vec<OpTable>) -> Result<Self, AlgError> {
        let n = carrier.size();
        for op in &ops {
            if op.arity > MAX_ARITY {
                return Err(AlgError::ArityTooLarge {
                    name: op.name.clone(),
                    arity: op.arity,
                });
            }
            let expected = n.pow(op.arity as u32);
            if op.table.len() != expected {
                return Err(AlgError::BadTableLength {
                    name: op.name.clone(),
                    len: op.table.len(),
                    expected,
                });
            }
            if let Some(&v) = op.table.iter().find(|&&v| v >= n) {
                return Err(AlgError::EntryOutOfRange {
                    name: op.name.clone(),
                    value: v,
                    size: n,
                });
            }
        }
        Ok(FiniteAlgebra {
            name: name.to_string(),
            carrier,
            ops,
        })
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn ops(&self) -> &[OpTable] {
        &self.ops
    }

    pub fn signature(&self) -> Signature {
        Signature(
            self.ops
                .iter()
                .map(|op| (op.name.clone(), op.arity))
                .collect(),
        )
    }

    /// Unary translations `x -> op(.., x, ..)` with all other argument
    /// slots fixed; enough to generate and to test congruence
    /// compatibility.
    fn translations(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut out = Vec::new();
        for op in &self.ops {
            if op.arity == 0 {
                continue;
            }
            for pos in 0..op.arity {
                let mut fixed = vec![0usize; op.arity - 1];
                loop {
                    let mut table = Vec::with_capacity(n);
                    for x in 0..n {
                        let mut args = Vec::with_capacity(op.arity);
                        let mut fi = 0;
                        for p in 0..op.arity {
                            if p == pos {
                                args.push(x);
                            } else {
                                args.push(fixed[fi]);
                                fi += 1;
                            }
                        }
                        table.push(op.apply(n, &args));
                    }
                    out.push(table);
                    // advance the fixed-argument counter
                    let mut i = fixed.len();
                    loop {
                        if i == 0 {
                            break;
                        }
                        i -= 1;
                        fixed[i] += 1;
                        if fixed[i] < n {
                            break;
                        }
                        fixed[i] = 0;
                    }
                    if fixed.iter().all(|&v| v == 0) {
                        break;
                    }
                }
            }
        }
        out
    }
}

/// An equivalence relation compatible with all operations, carried both
/// as a relation and as its block partition (blocks ordered by least
/// element).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    relation: Relation,
    blocks: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl Congruence {
    fn from_class_of(carrier: Carrier, class_of: Vec<usize>) -> Self {
        let nblocks = class_of.iter().copied().max().unwrap_or(0) + 1;
        let mut blocks = vec![Vec::new(); nblocks];
        for (x, &c) in class_of.iter().enumerate() {
            blocks[c].push(x);
        }
        let relation = Relation::from_pairs(
            carrier,
            carrier,
            (0..class_of.len()).flat_map(|x| {
                let class_of = &class_of;
                (0..class_of.len())
                    .filter(move |&y| class_of[x] == class_of[y])
                    .map(move |y| (x, y))
            }),
        );
        Congruence {
            relation,
            blocks,
            class_of,
        }
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Canonical form: block index of each element, blocks numbered by
    /// first appearance (a restricted growth string).
    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_diagonal(&self) -> bool {
        self.blocks.len() == self.class_of.len()
    }

    /// Partition printed as e.g. `{0 1|2 3}`.
    pub fn partition_string(&self) -> String {
        let mut s = String::from("{");
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                s.push('|');
            }
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    s.push(' ');
                }
                s.push_str(&x.to_string());
            }
        }
        s.push('}');
        s
    }
}

/// True iff `r` is an equivalence relation on the carrier compatible
/// with every operation.
pub fn is_congruence(a: &FiniteAlgebra, r: &Relation) -> Result<bool, AlgError> {
    if r.src() != a.carrier() || r.dst() != a.carrier() {
        return Err(AlgError::CarrierMismatch);
    }
    if !r.eq_props()?.equivalence {
        return Ok(false);
    }
    // Single-slot compatibility suffices for equivalence relations:
    // componentwise-related tuples are linked by a chain of one-slot
    // substitutions.
    for t in a.translations() {
        for (x, y) in r.pairs() {
            if !r.contains(t[x], t[y]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.0[hi] = lo;
        true
    }
}

/// Smallest congruence containing the given pairs, by closing under
/// the algebra's unary translations.
pub fn congruence_generated(
    a: &FiniteAlgebra,
    pairs: &[(usize, usize)],
) -> Result<Congruence, AlgError> {
    let n = a.size();
    for &(x, y) in pairs {
        if x >= n || y >= n {
            return Err(AlgError::ElementOutOfRange(x.max(y)));
        }
    }
    let translations = a.translations();
    let mut uf = UnionFind::new(n);
    let mut queue: VecDeque<(usize, usize)> = pairs.iter().copied().collect();
    while let Some((x, y)) = queue.pop_front() {
        if uf.union(x, y) {
            for t in &translations {
                queue.push_back((t[x], t[y]));
            }
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut next = 0;
    for x in 0..n {
        let r = uf.find(x);
        if class_of[r] == usize::MAX {
            class_of[r] = next;
            next += 1;
        }
        class_of[x] = class_of[r];
    }
    Ok(Congruence::from_class_of(a.carrier(), class_of))
}

fn partition_is_congruence(
    a: &FiniteAlgebra,
    class_of: &[usize],
    translations: &[Vec<usize>],
) -> bool {
    let _ = a;
    translations.iter().all(|t| {
        let n = class_of.len();
        (0..n).all(|x| {
            (x + 1..n).all(|y| class_of[x] != class_of[y] || class_of[t[x]] == class_of[t[y]])
        })
    })
}

/// Every congruence, ordered by canonical partition form.  Carriers up
/// to [`PARTITION_ENUM_LIMIT`] are handled by filtering all set
/// partitions; larger carriers by join closure of principal
/// congruences.
pub fn all_congruences(a: &FiniteAlgebra) -> Result<Vec<Congruence>, AlgError> {
    let n = a.size();
    let translations = a.translations();
    let mut found: Vec<Vec<usize>> = Vec::new();
    if n <= PARTITION_ENUM_LIMIT {
        // enumerate restricted growth strings
        let mut rgs = vec![0usize; n];
        loop {
            if partition_is_congruence(a, &rgs, &translations) {
                found.push(rgs.clone());
            }
            // next RGS in lexicographic order
            let mut i = n;
            let mut advanced = false;
            while i > 1 {
                i -= 1;
                let max_allowed = rgs[..i].iter().copied().max().unwrap_or(0) + 1;
                if rgs[i] < max_allowed {
                    rgs[i] += 1;
                    for v in rgs[i + 1..].iter_mut() {
                        *v = 0;
                    }
                    advanced = true;
                    break;
                }
                rgs[i] = 0;
            }
            if !advanced {
                break;
            }
        }
    } else {
        let mut set: Vec<Vec<usize>> = Vec::new();
        let diag: Vec<usize> = (0..n).collect();
        set.push(diag);
        for x in 0..n {
            for y in x + 1..n {
                let c = congruence_generated(a, &[(x, y)])?;
                if !set.contains(&c.class_of().to_vec()) {
                    set.push(c.class_of().to_vec());
                }
            }
        }
        // close under joins
        let mut changed = true;
        while changed {
            changed = false;
            let snapshot = set.clone();
            for i in 0..snapshot.len() {
                for j in i + 1..snapshot.len() {
                    let mut pairs = Vec::new();
                    for (x, &cx) in snapshot[i].iter().enumerate() {
                        for y in x + 1..n {
                            if cx == snapshot[i][y] || snapshot[j][x] == snapshot[j][y] {
                                pairs.push((x, y));
                            }
                        }
                    }
                    let join = congruence_generated(a, &pairs)?;
                    if !set.contains(&join.class_of().to_vec()) {
                        set.push(join.class_of().to_vec());
                        changed = true;
                    }
                }
            }
        }
        found = set;
    }
    found.sort();
    Ok(found
        .into_iter()
        .map(|class_of| Congruence::from_class_of(a.carrier(), class_of))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermutabilityClass {
    TwoPermutable,
    ThreePermutableNotTwo,
    NotThreePermutable,
}

impl PermutabilityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PermutabilityClass::TwoPermutable => "two_permutable",
            PermutabilityClass::ThreePermutableNotTwo => "three_permutable_not_two",
            PermutabilityClass::NotThreePermutable => "not_three_permutable",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PermutabilityReport {
    pub class: PermutabilityClass,
    /// For the non-top classes, the first congruence pair violating
    /// the stronger law.
    pub witness: Option<(Congruence, Congruence)>,
}

/// Classifies the congruence lattice of this single algebra: 2-permutable,
/// 3-permutable but not 2, or neither.
pub fn permutability_class(a: &FiniteAlgebra) -> Result<PermutabilityReport, AlgError> {
    let congruences = all_congruences(a)?;
    let mut two_witness = None;
    for i in 0..congruences.len() {
        for j in i + 1..congruences.len() {
            let ab = congruences[i]
                .relation()
                .compose(congruences[j].relation())?;
            let ba = congruences[j]
                .relation()
                .compose(congruences[i].relation())?;
            if ab != ba {
                two_witness = Some((i, j));
                break;
            }
        }
        if two_witness.is_some() {
            break;
        }
    }
    let Some(two_witness) = two_witness else {
        return Ok(PermutabilityReport {
            class: PermutabilityClass::TwoPermutable,
            witness: None,
        });
    };
    for i in 0..congruences.len() {
        for j in i + 1..congruences.len() {
            let (ra, rb) = (congruences[i].relation(), congruences[j].relation());
            let aba = ra.compose(rb)?.compose(ra)?;
            let bab = rb.compose(ra)?.compose(rb)?;
            if aba != bab {
                return Ok(PermutabilityReport {
                    class: PermutabilityClass::NotThreePermutable,
                    witness: Some((congruences[i].clone(), congruences[j].clone())),
                });
            }
        }
    }
    let (i, j) = two_witness;
    Ok(PermutabilityReport {
        class: PermutabilityClass::ThreePermutableNotTwo,
        witness: Some((congruences[i].clone(), congruences[j].clone())),
    })
}

/// Exact Mal'tsev term search: generate the subuniverse of ternary
/// operations spanned by the three projections under all signature
/// operations applied pointwise, and return the first closure element
/// `p` with `p(x,y,y) = x` and `p(x,x,y) = y`.
pub fn find_maltsev_term(a: &FiniteAlgebra, budget: usize) -> Result<Option<OpTable>, AlgError> {
    let n = a.size();
    let len = n * n * n;
    let idx = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
    let satisfies = |t: &[usize]| {
        for x in 0..n {
            for y in 0..n {
                if t[idx(x, y, y)] != x || t[idx(x, x, y)] != y {
                    return false;
                }
            }
        }
        true
    };

    let mut proj = Vec::with_capacity(3);
    for p in 0..3 {
        let mut t = vec![0usize; len];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    t[idx(x, y, z)] = [x, y, z][p];
                }
            }
        }
        proj.push(t);
    }

    let mut elements: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let push = |t: Vec<usize>,
                elements: &mut Vec<Vec<usize>>,
                seen: &mut HashMap<Vec<usize>, ()>,
                queue: &mut VecDeque<usize>|
     -> Option<Vec<usize>> {
        if satisfies(&t) {
            return Some(t);
        }
        if seen.insert(t.clone(), ()).is_none() {
            elements.push(t);
            queue.push_back(elements.len() - 1);
        }
        None
    };

    for p in proj {
        if let Some(found) = push(p, &mut elements, &mut seen, &mut queue) {
            return Ok(Some(OpTable {
                name: "p".into(),
                arity: 3,
                table: found,
            }));
        }
    }
    // nullary operations enter the closure immediately
    for op in a.ops() {
        if op.arity == 0 {
            let t = vec![op.table[0]; len];
            if let Some(found) = push(t, &mut elements, &mut seen, &mut queue) {
                return Ok(Some(OpTable {
                    name: "p".into(),
                    arity: 3,
                    table: found,
                }));
            }
        }
    }

    while let Some(i) = queue.pop_front() {
        if elements.len() > budget {
            return Err(AlgError::Budget(format!(
                "ternary closure exceeded {budget} elements"
            )));
        }
        for op in a.ops() {
            match op.arity {
                0 => {}
                1 => {
                    let t: Vec<usize> = elements[i].iter().map(|&v| op.table[v]).collect();
                    if let Some(found) = push(t, &mut elements, &mut seen, &mut queue) {
                        return Ok(Some(OpTable {
                            name: "p".into(),
                            arity: 3,
                            table: found,
                        }));
                    }
                }
                2 => {
                    for j in 0..elements.len() {
                        for (l, r) in [(i, j), (j, i)] {
                            let t: Vec<usize> = (0..len)
                                .map(|k| op.apply(n, &[elements[l][k], elements[r][k]]))
                                .collect();
                            if let Some(found) = push(t, &mut elements, &mut seen, &mut queue) {
                                return Ok(Some(OpTable {
                                    name: "p".into(),
                                    arity: 3,
                                    table: found,
                                }));
                            }
                        }
                    }
                }
                3 => {
                    for j in 0..elements.len() {
                        for k in 0..elements.len() {
                            for args in [[i, j, k], [j, i, k], [j, k, i]] {
                                let t: Vec<usize> = (0..len)
                                    .map(|m| {
                                        op.apply(
                                            n,
                                            &[
                                                elements[args[0]][m],
                                                elements[args[1]][m],
                                                elements[args[2]][m],
                                            ],
                                        )
                                    })
                                    .collect();
                                if let Some(found) = push(t, &mut elements, &mut seen, &mut queue) {
                                    return Ok(Some(OpTable {
                                        name: "p".into(),
                                        arity: 3,
                                        table: found,
                                    }));
                                }
                            }
                        }
                    }
                }
                _ => unreachable!("arity checked at construction"),
            }
        }
    }
    Ok(None)
}

/// Quotient algebra on block indices plus the canonical surjection.
pub fn quotient(
    a: &FiniteAlgebra,
    theta: &Congruence,
) -> Result<(FiniteAlgebra, FunctionArrow), AlgError> {
    if !is_congruence(a, theta.relation())? {
        return Err(AlgError::NotACongruence);
    }
    let n = a.size();
    let q = Carrier::new(theta.block_count()).expect("at least one block");
    let class_of = theta.class_of();
    let reps: Vec<usize> = theta.blocks().iter().map(|b| b[0]).collect();
    let qn = q.size();
    let mut ops = Vec::with_capacity(a.ops().len());
    for op in a.ops() {
        let mut table = Vec::with_capacity(qn.pow(op.arity as u32));
        let mut args = vec![0usize; op.arity];
        loop {
            let concrete: Vec<usize> = args.iter().map(|&c| reps[c]).collect();
            table.push(class_of[op.apply(n, &concrete)]);
            let mut i = op.arity;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                args[i] += 1;
                if args[i] < qn {
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
            name: op.name.clone(),
            arity: op.arity,
            table,
        });
    }
    let quotient_alg = FiniteAlgebra::new(&format!("{}/θ", a.name), q, ops)?;
    let surjection = FunctionArrow::new(a.carrier(), q, class_of.to_vec())?;
    Ok((quotient_alg, surjection))
}

/// True iff `f` commutes with every operation pointwise.
pub fn hom_check(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    f: &FunctionArrow,
) -> Result<bool, AlgError> {
    if a.signature() != b.signature() {
        return Err(AlgError::SignatureMismatch);
    }
    if f.src() != a.carrier() || f.dst() != b.carrier() {
        return Err(AlgError::CarrierMismatch);
    }
    let n = a.size();
    for (op_a, op_b) in a.ops().iter().zip(b.ops()) {
        let mut args = vec![0usize; op_a.arity];
        loop {
            let mapped: Vec<usize> = args.iter().map(|&x| f.apply(x)).collect();
            if f.apply(op_a.apply(n, &args)) != op_b.apply(b.size(), &mapped) {
                return Ok(false);
            }
            let mut i = op_a.arity;
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
    }
    Ok(true)
}

/// Small stock algebras used by tests, the search sweeps and the
/// shipped fixture files.
pub mod fixtures {
    use super::{Carrier, FiniteAlgebra, OpTable};

    fn group_from_perms(name: &str, perms: &[Vec<usize>]) -> FiniteAlgebra {
        let n = perms.len();
        let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        let mut mul = Vec::with_capacity(n * n);
        for x in perms {
            for y in perms {
                // apply y first, then x
                let prod: Vec<usize> = (0..y.len()).map(|i| x[y[i]]).collect();
                mul.push(index(&prod));
            }
        }
        let inv = perms
            .iter()
            .map(|p| {
                let mut q = vec![0; p.len()];
                for (i, &v) in p.iter().enumerate() {
                    q[v] = i;
                }
                index(&q)
            })
            .collect();
        FiniteAlgebra::new(
            name,
            Carrier::new(n).unwrap(),
            vec![
                OpTable {
                    name: "mul".into(),
                    arity: 2,
                    table: mul,
                },
                OpTable {
                    name: "inv".into(),
                    arity: 1,
                    table: inv,
                },
                OpTable {
                    name: "e".into(),
                    arity: 0,
                    table: vec![0],
                },
            ],
        )
        .unwrap()
    }

    /// The cyclic group of order `n` under addition.
    pub fn cyclic_group(n: usize) -> FiniteAlgebra {
        let c = Carrier::new(n).unwrap();
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                mul.push((x + y) % n);
            }
        }
        let inv = (0..n).map(|x| (n - x) % n).collect();
        FiniteAlgebra::new(
            &format!("z{n}"),
            c,
            vec![
                OpTable {
                    name: "mul".into(),
                    arity: 2,
                    table: mul,
                },
                OpTable {
                    name: "inv".into(),
                    arity: 1,
                    table: inv,
                },
                OpTable {
                    name: "e".into(),
                    arity: 0,
                    table: vec![0],
                },
            ],
        )
        .unwrap()
    }

    /// The Klein four-group Z2 x Z2 (componentwise xor).
    pub fn klein_group() -> FiniteAlgebra {
        let mut mul = Vec::with_capacity(16);
        for x in 0..4usize {
            for y in 0..4usize {
                mul.push(x ^ y);
            }
        }
        FiniteAlgebra::new(
            "v4",
            Carrier::new(4).unwrap(),
            vec![
                OpTable {
                    name: "mul".into(),
                    arity: 2,
                    table: mul,
                },
                OpTable {
                    name: "inv".into(),
                    arity: 1,
                    table: vec![0, 1, 2, 3],
                },
                OpTable {
                    name: "e".into(),
                    arity: 0,
                    table: vec![0],
                },
            ],
        )
        .unwrap()
    }

    /// The symmetric group on three letters; element order
    /// e, (12), (13), (23), (123), (132).
    pub fn symmetric_group3() -> FiniteAlgebra {
        group_from_perms(
            "s3",
            &[
                vec![0, 1, 2],
                vec![1, 0, 2],
                vec![2, 1, 0],
                vec![0, 2, 1],
                vec![1, 2, 0],
                vec![2, 0, 1],
            ],
        )
    }

    /// The `n`-chain meet-semilattice `0 < 1 < ... < n-1`.
    pub fn chain_semilattice(n: usize) -> FiniteAlgebra {
        let c = Carrier::new(n).unwrap();
        let mut meet = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                meet.push(x.min(y));
            }
        }
        FiniteAlgebra::new(
            &format!("chain{n}"),
            c,
            vec![OpTable {
                name: "meet".into(),
                arity: 2,
                table: meet,
            }],
        )
        .unwrap()
    }

    /// The one-element group.
    pub fn trivial_group() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "trivial1",
            Carrier::new(1).unwrap(),
            vec![
                OpTable {
                    name: "mul".into(),
                    arity: 2,
                    table: vec![0],
                },
                OpTable {
                    name: "inv".into(),
                    arity: 1,
                    table: vec![0],
                },
                OpTable {
                    name: "e".into(),
                    arity: 0,
                    table: vec![0],
                },
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::{chain_semilattice, cyclic_group};
    use super::*;

    #[test]
    fn diagonal_and_full_are_congruences() {
        let a = chain_semilattice(3);
        let c = a.carrier();
        assert!(is_congruence(&a, &Relation::identity(c)).unwrap());
        assert!(is_congruence(&a, &Relation::full(c, c)).unwrap());
    }

    #[test]
    fn chain_congruence_examples() {
        let a = chain_semilattice(3);
        let c = a.carrier();
        let collapse12 = Relation::from_pairs(c, c, [(0, 0), (1, 1), (2, 2), (1, 2), (2, 1)]);
        assert!(is_congruence(&a, &collapse12).unwrap());
        let collapse02 = Relation::from_pairs(c, c, [(0, 0), (1, 1), (2, 2), (0, 2), (2, 0)]);
        assert!(!is_congruence(&a, &collapse02).unwrap());
    }

    #[test]
    fn congruence_generated_examples() {
        let z4 = cyclic_group(4);
        let c = congruence_generated(&z4, &[]).unwrap();
        assert!(c.is_diagonal());

        let c = congruence_generated(&z4, &[(0, 2)]).unwrap();
        assert_eq!(c.blocks(), &[vec![0, 2], vec![1, 3]]);

        let chain = chain_semilattice(3);
        let c = congruence_generated(&chain, &[(0, 2)]).unwrap();
        assert_eq!(c.block_count(), 1);
    }

    #[test]
    fn all_congruences_z4_and_chain3() {
        let z4 = cyclic_group(4);
        let congs = all_congruences(&z4).unwrap();
        let parts: Vec<String> = congs.iter().map(|c| c.partition_string()).collect();
        assert_eq!(parts, vec!["{0 1 2 3}", "{0 2|1 3}", "{0|1|2|3}"]);

        let chain = chain_semilattice(3);
        let congs = all_congruences(&chain).unwrap();
        let parts: Vec<String> = congs.iter().map(|c| c.partition_string()).collect();
        assert_eq!(parts, vec!["{0 1 2}", "{0 1|2}", "{0|1 2}", "{0|1|2}"]);
    }

    #[test]
    fn trivial_algebra_congruences() {
        let t = FiniteAlgebra::new("t", Carrier::new(1).unwrap(), vec![]).unwrap();
        assert_eq!(all_congruences(&t).unwrap().len(), 1);
    }

    #[test]
    fn permutability_of_groups_and_chains() {
        for n in [2, 3, 4, 6] {
            let report = permutability_class(&cyclic_group(n)).unwrap();
            assert_eq!(report.class, PermutabilityClass::TwoPermutable);
        }

        let report = permutability_class(&chain_semilattice(3)).unwrap();
        assert_eq!(report.class, PermutabilityClass::ThreePermutableNotTwo);
        let (alpha, beta) = report.witness.unwrap();
        assert_eq!(alpha.partition_string(), "{0 1|2}");
        assert_eq!(beta.partition_string(), "{0|1 2}");
        // αβ contains (0,2) but βα does not
        let ab = alpha.relation().compose(beta.relation()).unwrap();
        let ba = beta.relation().compose(alpha.relation()).unwrap();
        assert!(ab.contains(0, 2) && !ba.contains(0, 2));

        let report = permutability_class(&chain_semilattice(4)).unwrap();
        assert_eq!(report.class, PermutabilityClass::NotThreePermutable);
        let (alpha, beta) = report.witness.unwrap();
        assert_eq!(alpha.partition_string(), "{0 1|2 3}");
        assert_eq!(beta.partition_string(), "{0|1 2|3}");
        let aba = alpha
            .relation()
            .compose(beta.relation())
            .unwrap()
            .compose(alpha.relation())
            .unwrap();
        let bab = beta
            .relation()
            .compose(alpha.relation())
            .unwrap()
            .compose(beta.relation())
            .unwrap();
        assert!(aba.contains(0, 3) && !bab.contains(0, 3));
    }

    #[test]
    fn maltsev_term_in_z2() {
        let z2 = cyclic_group(2);
        let p = find_maltsev_term(&z2, DEFAULT_MALTSEV_BUDGET)
            .unwrap()
            .unwrap();
        // p(x,y,z) = x + y + z in Z2
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(p.apply(2, &[x, y, y]), x);
                assert_eq!(p.apply(2, &[x, x, y]), y);
            }
        }
    }

    #[test]
    fn no_maltsev_term_in_chain3() {
        let chain = chain_semilattice(3);
        assert_eq!(
            find_maltsev_term(&chain, DEFAULT_MALTSEV_BUDGET).unwrap(),
            None
        );
    }

    #[test]
    fn maltsev_term_in_one_element_algebra() {
        let t = FiniteAlgebra::new("t", Carrier::new(1).unwrap(), vec![]).unwrap();
        assert!(find_maltsev_term(&t, 10).unwrap().is_some());
    }

    #[test]
    fn budget_exhaustion_reported() {
        let z4 = cyclic_group(4);
        assert!(matches!(
            find_maltsev_term(&z4, 1),
            Err(AlgError::Budget(_))
        ));
    }

    #[test]
    fn quotient_z4_by_02() {
        let z4 = cyclic_group(4);
        let theta = congruence_generated(&z4, &[(0, 2)]).unwrap();
        let (q, surj) = quotient(&z4, &theta).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(surj.table(), &[0, 1, 0, 1]);
        assert_eq!(q.ops()[0].table, vec![0, 1, 1, 0]);
        assert_eq!(surj.kernel_pair(), *theta.relation());
    }

    #[test]
    fn quotient_by_diagonal_and_full() {
        let z4 = cyclic_group(4);
        let diag = congruence_generated(&z4, &[]).unwrap();
        let (q, surj) = quotient(&z4, &diag).unwrap();
        assert_eq!(q.size(), 4);
        assert!(surj.is_injective() && surj.is_surjective());

        let full = congruence_generated(&z4, &[(0, 1)]).unwrap();
        let (q, surj) = quotient(&z4, &full).unwrap();
        assert_eq!(q.size(), 1);
        assert!(surj.table().iter().all(|&v| v == 0));
    }

    #[test]
    fn quotient_rejects_non_congruence() {
        let chain = chain_semilattice(3);
        // {0 2|1} is not a congruence of the chain
        let bad = Congruence::from_class_of(chain.carrier(), vec![0, 1, 0]);
        assert!(matches!(
            quotient(&chain, &bad),
            Err(AlgError::NotACongruence)
        ));
    }

    #[test]
    fn hom_check_examples() {
        let z4 = cyclic_group(4);
        let z2 = cyclic_group(2);
        let good = FunctionArrow::new(z4.carrier(), z2.carrier(), vec![0, 1, 0, 1]).unwrap();
        assert!(hom_check(&z4, &z2, &good).unwrap());
        let bad = FunctionArrow::new(z4.carrier(), z2.carrier(), vec![0, 0, 1, 1]).unwrap();
        assert!(!hom_check(&z4, &z2, &bad).unwrap());
        assert!(hom_check(&z4, &z4, &FunctionArrow::identity(z4.carrier())).unwrap());

        let chain = chain_semilattice(3);
        assert_eq!(
            hom_check(
                &z4,
                &chain,
                &FunctionArrow::constant(z4.carrier(), chain.carrier(), 0).unwrap()
            ),
            Err(AlgError::SignatureMismatch)
        );
    }
}
