//! Commutative squares of split epimorphisms over regular epimorphisms
//! and the two regular-pushout checkers.

use crate::relcore::FunctionArrow;

use super::{pullback, require_commutes, require_section, Backend, DiagramError, Object};

/// The square shape: split epis `f: A -> B`, `g: C -> D` (sections
/// `s`, `t`) over regular epis `c: C -> A`, `d: D -> B`, with
/// `f c = d g` and `s d = c t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareDiagram {
    pub c_obj: Object,
    pub a_obj: Object,
    pub d_obj: Object,
    pub b_obj: Object,
    pub c: FunctionArrow,
    pub g: FunctionArrow,
    pub d: FunctionArrow,
    pub f: FunctionArrow,
    pub s: FunctionArrow,
    pub t: FunctionArrow,
}

impl SquareDiagram {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        b: &Backend,
        c_obj: Object,
        a_obj: Object,
        d_obj: Object,
        b_obj: Object,
        c: FunctionArrow,
        g: FunctionArrow,
        d: FunctionArrow,
        f: FunctionArrow,
        s: FunctionArrow,
        t: FunctionArrow,
    ) -> Result<Self, DiagramError> {
        b.check_morphism("c", &c_obj, &a_obj, &c)?;
        b.check_morphism("g", &c_obj, &d_obj, &g)?;
        b.check_morphism("d", &d_obj, &b_obj, &d)?;
        b.check_morphism("f", &a_obj, &b_obj, &f)?;
        b.check_morphism("s", &b_obj, &a_obj, &s)?;
        b.check_morphism("t", &d_obj, &c_obj, &t)?;
        require_commutes("f c = d g", &c.then(&f)?, &g.then(&d)?)?;
        require_commutes("s d = c t", &d.then(&s)?, &t.then(&c)?)?;
        require_section("s", "f", &s, &f)?;
        require_section("t", "g", &t, &g)?;
        if !c.is_regular_epi() {
            return Err(DiagramError::MustBeSurjective("c".into()));
        }
        if !d.is_regular_epi() {
            return Err(DiagramError::MustBeSurjective("d".into()));
        }
        Ok(SquareDiagram {
            c_obj,
            a_obj,
            d_obj,
            b_obj,
            c,
            g,
            d,
            f,
            s,
            t,
        })
    }

    /// The pairing `x -> (g(x), c(x))` as a map into the pullback of
    /// `d` and `f`, together with the pullback size.
    pub fn comparison(&self, b: &Backend) -> Result<(Vec<usize>, usize), DiagramError> {
        let (p, p_d, p_a) = pullback(b, &self.a_obj, &self.b_obj, &self.d_obj, &self.f, &self.d)?;
        let index = super::pair_index(&p_d, &p_a);
        let table = self
            .c_obj
            .carrier()
            .elements()
            .map(|x| index[&(self.g.apply(x), self.c.apply(x))])
            .collect();
        Ok((table, p.carrier().size()))
    }
}

/// Surjectivity of the canonical comparison `<g, c>: C -> D x_B A`.
pub fn is_regular_pushout(b: &Backend, sq: &SquareDiagram) -> Result<bool, DiagramError> {
    let (table, size) = sq.comparison(b)?;
    let mut hit = vec![false; size];
    for v in table {
        hit[v] = true;
    }
    Ok(hit.into_iter().all(|h| h))
}

/// The relational criterion `c g° = f° d`; agrees with
/// [`is_regular_pushout`] on every square.
pub fn regular_pushout_relational(_b: &Backend, sq: &SquareDiagram) -> Result<bool, DiagramError> {
    let cg_op = sq.g.graph().opposite().compose(&sq.c.graph())?;
    let fo_d = sq.d.graph().compose(&sq.f.graph().opposite())?;
    Ok(cg_op == fo_d)
}

/// The documented Set square that is not a regular pushout:
/// B={*}, D={0,1}, A={0,1}, C={0,1,2}.
pub fn set_counterexample_square() -> SquareDiagram {
    use crate::relcore::Carrier;
    let c = |n| Carrier::new(n).unwrap();
    let arr = |s, d, t: &[usize]| FunctionArrow::new(c(s), c(d), t.to_vec()).unwrap();
    SquareDiagram::new(
        &Backend::Set,
        Object::Set(c(3)),
        Object::Set(c(2)),
        Object::Set(c(2)),
        Object::Set(c(1)),
        arr(3, 2, &[0, 0, 1]), // c
        arr(3, 2, &[0, 1, 1]), // g
        arr(2, 1, &[0, 0]),    // d
        arr(2, 1, &[0, 0]),    // f
        arr(1, 2, &[0]),       // s
        arr(2, 3, &[0, 1]),    // t
    )
    .expect("the documented square is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::Carrier;

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
    fn pullback_square_is_regular_pushout() {
        let b = Backend::Set;
        // C = pullback of d and f with its projections as g and c
        let f = arrow(2, 1, &[0, 0]);
        let d = arrow(2, 1, &[0, 0]);
        let (p, p_d, p_a) = pullback(&b, &set(2), &set(1), &set(2), &f, &d).unwrap();
        let s = arrow(1, 2, &[0]);
        let t = arrow(2, 4, &[0, 2]); // section of p_d picking a = s(d(x)) = 0
        let sq = SquareDiagram::new(&b, p, set(2), set(2), set(1), p_a, p_d, d, f, s, t).unwrap();
        assert!(is_regular_pushout(&b, &sq).unwrap());
        assert!(regular_pushout_relational(&b, &sq).unwrap());
    }

    #[test]
    fn counterexample_square_fails_both_checkers() {
        let b = Backend::Set;
        let sq = set_counterexample_square();
        assert!(!is_regular_pushout(&b, &sq).unwrap());
        assert!(!regular_pushout_relational(&b, &sq).unwrap());
        // the pairing misses exactly one of the 4 pullback elements
        let (table, size) = sq.comparison(&b).unwrap();
        assert_eq!(size, 4);
        let distinct: std::collections::HashSet<usize> = table.into_iter().collect();
        assert_eq!(distinct.len(), 3);
    }

    #[test]
    fn square_construction_validates() {
        let b = Backend::Set;
        // break f c = d g
        let bad = SquareDiagram::new(
            &b,
            set(2),
            set(2),
            set(2),
            set(2),
            FunctionArrow::identity(c(2)),
            FunctionArrow::identity(c(2)),
            FunctionArrow::identity(c(2)),
            arrow(2, 2, &[1, 0]),
            arrow(2, 2, &[1, 0]),
            FunctionArrow::identity(c(2)),
        );
        assert!(matches!(bad, Err(DiagramError::Commutation(_))));

        // non-surjective c rejected: need a genuinely non-surjective c
        // with the rest commuting; take C=D=B={*}, A={0,1}
        let bad = SquareDiagram::new(
            &b,
            set(1),
            set(2),
            set(1),
            set(1),
            arrow(1, 2, &[0]), // c not surjective
            FunctionArrow::identity(c(1)),
            FunctionArrow::identity(c(1)),
            arrow(2, 1, &[0, 0]),
            arrow(1, 2, &[0]),
            FunctionArrow::identity(c(1)),
        );
        assert!(matches!(bad, Err(DiagramError::MustBeSurjective(_))));
    }
}
