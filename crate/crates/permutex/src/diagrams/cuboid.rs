//! The four-row cuboid shape: three pullback diamonds over four
//! horizontal forks, the exactness transfer check, and the
//! construction of a split cuboid from a cube by taking kernel pairs.

use crate::relcore::FunctionArrow;

use super::{
    cube_comparison, is_exact_fork, is_pullback_span, jointly_injective, pair_index, pullback,
    require_commutes, require_section, tabulate, Backend, CubeDiagram, DiagramError, Fork, Object,
};

/// Sections present only in the split variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuboidSections {
    pub tbar: FunctionArrow, // S -> R_c
    pub t: FunctionArrow,    // D -> C
    pub s: FunctionArrow,    // B -> A
    pub jbar: FunctionArrow, // R_w -> T
    pub j: FunctionArrow,    // W -> V
    pub i: FunctionArrow,    // Y -> X
}

/// The cuboid: rows T =t1,t2=> V -v-> X (upper), R_w => W -w-> Y and
/// R_c => C -c-> A (middle), S => D -d-> B (lower); diamond verticals
/// gbar/g/f, diagonal legs deltabar/delta/beta, and pullback
/// projections kbar/k/h and gammabar/gamma/alpha.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuboidDiagram {
    pub t_obj: Object,
    pub v_obj: Object,
    pub x_obj: Object,
    pub rw_obj: Object,
    pub w_obj: Object,
    pub y_obj: Object,
    pub rc_obj: Object,
    pub c_obj: Object,
    pub a_obj: Object,
    pub s_obj: Object,
    pub d_obj: Object,
    pub b_obj: Object,

    pub t1: FunctionArrow,
    pub t2: FunctionArrow,
    pub v: FunctionArrow,
    pub w1: FunctionArrow,
    pub w2: FunctionArrow,
    pub w: FunctionArrow,
    pub c1: FunctionArrow,
    pub c2: FunctionArrow,
    pub c: FunctionArrow,
    pub s1: FunctionArrow,
    pub s2: FunctionArrow,
    pub d: FunctionArrow,

    pub gbar: FunctionArrow,     // R_c -> S
    pub g: FunctionArrow,        // C -> D
    pub f: FunctionArrow,        // A -> B
    pub deltabar: FunctionArrow, // R_w -> S
    pub delta: FunctionArrow,    // W -> D
    pub beta: FunctionArrow,     // Y -> B
    pub kbar: FunctionArrow,     // T -> R_w
    pub k: FunctionArrow,        // V -> W
    pub h: FunctionArrow,        // X -> Y
    pub gammabar: FunctionArrow, // T -> R_c
    pub gamma: FunctionArrow,    // V -> C
    pub alpha: FunctionArrow,    // X -> A

    pub sections: Option<CuboidSections>,
}

impl CuboidDiagram {
    /// Validates endpoints, backend-validity, all commutations of the
    /// shape, joint injectivity of the four spans, and the split or
    /// regular variant conditions.  Pullback and exactness properties
    /// are verified by [`check_cuboid`], not assumed here.
    pub fn validate(&self, b: &Backend) -> Result<(), DiagramError> {
        let m = [
            ("t1", &self.t_obj, &self.v_obj, &self.t1),
            ("t2", &self.t_obj, &self.v_obj, &self.t2),
            ("v", &self.v_obj, &self.x_obj, &self.v),
            ("w1", &self.rw_obj, &self.w_obj, &self.w1),
            ("w2", &self.rw_obj, &self.w_obj, &self.w2),
            ("w", &self.w_obj, &self.y_obj, &self.w),
            ("c1", &self.rc_obj, &self.c_obj, &self.c1),
            ("c2", &self.rc_obj, &self.c_obj, &self.c2),
            ("c", &self.c_obj, &self.a_obj, &self.c),
            ("s1", &self.s_obj, &self.d_obj, &self.s1),
            ("s2", &self.s_obj, &self.d_obj, &self.s2),
            ("d", &self.d_obj, &self.b_obj, &self.d),
            ("gbar", &self.rc_obj, &self.s_obj, &self.gbar),
            ("g", &self.c_obj, &self.d_obj, &self.g),
            ("f", &self.a_obj, &self.b_obj, &self.f),
            ("deltabar", &self.rw_obj, &self.s_obj, &self.deltabar),
            ("delta", &self.w_obj, &self.d_obj, &self.delta),
            ("beta", &self.y_obj, &self.b_obj, &self.beta),
            ("kbar", &self.t_obj, &self.rw_obj, &self.kbar),
            ("k", &self.v_obj, &self.w_obj, &self.k),
            ("h", &self.x_obj, &self.y_obj, &self.h),
            ("gammabar", &self.t_obj, &self.rc_obj, &self.gammabar),
            ("gamma", &self.v_obj, &self.c_obj, &self.gamma),
            ("alpha", &self.x_obj, &self.a_obj, &self.alpha),
        ];
        for (name, src, dst, arrow) in m {
            b.check_morphism(name, src, dst, arrow)?;
        }

        // fork morphisms down the left diagonal (kbar, k, h)
        require_commutes(
            "k t1 = w1 kbar",
            &self.t1.then(&self.k)?,
            &self.kbar.then(&self.w1)?,
        )?;
        require_commutes(
            "k t2 = w2 kbar",
            &self.t2.then(&self.k)?,
            &self.kbar.then(&self.w2)?,
        )?;
        require_commutes("h v = w k", &self.v.then(&self.h)?, &self.k.then(&self.w)?)?;
        // down the right vertical (gammabar, gamma, alpha)
        require_commutes(
            "gamma t1 = c1 gammabar",
            &self.t1.then(&self.gamma)?,
            &self.gammabar.then(&self.c1)?,
        )?;
        require_commutes(
            "gamma t2 = c2 gammabar",
            &self.t2.then(&self.gamma)?,
            &self.gammabar.then(&self.c2)?,
        )?;
        require_commutes(
            "alpha v = c gamma",
            &self.v.then(&self.alpha)?,
            &self.gamma.then(&self.c)?,
        )?;
        // (deltabar, delta, beta)
        require_commutes(
            "delta w1 = s1 deltabar",
            &self.w1.then(&self.delta)?,
            &self.deltabar.then(&self.s1)?,
        )?;
        require_commutes(
            "delta w2 = s2 deltabar",
            &self.w2.then(&self.delta)?,
            &self.deltabar.then(&self.s2)?,
        )?;
        require_commutes(
            "beta w = d delta",
            &self.w.then(&self.beta)?,
            &self.delta.then(&self.d)?,
        )?;
        // (gbar, g, f)
        require_commutes(
            "g c1 = s1 gbar",
            &self.c1.then(&self.g)?,
            &self.gbar.then(&self.s1)?,
        )?;
        require_commutes(
            "g c2 = s2 gbar",
            &self.c2.then(&self.g)?,
            &self.gbar.then(&self.s2)?,
        )?;
        require_commutes("f c = d g", &self.c.then(&self.f)?, &self.g.then(&self.d)?)?;
        // diamond faces
        require_commutes(
            "g gamma = delta k",
            &self.gamma.then(&self.g)?,
            &self.k.then(&self.delta)?,
        )?;
        require_commutes(
            "gbar gammabar = deltabar kbar",
            &self.gammabar.then(&self.gbar)?,
            &self.kbar.then(&self.deltabar)?,
        )?;
        require_commutes(
            "f alpha = beta h",
            &self.alpha.then(&self.f)?,
            &self.h.then(&self.beta)?,
        )?;

        for (label, p1, p2) in [
            ("(t1, t2)", &self.t1, &self.t2),
            ("(w1, w2)", &self.w1, &self.w2),
            ("(c1, c2)", &self.c1, &self.c2),
            ("(s1, s2)", &self.s1, &self.s2),
        ] {
            if !jointly_injective(p1, p2) {
                return Err(DiagramError::NotJointlyInjective(label.into()));
            }
        }

        match &self.sections {
            Some(sec) => {
                require_section("t", "g", &sec.t, &self.g)?;
                require_section("tbar", "gbar", &sec.tbar, &self.gbar)?;
                require_section("s", "f", &sec.s, &self.f)?;
                require_section("j", "k", &sec.j, &self.k)?;
                require_section("jbar", "kbar", &sec.jbar, &self.kbar)?;
                require_section("i", "h", &sec.i, &self.h)?;
                b.check_morphism("t", &self.d_obj, &self.c_obj, &sec.t)?;
                b.check_morphism("tbar", &self.s_obj, &self.rc_obj, &sec.tbar)?;
                b.check_morphism("s", &self.b_obj, &self.a_obj, &sec.s)?;
                b.check_morphism("j", &self.w_obj, &self.v_obj, &sec.j)?;
                b.check_morphism("jbar", &self.rw_obj, &self.t_obj, &sec.jbar)?;
                b.check_morphism("i", &self.y_obj, &self.x_obj, &sec.i)?;
                require_commutes("c t = s d", &sec.t.then(&self.c)?, &self.d.then(&sec.s)?)?;
                require_commutes(
                    "c1 tbar = t s1",
                    &sec.tbar.then(&self.c1)?,
                    &self.s1.then(&sec.t)?,
                )?;
                require_commutes(
                    "c2 tbar = t s2",
                    &sec.tbar.then(&self.c2)?,
                    &self.s2.then(&sec.t)?,
                )?;
                require_commutes("v j = i w", &sec.j.then(&self.v)?, &self.w.then(&sec.i)?)?;
                require_commutes(
                    "t1 jbar = j w1",
                    &sec.jbar.then(&self.t1)?,
                    &self.w1.then(&sec.j)?,
                )?;
                require_commutes(
                    "t2 jbar = j w2",
                    &sec.jbar.then(&self.t2)?,
                    &self.w2.then(&sec.j)?,
                )?;
            }
            None => {
                for (name, arrow) in [("gbar", &self.gbar), ("g", &self.g), ("f", &self.f)] {
                    if !arrow.is_regular_epi() {
                        return Err(DiagramError::MustBeSurjective(name.into()));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CuboidReport {
    pub diamonds_are_pullbacks: bool,
    pub middle_rows_exact: bool,
    pub lower_exact: bool,
    pub upper_exact: bool,
    /// `lower_exact` implies `upper_exact`.
    pub conforms: bool,
}

/// Verifies the hypotheses (diamonds are pullbacks, middle rows exact)
/// and reports whether lower-row exactness transfers to the upper row.
pub fn check_cuboid(b: &Backend, cub: &CuboidDiagram) -> Result<CuboidReport, DiagramError> {
    cub.validate(b)?;

    let diamonds = is_pullback_span(&cub.k, &cub.gamma, &cub.delta, &cub.g)
        && is_pullback_span(&cub.kbar, &cub.gammabar, &cub.deltabar, &cub.gbar)
        && is_pullback_span(&cub.h, &cub.alpha, &cub.beta, &cub.f);
    if !diamonds {
        return Err(DiagramError::CuboidHypotheses(
            "a diamond is not a pullback".into(),
        ));
    }

    let c_fork = Fork::new(
        b,
        cub.rc_obj.clone(),
        cub.c_obj.clone(),
        cub.a_obj.clone(),
        cub.c1.clone(),
        cub.c2.clone(),
        cub.c.clone(),
    )?;
    let w_fork = Fork::new(
        b,
        cub.rw_obj.clone(),
        cub.w_obj.clone(),
        cub.y_obj.clone(),
        cub.w1.clone(),
        cub.w2.clone(),
        cub.w.clone(),
    )?;
    let middle = is_exact_fork(b, &c_fork) && is_exact_fork(b, &w_fork);
    if !middle {
        return Err(DiagramError::CuboidHypotheses(
            "a middle row is not an exact fork".into(),
        ));
    }

    let lower_fork = Fork::new(
        b,
        cub.s_obj.clone(),
        cub.d_obj.clone(),
        cub.b_obj.clone(),
        cub.s1.clone(),
        cub.s2.clone(),
        cub.d.clone(),
    )?;
    let lower_exact = is_exact_fork(b, &lower_fork);

    let upper_fork = Fork::new(
        b,
        cub.t_obj.clone(),
        cub.v_obj.clone(),
        cub.x_obj.clone(),
        cub.t1.clone(),
        cub.t2.clone(),
        cub.v.clone(),
    )?;
    let upper_exact = is_exact_fork(b, &upper_fork);

    Ok(CuboidReport {
        diamonds_are_pullbacks: true,
        middle_rows_exact: true,
        lower_exact,
        upper_exact,
        conforms: !lower_exact || upper_exact,
    })
}

/// Builds the split cuboid over a cube by taking the kernel pairs of
/// `c`, `d` and `w` as the middle/lower spans and the pullback of
/// `gbar` and `deltabar` as the upper-left corner.  The lower row is
/// exact by construction.
pub fn build_split_cuboid(b: &Backend, cube: &CubeDiagram) -> Result<CuboidDiagram, DiagramError> {
    let sq = &cube.front;

    let rc = tabulate(b, &sq.c_obj, &sq.c.kernel_pair())?;
    let s_tab = tabulate(b, &sq.d_obj, &sq.d.kernel_pair())?;
    let rw = tabulate(b, &cube.w_obj, &cube.w.kernel_pair())?;

    let s_index = pair_index(&s_tab.p1, &s_tab.p2);
    let rc_index = pair_index(&rc.p1, &rc.p2);

    // induced maps between kernel pairs
    let gbar = FunctionArrow::new(
        rc.object.carrier(),
        s_tab.object.carrier(),
        rc.object
            .carrier()
            .elements()
            .map(|i| s_index[&(sq.g.apply(rc.p1.apply(i)), sq.g.apply(rc.p2.apply(i)))])
            .collect(),
    )?;
    let tbar = FunctionArrow::new(
        s_tab.object.carrier(),
        rc.object.carrier(),
        s_tab
            .object
            .carrier()
            .elements()
            .map(|i| rc_index[&(sq.t.apply(s_tab.p1.apply(i)), sq.t.apply(s_tab.p2.apply(i)))])
            .collect(),
    )?;
    let deltabar = FunctionArrow::new(
        rw.object.carrier(),
        s_tab.object.carrier(),
        rw.object
            .carrier()
            .elements()
            .map(|i| {
                s_index[&(
                    cube.delta.apply(rw.p1.apply(i)),
                    cube.delta.apply(rw.p2.apply(i)),
                )]
            })
            .collect(),
    )?;

    let (t_obj, kbar, gammabar) =
        pullback(b, &rc.object, &s_tab.object, &rw.object, &gbar, &deltabar)?;

    let (v, _) = cube_comparison(b, cube)?;

    // upper parallel pair: (rw_i, rc_j) -> (w-leg, c-leg) pairs in V
    let v_index = pair_index(&cube.k, &cube.gamma);
    let t1 = FunctionArrow::new(
        t_obj.carrier(),
        cube.wdc.carrier(),
        t_obj
            .carrier()
            .elements()
            .map(|i| {
                let (rwi, rci) = (kbar.apply(i), gammabar.apply(i));
                v_index[&(rw.p1.apply(rwi), rc.p1.apply(rci))]
            })
            .collect(),
    )?;
    let t2 = FunctionArrow::new(
        t_obj.carrier(),
        cube.wdc.carrier(),
        t_obj
            .carrier()
            .elements()
            .map(|i| {
                let (rwi, rci) = (kbar.apply(i), gammabar.apply(i));
                v_index[&(rw.p2.apply(rwi), rc.p2.apply(rci))]
            })
            .collect(),
    )?;

    let t_index = pair_index(&kbar, &gammabar);
    let jbar = FunctionArrow::new(
        rw.object.carrier(),
        t_obj.carrier(),
        rw.object
            .carrier()
            .elements()
            .map(|i| t_index[&(i, tbar.apply(deltabar.apply(i)))])
            .collect(),
    )?;

    let cuboid = CuboidDiagram {
        t_obj,
        v_obj: cube.wdc.clone(),
        x_obj: cube.yba.clone(),
        rw_obj: rw.object,
        w_obj: cube.w_obj.clone(),
        y_obj: cube.y_obj.clone(),
        rc_obj: rc.object,
        c_obj: sq.c_obj.clone(),
        a_obj: sq.a_obj.clone(),
        s_obj: s_tab.object,
        d_obj: sq.d_obj.clone(),
        b_obj: sq.b_obj.clone(),
        t1,
        t2,
        v,
        w1: rw.p1,
        w2: rw.p2,
        w: cube.w.clone(),
        c1: rc.p1,
        c2: rc.p2,
        c: sq.c.clone(),
        s1: s_tab.p1,
        s2: s_tab.p2,
        d: sq.d.clone(),
        gbar,
        g: sq.g.clone(),
        f: sq.f.clone(),
        deltabar,
        delta: cube.delta.clone(),
        beta: cube.beta.clone(),
        kbar,
        k: cube.k.clone(),
        h: cube.h.clone(),
        gammabar,
        gamma: cube.gamma.clone(),
        alpha: cube.alpha.clone(),
        sections: Some(CuboidSections {
            tbar,
            t: sq.t.clone(),
            s: sq.s.clone(),
            jbar,
            j: cube.j.clone(),
            i: cube.i.clone(),
        }),
    };
    cuboid.validate(b)?;
    Ok(cuboid)
}
