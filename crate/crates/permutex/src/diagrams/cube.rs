//! Commutative cubes over a square of split epimorphisms and the
//! comparison morphism between the two pullback corners.

use crate::relcore::FunctionArrow;

use super::{pair_index, pullback, require_commutes, Backend, DiagramError, Object, SquareDiagram};

/// A cube over a split-epi square: a regular epi `w: W -> Y` with legs
/// `delta: W -> D` and `beta: Y -> B` satisfying `beta w = d delta`,
/// together with the derived pullback corners `W x_D C` and `Y x_B A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeDiagram {
    pub front: SquareDiagram,
    pub w_obj: Object,
    pub y_obj: Object,
    pub w: FunctionArrow,
    pub delta: FunctionArrow,
    pub beta: FunctionArrow,
    /// `W x_D C` with projections `k` (to `W`) and `gamma` (to `C`)
    /// and the induced section `j` of `k`.
    pub wdc: Object,
    pub k: FunctionArrow,
    pub gamma: FunctionArrow,
    pub j: FunctionArrow,
    /// `Y x_B A` with projections `h` (to `Y`) and `alpha` (to `A`)
    /// and the induced section `i` of `h`.
    pub yba: Object,
    pub h: FunctionArrow,
    pub alpha: FunctionArrow,
    pub i: FunctionArrow,
}

impl CubeDiagram {
    pub fn new(
        b: &Backend,
        front: SquareDiagram,
        w_obj: Object,
        y_obj: Object,
        w: FunctionArrow,
        delta: FunctionArrow,
        beta: FunctionArrow,
    ) -> Result<Self, DiagramError> {
        b.check_morphism("w", &w_obj, &y_obj, &w)?;
        b.check_morphism("delta", &w_obj, &front.d_obj, &delta)?;
        b.check_morphism("beta", &y_obj, &front.b_obj, &beta)?;
        require_commutes("beta w = d delta", &w.then(&beta)?, &delta.then(&front.d)?)?;
        if !w.is_regular_epi() {
            return Err(DiagramError::MustBeSurjective("w".into()));
        }
        let (wdc, k, gamma) = pullback(b, &front.c_obj, &front.d_obj, &w_obj, &front.g, &delta)?;
        let (yba, h, alpha) = pullback(b, &front.a_obj, &front.b_obj, &y_obj, &front.f, &beta)?;
        // induced sections j = <1_W, t delta> and i = <1_Y, s beta>
        let wdc_index = pair_index(&k, &gamma);
        let j = FunctionArrow::new(
            w_obj.carrier(),
            wdc.carrier(),
            w_obj
                .carrier()
                .elements()
                .map(|x| wdc_index[&(x, front.t.apply(delta.apply(x)))])
                .collect(),
        )?;
        let yba_index = pair_index(&h, &alpha);
        let i = FunctionArrow::new(
            y_obj.carrier(),
            yba.carrier(),
            y_obj
                .carrier()
                .elements()
                .map(|y| yba_index[&(y, front.s.apply(beta.apply(y)))])
                .collect(),
        )?;
        Ok(CubeDiagram {
            front,
            w_obj,
            y_obj,
            w,
            delta,
            beta,
            wdc,
            k,
            gamma,
            j,
            yba,
            h,
            alpha,
            i,
        })
    }

    /// The degenerate cube over a square (W = Y = D, w = 1_D,
    /// delta = 1_D, beta = d) whose comparison morphism is the
    /// square's pairing `<g, c>` into `D x_B A`.
    pub fn degenerate(b: &Backend, sq: SquareDiagram) -> Result<Self, DiagramError> {
        let w_obj = sq.d_obj.clone();
        let y_obj = sq.d_obj.clone();
        let w = FunctionArrow::identity(sq.d_obj.carrier());
        let delta = FunctionArrow::identity(sq.d_obj.carrier());
        let beta = sq.d.clone();
        CubeDiagram::new(b, sq, w_obj, y_obj, w, delta, beta)
    }
}

/// The comparison `v: W x_D C -> Y x_B A`, `(x, u) -> (w(x), c(u))`,
/// and whether it is a regular epimorphism.
pub fn cube_comparison(
    _b: &Backend,
    cube: &CubeDiagram,
) -> Result<(FunctionArrow, bool), DiagramError> {
    let yba_index = pair_index(&cube.h, &cube.alpha);
    let table = cube
        .wdc
        .carrier()
        .elements()
        .map(|p| {
            yba_index[&(
                cube.w.apply(cube.k.apply(p)),
                cube.front.c.apply(cube.gamma.apply(p)),
            )]
        })
        .collect();
    let v = FunctionArrow::new(cube.wdc.carrier(), cube.yba.carrier(), table)?;
    let is_epi = v.is_surjective();
    Ok((v, is_epi))
}
