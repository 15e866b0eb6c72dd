//! Regenerates the files under `fixtures/` from code, so the shipped
//! fixtures are reproducible byte for byte:
//!
//! ```sh
//! cargo run -p permutex --example gen_fixtures -- fixtures
//! ```

use std::path::PathBuf;

use permutex::algcore::fixtures::{
    chain_semilattice, cyclic_group, klein_group, symmetric_group3, trivial_group,
};
use permutex::algcore::{congruence_generated, quotient};
use permutex::diagrams::{
    build_split_cuboid, pullback, set_counterexample_square, Backend, CubeDiagram, Object,
    SquareDiagram,
};
use permutex::formats::{algebra_to_toml, diagram_to_toml, LoadedDiagram};
use permutex::relcore::{Carrier, FunctionArrow};

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    std::fs::create_dir_all(&dir).expect("fixture directory");
    let write = |name: &str, text: String| {
        std::fs::write(dir.join(name), text).expect("write fixture");
        println!("wrote {name}");
    };

    // algebras
    let mut chain3 = chain_semilattice(3);
    chain3.name = "chain3_semilattice".into();
    let mut chain4 = chain_semilattice(4);
    chain4.name = "chain4_semilattice".into();
    let algebras = [
        cyclic_group(2),
        cyclic_group(4),
        klein_group(),
        cyclic_group(6),
        symmetric_group3(),
        chain3,
        chain4,
        trivial_group(),
    ];
    for a in &algebras {
        write(&format!("{}.alg", a.name), algebra_to_toml(a));
    }

    // the documented Set square whose comparison misses a pullback point
    write(
        "counterexample_square.diag",
        diagram_to_toml(&LoadedDiagram::Square(set_counterexample_square())),
    );

    // a Set pullback square (trivially a regular pushout)
    let b = Backend::Set;
    let c = |n| Carrier::new(n).unwrap();
    let arr = |s, d, t: &[usize]| FunctionArrow::new(c(s), c(d), t.to_vec()).unwrap();
    let f = arr(2, 1, &[0, 0]);
    let d_arrow = arr(2, 1, &[0, 0]);
    let (p, p_d, p_a) = pullback(
        &b,
        &Object::Set(c(2)),
        &Object::Set(c(1)),
        &Object::Set(c(2)),
        &f,
        &d_arrow,
    )
    .unwrap();
    let pullback_square = SquareDiagram::new(
        &b,
        p,
        Object::Set(c(2)),
        Object::Set(c(2)),
        Object::Set(c(1)),
        p_a,
        p_d,
        d_arrow,
        f,
        arr(1, 2, &[0]),
        arr(2, 4, &[0, 2]),
    )
    .unwrap();
    write(
        "pullback_square.diag",
        diagram_to_toml(&LoadedDiagram::Square(pullback_square)),
    );

    // a group-quotient square over the Klein four-group
    let v4 = klein_group();
    let backend = Backend::Algebra(v4.signature());
    let theta = congruence_generated(&v4, &[(0, 1)]).unwrap();
    let psi = congruence_generated(&v4, &[(0, 2)]).unwrap();
    let join = congruence_generated(&v4, &[(0, 1), (0, 2)]).unwrap();
    let (d_alg, g) = quotient(&v4, &theta).unwrap();
    let (a_alg, c_arrow) = quotient(&v4, &psi).unwrap();
    let (b_alg, _) = quotient(&v4, &join).unwrap();
    let mk = |src: &permutex::algcore::FiniteAlgebra,
              dst: &permutex::algcore::FiniteAlgebra,
              t: &[usize]| {
        FunctionArrow::new(src.carrier(), dst.carrier(), t.to_vec()).unwrap()
    };
    let d_q = mk(&d_alg, &b_alg, &[0, 0]);
    let f_q = mk(&a_alg, &b_alg, &[0, 0]);
    let s_q = mk(&b_alg, &a_alg, &[0]);
    let t_q = mk(&d_alg, &v4, &[0, 2]);
    let group_square = SquareDiagram::new(
        &backend,
        Object::Alg(v4.clone()),
        Object::Alg(a_alg),
        Object::Alg(d_alg.clone()),
        Object::Alg(b_alg),
        c_arrow,
        g.clone(),
        d_q.clone(),
        f_q,
        s_q,
        t_q,
    )
    .unwrap();
    write(
        "group_square.diag",
        diagram_to_toml(&LoadedDiagram::Square(group_square.clone())),
    );

    // a group cube over that square: W = v4 with w = delta = the theta
    // projection and beta = d
    let cube = CubeDiagram::new(
        &backend,
        group_square,
        Object::Alg(v4.clone()),
        Object::Alg(d_alg),
        g.clone(),
        g,
        d_q,
    )
    .unwrap();
    write(
        "group_cube.diag",
        diagram_to_toml(&LoadedDiagram::Cube(cube.clone())),
    );

    // the split cuboid built from that cube (its lower row is exact by
    // construction and its upper row is exact as well)
    let cuboid = build_split_cuboid(&backend, &cube).unwrap();
    write(
        "group_cuboid.diag",
        diagram_to_toml(&LoadedDiagram::Cuboid(cuboid)),
    );
}
