//! Finite-model verification for the calculus of binary relations,
//! congruence permutability of finite algebras, regular pushouts and
//! the cube/cuboid diagram lemmas, with exhaustive and seeded
//! counterexample search over finite backends.

pub mod algcore;
pub mod diagrams;
pub mod formats;
pub mod relcore;
pub mod relexpr;
pub mod search;
