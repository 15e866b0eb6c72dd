//! End-to-end acceptance suite.  Each test covers one acceptance
//! criterion, enforces its wall-clock budget, and prints a single
//! `PASS criterion-N ...` line (visible with `--nocapture`; cargo
//! shows the output automatically when a criterion fails).

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use permutex::algcore::fixtures::{
    chain_semilattice, cyclic_group, klein_group, symmetric_group3,
};
use permutex::algcore::{find_maltsev_term, permutability_class, PermutabilityClass};
use permutex::diagrams::{
    build_split_cuboid, check_cuboid, is_regular_pushout, regular_pushout_relational,
    set_counterexample_square, Backend, CubeDiagram,
};
use permutex::formats::report_to_toml;
use permutex::relcore::{Carrier, FunctionArrow, Relation};
use permutex::relexpr::{check_derivation, parse_derivation, Derivation};
use permutex::search::{
    enumerate_squares, random_diagram, search_counterexample, GeneratedDiagram, SearchBounds,
    SearchSpace, Shape, SplitMix64, Verdict,
};

fn c(n: usize) -> Carrier {
    Carrier::new(n).unwrap()
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(p).expect("fixture file")
}

fn criterion(n: u32, label: &str, budget: Duration, body: impl FnOnce() + UnwindSafe) {
    let start = Instant::now();
    let outcome = catch_unwind(body);
    let elapsed = start.elapsed();
    let in_budget = elapsed <= budget;
    let status = if outcome.is_ok() && in_budget {
        "PASS"
    } else {
        "FAIL"
    };
    println!("{status} criterion-{n}: {label} ({elapsed:.2?})");
    if let Err(e) = outcome {
        resume_unwind(e);
    }
    assert!(
        in_budget,
        "criterion-{n} exceeded its {budget:?} budget (took {elapsed:.2?})"
    );
}

// ---------------------------------------------------------------------
// 1. Relation-calculus laws: exhaustive on carriers up to 2 for
//    relation triples and up to 3 for function graphs, plus 10^4
//    seeded cases with carriers 4-6.

fn check_relation_triple(r: &Relation, s: &Relation, t: &Relation) {
    let rs = r.compose(s).unwrap();
    assert_eq!(
        rs.compose(t).unwrap(),
        r.compose(&s.compose(t).unwrap()).unwrap()
    );
    assert_eq!(rs.opposite(), s.opposite().compose(&r.opposite()).unwrap());
    assert_eq!(&r.opposite().opposite(), r);
    assert_eq!(&Relation::identity(r.src()).compose(r).unwrap(), r);
    assert_eq!(&r.compose(&Relation::identity(r.dst())).unwrap(), r);
}

fn check_function_laws(f: &FunctionArrow) {
    let gr = f.graph();
    // f f~ = 1 iff surjective; f~ f = kernel pair, an equivalence
    let ffo = gr.opposite().compose(&gr).unwrap();
    assert_eq!(ffo == Relation::identity(f.dst()), f.is_surjective());
    let kp = gr.compose(&gr.opposite()).unwrap();
    assert_eq!(kp, f.kernel_pair());
    let eq = kp.eq_props().unwrap();
    assert!(eq.reflexive && eq.symmetric && eq.transitive);
    let (e, m) = f.epi_mono_factor();
    assert!(e.is_surjective() && m.is_injective());
    assert_eq!(e.then(&m).unwrap(), *f);
}

fn rel_from_mask(m: usize, n: usize, mask: u64) -> Relation {
    Relation::from_pairs(
        c(m),
        c(n),
        (0..m * n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (i / n, i % n)),
    )
}

#[test]
fn criterion_1_relation_calculus() {
    criterion(1, "relation calculus laws", Duration::from_secs(5), || {
        // exhaustive triples on carriers up to 2
        for a in 1..=2usize {
            for b in 1..=2usize {
                for d in 1..=2usize {
                    for e in 1..=2usize {
                        for rm in 0..1u64 << (a * b) {
                            for sm in 0..1u64 << (b * d) {
                                for tm in 0..1u64 << (d * e) {
                                    check_relation_triple(
                                        &rel_from_mask(a, b, rm),
                                        &rel_from_mask(b, d, sm),
                                        &rel_from_mask(d, e, tm),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        // exhaustive function laws on carriers up to 3
        for src in 1..=3usize {
            for dst in 1..=3usize {
                for code in 0..dst.pow(src as u32) {
                    let mut v = code;
                    let table: Vec<usize> = (0..src)
                        .map(|_| {
                            let x = v % dst;
                            v /= dst;
                            x
                        })
                        .collect();
                    check_function_laws(&FunctionArrow::new(c(src), c(dst), table).unwrap());
                }
            }
        }
        // 10^4 seeded cases with carriers 4-6
        let mut rng = SplitMix64::new(0xACC3_0001);
        for _ in 0..10_000 {
            let a = 4 + rng.below(3);
            let b = 4 + rng.below(3);
            let d = 4 + rng.below(3);
            let e = 4 + rng.below(3);
            let r = rel_from_mask(a, b, rng.next_u64());
            let s = rel_from_mask(b, d, rng.next_u64());
            let t = rel_from_mask(d, e, rng.next_u64());
            check_relation_triple(&r, &s, &t);
            let table: Vec<usize> = (0..a).map(|_| rng.below(b)).collect();
            check_function_laws(&FunctionArrow::new(c(a), c(b), table).unwrap());
        }
    });
}

// ---------------------------------------------------------------------
// 2. Permutability classification of the fixture algebras.

#[test]
fn criterion_2_classification() {
    criterion(
        2,
        "congruence permutability classification",
        Duration::from_secs(5),
        || {
            for alg in [
                cyclic_group(2),
                cyclic_group(4),
                klein_group(),
                symmetric_group3(),
                cyclic_group(6),
            ] {
                let report = permutability_class(&alg).unwrap();
                assert_eq!(
                    report.class,
                    PermutabilityClass::TwoPermutable,
                    "{} must be two-permutable",
                    alg.name
                );
                assert!(
                    find_maltsev_term(&alg, 1_000_000).unwrap().is_some(),
                    "{} must have a Mal'tsev term",
                    alg.name
                );
            }

            let chain3 = chain_semilattice(3);
            let report = permutability_class(&chain3).unwrap();
            assert_eq!(report.class, PermutabilityClass::ThreePermutableNotTwo);
            let (left, right) = report.witness.expect("witness pair");
            assert_eq!(
                (left.partition_string(), right.partition_string()),
                ("{0 1|2}".to_string(), "{0|1 2}".to_string())
            );
            assert!(find_maltsev_term(&chain3, 1_000_000).unwrap().is_none());

            let chain4 = chain_semilattice(4);
            let report = permutability_class(&chain4).unwrap();
            assert_eq!(report.class, PermutabilityClass::NotThreePermutable);
            assert!(report.witness.is_some());
        },
    );
}

// ---------------------------------------------------------------------
// 3. Exhaustive Set squares with carriers up to 3: the two
//    regular-pushout checkers agree on every square, violations exist,
//    and the documented counterexample sits in the enumeration as a
//    violation.

#[test]
fn criterion_3_exhaustive_set_squares() {
    criterion(
        3,
        "exhaustive Set square sweep to carrier 3",
        Duration::from_secs(60),
        || {
            let space = SearchSpace::Set;
            let bounds = SearchBounds::exhaustive(3, u64::MAX);
            let (squares, truncated) = enumerate_squares(&space, &bounds).unwrap();
            assert!(!truncated);
            let backend = space.backend();
            let mut first_violation = None;
            let mut documented_index = None;
            let documented = set_counterexample_square();
            for (i, sq) in squares.iter().enumerate() {
                let a = is_regular_pushout(&backend, sq).unwrap();
                let b = regular_pushout_relational(&backend, sq).unwrap();
                assert_eq!(a, b, "checkers disagree on square {i}");
                if !a && first_violation.is_none() {
                    first_violation = Some(i);
                }
                if *sq == documented {
                    documented_index = Some((i, a));
                }
            }
            let first = first_violation.expect("at least one violating square");
            let (doc_idx, doc_holds) =
                documented_index.expect("documented counterexample is enumerated");
            assert!(!doc_holds, "documented square must violate the property");

            // the sweep must report the same first violation
            let report = search_counterexample(&space, Shape::Square, &bounds).unwrap();
            assert_eq!(report.verdict, Verdict::CounterexampleFound);
            assert_eq!(report.violations[0].case_index, first as u64);
            println!(
                "  (first violation at case {first}; documented square at case {doc_idx} of {})",
                squares.len()
            );
        },
    );
}

// ---------------------------------------------------------------------
// 4. Every congruence-quotient square of z4, v4 and s3 is a regular
//    pushout, and every quotient cube has a surjective comparison.

#[test]
fn criterion_4_group_quotient_diagrams() {
    criterion(
        4,
        "group quotient squares and cubes all conform",
        Duration::from_secs(30),
        || {
            for alg in [cyclic_group(4), klein_group(), symmetric_group3()] {
                let name = alg.name.clone();
                let space = SearchSpace::Algebra(alg);
                let bounds = SearchBounds::exhaustive(8, u64::MAX);
                for shape in [Shape::Square, Shape::Cube] {
                    let report = search_counterexample(&space, shape, &bounds).unwrap();
                    assert!(report.cases_checked > 0, "{name}: no {shape:?} cases");
                    assert_eq!(
                        report.verdict,
                        Verdict::AllConform,
                        "{name}: {shape:?} violation {:?}",
                        report.violations.first().map(|v| &v.detail)
                    );
                }
            }
        },
    );
}

// ---------------------------------------------------------------------
// 5. Split cuboids: 10^3 seeded cuboids over v4 and z4 conform, while
//    the cuboid built over the documented Set square has an exact
//    lower row but a non-exact upper row.

#[test]
fn criterion_5_cuboids() {
    criterion(
        5,
        "seeded split cuboids and the Set counterexample cuboid",
        Duration::from_secs(60),
        || {
            for alg in [klein_group(), cyclic_group(4)] {
                let name = alg.name.clone();
                let space = SearchSpace::Algebra(alg);
                let bounds = SearchBounds::random(4, 1_000, 7);
                let report = search_counterexample(&space, Shape::Cuboid, &bounds).unwrap();
                assert_eq!(report.cases_checked, 1_000, "{name}: short cuboid sweep");
                assert_eq!(
                    report.verdict,
                    Verdict::AllConform,
                    "{name}: cuboid violation {:?}",
                    report.violations.first().map(|v| &v.detail)
                );
            }

            let backend = Backend::Set;
            let cube = CubeDiagram::degenerate(&backend, set_counterexample_square()).unwrap();
            let cuboid = build_split_cuboid(&backend, &cube).unwrap();
            cuboid.validate(&backend).unwrap();
            let report = check_cuboid(&backend, &cuboid).unwrap();
            assert!(report.lower_exact);
            assert!(!report.upper_exact);
            assert!(!report.conforms);
        },
    );
}

// ---------------------------------------------------------------------
// 6. Derivation replay: the split-square chain holds on 100 seeded
//    group squares and fails at the kernel-pair permutation step on
//    the documented Set counterexample.

fn load_chain(name: &str) -> Derivation {
    parse_derivation(&fixture(name)).unwrap()
}

#[test]
fn criterion_6_derivation_replay() {
    criterion(
        6,
        "derivation chain on group squares vs the Set counterexample",
        Duration::from_secs(5),
        || {
            let chain = load_chain("prop_maltsev_po.deriv");
            let space = SearchSpace::Algebra(klein_group());
            let bounds = SearchBounds::random(4, u64::MAX, 11);
            let mut passed = 0u32;
            let mut case = 0u64;
            while passed < 100 {
                if let Some(GeneratedDiagram::Square(sq)) =
                    random_diagram(&space, Shape::Square, &bounds, case).unwrap()
                {
                    let env = permutex::formats::environment_for_square(&sq);
                    let report = check_derivation(&chain, &env).unwrap();
                    assert!(
                        report.verdict(),
                        "chain failed on seeded group square {case} at step {:?}",
                        report.first_failure()
                    );
                    passed += 1;
                }
                case += 1;
                assert!(case < 10_000, "generation starved");
            }

            let env = permutex::formats::environment_for_square(&set_counterexample_square());
            let report = check_derivation(&chain, &env).unwrap();
            assert!(!report.verdict());
            assert_eq!(report.first_failure(), Some(4));
        },
    );
}

// ---------------------------------------------------------------------
// 7. Independent checkers never disagree: surjective-comparison vs
//    relational regular-pushout criterion across Set and group
//    backends, counted exactly.

#[test]
fn criterion_7_oracle_cross_checks() {
    criterion(
        7,
        "independent checker cross-validation",
        Duration::from_secs(60),
        || {
            let mut discrepancies = 0usize;
            let mut total = 0usize;
            let mut sweep = |space: SearchSpace, bounds: SearchBounds| {
                let (squares, _) = enumerate_squares(&space, &bounds).unwrap();
                let backend = space.backend();
                for sq in &squares {
                    total += 1;
                    if is_regular_pushout(&backend, sq).unwrap()
                        != regular_pushout_relational(&backend, sq).unwrap()
                    {
                        discrepancies += 1;
                    }
                }
            };
            sweep(SearchSpace::Set, SearchBounds::exhaustive(3, u64::MAX));
            sweep(SearchSpace::Set, SearchBounds::random(4, 2_000, 23));
            for alg in [cyclic_group(4), klein_group(), symmetric_group3()] {
                sweep(
                    SearchSpace::Algebra(alg),
                    SearchBounds::exhaustive(8, u64::MAX),
                );
            }
            assert!(total > 1_000, "cross-check corpus too small ({total})");
            assert_eq!(discrepancies, 0, "checkers disagreed on {discrepancies} of {total}");
        },
    );
}

// ---------------------------------------------------------------------
// 8. Determinism: repeated sweeps with identical parameters produce
//    byte-identical machine reports.

#[test]
fn criterion_8_deterministic_reports() {
    criterion(
        8,
        "byte-identical reports across repeated sweeps",
        Duration::from_secs(60),
        || {
            let runs = [
                (SearchSpace::Set, Shape::Square, SearchBounds::random(3, 500, 42)),
                (SearchSpace::Set, Shape::Cuboid, SearchBounds::random(3, 200, 42)),
                (
                    SearchSpace::Algebra(klein_group()),
                    Shape::Cuboid,
                    SearchBounds::random(4, 200, 5),
                ),
                (SearchSpace::Set, Shape::Square, SearchBounds::exhaustive(3, u64::MAX)),
            ];
            for (space, shape, bounds) in runs {
                let a = report_to_toml(&search_counterexample(&space, shape, &bounds).unwrap());
                let b = report_to_toml(&search_counterexample(&space, shape, &bounds).unwrap());
                assert_eq!(a, b, "report bytes differ for {shape:?} over {}", space.label());
                assert!(!a.is_empty());
            }
        },
    );
}
