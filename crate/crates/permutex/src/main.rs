//! `permutex`: classify finite algebras by congruence permutability,
//! check regular-pushout / cube / cuboid properties of finite diagrams,
//! run counterexample sweeps, replay relational derivations, and emit
//! DOT graphs.
//!
//! Exit codes: 0 = property holds / analysis succeeded,
//! 1 = property violated (details printed), 2 = parse or structural
//! error.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use permutex::algcore::{
    all_congruences, find_maltsev_term, permutability_class, AlgError, FiniteAlgebra,
    DEFAULT_MALTSEV_BUDGET,
};
use permutex::diagrams::{
    check_cuboid, cube_comparison, is_exact_fork, is_regular_pushout,
    regular_pushout_relational, DiagramError, Fork,
};
use permutex::formats::{
    check_to_toml, diagram_to_dot, environment_for, load_algebra, load_diagram,
    parse_check, report_to_toml, CheckFile, LoadedDiagram,
};
use permutex::relexpr::{check_derivation, parse_derivation};
use permutex::search::{
    search_counterexample, SearchBounds, SearchReport, SearchSpace,
    Shape as SweepShape, Verdict,
};

#[derive(Parser)]
#[command(
    name = "permutex",
    about = "Finite-model checks for relation calculus, congruence permutability and diagram lemmas",
    version
)]
struct Cli {
    /// Emit only the machine-readable report block.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the permutability class of a finite algebra and whether a
    /// Mal'tsev term exists.
    Classify {
        algebra: PathBuf,
        /// Cap on the term-closure size explored by the term search.
        #[arg(long, default_value_t = DEFAULT_MALTSEV_BUDGET)]
        budget: usize,
    },
    /// List all congruences of a finite algebra.
    Congruences { algebra: PathBuf },
    /// Search for a Mal'tsev term of a finite algebra.
    MaltsevTerm {
        algebra: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MALTSEV_BUDGET)]
        budget: usize,
    },
    /// Check a diagram file against a property.
    Check {
        diagram: PathBuf,
        /// Defaults to the property matching the file's shape.
        #[arg(long, value_enum)]
        property: Option<Property>,
        /// Write the machine check report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep diagrams of a shape over a backend, reporting the first
    /// violation.
    Sweep {
        /// `set`, or `algebra <FILE>` for quotient-generated diagrams.
        #[arg(long, num_args = 1..=2)]
        backend: Vec<String>,
        #[arg(long, value_enum)]
        shape: ShapeArg,
        #[arg(long, default_value_t = 3)]
        max_carrier: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        cases: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        /// Where to write the first violating diagram (default
        /// `permutex_violation.diag`).
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Replay a derivation script against a diagram's environment.
    Replay {
        derivation: PathBuf,
        #[arg(long)]
        env: PathBuf,
    },
    /// Print a DOT graph of a diagram.
    EmitDot {
        diagram: PathBuf,
        /// Check report whose highlighted morphisms are colored.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Property {
    RegularPushout,
    Cube,
    Cuboid,
    ExactFork,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Square,
    Cube,
    Cuboid,
}

impl From<ShapeArg> for SweepShape {
    fn from(s: ShapeArg) -> SweepShape {
        match s {
            ShapeArg::Square => SweepShape::Square,
            ShapeArg::Cube => SweepShape::Cube,
            ShapeArg::Cuboid => SweepShape::Cuboid,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum ModeArg {
    Exhaustive,
    Random,
}

/// Command error that already carries the right exit code.
struct CmdError {
    code: u8,
    message: String,
}

impl CmdError {
    fn structural(message: impl Into<String>) -> Self {
        CmdError {
            code: 2,
            message: message.into(),
        }
    }
}

/// Wraps any displayable error as a structural (exit 2) failure.
fn internal<E: std::fmt::Display>(e: E) -> CmdError {
    CmdError::structural(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = cli.quiet;
    let result = match cli.command {
        Command::Classify { algebra, budget } => cmd_classify(&algebra, budget, quiet),
        Command::Congruences { algebra } => cmd_congruences(&algebra, quiet),
        Command::MaltsevTerm { algebra, budget } => cmd_maltsev(&algebra, budget, quiet),
        Command::Check {
            diagram,
            property,
            out,
        } => cmd_check(&diagram, property, out.as_deref(), quiet),
        Command::Sweep {
            backend,
            shape,
            max_carrier,
            seed,
            cases,
            mode,
            emit,
        } => cmd_sweep(
            &backend,
            shape.into(),
            max_carrier,
            seed,
            cases,
            mode,
            emit.as_deref(),
            quiet,
        ),
        Command::Replay { derivation, env } => cmd_replay(&derivation, &env, quiet),
        Command::EmitDot { diagram, report } => cmd_emit_dot(&diagram, report.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn print_machine(quiet: bool, block: &str) {
    if !quiet {
        println!("-- machine --");
    }
    print!("{block}");
}

fn load_algebra_cmd(path: &Path) -> Result<FiniteAlgebra, CmdError> {
    load_algebra(path).map_err(|e| CmdError::structural(format!("{}: {e}", path.display())))
}

fn cmd_classify(path: &Path, budget: usize, quiet: bool) -> Result<u8, CmdError> {
    let alg = load_algebra_cmd(path)?;
    let report = permutability_class(&alg).map_err(internal)?;
    let term = match find_maltsev_term(&alg, budget) {
        Ok(Some(_)) => "found",
        Ok(None) => "none",
        Err(AlgError::Budget(_)) => "unknown",
        Err(e) => return Err(internal(e)),
    };
    let mut machine = String::new();
    machine.push_str(&format!("algebra = \"{}\"\n", alg.name));
    machine.push_str(&format!("size = {}\n", alg.size()));
    machine.push_str(&format!("class = \"{}\"\n", report.class.as_str()));
    machine.push_str(&format!("maltsev_term = \"{term}\"\n"));
    if let Some((a, b)) = &report.witness {
        machine.push_str(&format!("witness_left = \"{}\"\n", a.partition_string()));
        machine.push_str(&format!("witness_right = \"{}\"\n", b.partition_string()));
    }
    if !quiet {
        println!("algebra {} (size {})", alg.name, alg.size());
        println!("class: {}", report.class.as_str());
        println!("maltsev term: {term}");
        if let Some((a, b)) = &report.witness {
            println!(
                "witness: {} with {}",
                a.partition_string(),
                b.partition_string()
            );
        }
    }
    print_machine(quiet, &machine);
    Ok(0)
}

fn cmd_congruences(path: &Path, quiet: bool) -> Result<u8, CmdError> {
    let alg = load_algebra_cmd(path)?;
    let congs = all_congruences(&alg).map_err(internal)?;
    let mut machine = String::new();
    machine.push_str(&format!("algebra = \"{}\"\n", alg.name));
    machine.push_str(&format!("count = {}\n", congs.len()));
    let list: Vec<String> = congs
        .iter()
        .map(|c| format!("\"{}\"", c.partition_string()))
        .collect();
    machine.push_str(&format!("congruences = [{}]\n", list.join(", ")));
    if !quiet {
        println!("algebra {} has {} congruences:", alg.name, congs.len());
        for c in &congs {
            println!("  {}", c.partition_string());
        }
    }
    print_machine(quiet, &machine);
    Ok(0)
}

fn cmd_maltsev(path: &Path, budget: usize, quiet: bool) -> Result<u8, CmdError> {
    let alg = load_algebra_cmd(path)?;
    let (result, table) = match find_maltsev_term(&alg, budget) {
        Ok(Some(op)) => ("found", Some(op.table)),
        Ok(None) => ("none", None),
        Err(AlgError::Budget(_)) => ("unknown", None),
        Err(e) => return Err(internal(e)),
    };
    let mut machine = String::new();
    machine.push_str(&format!("algebra = \"{}\"\n", alg.name));
    machine.push_str(&format!("result = \"{result}\"\n"));
    if let Some(t) = &table {
        let cells: Vec<String> = t.iter().map(|v| v.to_string()).collect();
        machine.push_str(&format!("table = [{}]\n", cells.join(", ")));
    }
    if !quiet {
        match result {
            "found" => println!("maltsev term found for {}", alg.name),
            "none" => println!("no maltsev term exists for {}", alg.name),
            _ => println!("term search for {} exhausted its budget", alg.name),
        }
    }
    print_machine(quiet, &machine);
    Ok(0)
}

fn default_property(d: &LoadedDiagram) -> Property {
    match d {
        LoadedDiagram::Square(_) => Property::RegularPushout,
        LoadedDiagram::Cube(_) => Property::Cube,
        LoadedDiagram::Cuboid(_) => Property::Cuboid,
    }
}

fn cmd_check(
    path: &Path,
    property: Option<Property>,
    out: Option<&Path>,
    quiet: bool,
) -> Result<u8, CmdError> {
    let (backend, diagram) =
        load_diagram(path).map_err(|e| CmdError::structural(format!("{}: {e}", path.display())))?;
    let property = property.unwrap_or_else(|| default_property(&diagram));
    let (name, holds, detail, highlight): (&str, bool, String, Vec<String>) =
        match (property, &diagram) {
            (Property::RegularPushout, LoadedDiagram::Square(sq)) => {
                let surj = is_regular_pushout(&backend, sq).map_err(internal)?;
                let rel = regular_pushout_relational(&backend, sq).map_err(internal)?;
                let detail = format!(
                    "comparison surjective: {surj}; relational criterion: {rel}"
                );
                let hl = if surj {
                    vec![]
                } else {
                    vec!["c".into(), "g".into()]
                };
                ("regular-pushout", surj, detail, hl)
            }
            (Property::Cube, LoadedDiagram::Cube(cube)) => {
                let (_, is_epi) = cube_comparison(&backend, cube).map_err(internal)?;
                let hl = if is_epi {
                    vec![]
                } else {
                    vec!["k".into(), "gamma".into()]
                };
                (
                    "cube",
                    is_epi,
                    format!("comparison surjective: {is_epi}"),
                    hl,
                )
            }
            (Property::Cuboid, LoadedDiagram::Cuboid(cub)) => {
                let report = check_cuboid(&backend, cub).map_err(|e| match e {
                    DiagramError::CuboidHypotheses(msg) => {
                        CmdError::structural(format!("hypotheses violated: {msg}"))
                    }
                    other => internal(other),
                })?;
                let detail = format!(
                    "lower_exact: {}; upper_exact: {}",
                    report.lower_exact, report.upper_exact
                );
                let hl = if report.conforms {
                    vec![]
                } else {
                    vec!["t1".into(), "t2".into(), "v".into()]
                };
                ("cuboid", report.conforms, detail, hl)
            }
            (Property::ExactFork, LoadedDiagram::Cuboid(cub)) => {
                let fork = Fork::new(
                    &backend,
                    cub.s_obj.clone(),
                    cub.d_obj.clone(),
                    cub.b_obj.clone(),
                    cub.s1.clone(),
                    cub.s2.clone(),
                    cub.d.clone(),
                )
                .map_err(internal)?;
                let exact = is_exact_fork(&backend, &fork);
                let hl = if exact {
                    vec![]
                } else {
                    vec!["s1".into(), "s2".into(), "d".into()]
                };
                (
                    "exact-fork",
                    exact,
                    format!("lower row exact: {exact}"),
                    hl,
                )
            }
            _ => {
                return Err(CmdError::structural(format!(
                    "property does not apply to a {} file",
                    diagram.shape_tag()
                )))
            }
        };
    let check = CheckFile {
        property: name.to_string(),
        holds,
        detail: detail.clone(),
        highlight,
    };
    let machine = check_to_toml(&check);
    if let Some(out_path) = out {
        std::fs::write(out_path, &machine)
            .map_err(|e| CmdError::structural(format!("{}: {e}", out_path.display())))?;
    }
    if !quiet {
        println!(
            "{name} on {}: {}",
            path.display(),
            if holds { "holds" } else { "VIOLATED" }
        );
        println!("{detail}");
    }
    print_machine(quiet, &machine);
    Ok(if holds { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    backend: &[String],
    shape: SweepShape,
    max_carrier: usize,
    seed: u64,
    cases: u64,
    mode: ModeArg,
    emit: Option<&Path>,
    quiet: bool,
) -> Result<u8, CmdError> {
    let space = match backend {
        [kind] if kind == "set" => SearchSpace::Set,
        [kind, file] if kind == "algebra" => {
            SearchSpace::Algebra(load_algebra_cmd(Path::new(file))?)
        }
        [file] if file.ends_with(".alg") => {
            SearchSpace::Algebra(load_algebra_cmd(Path::new(file))?)
        }
        _ => {
            return Err(CmdError::structural(
                "--backend takes `set` or `algebra <FILE>`",
            ))
        }
    };
    let bounds = match mode {
        ModeArg::Exhaustive => SearchBounds::exhaustive(max_carrier, cases),
        ModeArg::Random => SearchBounds::random(max_carrier, cases, seed),
    };
    let report: SearchReport =
        search_counterexample(&space, shape, &bounds).map_err(internal)?;
    if !quiet {
        println!(
            "sweep {} over {}: {} ({} cases, {} generation failures{}) in {:?}",
            shape.as_str(),
            report.space_label,
            report.verdict.as_str(),
            report.cases_checked,
            report.generation_failures,
            if report.truncated { ", truncated" } else { "" },
            report.elapsed
        );
        for v in &report.violations {
            println!("violation at case {}: {}", v.case_index, v.detail);
        }
    }
    print_machine(quiet, &report_to_toml(&report));
    if let Some(v) = report.violations.first() {
        let out = emit.unwrap_or(Path::new("permutex_violation.diag"));
        let diag = permutex::formats::generated_to_diag(&v.diagram);
        let text = toml::to_string(&diag).map_err(internal)?;
        std::fs::write(out, text)
            .map_err(|e| CmdError::structural(format!("{}: {e}", out.display())))?;
        if !quiet {
            println!("violating diagram written to {}", out.display());
        }
    }
    Ok(match report.verdict {
        Verdict::AllConform => 0,
        Verdict::CounterexampleFound => 1,
    })
}

fn cmd_replay(derivation: &Path, env_path: &Path, quiet: bool) -> Result<u8, CmdError> {
    let text = std::fs::read_to_string(derivation)
        .map_err(|e| CmdError::structural(format!("{}: {e}", derivation.display())))?;
    let chain = parse_derivation(&text).map_err(internal)?;
    let (_, diagram) = load_diagram(env_path)
        .map_err(|e| CmdError::structural(format!("{}: {e}", env_path.display())))?;
    let env = environment_for(&diagram);
    let report = check_derivation(&chain, &env).map_err(internal)?;
    let verdict = report.verdict();
    let mut machine = String::new();
    machine.push_str(&format!("steps = {}\n", report.steps.len()));
    machine.push_str(&format!("verdict = {verdict}\n"));
    if let Some(idx) = report.first_failure() {
        machine.push_str(&format!("first_failure = {idx}\n"));
        if let Some((r, c)) = report
            .steps
            .iter()
            .find(|s| s.index == idx)
            .and_then(|s| s.first_diff)
        {
            machine.push_str(&format!("first_diff = [{r}, {c}]\n"));
        }
    }
    if !quiet {
        for step in &report.steps {
            let mark = if step.equal { "ok" } else { "FAIL" };
            let just = step
                .justification
                .as_deref()
                .map(|j| format!("  # {j}"))
                .unwrap_or_default();
            println!("step {}: {mark}{just}", step.index);
        }
        println!(
            "derivation {}: {}",
            derivation.display(),
            if verdict { "all steps equal" } else { "FAILED" }
        );
    }
    print_machine(quiet, &machine);
    Ok(if verdict { 0 } else { 1 })
}

fn cmd_emit_dot(path: &Path, report: Option<&Path>) -> Result<u8, CmdError> {
    let (_, diagram) = load_diagram(path)
        .map_err(|e| CmdError::structural(format!("{}: {e}", path.display())))?;
    let mut highlight = BTreeSet::new();
    if let Some(report_path) = report {
        let text = std::fs::read_to_string(report_path)
            .map_err(|e| CmdError::structural(format!("{}: {e}", report_path.display())))?;
        let check = parse_check(&text).map_err(internal)?;
        if !check.holds {
            highlight.extend(check.highlight);
        }
    }
    print!("{}", diagram_to_dot(&diagram, &highlight));
    Ok(0)
}
