//! `qhflag`: quantum cohomology tables, inequality systems for products of
//! conjugacy classes, and a unitary oracle to cross-check them.

use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use qhflag::campaign::{crosscheck, CrosscheckConfig, GridSpec};
use qhflag::exec::Execution;
use qhflag::gw_ineq::{enumerate_inequalities, EngineKind, Engine, EnumerateOptions, PRODUCT_BUDGET};
use qhflag::oracle::{decide, OracleConfig, Verdict};
use qhflag::polytope::{
    inequalities_from_json, inequalities_to_csv, membership, prune_redundant, AlcovePoint,
    Inequality,
};
use qhflag::qh::{DivisorPoly, QhEngine};
use qhflag::rational::{parse_q, parse_q_vectors, to_f64, Q};
use qhflag::ring::{ProductTable, QClass};
use qhflag::rootsys::{CartanType, Family, RootSystem};
use qhflag::weyl::{format_word, Cosets};
use qhflag::Error;

/// Writes to stdout, exiting quietly when the reader has gone away.
fn write_stdout(s: &str) {
    use std::io::Write;
    if let Err(e) = io::stdout().lock().write_all(s.as_bytes()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

macro_rules! out {
    ($($t:tt)*) => { write_stdout(&format!($($t)*)) };
}

macro_rules! outln {
    () => { write_stdout("\n") };
    ($($t:tt)*) => { write_stdout(&(format!($($t)*) + "\n")) };
}

#[derive(Parser, Debug)]
#[command(name = "qhflag", version, about = "Quantum cohomology of G/P and the polytope of conjugacy classes multiplying to the identity")]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the numeric oracle
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (1 runs sequentially)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap on products per node when enumerating inequalities
    #[arg(long, global = true, default_value_t = PRODUCT_BUDGET)]
    budget: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Positive roots, coroots and the coroot/fundamental-weight pairings
    Roots { group: String },
    /// Minimal coset representatives for a maximal parabolic
    Cosets {
        group: String,
        #[arg(long)]
        node: usize,
    },
    /// Small quantum cohomology of G/P
    Qh {
        what: QhWhat,
        group: String,
        #[arg(long)]
        node: usize,
    },
    /// Inequalities for b conjugacy classes whose product contains the identity
    Inequalities {
        group: String,
        #[arg(long)]
        points: usize,
        /// Keep one tuple per orbit under permuting the points
        #[arg(long)]
        dedup: bool,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Remove inequalities implied by the others (JSON in, JSON out)
    Prune {
        /// Inequality file; standard input when absent
        #[arg(long)]
        input: Option<String>,
    },
    /// Exact membership of a marking tuple
    Check {
        group: String,
        #[arg(long)]
        points: usize,
        /// Alcove coordinates, e.g. "1/2;1/2;1/2" or "1/3,0;0,1/3;1/3,1/3"
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        /// Inequality file to test against instead of the full system
        #[arg(long)]
        system: Option<String>,
    },
    /// Numeric search for unitaries in the given classes with product I
    Oracle {
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Write the witness unitaries to this file
        #[arg(long)]
        witness: Option<String>,
    },
    /// Compare the inequality system with the oracle on a rational grid
    Crosscheck {
        group: String,
        #[arg(long)]
        points: usize,
        /// Grid points per axis
        #[arg(long, default_value_t = 6)]
        density: usize,
        /// Keep only points strictly inside the alcove
        #[arg(long)]
        interior: bool,
        /// Boundary margin, a rational
        #[arg(long, default_value = "1/40")]
        margin: String,
        #[command(flatten)]
        oracle: OracleArgs,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum QhWhat {
    Table,
    Presentation,
    Giambelli,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    iterations: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

impl OracleArgs {
    fn config(&self, seed: u64) -> OracleConfig {
        OracleConfig {
            restarts: self.restarts,
            max_iterations: self.iterations,
            tolerance: self.tol,
            seed,
        }
    }
}

/// Exit status: 0 success, 1 negative verdict, 2 bad input, 3 internal.
enum Failure {
    Negative,
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::Infeasible | Error::Unbounded => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure::Negative)) => ExitCode::from(1),
        Ok(Err(Failure::Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(Err(Failure::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
        Err(_) => ExitCode::from(3),
    }
}

fn run(cli: &Cli) -> Outcome {
    let execution = configure_threads(cli.threads)?;
    match &cli.command {
        Command::Roots { group } => roots(cli, &root_system(group)?),
        Command::Cosets { group, node } => cosets(cli, &root_system(group)?, *node),
        Command::Qh { what, group, node } => qh(cli, *what, &root_system(group)?, *node),
        Command::Inequalities {
            group,
            points,
            dedup,
            csv,
        } => {
            let rs = root_system(group)?;
            let opts = EnumerateOptions {
                dedup: *dedup,
                execution,
                budget: cli.budget,
                ..Default::default()
            };
            let system = enumerate_inequalities(&rs, *points, &opts)?;
            if *csv {
                out!("{}", inequalities_to_csv(&system));
            } else if cli.json {
                emit_json(&records(&system));
            } else {
                print_system(&system);
            }
            Ok(())
        }
        Command::Prune { input } => prune(cli, input.as_deref()),
        Command::Check {
            group,
            points,
            mu,
            system,
        } => check(cli, execution, &root_system(group)?, *points, mu, system.as_deref()),
        Command::Oracle {
            group,
            mu,
            oracle,
            witness,
        } => run_oracle(cli, group, mu, oracle, witness.as_deref()),
        Command::Crosscheck {
            group,
            points,
            density,
            interior,
            margin,
            oracle,
        } => {
            let rs = root_system(group)?;
            let opts = EnumerateOptions {
                execution,
                budget: cli.budget,
                ..Default::default()
            };
            let system = enumerate_inequalities(&rs, *points, &opts)?;
            let cfg = CrosscheckConfig {
                points: *points,
                grid: GridSpec {
                    density: *density,
                    interior: *interior,
                },
                margin: to_f64(&parse_q(margin)?),
                oracle: oracle.config(cli.seed),
                execution,
            };
            cfg.oracle.validate()?;
            let report = crosscheck(&rs, &system, &cfg)?;
            if cli.json {
                emit_json(&report);
            } else {
                out!("{}", report.render_text());
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Negative)
            }
        }
    }
}

fn configure_threads(threads: Option<usize>) -> Result<Execution, Failure> {
    match threads {
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(1) => Ok(Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Internal(e.to_string()))?;
            Ok(Execution::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Execution::Sequential),
        None => Ok(Execution::default()),
    }
}

fn root_system(group: &str) -> Result<RootSystem, Failure> {
    let t: CartanType = group.parse()?;
    Ok(RootSystem::new(t)?)
}

fn emit_json<T: Serialize + ?Sized>(value: &T) {
    outln!(
        "{}",
        serde_json::to_string_pretty(value).expect("JSON output serializes")
    );
}

fn q_string(x: &Q) -> String {
    x.to_string()
}

fn roots(cli: &Cli, rs: &RootSystem) -> Outcome {
    let n = rs.rank();
    if cli.json {
        emit_json(&json!({
            "group": rs.cartan_type.to_string(),
            "rank": n,
            "cartan": rs.cartan,
            "positive_roots": rs.positive_roots,
            "highest_root": rs.highest_root,
            "coroots": rs.coroots,
            "highest_root_marks": rs.highest_root_marks,
        }));
        return Ok(());
    }
    outln!("{} ({} positive roots)", rs.cartan_type, rs.positive_roots.len());
    let head: Vec<String> = (1..=n).map(|j| format!("h_β(ω_{j})")).collect();
    outln!("{:<4} {:<24} {:<24} {}", "", "β", "h_β", head.join("  "));
    for (k, (root, coroot)) in rs.positive_roots.iter().zip(&rs.coroots).enumerate() {
        let as_q = |v: &[i64]| v.iter().map(|&c| Q::from_integer(c.into())).collect::<Vec<_>>();
        let pairs: Vec<String> = coroot.iter().map(|c| format!("{c:>8}")).collect();
        outln!(
            "β_{:<2} {:<24} {:<24} {}",
            k + 1,
            RootSystem::format_root_coords(&as_q(root), "α"),
            RootSystem::format_root_coords(&as_q(coroot), "h"),
            pairs.join("  ")
        );
    }
    outln!("highest root: β_{}", rs.highest_root + 1);
    Ok(())
}

fn cosets(cli: &Cli, rs: &RootSystem, node: usize) -> Outcome {
    let cs = Cosets::new(rs, node)?;
    if cli.json {
        let reps: Vec<Value> = cs
            .reps
            .iter()
            .map(|r| {
                json!({
                    "index": r.index,
                    "word": format_word(&r.element.word),
                    "length": r.length,
                    "weight": r.weight,
                })
            })
            .collect();
        emit_json(&json!({
            "group": rs.cartan_type.to_string(),
            "node": node,
            "dim": cs.dim,
            "reps": reps,
        }));
        return Ok(());
    }
    outln!("{} / P_{node}: {} cosets, dim {}", rs.cartan_type, cs.len(), cs.dim);
    for r in &cs.reps {
        outln!(
            "{:>3}  l={:<3} {:<24} wω = {:?}",
            r.index,
            r.length,
            format_word(&r.element.word),
            r.weight
        );
    }
    Ok(())
}

fn class_json(x: &QClass) -> Value {
    Value::Array(
        x.terms()
            .map(|(u, d, c)| json!([u, d, q_string(c)]))
            .collect(),
    )
}

fn poly_json(p: &DivisorPoly) -> Value {
    Value::Array(
        p.terms
            .iter()
            .map(|(&(j, m), c)| json!([j, m, q_string(c)]))
            .collect(),
    )
}

fn table_json(rs: &RootSystem, node: usize, kind: EngineKind, t: &ProductTable) -> Value {
    json!({
        "group": rs.cartan_type.to_string(),
        "node": node,
        "engine": match kind { EngineKind::Divisor => "divisor", EngineKind::Grassmann => "grassmann" },
        "c1": t.c1,
        "dim": t.dim,
        "labels": t.labels,
        "codegrees": t.lengths,
        "table": t.table.iter().map(|row| row.iter().map(class_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn qh(cli: &Cli, what: QhWhat, rs: &RootSystem, node: usize) -> Outcome {
    if let QhWhat::Table = what {
        let e = Engine::for_node(rs, node)?;
        if cli.json {
            emit_json(&table_json(rs, node, e.kind, &e.table));
        } else {
            let title = format!("{}/P_{node}", rs.cartan_type);
            out!("{}", e.table.render_text(&title));
            outln!("c1 = {}, dim = {}", e.c1(), e.dim());
        }
        return Ok(());
    }
    let e = QhEngine::new(rs, node)?;
    match what {
        QhWhat::Presentation => {
            let p = e.presentation();
            if cli.json {
                emit_json(&json!({
                    "group": rs.cartan_type.to_string(),
                    "node": node,
                    "degree": p.degree,
                    "rhs": poly_json(&p.rhs),
                    "relation": p.to_string(),
                    "squarefree_at_q_one": p.is_squarefree_at_q_one(),
                }));
            } else {
                outln!("{p}");
            }
        }
        QhWhat::Giambelli => {
            if cli.json {
                let polys: Vec<Value> = e
                    .giambelli
                    .iter()
                    .enumerate()
                    .map(|(u, g)| json!({"class": u, "poly": poly_json(g), "text": g.to_string()}))
                    .collect();
                emit_json(&polys);
            } else {
                for (u, g) in e.giambelli.iter().enumerate() {
                    outln!("y_{u} = {g}");
                }
            }
        }
        QhWhat::Table => unreachable!(),
    }
    Ok(())
}

fn records(system: &[Inequality]) -> Vec<qhflag::polytope::InequalityRecord> {
    system.iter().map(|i| i.to_record()).collect()
}

fn print_system(system: &[Inequality]) {
    for i in system {
        let words: Vec<String> = i.tuple.iter().map(|w| format_word(w)).collect();
        outln!("P_{} d={} ({})  {}", i.node, i.d, words.join(", "), i.pretty());
    }
    let classical = system.iter().filter(|i| i.d == 0).count();
    outln!(
        "{} inequalities: {} classical, {} quantum",
        system.len(),
        classical,
        system.len() - classical
    );
}

fn read_input(path: Option<&str>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{p}: {e}"))),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(s)
        }
    }
}

fn group_of(system: &[Inequality]) -> Result<Option<RootSystem>, Failure> {
    let Some(first) = system.first() else {
        return Ok(None);
    };
    if system.iter().any(|i| i.group != first.group) {
        return Err(Failure::Usage("inequalities from different groups".into()));
    }
    Ok(Some(RootSystem::new(first.group)?))
}

fn prune(cli: &Cli, input: Option<&str>) -> Outcome {
    let system = inequalities_from_json(&read_input(input)?)?;
    let pruned = match group_of(&system)? {
        Some(rs) => prune_redundant(&rs, &system)?,
        None => Default::default(),
    };
    if cli.json {
        let removed: Vec<Value> = pruned
            .removed
            .iter()
            .map(|r| {
                json!({
                    "inequality": r.inequality.to_record(),
                    "certificate": q_string(&r.certificate),
                })
            })
            .collect();
        emit_json(&json!({"kept": records(&pruned.kept), "removed": removed}));
    } else {
        outln!("kept {}:", pruned.kept.len());
        for i in &pruned.kept {
            outln!("  {}", i.pretty());
        }
        outln!("removed {}:", pruned.removed.len());
        for r in &pruned.removed {
            outln!("  {}   (max slack {})", r.inequality.pretty(), r.certificate);
        }
    }
    Ok(())
}

fn parse_marks(mu: &str, rank: usize, points: Option<usize>) -> Result<Vec<Vec<Q>>, Failure> {
    let marks = parse_q_vectors(mu)?;
    if let Some(b) = points {
        if marks.len() != b {
            return Err(Failure::Usage(format!(
                "--mu has {} vectors but --points is {b}",
                marks.len()
            )));
        }
    }
    if let Some(bad) = marks.iter().find(|m| m.len() != rank) {
        return Err(Failure::Usage(format!(
            "each --mu vector needs {rank} coordinates, got {}",
            bad.len()
        )));
    }
    Ok(marks)
}

fn check(
    cli: &Cli,
    execution: Execution,
    rs: &RootSystem,
    points: usize,
    mu: &str,
    system_path: Option<&str>,
) -> Outcome {
    let marks = parse_marks(mu, rs.rank(), Some(points))?;
    let system = match system_path {
        Some(p) => inequalities_from_json(&read_input(Some(p))?)?,
        None => {
            let opts = EnumerateOptions {
                execution,
                budget: cli.budget,
                ..Default::default()
            };
            enumerate_inequalities(rs, points, &opts)?
        }
    };
    let pts: Vec<AlcovePoint> = marks.into_iter().map(AlcovePoint).collect();
    let verdict = membership(rs, &pts, &system)?;
    let violated: Vec<&Inequality> = verdict.violated.iter().map(|&k| &system[k]).collect();
    if cli.json {
        let v: Vec<_> = violated.iter().map(|i| i.to_record()).collect();
        emit_json(&json!({"member": verdict.member, "violated": v}));
    } else if verdict.member {
        outln!("member ({} inequalities hold)", system.len());
    } else {
        outln!("non-member: {} violated", violated.len());
        for i in violated {
            outln!("  {}", i.pretty());
        }
    }
    if verdict.member {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn run_oracle(
    cli: &Cli,
    group: &str,
    mu: &str,
    args: &OracleArgs,
    witness: Option<&str>,
) -> Outcome {
    let t: CartanType = group.parse()?;
    if t.family != Family::A {
        return Err(Failure::Usage(format!("the oracle needs SU(n), got {t}")));
    }
    let n = t.rank + 1;
    let marks = parse_marks(mu, t.rank, None)?;
    let rs = RootSystem::new(t)?;
    for (i, m) in marks.iter().enumerate() {
        AlcovePoint(m.clone()).validate(&rs, i + 1)?;
    }
    let floats: Vec<Vec<f64>> = marks.iter().map(|m| m.iter().map(to_f64).collect()).collect();
    let cfg = args.config(cli.seed);
    let d = decide(n, &floats, &cfg)?;
    let unitaries: Vec<Vec<Vec<[f64; 2]>>> = d
        .witness
        .iter()
        .map(|u| {
            (0..n)
                .map(|r| (0..n).map(|c| [u[(r, c)].re, u[(r, c)].im]).collect())
                .collect()
        })
        .collect();
    let verdict = match d.verdict {
        Verdict::Member => "member",
        Verdict::Unresolved => "unresolved",
    };
    let mu_strings: Vec<Vec<String>> = marks
        .iter()
        .map(|m| m.iter().map(q_string).collect())
        .collect();
    if let Some(path) = witness {
        let body = json!({
            "group": format!("SU({n})"),
            "mu": mu_strings,
            "residual": d.residual,
            "unitaries": unitaries,
        });
        fs::write(path, serde_json::to_string_pretty(&body).expect("serializes"))
            .map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    }
    if cli.json {
        emit_json(&json!({
            "group": format!("SU({n})"),
            "mu": mu_strings,
            "verdict": verdict,
            "residual": d.residual,
            "restarts": d.restarts_run,
            "iterations": d.iterations,
            "unitaries": unitaries,
        }));
    } else {
        outln!(
            "{verdict}: residual {:.3e} after {} restart(s), {} iterations",
            d.residual, d.restarts_run, d.iterations
        );
        for (i, u) in unitaries.iter().enumerate() {
            outln!("U_{}:", i + 1);
            for row in u {
                let cells: Vec<String> = row
                    .iter()
                    .map(|[re, im]| format!("{re:+.6}{im:+.6}i"))
                    .collect();
                outln!("  {}", cells.join("  "));
            }
        }
    }
    match d.verdict {
        Verdict::Member => Ok(()),
        Verdict::Unresolved => Err(Failure::Negative),
    }
}
