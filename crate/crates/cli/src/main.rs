use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hybridgraph::fixtures::{run_fixtures, FixtureOptions, FIXTURE_TAGS};
use hybridgraph::formats::{
    self, inequality_digest, read_scenario, sha256_hex, AnalysisReport, Envelope, InequalityFile, StrategyFile,
};
use hybridgraph::graph::to_dot;
use hybridgraph::invariants::{alpha, alpha_hat, alpha_star, compute_bounds};
use hybridgraph::polytope::{hstab_vertices, qstab_vertices, stab_vertices};
use hybridgraph::quantum::{check_no_signaling, evaluate_inequality, party_partition, strategy_to_behavior};
use hybridgraph::rational;
use hybridgraph::search::{scan_for_genuine, SearchConfig};
use hybridgraph::{Error, HybridScenario, WeightedInequality};

const EXIT_FIXTURE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_SOLVER: u8 = 4;

#[derive(Parser)]
#[command(name = "hybridgraph", version, about = "Exclusivity-graph bounds for hybrid causal scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute alpha, alpha_hat, theta and alpha_star of an inequality.
    Analyze {
        inequality: PathBuf,
        /// Scenario file; defaults to the one named inside the inequality.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Also write the exclusivity graph as Graphviz source.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        /// Include per-stage wall-clock times (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Evaluate a qubit strategy on an inequality.
    Quantum {
        inequality: PathBuf,
        strategy: PathBuf,
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Run the built-in reference checks.
    VerifyPaper {
        /// Only run checks with this tag.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(FIXTURE_TAGS))]
        only: Option<String>,
        /// Replace every H1 weight (to see a check fail).
        #[arg(long, value_name = "RATIONAL")]
        h1_weight: Option<String>,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Randomized scan for inequalities with alpha < alpha_hat.
    Search {
        scenario: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        max_size: usize,
        /// Wall-clock budget; the run is marked partial if it is hit.
        #[arg(long, default_value_t = 600)]
        budget_secs: u64,
        /// Comma-separated positive rational weights.
        #[arg(long, default_value = "1,2")]
        palette: String,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Dump the vertices of STAB, QSTAB or HSTAB of an inequality's graph.
    Vertices {
        kind: PolytopeKind,
        inequality: PathBuf,
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Print the tagged exclusivity graph as Graphviz source.
    Graph {
        inequality: PathBuf,
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PolytopeKind {
    Stab,
    Qstab,
    Hstab,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::NonConvergence { .. }
            | Error::IterationLimit(_)
            | Error::Undecided(_)
            | Error::Infeasible
            | Error::Unbounded
            | Error::UnboundedPolytope => EXIT_SOLVER,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze {
            inequality,
            scenario,
            dot,
            timings,
        } => analyze(&inequality, scenario.as_deref(), dot.as_deref(), timings),
        Command::Quantum {
            inequality,
            strategy,
            scenario,
        } => quantum(&inequality, &strategy, scenario.as_deref()),
        Command::VerifyPaper {
            only,
            h1_weight,
            restarts,
            seed,
        } => verify(only, h1_weight, restarts, seed),
        Command::Search {
            scenario,
            seed,
            max_size,
            budget_secs,
            palette,
            samples,
        } => search(&scenario, seed, max_size, budget_secs, &palette, samples),
        Command::Vertices {
            kind,
            inequality,
            scenario,
        } => vertices(kind, &inequality, scenario.as_deref()),
        Command::Graph { inequality, scenario } => graph(&inequality, scenario.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Reads an inequality and the scenario it refers to (or `explicit`).
fn load(path: &Path, explicit: Option<&Path>) -> Result<(HybridScenario, WeightedInequality, String), Failure> {
    let file = InequalityFile::read(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let scenario_path = match (explicit, &file.scenario) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(rel)) => path.parent().unwrap_or(Path::new(".")).join(rel),
        (None, None) => return Err(input_error(format!("{}: no scenario given", path.display()))),
    };
    let scenario =
        read_scenario(&scenario_path).map_err(|e| input_error(format!("{}: {e}", scenario_path.display())))?;
    let ineq = file.build(&scenario).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let digest = inequality_digest(&ineq);
    Ok((scenario, ineq, digest))
}

fn ms(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

fn analyze(path: &Path, scenario: Option<&Path>, dot: Option<&Path>, timings: bool) -> CmdResult {
    let t0 = Instant::now();
    let (_, ineq, digest) = load(path, scenario)?;
    let parsed = t0.elapsed();
    if let Some(dot_path) = dot {
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("inequality");
        std::fs::write(dot_path, to_dot(ineq.graph(), name)).map_err(|e| input_error(e.to_string()))?;
    }
    let t1 = Instant::now();
    let bounds = match compute_bounds(&ineq) {
        Ok(b) => b,
        Err(Error::NonConvergence { best }) => {
            // Exact bounds still go out so the run is not wasted.
            let (g, w) = (ineq.graph(), ineq.weights());
            let exact = |r: hybridgraph::Result<rational::Rational>| r.map(|v| Value::String(v.to_string())).unwrap_or(Value::Null);
            let report = json!({
                "events": formats::event_labels(&ineq),
                "alpha": exact(alpha(g, w).map(|a| a.value)),
                "alpha_hat": exact(alpha_hat(g, w).map(|a| a.value)),
                "alpha_star": exact(alpha_star(g, w)),
                "theta": *best,
                "classification": Value::Null,
                "partial": true,
            });
            println!("{}", Envelope::new("analyze", digest, report).to_json());
            eprintln!("error: theta solver did not converge (gap {:.3e})", best.gap);
            return Ok(EXIT_SOLVER);
        }
        Err(e) => return Err(e.into()),
    };
    let solved = t1.elapsed();
    let report = AnalysisReport::new(&ineq, bounds).map_err(|e| Failure {
        code: EXIT_SOLVER,
        message: e.to_string(),
    })?;
    let mut env = Envelope::new("analyze", digest, report);
    if timings {
        let mut t = BTreeMap::new();
        t.insert("parse".to_string(), ms(parsed));
        t.insert("bounds".to_string(), ms(solved));
        t.insert("total".to_string(), ms(t0.elapsed()));
        env.timings_ms = Some(t);
    }
    println!("{}", env.to_json());
    Ok(0)
}

fn quantum(path: &Path, strategy_path: &Path, scenario: Option<&Path>) -> CmdResult {
    let (scenario, ineq, digest) = load(path, scenario)?;
    let strategy =
        StrategyFile::read(strategy_path).map_err(|e| input_error(format!("{}: {e}", strategy_path.display())))?;
    let (state, m) = strategy.resolve(&ineq, &scenario)?;
    let behavior = strategy_to_behavior(&scenario, &state, &m)?;
    let value = evaluate_inequality(&behavior, &ineq)?;
    let report = json!({
        "value": value,
        "no_signaling": check_no_signaling(&behavior, &party_partition(&scenario)),
        "normalization_residual": behavior.normalization_residual(),
        "state_norm_residual": state.norm_residual(),
        "state": state.amplitudes().iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
    });
    let digest = sha256_hex(&[&digest, &strategy.canonical()]);
    println!("{}", Envelope::new("quantum", digest, report).to_json());
    Ok(0)
}

fn verify(only: Option<String>, h1_weight: Option<String>, restarts: usize, seed: u64) -> CmdResult {
    let h1_weight = h1_weight
        .map(|w| rational::parse(&w).map_err(|_| input_error(format!("bad --h1-weight {w:?}"))))
        .transpose()?;
    let opts = FixtureOptions {
        only: only.clone(),
        h1_weight: h1_weight.clone(),
        optimizer_restarts: restarts,
        seed,
    };
    let checks = run_fixtures(&opts)?;
    let digest = sha256_hex(&[
        only.as_deref().unwrap_or("all"),
        &h1_weight.map(|w| w.to_string()).unwrap_or_default(),
        &restarts.to_string(),
        &seed.to_string(),
    ]);
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        eprintln!(
            "{:<width$}  {}  expected {}  computed {}  tolerance {}",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.expected,
            c.computed,
            c.tolerance
        );
        println!("{}", Envelope::new("verify-paper", digest.clone(), c).to_json());
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let summary = json!({ "checks": checks.len(), "passed": checks.len() - failed, "failed": failed });
    println!("{}", Envelope::new("verify-paper", digest, summary).to_json());
    Ok(if failed == 0 { 0 } else { EXIT_FIXTURE })
}

fn search(path: &Path, seed: u64, max_size: usize, budget_secs: u64, palette: &str, samples: usize) -> CmdResult {
    let scenario = read_scenario(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let palette = palette
        .split(',')
        .map(|w| rational::parse(w).map_err(|_| input_error(format!("bad palette weight {w:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut config = SearchConfig::new(scenario.clone(), max_size, palette.clone(), seed)?;
    config.samples = samples;
    config.time_budget = Some(Duration::from_secs(budget_secs));
    let palette_text: Vec<String> = palette.iter().map(|w| w.to_string()).collect();
    let digest = sha256_hex(&[
        &formats::canonical_scenario(&scenario),
        &seed.to_string(),
        &max_size.to_string(),
        &palette_text.join(","),
        &samples.to_string(),
    ]);
    let result = scan_for_genuine(&config)?;
    for c in &result.candidates {
        let analysis = AnalysisReport::new(&c.inequality, c.report.clone())?;
        let record = json!({ "record": "candidate", "hash": c.hash, "sample": c.sample, "inequality": analysis });
        println!("{}", Envelope::new("search", digest.clone(), record).to_json());
    }
    let summary = json!({
        "record": "summary",
        "candidates": result.candidates.len(),
        "samples_drawn": result.samples_drawn,
        "evaluated": result.evaluated,
        "solver_failures": result.solver_failures,
        "failures": result.failures,
        "partial": result.partial,
    });
    println!("{}", Envelope::new("search", digest, summary).to_json());
    if result.candidates.is_empty() {
        eprintln!("no candidate with alpha < alpha_hat among {} samples", result.samples_drawn);
    }
    Ok(0)
}

fn vertices(kind: PolytopeKind, path: &Path, scenario: Option<&Path>) -> CmdResult {
    let (_, ineq, digest) = load(path, scenario)?;
    let g = ineq.graph();
    let (name, p) = match kind {
        PolytopeKind::Stab => ("STAB", stab_vertices(g)?),
        PolytopeKind::Qstab => ("QSTAB", qstab_vertices(g)?),
        PolytopeKind::Hstab => ("HSTAB", hstab_vertices(g)?),
    };
    let verts: Vec<Vec<String>> = p.vertices().iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
    let report = json!({
        "polytope": name,
        "events": formats::event_labels(&ineq),
        "count": verts.len(),
        "vertices": verts,
    });
    println!("{}", Envelope::new("vertices", digest, report).to_json());
    Ok(0)
}

fn graph(path: &Path, scenario: Option<&Path>) -> CmdResult {
    let (_, ineq, _) = load(path, scenario)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("inequality");
    print!("{}", to_dot(ineq.graph(), name));
    Ok(0)
}
