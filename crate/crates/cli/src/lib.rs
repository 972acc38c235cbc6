//! Command-line front end for `coded-switch`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or validation error, 3 an
//! exact solve ran out of budget (results are still written, flagged).

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use coded_switch::bounds::{bound_report, hall_full_throughput_upper_bound};
use coded_switch::ensemble::{
    compare_mds_replication, compare_schemes, default_loads, hall_sweep, run_ensemble, Comparison, EnsembleConfig,
    EnsembleStats,
};
use coded_switch::io::{parse_plan, InstanceDocument, PlanDocument};
use coded_switch::reduction::{lsp_to_nkmtp, LspInstance};
use coded_switch::solvers::{solve, ExactLimits, SolverChoice};
use coded_switch::{Exact, SwitchInstance};
use serde::Serialize;
use thiserror::Error;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 2016;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "CODED_SWITCH_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Io { .. } => 2,
        }
    }
}

impl From<coded_switch::Error> for CliError {
    fn from(e: coded_switch::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "coded-switch", version, about = "Read scheduling for MDS-coded switch memories")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write machine output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Output format; tables default to csv, documents to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an instance, and optionally a read plan against it.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Compute a maximal read plan.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
        solver: SolverArg,
        #[arg(long)]
        node_budget: Option<u64>,
        /// Where to write solver statistics (default: stderr).
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Randomized lower bound and trivial upper bound for an instance.
    Bound {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Probability that L random packets pass the Hall condition as a whole.
    Hallbound {
        #[arg(long = "L")]
        l: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        n_units: usize,
    },
    /// Reduce an l-set-packing instance to nkMTP.
    Reduce {
        #[arg(long)]
        lsp: PathBuf,
        #[arg(long = "M")]
        m: usize,
    },
    /// Run an ensemble described by a config file.
    Ensemble {
        #[arg(long)]
        config: PathBuf,
    },
    /// [4,2] MDS against two-way replication, paired placements.
    Fig2(FigArgs),
    /// Full-throughput fraction against the Hall bound, k = 2, n = 2..4.
    Fig4(FigArgs),
    /// Unrestricted, consecutive and block placement, k = 3, n = 4.
    Fig5(FigArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FigArgs {
    #[arg(long = "N", default_value_t = 16)]
    pub n_units: usize,
    /// Instances per load (default 1000, 10000 for fig4).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Comma-separated loads (default 1..=floor(N/k)+2).
    #[arg(long, value_delimiter = ',')]
    pub loads: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Auto,
    Exact,
    Matching,
    Greedy,
}

impl From<SolverArg> for SolverChoice {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Auto => SolverChoice::Auto,
            SolverArg::Exact => SolverChoice::Exact,
            SolverArg::Matching => SolverChoice::Matching,
            SolverArg::Greedy => SolverChoice::Greedy,
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Reads and validates an instance file.
pub fn parse_instance_file(path: &Path) -> Result<SwitchInstance, CliError> {
    let bytes = read(path)?;
    coded_switch::io::parse_instance(&bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

/// What a subcommand produced.
struct Output {
    body: String,
    /// Extra lines for the diagnostic stream.
    diagnostics: Vec<String>,
    code: i32,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, diagnostics: Vec::new(), code: 0 }
    }
}

fn document_format(format: Option<Format>) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(CliError::Usage("this subcommand only writes json".into())),
        _ => Ok(()),
    }
}

fn table(stats: &EnsembleStats, comparison: Option<&Comparison>, format: Option<Format>) -> String {
    match format.unwrap_or(Format::Csv) {
        Format::Csv => stats.to_csv(),
        Format::Json => match comparison {
            Some(c) => json(c),
            None => json(stats),
        },
    }
}

fn flagged_code(stats: &EnsembleStats) -> i32 {
    if stats.any_flagged() {
        3
    } else {
        0
    }
}

#[derive(Serialize)]
struct ValidateReport {
    valid: bool,
    violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    plan_valid: Option<bool>,
}

#[derive(Serialize)]
struct SolveStats {
    solver_tag: String,
    nodes_explored: u64,
    budget_exceeded: bool,
}

#[derive(Serialize)]
struct HallBound {
    #[serde(rename = "L")]
    l: usize,
    k: usize,
    n: usize,
    #[serde(rename = "N")]
    n_units: usize,
    probability: f64,
    exact: String,
}

#[derive(Serialize)]
struct MappingEntry {
    element: u64,
    a_unit: usize,
    b_unit: usize,
}

#[derive(Serialize)]
struct ReduceOutput {
    instance: InstanceDocument,
    mapping: Vec<MappingEntry>,
    theta: usize,
    target: usize,
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Validate { instance, plan } => {
            document_format(cli.format)?;
            let bytes = read(instance)?;
            let doc: InstanceDocument =
                serde_json::from_slice(&bytes).map_err(|e| CliError::Data(format!("{}: {e}", instance.display())))?;
            let inst = SwitchInstance::from(doc);
            let report = inst.validate();
            let plan_valid = match plan {
                Some(p) => Some(parse_plan(&read(p)?)?.is_valid_for(&inst)),
                None => None,
            };
            let valid = report.is_ok() && plan_valid.unwrap_or(true);
            let body = json(&ValidateReport {
                valid: report.is_ok(),
                violations: report.violations.iter().map(ToString::to_string).collect(),
                plan_valid,
            });
            Ok(Output { body, diagnostics: Vec::new(), code: if valid { 0 } else { 2 } })
        }
        Command::Solve { instance, solver, node_budget, stats } => {
            document_format(cli.format)?;
            let inst = parse_instance_file(instance)?;
            let limits = ExactLimits { node_budget: *node_budget, time_budget: None };
            let result = solve(&inst, (*solver).into(), &limits)?;
            let doc = PlanDocument::from_plan(&inst, &result.plan)?;
            let stats_line = serde_json::to_string(&SolveStats {
                solver_tag: result.solver_tag.to_string(),
                nodes_explored: result.nodes_explored,
                budget_exceeded: result.budget_exceeded,
            })
            .expect("stats serialize");
            let mut diagnostics = Vec::new();
            match stats {
                Some(path) => fs::write(path, format!("{stats_line}\n"))
                    .map_err(|source| CliError::Io { path: path.clone(), source })?,
                None => diagnostics.push(stats_line),
            }
            if result.budget_exceeded {
                diagnostics.push("node budget exhausted; plan is not certified optimal".into());
            }
            Ok(Output { body: json(&doc), diagnostics, code: if result.budget_exceeded { 3 } else { 0 } })
        }
        Command::Bound { instance, samples } => {
            document_format(cli.format)?;
            let inst = parse_instance_file(instance)?;
            Ok(Output::ok(json(&bound_report(&inst, *samples, cli.seed)?)))
        }
        Command::Hallbound { l, k, n, n_units } => {
            document_format(cli.format)?;
            let exact = hall_full_throughput_upper_bound::<Exact>(*l, *k, *n, *n_units)?;
            let probability = hall_full_throughput_upper_bound::<f64>(*l, *k, *n, *n_units)?;
            Ok(Output::ok(json(&HallBound {
                l: *l,
                k: *k,
                n: *n,
                n_units: *n_units,
                probability,
                exact: exact.to_string(),
            })))
        }
        Command::Reduce { lsp, m } => {
            document_format(cli.format)?;
            let bytes = read(lsp)?;
            let lsp: LspInstance =
                serde_json::from_slice(&bytes).map_err(|e| CliError::Data(format!("{}: {e}", lsp.display())))?;
            let reduced = lsp_to_nkmtp(&lsp, *m)?;
            let map = &reduced.mapping;
            let mapping = map
                .labels
                .iter()
                .enumerate()
                .map(|(j, &element)| MappingEntry { element, a_unit: j + 1, b_unit: j + 1 + map.distinct() })
                .collect();
            Ok(Output::ok(json(&ReduceOutput {
                instance: InstanceDocument::from(&reduced.nkmtp),
                mapping,
                theta: map.theta(),
                target: reduced.target,
            })))
        }
        Command::Ensemble { config } => {
            let bytes = read(config)?;
            let config: EnsembleConfig =
                serde_json::from_slice(&bytes).map_err(|e| CliError::Data(format!("{}: {e}", config.display())))?;
            let stats = run_ensemble(&config)?;
            Ok(Output { body: table(&stats, None, cli.format), diagnostics: Vec::new(), code: flagged_code(&stats) })
        }
        Command::Fig2(args) => {
            let loads = args.loads.clone().unwrap_or_else(|| default_loads(args.n_units, 2));
            let cmp = compare_mds_replication(args.n_units, &loads, args.samples.unwrap_or(1000), cli.seed)?;
            Ok(Output {
                body: table(&cmp.stats, Some(&cmp), cli.format),
                diagnostics: Vec::new(),
                code: flagged_code(&cmp.stats),
            })
        }
        Command::Fig4(args) => {
            let loads = args.loads.clone().unwrap_or_else(|| default_loads(args.n_units, 2));
            let stats = hall_sweep(args.n_units, 2, &[2, 3, 4], &loads, args.samples.unwrap_or(10_000), cli.seed)?;
            Ok(Output { body: table(&stats, None, cli.format), diagnostics: Vec::new(), code: flagged_code(&stats) })
        }
        Command::Fig5(args) => {
            let loads = args.loads.clone().unwrap_or_else(|| default_loads(args.n_units, 3));
            let cmp = compare_schemes(args.n_units, 3, 4, &loads, args.samples.unwrap_or(1000), cli.seed)?;
            Ok(Output {
                body: table(&cmp.stats, Some(&cmp), cli.format),
                diagnostics: Vec::new(),
                code: flagged_code(&cmp.stats),
            })
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a thread count, got '{value}'")))?;
        builder = builder.num_threads(threads);
    }
    builder.build().map_err(|e| CliError::Usage(e.to_string()))
}

/// Parses `argv`, runs the subcommand and returns the exit code. Machine
/// output goes to `out` (or `--output`), diagnostics to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let outcome = thread_pool().and_then(|pool| pool.install(|| execute(&cli)));
    match outcome {
        Ok(output) => {
            for line in &output.diagnostics {
                let _ = writeln!(err, "{line}");
            }
            let written = match &cli.output {
                Some(path) => {
                    fs::write(path, &output.body).map_err(|source| CliError::Io { path: path.clone(), source })
                }
                None => out
                    .write_all(output.body.as_bytes())
                    .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
            };
            match written {
                Ok(()) => output.code,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
