use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{hall_full_throughput_upper_bound, lower_bound_expected, sample_rng};
use crate::ensemble::generate::{as_replicated, check_parameters, random_instance, CodingKind};
use crate::error::{Error, Result};
use crate::instance::{SwitchInstance, WritePolicy};
use crate::solvers::{solve, ExactLimits, SolverChoice};

/// Node budget for exact solves inside sweeps.
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    MeanLstar,
    MeanThroughput,
    FullThroughputFraction,
    MeanLowerBound,
    HallUpperBound,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::MeanLstar,
        Metric::MeanThroughput,
        Metric::FullThroughputFraction,
        Metric::MeanLowerBound,
        Metric::HallUpperBound,
    ];
}

fn all_metrics() -> Vec<Metric> {
    Metric::ALL.to_vec()
}

fn default_budget() -> Option<u64> {
    Some(DEFAULT_NODE_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    #[serde(rename = "N")]
    pub n_units: usize,
    pub k: usize,
    pub n: usize,
    pub loads: Vec<usize>,
    pub instances_per_point: usize,
    #[serde(default = "default_policy")]
    pub write_policy: WritePolicy,
    #[serde(default)]
    pub coding: CodingKind,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub solver: SolverChoice,
    #[serde(default = "all_metrics")]
    pub metrics: Vec<Metric>,
    #[serde(default = "default_budget")]
    pub node_budget: Option<u64>,
    /// Label for the `scheme` column; defaults to the coding name.
    #[serde(default)]
    pub scheme: Option<String>,
}

fn default_policy() -> WritePolicy {
    WritePolicy::Unrestricted
}

impl EnsembleConfig {
    pub fn new(n_units: usize, k: usize, n: usize, loads: Vec<usize>, instances_per_point: usize) -> Self {
        EnsembleConfig {
            n_units,
            k,
            n,
            loads,
            instances_per_point,
            write_policy: WritePolicy::Unrestricted,
            coding: CodingKind::Mds,
            master_seed: 0,
            solver: SolverChoice::Auto,
            metrics: all_metrics(),
            node_budget: default_budget(),
            scheme: None,
        }
    }

    fn limits(&self) -> ExactLimits {
        ExactLimits { node_budget: self.node_budget, time_budget: None }
    }

    fn wants(&self, m: Metric) -> bool {
        self.metrics.contains(&m)
    }

    fn scheme_label(&self) -> String {
        self.scheme.clone().unwrap_or_else(|| match self.coding {
            CodingKind::Mds => "mds".into(),
            CodingKind::Replication => "replication".into(),
        })
    }
}

/// Default load axis `1..=floor(N/k) + 2`.
pub fn default_loads(n_units: usize, k: usize) -> Vec<usize> {
    (1..=n_units / k + 2).collect()
}

/// Substream of instance `index` at load `l`.
pub fn stream_id(l: usize, index: usize) -> u64 {
    ((l as u64) << 32) | index as u64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleRow {
    pub scheme: String,
    #[serde(rename = "N")]
    pub n_units: usize,
    pub k: usize,
    pub n: usize,
    #[serde(rename = "L")]
    pub load: usize,
    /// Instances that solved to optimality.
    pub samples: usize,
    pub mean_lstar: Option<f64>,
    pub std_lstar: Option<f64>,
    pub mean_throughput: Option<f64>,
    pub full_fraction: Option<f64>,
    pub lower_bound_mean: Option<f64>,
    pub hall_upper_bound: Option<f64>,
    pub budget_flagged: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub rows: Vec<EnsembleRow>,
}

const CSV_HEADER: &str = "scheme,N,k,n,L,samples,mean_Lstar,std_Lstar,mean_throughput,full_fraction,lower_bound_mean,hall_upper_bound,budget_flagged";

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl EnsembleStats {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.scheme,
                r.n_units,
                r.k,
                r.n,
                r.load,
                r.samples,
                cell(r.mean_lstar),
                cell(r.std_lstar),
                cell(r.mean_throughput),
                cell(r.full_fraction),
                cell(r.lower_bound_mean),
                cell(r.hall_upper_bound),
                r.budget_flagged
            );
        }
        out
    }

    pub fn row(&self, scheme: &str, load: usize) -> Option<&EnsembleRow> {
        self.rows.iter().find(|r| r.scheme == scheme && r.load == load)
    }

    pub fn any_flagged(&self) -> bool {
        self.rows.iter().any(|r| r.budget_flagged > 0)
    }
}

/// Per-instance outcome; `lstar` is `None` when the solver ran out of budget.
#[derive(Debug, Clone, Copy)]
struct Outcome {
    lstar: Option<usize>,
    lower_bound: f64,
}

fn evaluate(inst: &SwitchInstance, solver: SolverChoice, limits: &ExactLimits, want_lb: bool) -> Result<Outcome> {
    let r = solve(inst, solver, limits)?;
    Ok(Outcome {
        lstar: (!r.budget_exceeded).then_some(r.optimal_count),
        lower_bound: if want_lb { lower_bound_expected::<f64>(inst) } else { 0.0 },
    })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

fn summarize(config: &EnsembleConfig, scheme: &str, load: usize, outcomes: &[Outcome]) -> Result<EnsembleRow> {
    let solved: Vec<f64> = outcomes.iter().filter_map(|o| o.lstar.map(|v| v as f64)).collect();
    let flagged = outcomes.len() - solved.len();
    let (mean, std) = if solved.is_empty() {
        (None, None)
    } else {
        let (m, s) = mean_std(&solved);
        (Some(m), Some(s))
    };
    let full = outcomes.iter().filter(|o| o.lstar == Some(load)).count();
    let hall = if config.wants(Metric::HallUpperBound) && config.write_policy == WritePolicy::Unrestricted {
        Some(hall_full_throughput_upper_bound::<f64>(load, config.k, config.n, config.n_units)?)
    } else {
        None
    };
    let lower = config
        .wants(Metric::MeanLowerBound)
        .then(|| outcomes.iter().map(|o| o.lower_bound).sum::<f64>() / outcomes.len().max(1) as f64);
    let scale = config.k as f64 / config.n_units as f64;
    Ok(EnsembleRow {
        scheme: scheme.to_string(),
        n_units: config.n_units,
        k: config.k,
        n: config.n,
        load,
        samples: solved.len(),
        mean_lstar: mean.filter(|_| config.wants(Metric::MeanLstar)),
        std_lstar: std.filter(|_| config.wants(Metric::MeanLstar)),
        mean_throughput: mean.map(|m| m * scale).filter(|_| config.wants(Metric::MeanThroughput)),
        full_fraction: (!solved.is_empty() && config.wants(Metric::FullThroughputFraction))
            .then(|| full as f64 / solved.len() as f64),
        lower_bound_mean: lower,
        hall_upper_bound: hall,
        budget_flagged: flagged,
    })
}

/// Generates, solves and aggregates `instances_per_point` instances for every
/// load. Output is identical for equal configs whatever the thread count.
pub fn run_ensemble(config: &EnsembleConfig) -> Result<EnsembleStats> {
    if config.instances_per_point == 0 {
        return Err(Error::InvalidParameters("instances_per_point must be at least 1".into()));
    }
    check_parameters(config.n_units, config.k, config.n, config.write_policy, config.coding)?;
    let limits = config.limits();
    let want_lb = config.wants(Metric::MeanLowerBound);
    let scheme = config.scheme_label();
    let mut stats = EnsembleStats::default();
    for &load in &config.loads {
        let outcomes = (0..config.instances_per_point)
            .into_par_iter()
            .map(|idx| {
                let mut rng = sample_rng(config.master_seed, stream_id(load, idx));
                let inst = random_instance(
                    config.n_units,
                    config.k,
                    config.n,
                    load,
                    config.write_policy,
                    config.coding,
                    &mut rng,
                )?;
                evaluate(&inst, config.solver, &limits, want_lb)
            })
            .collect::<Result<Vec<_>>>()?;
        stats.rows.push(summarize(config, &scheme, load, &outcomes)?);
    }
    Ok(stats)
}

/// Mean of `first - second` over instances both schemes solved, with its
/// standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedDifference {
    #[serde(rename = "L")]
    pub load: usize,
    pub first: String,
    pub second: String,
    pub pairs: usize,
    pub mean_diff: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Comparison {
    pub stats: EnsembleStats,
    pub paired: Vec<PairedDifference>,
}

impl Comparison {
    pub fn paired(&self, first: &str, second: &str, load: usize) -> Option<&PairedDifference> {
        self.paired.iter().find(|p| p.first == first && p.second == second && p.load == load)
    }
}

fn paired_difference(
    load: usize,
    first: &str,
    second: &str,
    a: &[Outcome],
    b: &[Outcome],
    scale: f64,
) -> PairedDifference {
    let diffs: Vec<f64> =
        a.iter().zip(b).filter_map(|(x, y)| Some((x.lstar? as f64 - y.lstar? as f64) * scale)).collect();
    let (mean_diff, std_error) = if diffs.is_empty() {
        (0.0, 0.0)
    } else {
        let (m, s) = mean_std(&diffs);
        (m, s / (diffs.len() as f64).sqrt())
    };
    PairedDifference { load, first: first.into(), second: second.into(), pairs: diffs.len(), mean_diff, std_error }
}

/// Builds a scheme's instance from the shared substream.
type Builder = Box<dyn Fn(&EnsembleConfig, usize, u64) -> Result<SwitchInstance> + Send + Sync>;

struct Scheme {
    config: EnsembleConfig,
    build: Builder,
}

/// Runs several schemes on matched `(L, index)` substreams and reports each
/// scheme's row plus paired differences between consecutive schemes.
fn compare(schemes: &[Scheme], loads: &[usize], count: usize, in_throughput: bool) -> Result<Comparison> {
    if count == 0 {
        return Err(Error::InvalidParameters("instances_per_point must be at least 1".into()));
    }
    let mut out = Comparison::default();
    for &load in loads {
        let per_instance = (0..count)
            .into_par_iter()
            .map(|idx| {
                let stream = stream_id(load, idx);
                schemes
                    .iter()
                    .map(|s| {
                        let inst = (s.build)(&s.config, load, stream)?;
                        evaluate(&inst, s.config.solver, &s.config.limits(), s.config.wants(Metric::MeanLowerBound))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let columns: Vec<Vec<Outcome>> =
            (0..schemes.len()).map(|s| per_instance.iter().map(|o| o[s]).collect()).collect();
        for (s, outcomes) in schemes.iter().zip(&columns) {
            out.stats.rows.push(summarize(&s.config, &s.config.scheme_label(), load, outcomes)?);
        }
        for w in 0..schemes.len().saturating_sub(1) {
            let scale = if in_throughput { schemes[w].config.k as f64 / schemes[w].config.n_units as f64 } else { 1.0 };
            out.paired.push(paired_difference(
                load,
                &schemes[w].config.scheme_label(),
                &schemes[w + 1].config.scheme_label(),
                &columns[w],
                &columns[w + 1],
                scale,
            ));
        }
    }
    Ok(out)
}

/// `[4,2]` MDS against two `[2,1]` repetition groups on the same placements.
pub fn compare_mds_replication(n_units: usize, loads: &[usize], count: usize, seed: u64) -> Result<Comparison> {
    let base = |coding: CodingKind, label: &str| {
        let mut c = EnsembleConfig::new(n_units, 2, 4, loads.to_vec(), count);
        c.coding = coding;
        c.master_seed = seed;
        c.scheme = Some(label.into());
        c
    };
    let placement = |c: &EnsembleConfig, load: usize, stream: u64| {
        let mut rng = sample_rng(c.master_seed, stream);
        random_instance(c.n_units, c.k, c.n, load, WritePolicy::Unrestricted, CodingKind::Mds, &mut rng)
    };
    let schemes = [
        Scheme { config: base(CodingKind::Mds, "mds"), build: Box::new(placement) },
        Scheme {
            config: base(CodingKind::Replication, "replication"),
            build: Box::new(move |c, load, stream| placement(c, load, stream).map(|i| as_replicated(&i))),
        },
    ];
    compare(&schemes, loads, count, false)
}

/// Unrestricted, consecutive and block placement for the same `(N, k, n)`;
/// paired differences are in throughput.
pub fn compare_schemes(
    n_units: usize,
    k: usize,
    n: usize,
    loads: &[usize],
    count: usize,
    seed: u64,
) -> Result<Comparison> {
    let schemes: Vec<Scheme> = [
        (WritePolicy::Unrestricted, "unrestricted"),
        (WritePolicy::Consecutive, "consecutive"),
        (WritePolicy::Blocks, "blocks"),
    ]
    .into_iter()
    .map(|(policy, label)| {
        let mut c = EnsembleConfig::new(n_units, k, n, loads.to_vec(), count);
        c.write_policy = policy;
        c.master_seed = seed;
        c.scheme = Some(label.into());
        Scheme {
            config: c,
            build: Box::new(|c: &EnsembleConfig, load, stream| {
                let mut rng = sample_rng(c.master_seed, stream);
                random_instance(c.n_units, c.k, c.n, load, c.write_policy, c.coding, &mut rng)
            }),
        }
    })
    .collect();
    for s in &schemes {
        check_parameters(n_units, k, n, s.config.write_policy, CodingKind::Mds)?;
    }
    compare(&schemes, loads, count, true)
}

/// Full-throughput fraction against the Hall bound for several `n`.
pub fn hall_sweep(
    n_units: usize,
    k: usize,
    ns: &[usize],
    loads: &[usize],
    count: usize,
    seed: u64,
) -> Result<EnsembleStats> {
    let mut stats = EnsembleStats::default();
    for &n in ns {
        let mut c = EnsembleConfig::new(n_units, k, n, loads.to_vec(), count);
        c.master_seed = seed;
        stats.rows.extend(run_ensemble(&c)?.rows);
    }
    Ok(stats)
}
