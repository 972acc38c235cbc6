//! Probabilistic bounds on `L*`.
//!
//! The lower bound comes from a random assignment of every MU to one of its
//! packets: packet `i` ends up readable with probability `Q(i)`, a
//! Poisson-binomial tail, so `L* >= sum_i Q(i)`. The upper bound applies to
//! random ensembles: all `L` packets can only be served if their union covers
//! at least `kL` MUs, whose probability follows from the union-size
//! distribution of `L` uniform `n`-subsets.

mod hall;
mod poisson;
mod sampler;
mod union;

use serde::Serialize;

use crate::error::Result;
use crate::instance::SwitchInstance;

pub use hall::{hall_all_subsets_check, hall_condition_check, HALL_SUBSET_LIMIT};
pub use poisson::{
    lower_bound_expected, packet_read_probability, poisson_binomial_tail, poisson_binomial_tail_dft, q_packet,
    PacketReadProbability,
};
pub use sampler::{monte_carlo_lower_bound, randomized_assignment, randomized_plan, sample_rng, MonteCarloSummary};
pub use union::{hall_full_throughput_upper_bound, union_size_distribution, UnionSizeDistribution};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    /// `sum_i Q(i)`.
    pub lower_expected: f64,
    /// `min(L, floor(N/k))`.
    pub trivial_upper: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloSummary>,
}

/// Closed-form lower bound, trivial upper bound and, when `samples > 0`, a
/// seeded Monte Carlo run of the random assignment.
pub fn bound_report(inst: &SwitchInstance, samples: usize, seed: u64) -> Result<BoundReport> {
    inst.ensure_valid()?;
    let monte_carlo = (samples > 0).then(|| monte_carlo_lower_bound(inst, samples, seed));
    Ok(BoundReport {
        lower_expected: lower_bound_expected::<f64>(inst),
        trivial_upper: inst.trivial_upper_bound(),
        monte_carlo,
    })
}
