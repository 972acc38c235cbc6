//! Random ensembles and scheme comparisons.
//!
//! Every instance draws from its own ChaCha substream keyed by `(L, index)`,
//! so results do not depend on how the sweep is scheduled across threads, and
//! schemes compared at the same `(L, index)` see placements drawn from the
//! same stream.

mod generate;
mod run;

pub use generate::{as_replicated, check_parameters, random_instance, random_subset, replica_groups, CodingKind};
pub use run::{
    compare_mds_replication, compare_schemes, default_loads, hall_sweep, run_ensemble, stream_id, Comparison,
    EnsembleConfig, EnsembleRow, EnsembleStats, Metric, PairedDifference, DEFAULT_NODE_BUDGET,
};
