//! Maximal-throughput reads from MDS-coded packet storage.
//!
//! A switch stores every packet as `n` coded chunks on `n` of its `N` memory
//! units (MUs). Any `k` chunks recover a packet, and every MU delivers one
//! chunk per time instant. Given the placement of `L` requested packets, the
//! question is how many of them can be read at once.
//!
//! The crate is split along the lines of the problem:
//!
//! * [`instance`], [`plan`] and [`graph`] hold the data model, validation and
//!   the throughput metric.
//! * [`solvers`] computes optimal read plans: an exact branch-and-bound for
//!   the general case, matching for `k = 1` and `k = n = 2`, and the greedy
//!   single pass for consecutive and block placement.
//! * [`bounds`] has the randomized lower bound and the Hall-condition upper
//!   bound for random ensembles.
//! * [`reduction`] builds the set-packing reduction instances and lifts their
//!   solutions back.
//! * [`ensemble`] generates random instances and runs the scheme comparisons.
//!
//! MU indices are 1-based everywhere in the public API, matching the on-disk
//! formats. Packet ids are 0-based positions in [`SwitchInstance::packets`];
//! documents and diagnostics print them 1-based.
//!
//! Probability code is generic over [`Scalar`], so the same routines run in
//! double precision for ensembles and in exact rational arithmetic for small
//! golden fixtures.

pub mod bounds;
pub mod ensemble;
pub mod error;
pub mod graph;
pub mod instance;
pub mod io;
pub mod plan;
pub mod reduction;
pub mod scalar;
pub mod solvers;

mod mask;

pub use error::{Error, Result};
pub use graph::BipartiteGraph;
pub use instance::{Coding, SwitchInstance, ValidationReport, Violation, WritePolicy};
pub use plan::{throughput, ReadPlan};
pub use scalar::Scalar;
pub use solvers::{SolveResult, SolverTag};

/// Arbitrary-precision rational, used for exact golden values.
pub type Exact = num_rational::BigRational;

/// Union-size distribution in double precision.
pub type UnionSizeDistributionF64 = bounds::UnionSizeDistribution<f64>;

/// Union-size distribution in exact rational arithmetic.
pub type ExactUnionSizeDistribution = bounds::UnionSizeDistribution<Exact>;
