//! Optimal read plans.
//!
//! | solver                  | applies to                       |
//! |-------------------------|----------------------------------|
//! | [`solve_exact`]         | anything (exponential worst case) |
//! | [`solve_k1_matching`]   | `k = 1`                          |
//! | [`solve_k2n2_matching`] | `k = n = 2`                      |
//! | [`solve_cnkmtp_greedy`] | consecutive or block placement, MDS |
//! | [`solve_blocks`]        | block placement                  |

mod exact;
mod greedy;
mod matching;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{SwitchInstance, WritePolicy};
use crate::plan::ReadPlan;

pub use exact::{solve_exact, ExactLimits};
pub use greedy::{solve_blocks, solve_cnkmtp_greedy};
pub use matching::{maximum_bipartite_matching, maximum_general_matching, solve_k1_matching, solve_k2n2_matching};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverTag {
    Exact,
    MatchingK1,
    MatchingK2n2,
    GreedyConsecutive,
    GreedyBlocks,
}

impl SolverTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverTag::Exact => "exact",
            SolverTag::MatchingK1 => "matching_k1",
            SolverTag::MatchingK2n2 => "matching_k2n2",
            SolverTag::GreedyConsecutive => "greedy_consecutive",
            SolverTag::GreedyBlocks => "greedy_blocks",
        }
    }
}

impl fmt::Display for SolverTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub plan: ReadPlan,
    /// `L*`, or the best count found when `budget_exceeded` is set.
    pub optimal_count: usize,
    pub solver_tag: SolverTag,
    /// Search nodes visited; zero for the polynomial solvers.
    pub nodes_explored: u64,
    /// The search stopped early; `optimal_count` is only a lower bound.
    pub budget_exceeded: bool,
}

impl SolveResult {
    pub(crate) fn new(plan: ReadPlan, solver_tag: SolverTag) -> Self {
        SolveResult { optimal_count: plan.served_count(), plan, solver_tag, nodes_explored: 0, budget_exceeded: false }
    }
}

/// Solver selection, as exposed on the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverChoice {
    /// Matching for `k = 1` or `k = n = 2`, greedy for structured MDS
    /// placement, exact otherwise.
    #[default]
    Auto,
    Exact,
    Matching,
    Greedy,
}

impl FromStr for SolverChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(SolverChoice::Auto),
            "exact" => Ok(SolverChoice::Exact),
            "matching" => Ok(SolverChoice::Matching),
            "greedy" => Ok(SolverChoice::Greedy),
            other => Err(Error::InvalidParameters(format!("unknown solver '{other}'"))),
        }
    }
}

/// Runs the selected solver. Budget exhaustion is reported through
/// [`SolveResult::budget_exceeded`], not as an error.
pub fn solve(inst: &SwitchInstance, choice: SolverChoice, limits: &ExactLimits) -> Result<SolveResult> {
    match choice {
        SolverChoice::Exact => solve_exact(inst, limits),
        SolverChoice::Matching => {
            if inst.k == 1 {
                solve_k1_matching(inst)
            } else {
                solve_k2n2_matching(inst)
            }
        }
        SolverChoice::Greedy => match inst.write_policy {
            WritePolicy::Blocks => solve_blocks(inst),
            _ => solve_cnkmtp_greedy(inst),
        },
        SolverChoice::Auto => {
            if inst.k == 1 {
                solve_k1_matching(inst)
            } else if inst.k == 2 && inst.n == 2 {
                solve_k2n2_matching(inst)
            } else {
                match inst.write_policy {
                    WritePolicy::Blocks => solve_blocks(inst),
                    WritePolicy::Consecutive if inst.coding.is_mds() => solve_cnkmtp_greedy(inst),
                    _ => solve_exact(inst, limits),
                }
            }
        }
    }
}
