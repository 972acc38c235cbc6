//! Structured placement: single greedy pass for consecutive writes, and
//! independent per-block solves for block writes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::{Coding, SwitchInstance, WritePolicy};
use crate::plan::ReadPlan;
use crate::solvers::{solve_exact, ExactLimits, SolveResult, SolverTag};

/// Packets in order of their highest MU (ties by id); each packet is served
/// iff at least `k` of its MUs are still free, taking the `k` lowest.
pub fn solve_cnkmtp_greedy(inst: &SwitchInstance) -> Result<SolveResult> {
    if inst.write_policy == WritePolicy::Unrestricted {
        return Err(Error::SolverNotApplicable { solver: "greedy", reason: "placement is unrestricted".into() });
    }
    if !inst.coding.is_mds() {
        return Err(Error::SolverNotApplicable { solver: "greedy", reason: "coding is not MDS".into() });
    }
    inst.ensure_valid()?;

    let mut order: Vec<usize> = (0..inst.num_packets()).collect();
    order.sort_by_key(|&p| inst.packets[p].last().copied().unwrap_or(0));

    let mut used = vec![false; inst.n_units + 1];
    let mut assignments = Vec::new();
    for p in order {
        let residual: Vec<usize> = inst.packets[p].iter().copied().filter(|&u| !used[u]).collect();
        if residual.len() >= inst.k {
            let take = residual[..inst.k].to_vec();
            for &u in &take {
                used[u] = true;
            }
            assignments.push((p, take));
        }
    }
    let tag = match inst.write_policy {
        WritePolicy::Blocks => SolverTag::GreedyBlocks,
        _ => SolverTag::GreedyConsecutive,
    };
    Ok(SolveResult::new(ReadPlan::from_assignments(assignments), tag))
}

/// Blocks never interact, so each is solved on its own: under MDS a block of
/// `n` MUs serves its first `floor(n/k)` packets; replicated blocks go through
/// the exact solver.
pub fn solve_blocks(inst: &SwitchInstance) -> Result<SolveResult> {
    if inst.write_policy != WritePolicy::Blocks {
        return Err(Error::SolverNotApplicable {
            solver: "blocks",
            reason: format!("placement is {}", inst.write_policy),
        });
    }
    inst.ensure_valid()?;

    let mut by_block: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (p, set) in inst.packets.iter().enumerate() {
        by_block.entry(set[0]).or_default().push(p);
    }

    let per_block_cap = inst.n / inst.k;
    let mut assignments = Vec::new();
    let mut nodes = 0;
    for (start, packets) in by_block {
        match &inst.coding {
            Coding::Mds => {
                for (slot, &p) in packets.iter().take(per_block_cap).enumerate() {
                    let first = start + slot * inst.k;
                    assignments.push((p, (first..first + inst.k).collect()));
                }
            }
            Coding::Replication { groups } => {
                let shift = |u: usize| u + 1 - start;
                let sub = SwitchInstance::with_policy(
                    inst.n,
                    inst.k,
                    inst.n,
                    packets.iter().map(|&p| inst.packets[p].iter().map(|&u| shift(u)).collect()).collect(),
                    WritePolicy::Blocks,
                    Coding::Replication {
                        groups: packets
                            .iter()
                            .map(|&p| groups[p].iter().map(|g| g.iter().map(|&u| shift(u)).collect()).collect())
                            .collect(),
                    },
                );
                let r = solve_exact(&sub, &ExactLimits::unlimited())?;
                nodes += r.nodes_explored;
                for (local, units) in r.plan.assignments {
                    assignments.push((packets[local], units.iter().map(|&u| u + start - 1).collect()));
                }
            }
        }
    }
    let mut result = SolveResult::new(ReadPlan::from_assignments(assignments), SolverTag::GreedyBlocks);
    result.nodes_explored = nodes;
    Ok(result)
}
