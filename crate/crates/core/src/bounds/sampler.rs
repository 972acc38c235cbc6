use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::BipartiteGraph;
use crate::instance::{Coding, SwitchInstance};
use crate::plan::ReadPlan;

/// Generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Owner packet of every MU; MUs nobody uses stay `None`.
fn assign_units<R: Rng + ?Sized>(graph: &BipartiteGraph, rng: &mut R) -> Vec<Option<usize>> {
    (1..=graph.num_units())
        .map(|u| {
            let packets = graph.unit_packets(u);
            (!packets.is_empty()).then(|| packets[rng.random_range(0..packets.len())])
        })
        .collect()
}

/// Units assigned to each packet that together make it readable, truncated to
/// exactly what a read needs.
fn readable(inst: &SwitchInstance, owners: &[Option<usize>]) -> Vec<(usize, Vec<usize>)> {
    let mut got = vec![Vec::new(); inst.num_packets()];
    for (u, owner) in owners.iter().enumerate() {
        if let Some(p) = owner {
            got[*p].push(u + 1);
        }
    }
    got.into_iter()
        .enumerate()
        .filter_map(|(p, units)| match &inst.coding {
            Coding::Mds => (units.len() >= inst.k).then(|| (p, units[..inst.k].to_vec())),
            Coding::Replication { groups } => groups[p]
                .iter()
                .map(|g| units.iter().copied().find(|u| g.contains(u)))
                .collect::<Option<Vec<_>>>()
                .map(|picked| (p, picked)),
        })
        .collect()
}

/// One run of the random assignment: every MU with degree `d >= 1` goes to
/// one of its packets with probability `1/d`; returns the packets that
/// received enough MUs to be read.
pub fn randomized_assignment<R: Rng + ?Sized>(inst: &SwitchInstance, rng: &mut R) -> BTreeSet<usize> {
    randomized_plan(inst, rng).served
}

/// Same draw as [`randomized_assignment`], kept as a read plan.
pub fn randomized_plan<R: Rng + ?Sized>(inst: &SwitchInstance, rng: &mut R) -> ReadPlan {
    let graph = BipartiteGraph::from_instance(inst);
    let owners = assign_units(&graph, rng);
    ReadPlan::from_assignments(readable(inst, &owners))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub samples: usize,
    pub mean: f64,
    pub std_error: f64,
}

/// Mean readable-set size over `samples` runs, sample `i` drawing from
/// substream `i` of `seed`.
pub fn monte_carlo_lower_bound(inst: &SwitchInstance, samples: usize, seed: u64) -> MonteCarloSummary {
    let graph = BipartiteGraph::from_instance(inst);
    let (sum, sum_sq) = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let count = readable(inst, &assign_units(&graph, &mut rng)).len() as u64;
            (count, count * count)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let s = samples as f64;
    let mean = if samples == 0 { 0.0 } else { sum as f64 / s };
    let var = if samples > 1 { (sum_sq as f64 - s * mean * mean) / (s - 1.0) } else { 0.0 };
    MonteCarloSummary { samples, mean, std_error: (var.max(0.0) / s.max(1.0)).sqrt() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_assignments_serve_everyone() {
        let inst = SwitchInstance::new(6, 3, 3, vec![vec![1, 2, 3], vec![4, 5, 6]]);
        let mut rng = sample_rng(1, 0);
        assert_eq!(randomized_assignment(&inst, &mut rng), BTreeSet::from([0, 1]));
    }

    #[test]
    fn empty_instance_returns_nothing() {
        let inst = SwitchInstance::new(4, 1, 2, vec![]);
        assert!(randomized_assignment(&inst, &mut sample_rng(3, 0)).is_empty());
    }

    #[test]
    fn plans_are_valid_and_deterministic() {
        let inst = SwitchInstance::new(5, 2, 3, vec![vec![1, 2, 3], vec![2, 4, 5], vec![3, 4, 5]]);
        for i in 0..50 {
            let a = randomized_plan(&inst, &mut sample_rng(9, i));
            let b = randomized_plan(&inst, &mut sample_rng(9, i));
            assert_eq!(a, b);
            assert!(a.is_valid_for(&inst));
        }
    }

    #[test]
    fn example1_k3_serves_at_most_one() {
        let inst = SwitchInstance::new(5, 3, 3, vec![vec![1, 2, 3], vec![2, 4, 5], vec![3, 4, 5]]);
        for i in 0..200 {
            assert!(randomized_assignment(&inst, &mut sample_rng(5, i)).len() <= 1);
        }
    }
}
