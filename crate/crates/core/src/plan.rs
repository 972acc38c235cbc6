//! Read plans and the throughput metric.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::instance::{Coding, SwitchInstance};

/// Which MUs each served packet reads from.
///
/// `served` and `used_units` are carried explicitly so a plan read from a
/// document can be checked for consistency; [`ReadPlan::from_assignments`]
/// derives them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReadPlan {
    /// Packet position -> sorted MU indices `S'_i`.
    pub assignments: BTreeMap<usize, Vec<usize>>,
    /// Λ.
    pub served: BTreeSet<usize>,
    /// Ω.
    pub used_units: BTreeSet<usize>,
}

impl ReadPlan {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_assignments<I>(assignments: I) -> Self
    where
        I: IntoIterator<Item = (usize, Vec<usize>)>,
    {
        let assignments: BTreeMap<usize, Vec<usize>> = assignments
            .into_iter()
            .map(|(p, mut units)| {
                units.sort_unstable();
                (p, units)
            })
            .collect();
        let served = assignments.keys().copied().collect();
        let used_units = assignments.values().flatten().copied().collect();
        ReadPlan { assignments, served, used_units }
    }

    pub fn served_count(&self) -> usize {
        self.served.len()
    }

    /// Checks the plan against `inst`: every served packet reads exactly `k`
    /// of its own MUs, reads are pairwise disjoint, replicated packets take one
    /// MU per group, and `served`/`used_units` match the assignments.
    pub fn is_valid_for(&self, inst: &SwitchInstance) -> bool {
        let assigned: BTreeSet<usize> = self.assignments.keys().copied().collect();
        if assigned != self.served {
            return false;
        }
        let mut seen = BTreeSet::new();
        for (&packet, units) in &self.assignments {
            let Some(set) = inst.packets.get(packet) else {
                return false;
            };
            let distinct: BTreeSet<usize> = units.iter().copied().collect();
            if distinct.len() != units.len() || units.len() != inst.k {
                return false;
            }
            if !units.iter().all(|u| set.binary_search(u).is_ok()) {
                return false;
            }
            if let Coding::Replication { .. } = inst.coding {
                let Some(groups) = inst.coding.packet_groups(packet) else {
                    return false;
                };
                let one_per_group = groups.iter().all(|g| units.iter().filter(|u| g.contains(u)).count() == 1);
                if !one_per_group {
                    return false;
                }
            }
            for &u in units {
                if !seen.insert(u) {
                    return false;
                }
            }
        }
        seen == self.used_units && self.used_units.len() == inst.k * self.served.len()
    }
}

/// `validate_read_plan`: free-function form of [`ReadPlan::is_valid_for`].
pub fn validate_read_plan(inst: &SwitchInstance, plan: &ReadPlan) -> bool {
    plan.is_valid_for(inst)
}

/// Throughput `served * k / N`, exact.
pub fn throughput(inst: &SwitchInstance, served_count: usize) -> Result<Ratio<u64>> {
    if inst.n_units == 0 {
        return Err(Error::InvalidParameters("N must be at least 1".into()));
    }
    let cap = inst.unit_cap();
    if served_count > cap {
        return Err(Error::InfeasibleServedCount { served: served_count, cap });
    }
    Ok(Ratio::new((served_count * inst.k) as u64, inst.n_units as u64))
}
