//! Depth-first branch-and-bound over packets in input order.
//!
//! Each packet either gets skipped or reads one of its residual `k`-subsets.
//! Subsets are canonicalized: MUs no later packet can use are taken first,
//! and MUs with identical later membership are interchangeable, so only the
//! count drawn from each such class matters. Identical packets are served as
//! a prefix in id order.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::instance::SwitchInstance;
use crate::mask::{self, UnitMask, MAX_MASK_UNITS};
use crate::plan::ReadPlan;
use crate::solvers::{SolveResult, SolverTag};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExactLimits {
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl ExactLimits {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(budget: u64) -> Self {
        ExactLimits { node_budget: Some(budget), time_budget: None }
    }
}

/// Maximum number of simultaneously readable packets, with a certificate plan.
///
/// When a budget runs out the best plan found so far is returned with
/// `budget_exceeded` set.
pub fn solve_exact(inst: &SwitchInstance, limits: &ExactLimits) -> Result<SolveResult> {
    inst.ensure_valid()?;
    if inst.n_units > MAX_MASK_UNITS {
        return Err(Error::TooLarge { what: "exact solver", limit: MAX_MASK_UNITS, got: inst.n_units });
    }
    let mut search = Search::new(inst, limits);
    search.run();
    let plan = ReadPlan::from_assignments(
        search.best.iter().enumerate().filter(|(_, &m)| m != 0).map(|(p, &m)| (p, mask::units(m))),
    );
    let mut result = SolveResult::new(plan, SolverTag::Exact);
    result.nodes_explored = search.nodes;
    result.budget_exceeded = search.aborted;
    Ok(result)
}

struct Search<'a> {
    k: usize,
    sets: Vec<UnitMask>,
    /// Replica-group masks per packet; `None` under MDS coding.
    groups: Option<Vec<Vec<UnitMask>>>,
    /// Per MU bit: `(packet, group)` memberships sorted by packet.
    memberships: Vec<Vec<(usize, usize)>>,
    /// Later packets with the same placement (and groups).
    twins: Vec<Vec<usize>>,
    suffix_union: Vec<UnitMask>,
    forced_skip: Vec<u32>,
    current: Vec<UnitMask>,
    best: Vec<UnitMask>,
    best_count: usize,
    cap: usize,
    nodes: u64,
    limits: &'a ExactLimits,
    started: Instant,
    aborted: bool,
}

impl<'a> Search<'a> {
    fn new(inst: &SwitchInstance, limits: &'a ExactLimits) -> Self {
        let l = inst.num_packets();
        let sets: Vec<UnitMask> = inst.packets.iter().map(|s| mask::from_units(s)).collect();
        let groups = (!inst.coding.is_mds()).then(|| {
            (0..l)
                .map(|p| {
                    inst.coding
                        .packet_groups(p)
                        .unwrap_or_default()
                        .iter()
                        .map(|g| mask::from_units(g))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        });
        let mut memberships = vec![Vec::new(); inst.n_units];
        for (p, set) in inst.packets.iter().enumerate() {
            for &u in set {
                let group = match &groups {
                    Some(g) => g[p].iter().position(|&gm| gm & mask::bit(u) != 0).unwrap_or(0),
                    None => 0,
                };
                memberships[u - 1].push((p, group));
            }
        }
        let twins = (0..l)
            .map(|i| {
                (i + 1..l).filter(|&j| sets[i] == sets[j] && groups.as_ref().is_none_or(|g| g[i] == g[j])).collect()
            })
            .collect();
        let mut suffix_union = vec![0; l + 1];
        for i in (0..l).rev() {
            suffix_union[i] = suffix_union[i + 1] | sets[i];
        }
        Search {
            k: inst.k,
            sets,
            groups,
            memberships,
            twins,
            suffix_union,
            forced_skip: vec![0; l],
            current: vec![0; l],
            best: vec![0; l],
            best_count: 0,
            cap: inst.trivial_upper_bound(),
            nodes: 0,
            limits,
            started: Instant::now(),
            aborted: false,
        }
    }

    fn run(&mut self) {
        let all = if self.memberships.len() == 128 { !0 } else { (1u128 << self.memberships.len()) - 1 };
        self.dfs(0, all, 0);
    }

    fn done(&self) -> bool {
        self.aborted || self.best_count >= self.cap
    }

    fn over_budget(&mut self) -> bool {
        if self.limits.node_budget.is_some_and(|b| self.nodes > b) {
            self.aborted = true;
        }
        if let Some(t) = self.limits.time_budget {
            if self.nodes.is_multiple_of(1024) && self.started.elapsed() > t {
                self.aborted = true;
            }
        }
        self.aborted
    }

    fn dfs(&mut self, i: usize, free: UnitMask, count: usize) {
        self.nodes += 1;
        if count > self.best_count {
            self.best_count = count;
            self.best.copy_from_slice(&self.current);
        }
        if self.done() || self.over_budget() || i == self.sets.len() {
            return;
        }
        let k = self.k as u32;
        let feasible = (i..self.sets.len())
            .filter(|&j| self.forced_skip[j] == 0 && (self.sets[j] & free).count_ones() >= k)
            .count();
        let by_units = ((free & self.suffix_union[i]).count_ones() / k) as usize;
        if count + feasible.min(by_units) <= self.best_count {
            return;
        }

        if self.forced_skip[i] == 0 {
            for choice in self.choices(i, free) {
                self.current[i] = choice;
                self.dfs(i + 1, free & !choice, count + 1);
                self.current[i] = 0;
                if self.done() {
                    return;
                }
            }
            let twins = std::mem::take(&mut self.twins[i]);
            for &t in &twins {
                self.forced_skip[t] += 1;
            }
            self.dfs(i + 1, free, count);
            for &t in &twins {
                self.forced_skip[t] -= 1;
            }
            self.twins[i] = twins;
        } else {
            self.dfs(i + 1, free, count);
        }
    }

    /// Memberships of `unit` among packets after `i`.
    fn later(&self, unit_bit: u32, i: usize) -> &[(usize, usize)] {
        let list = &self.memberships[unit_bit as usize];
        &list[list.partition_point(|&(p, _)| p <= i)..]
    }

    /// Canonical read sets for packet `i` given the free MUs.
    fn choices(&self, i: usize, free: UnitMask) -> Vec<UnitMask> {
        match &self.groups {
            None => self.mds_choices(i, self.sets[i] & free),
            Some(groups) => self.replication_choices(i, &groups[i], free),
        }
    }

    fn mds_choices(&self, i: usize, residual: UnitMask) -> Vec<UnitMask> {
        if (residual.count_ones() as usize) < self.k {
            return Vec::new();
        }
        let mut dead = 0;
        let mut classes: Vec<UnitClass<'_>> = Vec::new();
        let mut rest = residual;
        while rest != 0 {
            let b = rest.trailing_zeros();
            rest &= rest - 1;
            let sig = self.later(b, i);
            if sig.is_empty() {
                dead |= 1u128 << b;
            } else if let Some(class) = classes.iter_mut().find(|(s, _)| *s == sig) {
                class.1.push(1u128 << b);
            } else {
                classes.push((sig, vec![1u128 << b]));
            }
        }
        let base = mask::lowest(dead, self.k);
        let need = self.k - base.count_ones() as usize;
        classes.sort_by_key(|(sig, _)| sig.len());
        let mut out = Vec::new();
        compose(&classes, 0, need, base, &mut out);
        out
    }

    fn replication_choices(&self, i: usize, groups: &[UnitMask], free: UnitMask) -> Vec<UnitMask> {
        let mut options: Vec<Vec<UnitMask>> = Vec::with_capacity(groups.len());
        for &g in groups {
            let residual = g & free;
            if residual == 0 {
                return Vec::new();
            }
            let mut picks: Vec<(&[(usize, usize)], UnitMask)> = Vec::new();
            let mut rest = residual;
            while rest != 0 {
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                let sig = self.later(b, i);
                if sig.is_empty() {
                    picks = vec![(sig, 1u128 << b)];
                    break;
                }
                if !picks.iter().any(|(s, _)| *s == sig) {
                    picks.push((sig, 1u128 << b));
                }
            }
            picks.sort_by_key(|(sig, _)| sig.len());
            options.push(picks.into_iter().map(|(_, m)| m).collect());
        }
        let mut out = vec![0u128];
        for opts in options {
            out = out.iter().flat_map(|&acc| opts.iter().map(move |&m| acc | m)).collect();
        }
        out
    }
}

/// Interchangeable MUs: shared later-membership signature and the members.
type UnitClass<'a> = (&'a [(usize, usize)], Vec<UnitMask>);

/// All ways to draw `need` MUs from the classes, lowest indices first within
/// each class.
fn compose(classes: &[UnitClass<'_>], idx: usize, need: usize, acc: UnitMask, out: &mut Vec<UnitMask>) {
    if need == 0 {
        out.push(acc);
        return;
    }
    if idx == classes.len() {
        return;
    }
    let available: usize = classes[idx..].iter().map(|(_, m)| m.len()).sum();
    if available < need {
        return;
    }
    let members = &classes[idx].1;
    for take in (0..=need.min(members.len())).rev() {
        let picked = members[..take].iter().fold(acc, |a, &m| a | m);
        compose(classes, idx + 1, need - take, picked, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Coding, WritePolicy};

    fn example1(k: usize) -> SwitchInstance {
        SwitchInstance::new(5, k, 3, vec![vec![1, 2, 3], vec![2, 4, 5], vec![3, 4, 5]])
    }

    #[test]
    fn example1_optima() {
        for (k, expected) in [(3, 1), (2, 2), (1, 3)] {
            let r = solve_exact(&example1(k), &ExactLimits::unlimited()).unwrap();
            assert_eq!(r.optimal_count, expected, "k = {k}");
            assert!(r.plan.is_valid_for(&example1(k)));
            assert!(!r.budget_exceeded);
        }
    }

    #[test]
    fn single_replicated_packet() {
        let inst = SwitchInstance::with_policy(
            4,
            2,
            4,
            vec![vec![1, 2, 3, 4]],
            WritePolicy::Unrestricted,
            Coding::Replication { groups: vec![vec![vec![1, 2], vec![3, 4]]] },
        );
        let r = solve_exact(&inst, &ExactLimits::unlimited()).unwrap();
        assert_eq!(r.optimal_count, 1);
        let units = &r.plan.assignments[&0];
        assert!(units.iter().filter(|&&u| u <= 2).count() == 1);
        assert!(r.plan.is_valid_for(&inst));
    }

    #[test]
    fn replication_groups_constrain_reads() {
        // MDS could serve both packets ({1,2} and {3,4}); with groups {1,2},{3,4}
        // each packet needs one MU from each pair, and only two packets fit.
        let groups = vec![vec![vec![1, 2], vec![3, 4]]; 3];
        let inst = SwitchInstance::with_policy(
            4,
            2,
            4,
            vec![vec![1, 2, 3, 4]; 3],
            WritePolicy::Unrestricted,
            Coding::Replication { groups },
        );
        let r = solve_exact(&inst, &ExactLimits::unlimited()).unwrap();
        assert_eq!(r.optimal_count, 2);
        assert!(r.plan.is_valid_for(&inst));
    }

    #[test]
    fn node_budget_is_flagged() {
        let packets: Vec<Vec<usize>> = (0..12).map(|i| vec![1 + i % 4, 5 + i % 3, 9 + i % 5]).collect();
        let inst = SwitchInstance::new(13, 3, 3, packets);
        let r = solve_exact(&inst, &ExactLimits::nodes(3)).unwrap();
        assert!(r.budget_exceeded);
        assert!(r.plan.is_valid_for(&inst));
    }

    #[test]
    fn rejects_invalid_instance() {
        let inst = SwitchInstance::new(5, 2, 3, vec![vec![1, 2]]);
        assert!(matches!(solve_exact(&inst, &ExactLimits::unlimited()), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn empty_instance() {
        let r = solve_exact(&SwitchInstance::new(4, 2, 2, vec![]), &ExactLimits::unlimited()).unwrap();
        assert_eq!(r.optimal_count, 0);
    }
}
