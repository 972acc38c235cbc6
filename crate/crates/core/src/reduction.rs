//! Set packing to nkMTP.
//!
//! Every `l`-set `A_i` gets a mirror `B_i` over fresh elements, and one new
//! element `θ` joins all `2L` sets. The result is an nkMTP instance with
//! `k = l`, `n = l + 1` in which `2M` packets can be read iff `M` of the
//! original sets are pairwise disjoint. Applying the same construction to an
//! nkMTP instance raises `n` by one.
//!
//! Elements are renamed deterministically: the `j`-th smallest original
//! element becomes MU `j`, its mirror MU `s + j`, and `θ` MU `2s + 1`, where
//! `s` is the number of distinct elements.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Coding, SwitchInstance, WritePolicy};
use crate::plan::ReadPlan;

/// `l`-set packing instance: are there `target` pairwise disjoint sets?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LspInstance {
    pub l: usize,
    pub sets: Vec<Vec<u64>>,
    #[serde(default, rename = "M", skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
}

impl LspInstance {
    pub fn new(l: usize, sets: Vec<Vec<u64>>, target: usize) -> Self {
        LspInstance { l, sets, target: Some(target) }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, set) in self.sets.iter().enumerate() {
            let distinct: BTreeSet<_> = set.iter().collect();
            if set.len() != self.l || distinct.len() != self.l {
                return Err(Error::InvalidParameters(format!(
                    "set {} does not have {} distinct elements",
                    i + 1,
                    self.l
                )));
            }
        }
        Ok(())
    }
}

/// Original element labels in MU order; `labels[j - 1]` is `a_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementMap {
    pub labels: Vec<u64>,
}

impl ElementMap {
    pub fn distinct(&self) -> usize {
        self.labels.len()
    }

    /// MU of original element `label`.
    pub fn a_unit(&self, label: u64) -> Option<usize> {
        self.labels.binary_search(&label).ok().map(|j| j + 1)
    }

    /// MU of the mirror of `label`.
    pub fn b_unit(&self, label: u64) -> Option<usize> {
        self.a_unit(label).map(|j| j + self.distinct())
    }

    pub fn theta(&self) -> usize {
        2 * self.distinct() + 1
    }

    pub fn n_units(&self) -> usize {
        self.theta()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    /// Packets `0..L` are the `Ã_i`, packets `L..2L` the `B̃_i`.
    pub nkmtp: SwitchInstance,
    pub mapping: ElementMap,
    /// Number of packets the reduced instance must serve, `2M`.
    pub target: usize,
    /// `L`, the number of original sets.
    pub source_sets: usize,
}

fn mirror_with_theta(sets: &[Vec<u64>]) -> (Vec<Vec<usize>>, ElementMap) {
    let labels: Vec<u64> = sets.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let map = ElementMap { labels };
    let theta = map.theta();
    let side = |unit: fn(&ElementMap, u64) -> Option<usize>| {
        sets.iter()
            .map(|set| {
                let mut units: Vec<usize> = set.iter().map(|&a| unit(&map, a).expect("element in map")).collect();
                units.push(theta);
                units
            })
            .collect::<Vec<_>>()
    };
    let mut packets = side(ElementMap::a_unit);
    packets.extend(side(ElementMap::b_unit));
    (packets, map)
}

/// Builds the nkMTP instance (`k = l`, `n = l + 1`, target `2M`).
pub fn lsp_to_nkmtp(lsp: &LspInstance, target: usize) -> Result<ReducedInstance> {
    if lsp.l < 3 {
        return Err(Error::InvalidParameters(format!("reduction needs l >= 3, got {}", lsp.l)));
    }
    lsp.validate()?;
    let (packets, mapping) = mirror_with_theta(&lsp.sets);
    let nkmtp = SwitchInstance::new(mapping.n_units(), lsp.l, lsp.l + 1, packets);
    Ok(ReducedInstance { nkmtp, mapping, target: 2 * target, source_sets: lsp.sets.len() })
}

/// Same mirror-and-θ step on an nkMTP instance: `n` grows by one, the packet
/// count and the target double, `k` is kept.
pub fn extend_n(inst: &SwitchInstance, target: usize) -> Result<(SwitchInstance, usize)> {
    inst.ensure_valid()?;
    if inst.k < 3 {
        return Err(Error::InvalidParameters(format!("extension needs k >= 3, got {}", inst.k)));
    }
    if !inst.coding.is_mds() {
        return Err(Error::InvalidParameters("extension is defined for MDS coding".into()));
    }
    let sets: Vec<Vec<u64>> = inst.packets.iter().map(|s| s.iter().map(|&u| u as u64).collect()).collect();
    let (packets, mapping) = mirror_with_theta(&sets);
    let extended = SwitchInstance::with_policy(
        mapping.n_units(),
        inst.k,
        inst.n + 1,
        packets,
        WritePolicy::Unrestricted,
        Coding::Mds,
    );
    Ok((extended, 2 * target))
}

/// Recovers pairwise disjoint original sets from a plan that serves at least
/// `2M` packets of the reduced instance.
///
/// `θ` is read by at most one packet, so one side holds at least `M` served
/// packets that read exactly their original (or mirrored) set. The A side is
/// preferred on ties. Returns `Ok(None)` when the plan serves fewer than `2M`.
pub fn lift_solution(reduced: &ReducedInstance, plan: &ReadPlan) -> Result<Option<Vec<usize>>> {
    if !plan.is_valid_for(&reduced.nkmtp) {
        return Err(Error::InvalidParameters("plan is not valid for the reduced instance".into()));
    }
    if plan.served_count() < reduced.target || plan.served_count() == 0 {
        return Ok(None);
    }
    let m = reduced.target / 2;
    let l = reduced.source_sets;
    let theta = reduced.mapping.theta();
    let clean = |range: std::ops::Range<usize>| -> Vec<usize> {
        plan.assignments
            .iter()
            .filter(|(p, units)| range.contains(p) && !units.contains(&theta))
            .map(|(&p, _)| p - range.start)
            .collect()
    };
    let a_side = clean(0..l);
    let b_side = clean(l..2 * l);
    let picked = if a_side.len() >= m { a_side } else { b_side };
    Ok((picked.len() >= m).then_some(picked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{solve_exact, ExactLimits};

    fn disjoint_pair() -> LspInstance {
        LspInstance::new(3, vec![vec![1, 2, 3], vec![4, 5, 6]], 2)
    }

    #[test]
    fn builds_mirrored_instance() {
        let r = lsp_to_nkmtp(&disjoint_pair(), 2).unwrap();
        assert_eq!(r.nkmtp.n_units, 13);
        assert_eq!((r.nkmtp.k, r.nkmtp.n), (3, 4));
        assert_eq!(r.target, 4);
        assert_eq!(
            r.nkmtp.packets,
            vec![vec![1, 2, 3, 13], vec![4, 5, 6, 13], vec![7, 8, 9, 13], vec![10, 11, 12, 13]]
        );
        assert!(r.nkmtp.validate().is_ok());
    }

    #[test]
    fn smallest_case() {
        let r = lsp_to_nkmtp(&LspInstance::new(3, vec![vec![7, 8, 9]], 1), 1).unwrap();
        assert_eq!(r.nkmtp.num_packets(), 2);
        assert_eq!(r.target, 2);
    }

    #[test]
    fn mirror_keeps_shared_elements() {
        let lsp = LspInstance::new(3, vec![vec![1, 2, 3], vec![3, 4, 5]], 1);
        let r = lsp_to_nkmtp(&lsp, 1).unwrap();
        let b3 = r.mapping.b_unit(3).unwrap();
        assert_eq!(b3, 8);
        assert!(r.nkmtp.packets[2].contains(&b3));
        assert!(r.nkmtp.packets[3].contains(&b3));
    }

    #[test]
    fn rejects_small_l() {
        assert!(lsp_to_nkmtp(&LspInstance::new(2, vec![vec![1, 2]], 1), 1).is_err());
        assert!(lsp_to_nkmtp(&LspInstance::new(3, vec![vec![1, 2]], 1), 1).is_err());
    }

    #[test]
    fn lifts_exact_plan() {
        let r = lsp_to_nkmtp(&disjoint_pair(), 2).unwrap();
        let solved = solve_exact(&r.nkmtp, &ExactLimits::unlimited()).unwrap();
        assert_eq!(solved.optimal_count, 4);
        let lifted = lift_solution(&r, &solved.plan).unwrap().unwrap();
        assert_eq!(lifted, vec![0, 1]);
    }

    #[test]
    fn lifts_from_b_side() {
        // Three disjoint sets, M = 2. Serve B̃_1..B̃_3 (θ on B̃_3) and Ã_1:
        // A side has one clean set, B side two.
        let lsp = LspInstance::new(3, vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]], 2);
        let r = lsp_to_nkmtp(&lsp, 2).unwrap();
        let theta = r.mapping.theta();
        let plan = ReadPlan::from_assignments([
            (0, vec![1, 2, 3]),
            (3, vec![10, 11, 12]),
            (4, vec![13, 14, 15]),
            (5, vec![16, 17, theta]),
        ]);
        assert!(plan.is_valid_for(&r.nkmtp));
        assert_eq!(lift_solution(&r, &plan).unwrap(), Some(vec![0, 1]));
    }

    #[test]
    fn empty_plan_is_insufficient() {
        let r = lsp_to_nkmtp(&disjoint_pair(), 2).unwrap();
        assert_eq!(lift_solution(&r, &ReadPlan::empty()).unwrap(), None);
    }

    #[test]
    fn extension_doubles() {
        let inst = SwitchInstance::new(5, 3, 3, vec![vec![1, 2, 3], vec![2, 4, 5], vec![3, 4, 5]]);
        let (ext, target) = extend_n(&inst, 1).unwrap();
        assert_eq!((ext.n, ext.num_packets(), target), (4, 6, 2));
        assert!(ext.validate().is_ok());
        let (ext2, target2) = extend_n(&ext, target).unwrap();
        assert_eq!((ext2.n, ext2.num_packets(), target2), (5, 12, 4));

        let single = SwitchInstance::new(3, 3, 3, vec![vec![1, 2, 3]]);
        let (ext, _) = extend_n(&single, 1).unwrap();
        let shared: BTreeSet<_> = ext.packets[0].iter().filter(|u| ext.packets[1].contains(u)).collect();
        assert_eq!(shared.len(), 1);
    }
}
