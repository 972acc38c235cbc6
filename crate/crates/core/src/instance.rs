//! Switch instances: code parameters, write policy and packet placement.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How packets are allowed to be placed on the MUs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WritePolicy {
    /// Any `n` distinct MUs.
    Unrestricted,
    /// A run of `n` consecutive MUs (no wrap-around).
    Consecutive,
    /// One of the `N / n` aligned blocks of `n` MUs.
    Blocks,
}

impl fmt::Display for WritePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WritePolicy::Unrestricted => "unrestricted",
            WritePolicy::Consecutive => "consecutive",
            WritePolicy::Blocks => "blocks",
        })
    }
}

/// Coding scheme, seen purely as a read constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coding {
    /// Any `k` of the `n` chunks recover the packet.
    Mds,
    /// Each of the `k` data chunks is stored `n / k` times. `groups[i]` lists
    /// the `k` replica groups of packet `i`; a read takes one MU per group.
    Replication { groups: Vec<Vec<Vec<usize>>> },
}

impl Coding {
    pub fn is_mds(&self) -> bool {
        matches!(self, Coding::Mds)
    }

    /// Replica groups of one packet, if replicated.
    pub fn packet_groups(&self, packet: usize) -> Option<&[Vec<usize>]> {
        match self {
            Coding::Mds => None,
            Coding::Replication { groups } => groups.get(packet).map(Vec::as_slice),
        }
    }
}

/// One nkMTP instance.
///
/// Construction does not validate; call [`SwitchInstance::validate`] or
/// [`SwitchInstance::ensure_valid`]. Packet sets are stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SwitchInstance {
    pub n_units: usize,
    pub k: usize,
    pub n: usize,
    pub packets: Vec<Vec<usize>>,
    pub write_policy: WritePolicy,
    pub coding: Coding,
}

impl SwitchInstance {
    pub fn new(n_units: usize, k: usize, n: usize, packets: Vec<Vec<usize>>) -> Self {
        Self::with_policy(n_units, k, n, packets, WritePolicy::Unrestricted, Coding::Mds)
    }

    pub fn with_policy(
        n_units: usize,
        k: usize,
        n: usize,
        mut packets: Vec<Vec<usize>>,
        write_policy: WritePolicy,
        mut coding: Coding,
    ) -> Self {
        for set in &mut packets {
            set.sort_unstable();
        }
        if let Coding::Replication { groups } = &mut coding {
            for packet in groups.iter_mut() {
                for group in packet.iter_mut() {
                    group.sort_unstable();
                }
            }
        }
        SwitchInstance { n_units, k, n, packets, write_policy, coding }
    }

    /// Same placement with a different `k`.
    pub fn with_k(&self, k: usize) -> Self {
        SwitchInstance { k, ..self.clone() }
    }

    pub fn num_packets(&self) -> usize {
        self.packets.len()
    }

    /// `floor(N / k)`, the most packets any plan can serve.
    pub fn unit_cap(&self) -> usize {
        self.n_units.checked_div(self.k).unwrap_or(usize::MAX)
    }

    /// `min(L, floor(N / k))`.
    pub fn trivial_upper_bound(&self) -> usize {
        self.num_packets().min(self.unit_cap())
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut global = |kind, message: String| {
            violations.push(Violation { packet: None, kind, message });
        };
        if self.n_units == 0 {
            global(ViolationKind::Parameters, "N must be at least 1".into());
        }
        if self.k == 0 {
            global(ViolationKind::Parameters, "k must be at least 1".into());
        }
        if self.k > self.n {
            global(ViolationKind::Parameters, "k exceeds n".into());
        }
        if self.n > self.n_units {
            global(ViolationKind::Parameters, "n exceeds N".into());
        }
        let blocks_ok = self.n > 0 && self.n_units.is_multiple_of(self.n);
        if self.write_policy == WritePolicy::Blocks && !blocks_ok {
            global(ViolationKind::Parameters, "blocks policy requires n to divide N".into());
        }
        if let Coding::Replication { groups } = &self.coding {
            if self.k == 0 || !self.n.is_multiple_of(self.k) {
                global(ViolationKind::Parameters, "replication requires k to divide n".into());
            }
            if groups.len() != self.packets.len() {
                global(
                    ViolationKind::Parameters,
                    format!(
                        "replication lists groups for {} packets, instance has {}",
                        groups.len(),
                        self.packets.len()
                    ),
                );
            }
        }

        for (idx, set) in self.packets.iter().enumerate() {
            let mut push = |kind, message: String| {
                violations.push(Violation { packet: Some(idx), kind, message });
            };
            let id = idx + 1;
            if set.len() != self.n {
                push(ViolationKind::Cardinality, format!("|S_{id}| ≠ n"));
            }
            if set.iter().any(|&u| u == 0 || u > self.n_units) {
                push(ViolationKind::OutOfRange, format!("S_{id} has an MU index outside 1..N"));
            }
            if set.windows(2).any(|w| w[0] == w[1]) {
                push(ViolationKind::Duplicate, format!("S_{id} repeats an MU"));
            }
            let consecutive = set.windows(2).all(|w| w[1] == w[0] + 1);
            match self.write_policy {
                WritePolicy::Unrestricted => {}
                WritePolicy::Consecutive => {
                    if !consecutive {
                        push(ViolationKind::NotConsecutive, "not consecutive".into());
                    }
                }
                WritePolicy::Blocks => {
                    let aligned = consecutive
                        && set.len() == self.n
                        && blocks_ok
                        && set.first().is_some_and(|&first| (first - 1) % self.n == 0);
                    if !aligned {
                        push(ViolationKind::NotBlockAligned, "not an aligned block".into());
                    }
                }
            }
            if let Some(packet_groups) = self.coding.packet_groups(idx) {
                check_groups(self, set, packet_groups, &mut push);
            }
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(report))
        }
    }
}

fn check_groups(
    inst: &SwitchInstance,
    set: &[usize],
    groups: &[Vec<usize>],
    push: &mut impl FnMut(ViolationKind, String),
) {
    if groups.len() != inst.k {
        push(ViolationKind::Groups, format!("{} replica groups, expected k = {}", groups.len(), inst.k));
    }
    if inst.k > 0 && inst.n.is_multiple_of(inst.k) {
        let size = inst.n / inst.k;
        if groups.iter().any(|g| g.len() != size) {
            push(ViolationKind::Groups, format!("replica group size ≠ n/k = {size}"));
        }
    }
    let mut seen = BTreeSet::new();
    let mut overlap = false;
    for &u in groups.iter().flatten() {
        overlap |= !seen.insert(u);
    }
    if overlap {
        push(ViolationKind::Groups, "replica groups overlap".into());
    }
    if !seen.iter().copied().eq(set.iter().copied()) {
        push(ViolationKind::Groups, "replica groups do not cover exactly S_i".into());
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Parameters,
    Cardinality,
    OutOfRange,
    Duplicate,
    NotConsecutive,
    NotBlockAligned,
    Groups,
}

/// A failed instance rule. `packet` is the 0-based packet position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub packet: Option<usize>,
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.packet {
            Some(p) => write!(f, "packet {}: {}", p + 1, self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> SwitchInstance {
        SwitchInstance::new(5, 2, 3, vec![vec![1, 2, 3], vec![2, 4, 5], vec![3, 4, 5]])
    }

    #[test]
    fn example1_is_valid() {
        assert!(example1().validate().is_ok());
    }

    #[test]
    fn short_packet_is_reported() {
        let mut inst = example1();
        inst.packets[0] = vec![1, 2];
        let report = inst.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].to_string(), "packet 1: |S_1| ≠ n");
    }

    #[test]
    fn gap_breaks_consecutive_policy() {
        let mut inst = example1();
        inst.write_policy = WritePolicy::Consecutive;
        inst.packets = vec![vec![1, 3, 4], vec![2, 3, 4], vec![3, 4, 5]];
        let report = inst.validate();
        assert_eq!(report.to_string(), "packet 1: not consecutive");
    }

    #[test]
    fn blocks_must_be_aligned() {
        let inst = SwitchInstance::with_policy(
            8,
            2,
            4,
            vec![vec![1, 2, 3, 4], vec![2, 3, 4, 5]],
            WritePolicy::Blocks,
            Coding::Mds,
        );
        let report = inst.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].packet, Some(1));
        assert_eq!(report.violations[0].kind, ViolationKind::NotBlockAligned);
    }

    #[test]
    fn parameter_rules() {
        let inst = SwitchInstance::new(5, 4, 3, vec![]);
        assert_eq!(inst.validate().to_string(), "k exceeds n");
        let inst = SwitchInstance::new(5, 1, 3, vec![vec![0, 1, 9]]);
        assert_eq!(inst.validate().violations[0].kind, ViolationKind::OutOfRange);
        let inst = SwitchInstance::new(5, 1, 3, vec![vec![1, 1, 2]]);
        assert_eq!(inst.validate().violations[0].kind, ViolationKind::Duplicate);
    }

    #[test]
    fn replication_groups() {
        let good = SwitchInstance::with_policy(
            4,
            2,
            4,
            vec![vec![1, 2, 3, 4]],
            WritePolicy::Unrestricted,
            Coding::Replication { groups: vec![vec![vec![1, 2], vec![3, 4]]] },
        );
        assert!(good.validate().is_ok());

        let mut bad = good.clone();
        bad.coding = Coding::Replication { groups: vec![vec![vec![1, 2], vec![2, 4]]] };
        let kinds: Vec<_> = bad.validate().violations.iter().map(|v| v.kind).collect();
        assert!(kinds.iter().all(|&k| k == ViolationKind::Groups));
        assert_eq!(kinds.len(), 2);

        let mut odd = good;
        odd.k = 3;
        odd.coding = Coding::Replication { groups: vec![vec![vec![1, 2], vec![3, 4]]] };
        assert!(odd.validate().violations.iter().any(|v| v.message.contains("k to divide n")));
    }

    #[test]
    fn empty_instance_is_valid() {
        assert!(SwitchInstance::new(4, 1, 2, vec![]).validate().is_ok());
    }
}
