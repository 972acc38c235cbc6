use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Coding, SwitchInstance, WritePolicy};

/// Coding scheme of generated instances; replica groups are derived from the
/// placement.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodingKind {
    #[default]
    Mds,
    Replication,
}

pub fn check_parameters(n_units: usize, k: usize, n: usize, policy: WritePolicy, coding: CodingKind) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidParameters(msg));
    if k == 0 || k > n || n > n_units {
        return bad(format!("need 1 <= k <= n <= N, got k = {k}, n = {n}, N = {n_units}"));
    }
    if policy == WritePolicy::Blocks && !n_units.is_multiple_of(n) {
        return bad(format!("blocks policy needs n | N, got n = {n}, N = {n_units}"));
    }
    if coding == CodingKind::Replication && !n.is_multiple_of(k) {
        return bad(format!("replication needs k | n, got k = {k}, n = {n}"));
    }
    Ok(())
}

/// Uniform `n`-subset of `1..=N` by a partial Fisher-Yates shuffle, sorted.
pub fn random_subset<R: Rng + ?Sized>(n_units: usize, n: usize, rng: &mut R) -> Vec<usize> {
    let mut pool: Vec<usize> = (1..=n_units).collect();
    for i in 0..n {
        let j = rng.random_range(i..n_units);
        pool.swap(i, j);
    }
    pool.truncate(n);
    pool.sort_unstable();
    pool
}

fn random_placement<R: Rng + ?Sized>(n_units: usize, n: usize, policy: WritePolicy, rng: &mut R) -> Vec<usize> {
    match policy {
        WritePolicy::Unrestricted => random_subset(n_units, n, rng),
        WritePolicy::Consecutive => {
            let start = rng.random_range(1..=n_units - n + 1);
            (start..start + n).collect()
        }
        WritePolicy::Blocks => {
            let start = rng.random_range(0..n_units / n) * n + 1;
            (start..start + n).collect()
        }
    }
}

/// Splits a sorted placement into `k` contiguous replica groups.
pub fn replica_groups(placement: &[usize], k: usize) -> Vec<Vec<usize>> {
    placement.chunks(placement.len() / k).map(<[usize]>::to_vec).collect()
}

/// The same placement read under replication coding.
pub fn as_replicated(inst: &SwitchInstance) -> SwitchInstance {
    let groups = inst.packets.iter().map(|p| replica_groups(p, inst.k)).collect();
    SwitchInstance { coding: Coding::Replication { groups }, ..inst.clone() }
}

/// `L` packets placed independently under `policy`. Identical placements are
/// possible.
pub fn random_instance<R: Rng + ?Sized>(
    n_units: usize,
    k: usize,
    n: usize,
    l: usize,
    policy: WritePolicy,
    coding: CodingKind,
    rng: &mut R,
) -> Result<SwitchInstance> {
    check_parameters(n_units, k, n, policy, coding)?;
    let packets = (0..l).map(|_| random_placement(n_units, n, policy, rng)).collect();
    let inst = SwitchInstance::with_policy(n_units, k, n, packets, policy, Coding::Mds);
    Ok(match coding {
        CodingKind::Mds => inst,
        CodingKind::Replication => as_replicated(&inst),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::sample_rng;
    use std::collections::BTreeMap;

    #[test]
    fn blocks_are_aligned() {
        let mut rng = sample_rng(11, 0);
        let inst = random_instance(16, 2, 4, 50, WritePolicy::Blocks, CodingKind::Mds, &mut rng).unwrap();
        for p in &inst.packets {
            assert!([1, 5, 9, 13].contains(&p[0]));
        }
        assert!(inst.validate().is_ok());
    }

    #[test]
    fn consecutive_windows_are_uniform() {
        let mut rng = sample_rng(12, 0);
        let inst = random_instance(5, 2, 3, 30_000, WritePolicy::Consecutive, CodingKind::Mds, &mut rng).unwrap();
        let mut counts = BTreeMap::new();
        for p in &inst.packets {
            *counts.entry(p[0]).or_insert(0usize) += 1;
        }
        assert_eq!(counts.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
        for &c in counts.values() {
            // 10,000 expected, sd about 82
            assert!((c as i64 - 10_000).abs() < 500, "{counts:?}");
        }
    }

    #[test]
    fn subsets_are_uniform() {
        let mut rng = sample_rng(13, 0);
        let mut counts = BTreeMap::new();
        for _ in 0..60_000 {
            *counts.entry(random_subset(4, 2, &mut rng)).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        for &c in counts.values() {
            assert!((c as i64 - 10_000).abs() < 500, "{counts:?}");
        }
    }

    #[test]
    fn seeded_generation_is_repeatable() {
        let a =
            random_instance(16, 2, 4, 8, WritePolicy::Unrestricted, CodingKind::Mds, &mut sample_rng(4, 2)).unwrap();
        let b =
            random_instance(16, 2, 4, 8, WritePolicy::Unrestricted, CodingKind::Mds, &mut sample_rng(4, 2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn replication_groups_follow_sorted_placement() {
        let inst =
            random_instance(16, 2, 4, 5, WritePolicy::Unrestricted, CodingKind::Replication, &mut sample_rng(1, 1))
                .unwrap();
        assert!(inst.validate().is_ok());
        for (p, groups) in inst.packets.iter().zip(match &inst.coding {
            Coding::Replication { groups } => groups,
            Coding::Mds => unreachable!(),
        }) {
            assert_eq!(groups[0], p[..2].to_vec());
            assert_eq!(groups[1], p[2..].to_vec());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut rng = sample_rng(0, 0);
        assert!(random_instance(10, 2, 4, 1, WritePolicy::Blocks, CodingKind::Mds, &mut rng).is_err());
        assert!(random_instance(12, 3, 4, 1, WritePolicy::Unrestricted, CodingKind::Replication, &mut rng).is_err());
        assert!(random_instance(3, 2, 4, 1, WritePolicy::Unrestricted, CodingKind::Mds, &mut rng).is_err());
    }
}
