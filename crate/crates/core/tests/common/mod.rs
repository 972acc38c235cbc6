//! Brute-force oracles, deliberately free of the library's search logic.
#![allow(dead_code)]

use std::collections::BTreeMap;

use coded_switch::{Coding, SwitchInstance, WritePolicy};
use num_rational::Ratio;
use proptest::prelude::*;

fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in k_subsets(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every read set a packet could use, ignoring other packets.
fn read_options(inst: &SwitchInstance, packet: usize) -> Vec<Vec<usize>> {
    match &inst.coding {
        Coding::Mds => k_subsets(&inst.packets[packet], inst.k),
        Coding::Replication { groups } => {
            let mut out = vec![vec![]];
            for g in &groups[packet] {
                out = out
                    .into_iter()
                    .flat_map(|acc: Vec<usize>| {
                        g.iter().map(move |&u| {
                            let mut next = acc.clone();
                            next.push(u);
                            next
                        })
                    })
                    .collect();
            }
            out
        }
    }
}

/// `L*` by trying every combination of per-packet read sets.
pub fn brute_force_lstar(inst: &SwitchInstance) -> usize {
    let options: Vec<Vec<Vec<usize>>> = (0..inst.num_packets()).map(|p| read_options(inst, p)).collect();
    fn go(options: &[Vec<Vec<usize>>], used: &mut Vec<bool>, served: usize) -> usize {
        let Some((first, rest)) = options.split_first() else {
            return served;
        };
        let mut best = go(rest, used, served);
        for opt in first {
            if opt.iter().all(|&u| !used[u]) {
                opt.iter().for_each(|&u| used[u] = true);
                best = best.max(go(rest, used, served + 1));
                opt.iter().for_each(|&u| used[u] = false);
            }
        }
        best
    }
    go(&options, &mut vec![false; inst.n_units + 1], 0)
}

/// Exact `u_m` by listing all ordered `w`-tuples of `n`-subsets.
pub fn enumerate_union(w: usize, n: usize, n_units: usize) -> Vec<Ratio<i64>> {
    let subsets = k_subsets(&(1..=n_units).collect::<Vec<_>>(), n);
    let mut counts = vec![0i64; n_units + 1];
    let mut total = 0i64;
    fn go(subsets: &[Vec<usize>], left: usize, acc: u64, counts: &mut [i64], total: &mut i64) {
        if left == 0 {
            counts[acc.count_ones() as usize] += 1;
            *total += 1;
            return;
        }
        for s in subsets {
            let m = s.iter().fold(acc, |a, &u| a | 1 << u);
            go(subsets, left - 1, m, counts, total);
        }
    }
    go(&subsets, w, 0, &mut counts, &mut total);
    counts.into_iter().map(|c| Ratio::new(c, total)).collect()
}

/// Largest number of pairwise disjoint sets.
pub fn brute_force_packing(sets: &[Vec<u64>]) -> usize {
    let l = sets.len();
    (0u32..1 << l)
        .filter(|mask| {
            let chosen: Vec<&Vec<u64>> = (0..l).filter(|i| mask & (1 << i) != 0).map(|i| &sets[i]).collect();
            let mut seen = BTreeMap::new();
            chosen.iter().flat_map(|s| s.iter()).all(|e| seen.insert(*e, ()).is_none())
        })
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

pub fn subset_strategy(n_units: usize, n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::sample::subsequence((1..=n_units).collect::<Vec<_>>(), n)
}

/// Unrestricted MDS instances with `N <= max_units`, `L <= max_packets`.
pub fn unrestricted(
    k_range: std::ops::RangeInclusive<usize>,
    n_max: usize,
    max_units: usize,
    max_packets: usize,
) -> impl Strategy<Value = SwitchInstance> {
    k_range
        .prop_flat_map(move |k| (Just(k), k.max(1)..=n_max))
        .prop_flat_map(move |(k, n)| (Just(k), Just(n), n..=max_units))
        .prop_flat_map(move |(k, n, big_n)| {
            (Just(k), Just(n), Just(big_n), proptest::collection::vec(subset_strategy(big_n, n), 0..=max_packets))
        })
        .prop_map(|(k, n, big_n, packets)| SwitchInstance::new(big_n, k, n, packets))
}

pub fn consecutive(max_n: usize, max_units: usize, max_packets: usize) -> impl Strategy<Value = SwitchInstance> {
    (1..=max_n)
        .prop_flat_map(move |n| (1..=n, Just(n), n..=max_units))
        .prop_flat_map(move |(k, n, big_n)| {
            let start = 1..=big_n - n + 1;
            (Just(k), Just(n), Just(big_n), proptest::collection::vec(start, 0..=max_packets))
        })
        .prop_map(|(k, n, big_n, starts)| {
            let packets = starts.into_iter().map(|s| (s..s + n).collect()).collect();
            SwitchInstance::with_policy(big_n, k, n, packets, WritePolicy::Consecutive, Coding::Mds)
        })
}
