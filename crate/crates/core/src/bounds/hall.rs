use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

/// Largest packet count [`hall_all_subsets_check`] will enumerate.
pub const HALL_SUBSET_LIMIT: usize = 20;

/// `|T(W)| >= k |W|`, with `T(W)` the MUs adjacent to the packets in `W`.
pub fn hall_condition_check(graph: &BipartiteGraph, packets: &[usize], k: usize) -> bool {
    let mut covered = vec![false; graph.num_units() + 1];
    let mut distinct: Vec<usize> = packets.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut size = 0;
    for &p in &distinct {
        for &u in graph.packet_units(p) {
            if !covered[u] {
                covered[u] = true;
                size += 1;
            }
        }
    }
    size >= k * distinct.len()
}

/// Whether every packet subset satisfies the Hall condition, which holds
/// exactly when all packets can be served at once.
pub fn hall_all_subsets_check(graph: &BipartiteGraph, k: usize) -> Result<bool> {
    let l = graph.num_packets();
    if l > HALL_SUBSET_LIMIT {
        return Err(Error::TooLarge { what: "Hall subset enumeration", limit: HALL_SUBSET_LIMIT, got: l });
    }
    let mut cover = vec![0u32; graph.num_units() + 1];
    Ok(extend(graph, k, 0, 0, 0, &mut cover))
}

/// Visits every subset once, as the set extended by its largest member.
fn extend(graph: &BipartiteGraph, k: usize, from: usize, chosen: usize, size: usize, cover: &mut [u32]) -> bool {
    for p in from..graph.num_packets() {
        let mut grown = size;
        for &u in graph.packet_units(p) {
            if cover[u] == 0 {
                grown += 1;
            }
            cover[u] += 1;
        }
        let ok = grown >= k * (chosen + 1) && extend(graph, k, p + 1, chosen + 1, grown, cover);
        for &u in graph.packet_units(p) {
            cover[u] -= 1;
        }
        if !ok {
            return false;
        }
    }
    true
}
