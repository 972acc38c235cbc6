//! Polynomial cases: `k = 1` is bipartite matching between packets and MUs;
//! `k = n = 2` is general matching on the MU graph with one edge per packet.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::instance::SwitchInstance;
use crate::plan::ReadPlan;
use crate::solvers::{SolveResult, SolverTag};

const UNMATCHED: usize = usize::MAX;

/// Hopcroft-Karp. `adj[left]` lists right vertices in `0..n_right`.
/// Returns the partner of every left vertex, or `None`.
pub fn maximum_bipartite_matching(adj: &[Vec<usize>], n_right: usize) -> Vec<Option<usize>> {
    let n_left = adj.len();
    let mut match_left = vec![UNMATCHED; n_left];
    let mut match_right = vec![UNMATCHED; n_right];
    let mut dist = vec![0usize; n_left];

    loop {
        // BFS layers from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if match_left[u] == UNMATCHED {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_right[v];
                if w == UNMATCHED {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        for u in 0..n_left {
            if match_left[u] == UNMATCHED {
                augment(u, adj, &mut match_left, &mut match_right, &mut dist);
            }
        }
    }
    match_left.into_iter().map(|v| (v != UNMATCHED).then_some(v)).collect()
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &v in &adj[u] {
        let w = match_right[v];
        let ok = w == UNMATCHED || (dist[w] == dist[u] + 1 && augment(w, adj, match_left, match_right, dist));
        if ok {
            match_left[u] = v;
            match_right[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}

/// Edmonds' blossom algorithm on an undirected graph with `n` vertices.
/// Returns `mate[v]` for every vertex.
pub fn maximum_general_matching(n: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let mut blossom = Blossom::new(adj);
    for root in 0..n {
        if blossom.mate[root] == UNMATCHED {
            blossom.grow(root);
        }
    }
    blossom.mate.into_iter().map(|v| (v != UNMATCHED).then_some(v)).collect()
}

struct Blossom {
    adj: Vec<Vec<usize>>,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
}

impl Blossom {
    fn new(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        Blossom {
            adj,
            mate: vec![UNMATCHED; n],
            parent: vec![UNMATCHED; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == UNMATCHED {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Searches an augmenting path from `root` and applies it.
    fn grow(&mut self, root: usize) {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = UNMATCHED);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != UNMATCHED && self.parent[self.mate[to]] != UNMATCHED) {
                    let cur_base = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur_base, to);
                    self.mark_path(to, cur_base, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur_base;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == UNMATCHED {
                    self.parent[to] = v;
                    if self.mate[to] == UNMATCHED {
                        self.flip(to);
                        return;
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    queue.push_back(next);
                }
            }
        }
    }

    fn flip(&mut self, mut v: usize) {
        while v != UNMATCHED {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }
}

/// `k = 1`: every served packet reads one chunk, so a maximum matching between
/// packets and MUs is optimal.
pub fn solve_k1_matching(inst: &SwitchInstance) -> Result<SolveResult> {
    if inst.k != 1 {
        return Err(Error::SolverNotApplicable { solver: "matching_k1", reason: format!("k = {}", inst.k) });
    }
    inst.ensure_valid()?;
    let adj: Vec<Vec<usize>> = inst.packets.iter().map(|s| s.iter().map(|&u| u - 1).collect()).collect();
    let matching = maximum_bipartite_matching(&adj, inst.n_units);
    let plan =
        ReadPlan::from_assignments(matching.into_iter().enumerate().filter_map(|(p, v)| v.map(|v| (p, vec![v + 1]))));
    Ok(SolveResult::new(plan, SolverTag::MatchingK1))
}

/// `k = n = 2`: each packet is an edge between its two MUs; a maximum matching
/// of that multigraph picks disjoint MU pairs. Parallel edges resolve to the
/// lowest packet id.
pub fn solve_k2n2_matching(inst: &SwitchInstance) -> Result<SolveResult> {
    if inst.k != 2 || inst.n != 2 {
        return Err(Error::SolverNotApplicable {
            solver: "matching_k2n2",
            reason: format!("(k, n) = ({}, {})", inst.k, inst.n),
        });
    }
    inst.ensure_valid()?;
    let mut first_packet: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (p, s) in inst.packets.iter().enumerate() {
        first_packet.entry((s[0] - 1, s[1] - 1)).or_insert(p);
    }
    let edges: Vec<(usize, usize)> = first_packet.keys().copied().collect();
    let mate = maximum_general_matching(inst.n_units, &edges);
    let plan = ReadPlan::from_assignments(mate.iter().enumerate().filter_map(|(a, m)| {
        let b = (*m)?;
        (a < b).then(|| (first_packet[&(a, b)], vec![a + 1, b + 1]))
    }));
    Ok(SolveResult::new(plan, SolverTag::MatchingK2n2))
}
