//! Bipartite packet/MU view of an instance.

use crate::instance::SwitchInstance;

/// Packets on one side, MUs on the other; packet `i` is adjacent to MU `j`
/// when one of its chunks sits on `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    /// Sorted MU indices per packet.
    packet_units: Vec<Vec<usize>>,
    /// Sorted packet positions per MU, indexed by `mu - 1`.
    unit_packets: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn from_instance(inst: &SwitchInstance) -> Self {
        Self::from_sets(inst.n_units, &inst.packets)
    }

    pub fn from_sets(n_units: usize, sets: &[Vec<usize>]) -> Self {
        let mut unit_packets = vec![Vec::new(); n_units];
        let packet_units: Vec<Vec<usize>> = sets
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.sort_unstable();
                s
            })
            .collect();
        for (p, units) in packet_units.iter().enumerate() {
            for &u in units {
                unit_packets[u - 1].push(p);
            }
        }
        BipartiteGraph { packet_units, unit_packets }
    }

    pub fn num_packets(&self) -> usize {
        self.packet_units.len()
    }

    pub fn num_units(&self) -> usize {
        self.unit_packets.len()
    }

    pub fn edge_count(&self) -> usize {
        self.packet_units.iter().map(Vec::len).sum()
    }

    pub fn packet_units(&self, packet: usize) -> &[usize] {
        &self.packet_units[packet]
    }

    pub fn unit_packets(&self, unit: usize) -> &[usize] {
        &self.unit_packets[unit - 1]
    }

    /// Number of packets stored on MU `unit`.
    pub fn unit_degree(&self, unit: usize) -> usize {
        self.unit_packets[unit - 1].len()
    }

    /// `d_{i,j}` for every MU `j` of packet `i`, in MU order.
    pub fn packet_unit_degrees(&self, packet: usize) -> Vec<usize> {
        self.packet_units[packet].iter().map(|&u| self.unit_degree(u)).collect()
    }

    /// Packet sets rebuilt from the adjacency lists.
    pub fn packet_sets(&self) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); self.num_packets()];
        for (u, packets) in self.unit_packets.iter().enumerate() {
            for &p in packets {
                sets[p].push(u + 1);
            }
        }
        sets
    }
}

/// `to_bipartite_graph`.
pub fn to_bipartite_graph(inst: &SwitchInstance) -> BipartiteGraph {
    BipartiteGraph::from_instance(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn example1_degrees() {
        let inst = SwitchInstance::new(5, 2, 3, vec![vec![1, 2, 3], vec![2, 4, 5], vec![3, 4, 5]]);
        let g = to_bipartite_graph(&inst);
        let degrees: Vec<_> = (1..=5).map(|u| g.unit_degree(u)).collect();
        assert_eq!(degrees, vec![1, 2, 2, 2, 2]);
        assert_eq!(g.edge_count(), 9);
        assert_eq!(g.packet_unit_degrees(0), vec![1, 2, 2]);
    }

    #[test]
    fn star_and_stack() {
        let g = to_bipartite_graph(&SwitchInstance::new(6, 1, 3, vec![vec![2, 4, 6]]));
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.unit_degree(4), 1);
        assert_eq!(g.unit_degree(1), 0);

        let g = to_bipartite_graph(&SwitchInstance::new(4, 1, 2, vec![vec![1, 2]; 5]));
        assert_eq!(g.unit_degree(1), 5);
        assert_eq!(g.unit_degree(2), 5);
        assert_eq!(g.unit_degree(3), 0);
    }

    proptest! {
        #[test]
        fn adjacency_round_trips(
            (n_units, sets) in (3usize..12).prop_flat_map(|n_units| {
                let set = proptest::sample::subsequence((1..=n_units).collect::<Vec<_>>(), 3);
                (Just(n_units), proptest::collection::vec(set, 0..8))
            })
        ) {
            let inst = SwitchInstance::new(n_units, 1, 3, sets);
            let g = to_bipartite_graph(&inst);
            prop_assert_eq!(g.edge_count(), 3 * inst.num_packets());
            prop_assert_eq!(g.packet_sets(), inst.packets.clone());
        }
    }
}
