use num_complex::Complex64;

use crate::graph::BipartiteGraph;
use crate::instance::{Coding, SwitchInstance};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketReadProbability {
    pub packet: usize,
    pub q: f64,
}

/// `Pr(sum of independent Bernoulli(p_j) >= k)` by sequential convolution of
/// the success-count distribution.
pub fn poisson_binomial_tail<T: Scalar>(probs: &[T], k: usize) -> T {
    if k == 0 {
        return T::one();
    }
    if k > probs.len() {
        return T::zero();
    }
    // pmf[t] = Pr(exactly t successes so far)
    let mut pmf = vec![T::zero(); probs.len() + 1];
    pmf[0] = T::one();
    for (seen, p) in probs.iter().enumerate() {
        let q = T::one() - p.clone();
        for t in (0..=seen + 1).rev() {
            let stay = pmf[t].clone() * q.clone();
            let step = if t > 0 { pmf[t - 1].clone() * p.clone() } else { T::zero() };
            pmf[t] = stay + step;
        }
    }
    pmf[k..].iter().cloned().fold(T::zero(), |acc, x| acc + x)
}

/// The same tail through the discrete Fourier transform of the
/// characteristic function:
///
/// `1 - 1/(n+1) * sum_{s=0..n} [sum_{t<k} e^{-i 2 pi s t/(n+1)}] * prod_j [p_j e^{i 2 pi s/(n+1)} + 1 - p_j]`
pub fn poisson_binomial_tail_dft(probs: &[f64], k: usize) -> f64 {
    let n = probs.len();
    if k == 0 {
        return 1.0;
    }
    if k > n {
        return 0.0;
    }
    let m = (n + 1) as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for s in 0..=n {
        let omega = 2.0 * std::f64::consts::PI * s as f64 / m;
        let head: Complex64 = (0..k).map(|t| Complex64::from_polar(1.0, -omega * t as f64)).sum();
        let z = Complex64::from_polar(1.0, omega);
        let char_fn: Complex64 = probs.iter().map(|&p| z * p + (1.0 - p)).product();
        total += head * char_fn;
    }
    1.0 - total.re / m
}

fn success_probs<T: Scalar>(graph: &BipartiteGraph, units: &[usize]) -> Vec<T> {
    units.iter().map(|&u| T::ratio(1, graph.unit_degree(u) as u64)).collect()
}

/// `Q(i)` for an MDS-coded packet: the chance that at least `k` of its MUs pick
/// it when every MU picks one of its packets uniformly.
pub fn q_packet<T: Scalar>(graph: &BipartiteGraph, packet: usize, k: usize) -> T {
    let units = graph.packet_units(packet);
    if k > units.len() {
        log::warn!("q_packet: k = {k} exceeds n = {} for packet {}", units.len(), packet + 1);
        return T::zero();
    }
    poisson_binomial_tail(&success_probs::<T>(graph, units), k)
}

/// Double-precision `Q(i)`, cross-checked against the Fourier form.
pub fn packet_read_probability(graph: &BipartiteGraph, packet: usize, k: usize) -> PacketReadProbability {
    let q = q_packet::<f64>(graph, packet, k);
    debug_assert!({
        let probs = success_probs::<f64>(graph, graph.packet_units(packet));
        k > probs.len() || (poisson_binomial_tail_dft(&probs, k) - q).abs() < 1e-9
    });
    PacketReadProbability { packet, q }
}

/// Probability that a replicated packet gets at least one MU in every group.
fn q_replicated<T: Scalar>(graph: &BipartiteGraph, groups: &[Vec<usize>]) -> T {
    groups.iter().fold(T::one(), |acc, group| {
        let miss = success_probs::<T>(graph, group).into_iter().fold(T::one(), |m, p| m * (T::one() - p));
        acc * (T::one() - miss)
    })
}

/// `sum_i Q(i)`, the expected number of packets the random assignment makes
/// readable, which lower-bounds `L*`.
pub fn lower_bound_expected<T: Scalar>(inst: &SwitchInstance) -> T {
    let graph = BipartiteGraph::from_instance(inst);
    (0..inst.num_packets()).fold(T::zero(), |acc, p| {
        let q = match &inst.coding {
            Coding::Mds => q_packet::<T>(&graph, p, inst.k),
            Coding::Replication { groups } => q_replicated::<T>(&graph, &groups[p]),
        };
        acc + q
    })
}
