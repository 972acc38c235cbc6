use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Distribution of `|A_1 ∪ ... ∪ A_w|` for `w` independent uniform `n`-subsets
/// of `{1..N}`. `probs[m]` is `u_m` for `m = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnionSizeDistribution<T> {
    pub w: usize,
    pub n: usize,
    pub n_units: usize,
    pub probs: Vec<T>,
}

impl<T: Scalar> UnionSizeDistribution<T> {
    /// `sum_{m >= from} u_m`.
    pub fn tail(&self, from: usize) -> T {
        self.probs.iter().skip(from).cloned().fold(T::zero(), |a, b| a + b)
    }

    pub fn total(&self) -> T {
        self.tail(0)
    }
}

/// Markov chain on the current union size: one step adds a fresh uniform
/// `n`-subset, which brings `j` new elements with hypergeometric probability
/// `C(N-m, j) C(m, n-j) / C(N, n)`.
pub fn union_size_distribution<T: Scalar>(w: usize, n: usize, n_units: usize) -> Result<UnionSizeDistribution<T>> {
    if n == 0 || n > n_units {
        return Err(Error::InvalidParameters(format!("union size needs 1 <= n <= N, got n = {n}, N = {n_units}")));
    }
    let total = T::binomial(n_units, n);
    // step[m][j]: probability of gaining j new elements from union size m
    let step: Vec<Vec<T>> = (0..=n_units)
        .map(|m| {
            (0..=n)
                .map(|j| {
                    if j > n_units - m || n - j > m {
                        T::zero()
                    } else {
                        T::binomial(n_units - m, j) * T::binomial(m, n - j) / total.clone()
                    }
                })
                .collect()
        })
        .collect();

    let mut probs = vec![T::zero(); n_units + 1];
    probs[0] = T::one();
    for _ in 0..w {
        let mut next = vec![T::zero(); n_units + 1];
        for (m, p) in probs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, t) in step[m].iter().enumerate() {
                if !t.is_zero() {
                    next[m + j] = next[m + j].clone() + p.clone() * t.clone();
                }
            }
        }
        probs = next;
    }
    Ok(UnionSizeDistribution { w, n, n_units, probs })
}

/// `P_{|X_G|}`: probability that `L` uniform `n`-subsets cover at least `kL`
/// MUs. Necessary for serving all `L` packets, so it upper-bounds the
/// probability of full throughput. Zero when `kL > N`.
pub fn hall_full_throughput_upper_bound<T: Scalar>(l: usize, k: usize, n: usize, n_units: usize) -> Result<T> {
    if k > n {
        return Err(Error::InvalidParameters("k exceeds n".into()));
    }
    let dist = union_size_distribution::<T>(l, n, n_units)?;
    let need = k * l;
    if need > n_units {
        return Ok(T::zero());
    }
    Ok(dist.tail(need))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;

    #[test]
    fn single_and_empty_unions() {
        let d = union_size_distribution::<Exact>(1, 3, 7).unwrap();
        for (m, p) in d.probs.iter().enumerate() {
            assert_eq!(*p, if m == 3 { Exact::ratio(1, 1) } else { Exact::ratio(0, 1) });
        }
        let d = union_size_distribution::<Exact>(0, 3, 7).unwrap();
        assert_eq!(d.probs[0], Exact::ratio(1, 1));
        assert_eq!(d.total(), Exact::ratio(1, 1));
    }

    #[test]
    fn two_pairs_in_four() {
        let d = union_size_distribution::<Exact>(2, 2, 4).unwrap();
        assert_eq!(d.probs[2], Exact::ratio(1, 6));
        assert_eq!(d.probs[3], Exact::ratio(4, 6));
        assert_eq!(d.probs[4], Exact::ratio(1, 6));
    }

    #[test]
    fn hall_bound_cases() {
        assert_eq!(hall_full_throughput_upper_bound::<Exact>(2, 2, 2, 4).unwrap(), Exact::ratio(1, 6));
        assert_eq!(hall_full_throughput_upper_bound::<f64>(9, 2, 4, 16).unwrap(), 0.0);
        for l in 0..=6 {
            assert_eq!(hall_full_throughput_upper_bound::<Exact>(l, 1, 6, 6).unwrap(), Exact::ratio(1, 1));
        }
    }

    #[test]
    fn rejects_oversized_sets() {
        assert!(union_size_distribution::<f64>(2, 5, 4).is_err());
        assert!(hall_full_throughput_upper_bound::<f64>(2, 3, 2, 4).is_err());
    }
}
