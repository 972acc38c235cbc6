use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Number type the probability code is written against.
///
/// Implemented for `f32`, `f64` and the `num-rational` ratio types.
pub trait Scalar: Num + Clone + Debug + PartialOrd + FromPrimitive + ToPrimitive + Send + Sync {
    /// `num / den`, exact for rationals.
    fn ratio(num: u64, den: u64) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }

    fn from_count(value: u64) -> Self {
        Self::from_u64(value).expect("count representable in scalar type")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Binomial coefficient `C(a, b)` evaluated in the scalar type.
    fn binomial(a: usize, b: usize) -> Self {
        if b > a {
            return Self::zero();
        }
        let b = b.min(a - b);
        let mut acc = Self::one();
        for i in 1..=b {
            acc = acc * Self::from_count((a - b + i) as u64) / Self::from_count(i as u64);
        }
        acc
    }
}

impl<T> Scalar for T where T: Num + Clone + Debug + PartialOrd + FromPrimitive + ToPrimitive + Send + Sync {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;

    #[test]
    fn binomials_agree_across_types() {
        for a in 0..20 {
            for b in 0..=a + 1 {
                let exact = Exact::binomial(a, b);
                let float = f64::binomial(a, b);
                assert!((exact.to_f64_lossy() - float).abs() < 1e-6 * float.max(1.0));
            }
        }
        assert_eq!(Exact::binomial(6, 3), Exact::from_count(20));
        assert_eq!(f64::binomial(3, 4), 0.0);
    }

    #[test]
    fn ratio_is_exact_for_rationals() {
        let third = Exact::ratio(1, 3);
        assert_eq!(third.clone() + third.clone() + third, Exact::from_count(1));
    }
}
