//! Fixed-width MU bitsets. Bit `j - 1` stands for MU `j`.

pub(crate) type UnitMask = u128;

pub(crate) const MAX_MASK_UNITS: usize = 128;

pub(crate) fn from_units(units: &[usize]) -> UnitMask {
    units.iter().fold(0, |acc, &u| acc | bit(u))
}

#[inline]
pub(crate) fn bit(unit: usize) -> UnitMask {
    1u128 << (unit - 1)
}

pub(crate) fn units(mut mask: UnitMask) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize + 1);
        mask &= mask - 1;
    }
    out
}

/// The `count` lowest set bits of `mask`.
pub(crate) fn lowest(mut mask: UnitMask, count: usize) -> UnitMask {
    let mut out = 0;
    for _ in 0..count {
        if mask == 0 {
            break;
        }
        let low = mask & mask.wrapping_neg();
        out |= low;
        mask ^= low;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_lowest() {
        let m = from_units(&[1, 5, 7, 128]);
        assert_eq!(units(m), vec![1, 5, 7, 128]);
        assert_eq!(units(lowest(m, 2)), vec![1, 5]);
        assert_eq!(lowest(m, 9), m);
    }
}
