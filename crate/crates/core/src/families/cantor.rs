//! The middle-thirds construction on `[0, L]` in log space.
//!
//! Everything is exact: stage-`n` of the construction is `2^n` closed
//! intervals of length `L / 3^n` with rational endpoints, and the removed
//! gaps are open intervals enumerated breadth first. The exp image of the
//! limit set is an uncountable set of multiplicative measure exactly `1`,
//! which is the concrete witness for "measure one iff Lebesgue-null".

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::FamilyError;
use crate::intervals::{RealInterval, RealIntervalSet};
use crate::mvalue::{gcd_i128, rat_add_fast, rat_sub_fast, MValue};

/// The log-space Cantor construction with ambient interval `[0, L]`.
#[derive(Clone, Debug)]
pub struct LogCantor {
    log_length: BigRational,
}

impl LogCantor {
    pub fn new(log_length: BigRational) -> Result<Self, FamilyError> {
        if !log_length.is_positive() {
            return Err(FamilyError::NonPositive);
        }
        Ok(LogCantor { log_length })
    }

    pub fn log_length(&self) -> &BigRational {
        &self.log_length
    }

    /// Number of components of stage `n` (`2^n`).
    pub fn stage_component_count(n: u32) -> u64 {
        1u64 << n
    }

    /// The `t`-th (0-based, left to right) component of stage `n` as exact
    /// rational endpoints `(left, left + L/3^n)`.
    ///
    /// Reading the binary digits of `t` as ternary digits `0 -> 0, 1 -> 2`
    /// yields the left endpoint numerator in base 3; for the depths in
    /// practical reach that numerator fits machine words.
    fn component_bounds(&self, n: u32, t: u64) -> (BigRational, BigRational) {
        debug_assert!(n < 64 && t < (1u64 << n));
        let acc = if n <= 80 {
            let mut acc: u128 = 0;
            for bit in (0..n).rev() {
                acc *= 3;
                if t & (1 << bit) != 0 {
                    acc += 2;
                }
            }
            BigInt::from(acc)
        } else {
            let mut acc = BigInt::zero();
            for bit in (0..n).rev() {
                acc *= 3;
                if t & (1 << bit) != 0 {
                    acc += 2;
                }
            }
            acc
        };
        let pow3 = BigRational::from_integer(pow3(n));
        let left = &self.log_length * BigRational::from_integer(acc) / &pow3;
        let width = &self.log_length / pow3;
        let right = &left + width;
        (left, right)
    }

    /// Stream the closed components of stage `n` in increasing order.
    ///
    /// The ternary left-endpoint numerators are maintained incrementally
    /// (a binary increment of the component index turns `k` trailing ones
    /// into zeros, which adds `3^k + 1` to the numerator), so each step is
    /// constant work plus the rational construction.
    pub fn stage_components(&self, n: u32) -> impl Iterator<Item = RealInterval> + '_ {
        assert!(n <= 60, "stage component streams are limited to depth 60");
        use num_traits::ToPrimitive;
        let numer = self.log_length.numer().clone();
        let denom = self.log_length.denom() * pow3(n);
        let small = (numer.to_u64(), denom.to_u64());
        let pow3_table: alloc::vec::Vec<u128> = (0..=n).map(|k| 3u128.pow(k)).collect();
        let mut acc: u128 = 0;
        (0..Self::stage_component_count(n)).map(move |t| {
            let bound = |offset: u128| -> BigRational {
                if let (Some(nu), Some(de)) = small {
                    if let Some(num) = (nu as u128).checked_mul(acc + offset) {
                        return reduced_ratio_u128(num, de as u128);
                    }
                }
                BigRational::new(&numer * BigInt::from(acc + offset), denom.clone())
            };
            let left = bound(0);
            let right = bound(1);
            // Advance to the next component's numerator.
            let carry = (t + 1).trailing_zeros().min(n);
            acc += pow3_table[carry as usize] + 1;
            RealInterval::closed_rat(left, right).expect("stage components are non-empty")
        })
    }

    /// Materialize stage `n`. Component counts grow as `2^n`; prefer the
    /// streaming accessors for large `n`.
    pub fn stage_set(&self, n: u32) -> RealIntervalSet {
        RealIntervalSet::from_components_unchecked(self.stage_components(n).collect())
    }

    /// `mu(exp(stage n))`, accumulated component by component; equals
    /// `exp((2/3)^n L)` exactly.
    pub fn stage_measure(&self, n: u32) -> MValue {
        let mut exponent = BigRational::zero();
        for comp in self.stage_components(n) {
            let (lo, hi) = comp.value_span();
            let (Some(lo), Some(hi)) = (lo, hi) else { unreachable!("stage bounds are finite") };
            let len = log_len(lo, hi);
            exponent = rat_add_fast(&exponent, &len).unwrap_or_else(|| exponent + len);
        }
        MValue::exp_log_unchecked(exponent)
    }

    /// Lebesgue length of stage `n`, accumulated exactly: `(2/3)^n L`.
    pub fn stage_lebesgue_length(&self, n: u32) -> BigRational {
        let mut total = BigRational::zero();
        for comp in self.stage_components(n) {
            let (lo, hi) = comp.value_span();
            let (Some(lo), Some(hi)) = (lo, hi) else { unreachable!("stage bounds are finite") };
            let len = log_len(lo, hi);
            total = rat_add_fast(&total, &len).unwrap_or_else(|| total + len);
        }
        total
    }

    /// Depth of gap `k >= 1` in the breadth-first enumeration: the bit
    /// length of `k`, since depth `d` holds gaps `2^{d-1} .. 2^d - 1`.
    pub fn gap_depth(k: u64) -> u32 {
        debug_assert!(k >= 1);
        64 - k.leading_zeros()
    }

    /// The `k`-th removed gap (`k >= 1`), breadth first and left to right
    /// within each depth: an open interval of length `L / 3^d` at depth `d`.
    pub fn gap(&self, k: u64) -> RealInterval {
        let d = Self::gap_depth(k);
        let t = k - (1u64 << (d - 1)); // 0-based index within depth d
        let (left, right) = self.component_bounds(d - 1, t);
        let third = (&right - &left) / BigRational::from_integer(BigInt::from(3));
        let gap_lo = &left + &third;
        let gap_hi = right - third;
        RealInterval::open_rat(gap_lo, gap_hi).expect("gaps are non-empty")
    }

    /// `mu(exp(gap k))` directly from the depth: `exp(L / 3^d)`.
    pub fn gap_measure(&self, k: u64) -> MValue {
        let d = Self::gap_depth(k);
        let exponent = &self.log_length / BigRational::from_integer(pow3(d));
        MValue::exp_log_unchecked(exponent)
    }

    /// Exact rational total length of the first `n` gaps.
    pub fn covered_by_gaps(&self, n: u64) -> BigRational {
        if n == 0 {
            return BigRational::zero();
        }
        // Complete depths: largest d with 2^d - 1 <= n.
        let complete = 63 - (n + 1).leading_zeros();
        let two_thirds = BigRational::new(BigInt::from(2).pow(complete), pow3(complete));
        let full = &self.log_length * (BigRational::one() - two_thirds);
        let extra = n - ((1u64 << complete) - 1);
        let next_len = &self.log_length / BigRational::from_integer(pow3(complete + 1));
        full + BigRational::from_integer(BigInt::from(extra)) * next_len
    }

    /// Exponent of the exact tail `prod_{k > n} mu(exp(gap k))`, i.e.
    /// `L - covered_by_gaps(n)`.
    pub fn gap_tail_exponent(&self, n: u64) -> BigRational {
        &self.log_length - self.covered_by_gaps(n)
    }

    /// Product of gap measures over all complete depths `<= d`: the exact
    /// value is `exp(L (1 - (2/3)^d))`.
    pub fn gaps_to_depth_product(&self, d: u32) -> MValue {
        let mut exponent = BigRational::zero();
        for k in 1..(1u64 << d) {
            let depth = Self::gap_depth(k);
            exponent += &self.log_length / BigRational::from_integer(pow3(depth));
        }
        MValue::exp_log_unchecked(exponent)
    }
}

/// `3^d`, through `u128` for every depth within practical reach.
fn pow3(d: u32) -> BigInt {
    if d <= 80 {
        BigInt::from(3u128.pow(d))
    } else {
        BigInt::from(3).pow(d)
    }
}

fn log_len(lo: &crate::intervals::LogPoint, hi: &crate::intervals::LogPoint) -> BigRational {
    use crate::intervals::LogPoint;
    match (lo, hi) {
        (LogPoint::Rat(a), LogPoint::Rat(b)) => rat_sub_fast(b, a).unwrap_or_else(|| b - a),
        _ => unreachable!("Cantor bounds are plain rationals"),
    }
}

/// Canonical `BigRational` from machine words: divide out the gcd first so
/// `new_raw` receives the reduced form `BigRational::new` would produce.
fn reduced_ratio_u128(num: u128, den: u128) -> BigRational {
    debug_assert!(den > 0 && num <= i128::MAX as u128 && den <= i128::MAX as u128);
    let g = gcd_i128(num as i128, den as i128) as u128;
    BigRational::new_raw(BigInt::from(num / g), BigInt::from(den / g))
}

/// The stage-`n` remaining set of the middle-thirds construction on `[0, L]`
/// in log space (`n = 0` is `[0, L]` itself).
pub fn cantor_stage(log_length: &BigRational, n: u32) -> Result<RealIntervalSet, FamilyError> {
    Ok(LogCantor::new(log_length.clone())?.stage_set(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;
    use alloc::vec::Vec;

    #[test]
    fn stage_zero_and_one_match_the_construction() {
        let c = LogCantor::new(ratio(1, 1)).unwrap();
        let s0 = c.stage_set(0);
        assert_eq!(
            s0,
            RealIntervalSet::singleton(RealInterval::closed_rat(ratio(0, 1), ratio(1, 1)).unwrap())
        );
        let s1 = c.stage_set(1);
        let expected = RealIntervalSet::from_intervals(alloc::vec![
            RealInterval::closed_rat(ratio(0, 1), ratio(1, 3)).unwrap(),
            RealInterval::closed_rat(ratio(2, 3), ratio(1, 1)).unwrap(),
        ]);
        assert_eq!(s1, expected);
    }

    #[test]
    fn first_gaps_enumerate_breadth_first() {
        let c = LogCantor::new(ratio(1, 1)).unwrap();
        let gaps: Vec<_> = (1..=7).map(|k| c.gap(k)).collect();
        assert_eq!(gaps[0], RealInterval::open_rat(ratio(1, 3), ratio(2, 3)).unwrap());
        assert_eq!(gaps[1], RealInterval::open_rat(ratio(1, 9), ratio(2, 9)).unwrap());
        assert_eq!(gaps[2], RealInterval::open_rat(ratio(7, 9), ratio(8, 9)).unwrap());
        assert_eq!(gaps[3], RealInterval::open_rat(ratio(1, 27), ratio(2, 27)).unwrap());
        assert_eq!(gaps[6], RealInterval::open_rat(ratio(25, 27), ratio(26, 27)).unwrap());
    }

    #[test]
    fn stage_counts_and_lengths_are_exact() {
        let c = LogCantor::new(ratio(1, 1)).unwrap();
        for n in 0..=12u32 {
            let set = c.stage_set(n);
            assert_eq!(set.components().len() as u64, LogCantor::stage_component_count(n));
            let expected = BigRational::new(BigInt::from(2).pow(n), BigInt::from(3).pow(n));
            assert_eq!(c.stage_lebesgue_length(n), expected);
            assert_eq!(c.stage_measure(n), MValue::exp_log_unchecked(expected));
        }
    }

    #[test]
    fn gaps_and_stage_partition_the_ambient_interval() {
        let c = LogCantor::new(ratio(1, 1)).unwrap();
        for n in 1..=8u32 {
            let stage = c.stage_set(n);
            let gaps = RealIntervalSet::from_intervals(
                (1..(1u64 << n)).map(|k| c.gap(k)),
            );
            let ambient = c.stage_set(0);
            assert_eq!(stage.union(&gaps), ambient);
            assert!(stage.is_disjoint_from(&gaps));
        }
    }

    #[test]
    fn covered_mass_tracks_the_geometric_sum() {
        let c = LogCantor::new(ratio(1, 1)).unwrap();
        // After all gaps of depth <= d: 1 - (2/3)^d.
        for d in 1..=10u32 {
            let n = (1u64 << d) - 1;
            let expected = BigRational::one()
                - BigRational::new(BigInt::from(2).pow(d), BigInt::from(3).pow(d));
            assert_eq!(c.covered_by_gaps(n), expected);
        }
        // Mid-depth counts advance by one gap length at a time.
        let one_gap = c.covered_by_gaps(1);
        assert_eq!(one_gap, ratio(1, 3));
        assert_eq!(c.covered_by_gaps(2), ratio(1, 3) + ratio(1, 9));
    }

    #[test]
    fn scaled_ambient_interval() {
        let c = LogCantor::new(ratio(3, 2)).unwrap();
        assert_eq!(c.stage_lebesgue_length(2), ratio(3, 2) * ratio(4, 9));
        assert_eq!(c.gap(1), RealInterval::open_rat(ratio(1, 2), ratio(1, 1)).unwrap());
    }
}
