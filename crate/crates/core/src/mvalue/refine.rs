//! Exact comparison of a rational against `e^r` for rational `r`.
//!
//! The comparison never touches floating point: `ln q` is enclosed in a
//! shrinking rational interval and refined until `r` falls outside it. The
//! loop terminates because `ln q` is irrational for rational `q != 1` and
//! `e^r` is irrational for rational `r != 0` (Lindemann), so the only
//! coincidence, `q = 1` with `r = 0`, is dispatched symbolically first.
//!
//! The enclosure uses `ln x = 2 atanh(z)` with `z = (x-1)/(x+1)` after
//! reducing the argument to `[1, 2)` by powers of two, so `z <= 1/3` and the
//! series gains a constant number of digits per term.

use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Orders a positive rational `q` against `e^r`.
pub(crate) fn cmp_rat_vs_exp(q: &BigRational, r: &BigRational) -> Ordering {
    debug_assert!(q.is_positive(), "cmp_rat_vs_exp needs q > 0");
    if r.is_zero() {
        return q.cmp(&BigRational::one());
    }
    if q.is_one() {
        // q = 1, so compare ln q = 0 with r.
        return BigRational::zero().cmp(r);
    }
    let mut terms = 4usize;
    loop {
        let (lo, hi) = ln_enclosure(q, terms);
        if *r < lo {
            return Ordering::Greater;
        }
        if *r > hi {
            return Ordering::Less;
        }
        terms *= 2;
        assert!(
            terms <= 1 << 22,
            "ln refinement failed to separate transcendentally distinct values"
        );
    }
}

/// Rational enclosure `lo <= ln q <= hi` of width shrinking in `terms`.
pub(crate) fn ln_enclosure(q: &BigRational, terms: usize) -> (BigRational, BigRational) {
    debug_assert!(q.is_positive());
    if q.is_one() {
        return (BigRational::zero(), BigRational::zero());
    }
    if *q < BigRational::one() {
        let (lo, hi) = ln_enclosure(&q.recip(), terms);
        return (-hi, -lo);
    }
    // Reduce to x = q / 2^m with x in [1, 2); q > 1 forces m >= 0.
    let mut m = q.numer().bits() as i64 - q.denom().bits() as i64;
    let mut x = shift_down(q, m);
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    while x >= two {
        x /= &two;
        m += 1;
    }
    while x < one {
        x *= &two;
        m -= 1;
    }
    debug_assert!(m >= 0);
    let (series_lo, series_hi) = atanh_ln(&x, terms);
    if m == 0 {
        return (series_lo, series_hi);
    }
    let (ln2_lo, ln2_hi) = atanh_ln(&two, terms);
    let m_rat = BigRational::from_integer(BigInt::from(m));
    (&m_rat * ln2_lo + series_lo, m_rat * ln2_hi + series_hi)
}

/// `x / 2^m` computed exactly for any sign of `m`.
fn shift_down(x: &BigRational, m: i64) -> BigRational {
    if m >= 0 {
        x / BigRational::from_integer(BigInt::one() << m as u64)
    } else {
        x * BigRational::from_integer(BigInt::one() << (-m) as u64)
    }
}

/// Enclosure of `ln x` for `x in [1, 2]` via the atanh series.
fn atanh_ln(x: &BigRational, terms: usize) -> (BigRational, BigRational) {
    let z = (x - BigRational::one()) / (x + BigRational::one());
    if z.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    let z2 = &z * &z;
    let mut sum = BigRational::zero();
    let mut power = z; // z^{2i+1}
    for i in 0..terms {
        sum += &power / BigRational::from_integer(BigInt::from(2 * i as u64 + 1));
        power *= &z2;
    }
    // Remainder of the series: sum_{i >= terms} z^{2i+1}/(2i+1)
    //   <= z^{2*terms+1} / ((2*terms+1) (1 - z^2)).
    let tail = &power
        / (BigRational::from_integer(BigInt::from(2 * terms as u64 + 1))
            * (BigRational::one() - z2));
    let two = BigRational::from_integer(BigInt::from(2));
    let lo = &two * sum;
    let hi = &lo + two * tail;
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;
    use crate::numf::rat_ln;

    #[test]
    fn encloses_small_logs() {
        for (num, den) in [(3, 2), (2, 1), (7, 3), (1000, 7), (1, 5)] {
            let q = ratio(num, den);
            let (lo, hi) = ln_enclosure(&q, 12);
            let approx = rat_ln(&q);
            assert!(crate::numf::rat_to_f64(&lo) <= approx + 1e-12);
            assert!(crate::numf::rat_to_f64(&hi) >= approx - 1e-12);
            assert!(crate::numf::rat_to_f64(&(hi - lo)) < 1e-9);
        }
    }

    #[test]
    fn three_exceeds_e() {
        assert_eq!(cmp_rat_vs_exp(&ratio(3, 1), &ratio(1, 1)), Ordering::Greater);
        assert_eq!(cmp_rat_vs_exp(&ratio(2, 1), &ratio(1, 1)), Ordering::Less);
    }

    #[test]
    fn symbolic_cases_compare_exactly() {
        assert_eq!(cmp_rat_vs_exp(&ratio(1, 1), &ratio(0, 1)), Ordering::Equal);
        assert_eq!(cmp_rat_vs_exp(&ratio(1, 1), &ratio(1, 1000)), Ordering::Less);
        assert_eq!(cmp_rat_vs_exp(&ratio(2, 1), &ratio(0, 1)), Ordering::Greater);
        // ln(1/2) vs -1: e^{-1} ~ 0.3679 < 1/2.
        assert_eq!(cmp_rat_vs_exp(&ratio(1, 2), &ratio(-1, 1)), Ordering::Greater);
    }

    #[test]
    fn separates_tight_gaps() {
        // 193/71 = 2.71830985915... vs e = 2.71828182845...; gap ~ 2.8e-5.
        assert_eq!(cmp_rat_vs_exp(&ratio(193, 71), &ratio(1, 1)), Ordering::Greater);
        // 1457/536 = 2.7182835820... still above e, gap ~ 1.75e-6.
        assert_eq!(cmp_rat_vs_exp(&ratio(1457, 536), &ratio(1, 1)), Ordering::Greater);
        // 2721/1001 = 2.7182817182... just below e, gap ~ 1.0e-7.
        assert_eq!(cmp_rat_vs_exp(&ratio(2721, 1001), &ratio(1, 1)), Ordering::Less);
    }

    #[test]
    fn handles_huge_arguments() {
        let q = BigRational::from_integer(num_bigint::BigInt::from(2).pow(4000u32));
        // ln(2^4000) = 2772.58..., compare against 2772 and 2773.
        assert_eq!(cmp_rat_vs_exp(&q, &ratio(2772, 1)), Ordering::Greater);
        assert_eq!(cmp_rat_vs_exp(&q, &ratio(2773, 1)), Ordering::Less);
    }
}
