//! Lossy `f64` views of big integers and rationals.
//!
//! `BigInt::to_f64` saturates to infinity once a value outgrows the double
//! range, which would wreck log-domain bookkeeping for quantities such as
//! `2^100000`. The helpers here scale by powers of two first, so logarithms
//! stay finite for any positive input and plain conversions only saturate
//! when the value really is outside the double range.

use core::f64::consts::LN_2;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, Signed, ToPrimitive, Zero};

/// Mantissa/exponent split of a positive big integer: `x ~= mant * 2^exp`
/// with `mant` in `[1, 2^53)`.
fn split(x: &BigInt) -> (f64, i64) {
    debug_assert!(x.is_positive());
    let bits = x.bits();
    if bits <= 53 {
        return (x.to_f64().expect("value fits in 53 bits"), 0);
    }
    let shift = bits - 53;
    let top: BigInt = x >> shift;
    (top.to_f64().expect("shifted value fits in 53 bits"), shift as i64)
}

/// Natural logarithm of a positive big integer.
pub(crate) fn bigint_ln(x: &BigInt) -> f64 {
    let (mant, exp) = split(x);
    mant.ln() + exp as f64 * LN_2
}

/// Natural logarithm of a positive rational, accurate to a few ulps even
/// when numerator or denominator exceed the double range.
pub(crate) fn rat_ln(q: &BigRational) -> f64 {
    debug_assert!(q.is_positive());
    bigint_ln(q.numer()) - bigint_ln(q.denom())
}

/// Nearest-double view of a rational, saturating to `±inf` outside range.
pub(crate) fn rat_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    let (mant_n, exp_n) = split(&q.numer().abs());
    let (mant_d, exp_d) = split(q.denom());
    let exp = exp_n - exp_d;
    if exp > 1100 {
        return sign * f64::infinity();
    }
    if exp < -1100 {
        return 0.0;
    }
    sign * (mant_n / mant_d) * (exp as f64).exp2()
}
