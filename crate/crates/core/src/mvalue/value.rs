//! The value domain `[1, +inf]` under multiplication.

use core::cmp::Ordering;
use core::fmt;
use core::ops::Mul;

use num_rational::BigRational;
use num_traits::{Float, One, Signed, Zero};

use super::refine::cmp_rat_vs_exp;
use crate::numf;

/// An element of `[1, +inf]`, the codomain of every measure-like quantity in
/// this crate.
///
/// Exactness is kept per representation: rationals stay rational under
/// multiplication, `e^r` values add exponents exactly, and only mixed
/// products degrade to a log-domain double. `ExactRational(1)`,
/// `ExactExpLog(0)` and `LogFloat(0)` all compare equal to the identity.
///
/// Every variant denotes an exact real number (a `LogFloat` exponent is an
/// exact dyadic rational by IEEE semantics), so the derived total order is a
/// genuine order on reals: mixed rational-vs-exponential comparisons are
/// decided by exact interval refinement, never by floating point.
#[derive(Clone, Debug)]
pub enum MValue {
    /// An exact rational `q >= 1`.
    ExactRational(BigRational),
    /// `e^r` for an exact rational exponent `r >= 0`.
    ExactExpLog(BigRational),
    /// `e^x` for a nonnegative finite double `x`.
    LogFloat(f64),
    /// The absorbing top element.
    Infinity,
}

/// Construction errors for [`MValue`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueError {
    /// The requested value would fall below the multiplicative identity.
    BelowOne,
    /// A log-domain exponent must be finite (use [`MValue::Infinity`]).
    NotFinite,
}

impl fmt::Display for ValueError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueError::BelowOne => write!(f, "values below 1 are outside the domain"),
            ValueError::NotFinite => write!(f, "log-domain exponent must be finite"),
        }
    }
}

impl core::error::Error for ValueError {}

impl MValue {
    /// The multiplicative identity.
    pub fn one() -> Self {
        MValue::ExactRational(BigRational::one())
    }

    pub fn infinity() -> Self {
        MValue::Infinity
    }

    /// Exact rational value; requires `q >= 1`.
    pub fn rational(q: BigRational) -> Result<Self, ValueError> {
        if q < BigRational::one() {
            return Err(ValueError::BelowOne);
        }
        Ok(MValue::ExactRational(q))
    }

    /// `e^r` with exact rational exponent; requires `r >= 0`.
    pub fn exp_log(r: BigRational) -> Result<Self, ValueError> {
        if r.is_negative() {
            return Err(ValueError::BelowOne);
        }
        Ok(MValue::ExactExpLog(r))
    }

    /// `e^x` with a double exponent; requires `x >= 0`. An infinite exponent
    /// promotes to [`MValue::Infinity`].
    pub fn log_float(x: f64) -> Result<Self, ValueError> {
        if x.is_nan() {
            return Err(ValueError::NotFinite);
        }
        if x < 0.0 {
            return Err(ValueError::BelowOne);
        }
        if x.is_infinite() {
            return Ok(MValue::Infinity);
        }
        Ok(MValue::LogFloat(x))
    }

    pub(crate) fn rational_unchecked(q: BigRational) -> Self {
        debug_assert!(q >= BigRational::one());
        MValue::ExactRational(q)
    }

    pub(crate) fn exp_log_unchecked(r: BigRational) -> Self {
        debug_assert!(!r.is_negative());
        MValue::ExactExpLog(r)
    }

    pub fn is_one(&self) -> bool {
        match self {
            MValue::ExactRational(q) => q.is_one(),
            MValue::ExactExpLog(r) => r.is_zero(),
            MValue::LogFloat(x) => *x == 0.0,
            MValue::Infinity => false,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, MValue::Infinity)
    }

    /// Cheap domain check used by factor validation (no comparison against
    /// a constructed `one`).
    pub(crate) fn is_below_one(&self) -> bool {
        match self {
            MValue::ExactRational(q) => *q < BigRational::one(),
            MValue::ExactExpLog(r) => r.is_negative(),
            MValue::LogFloat(x) => *x < 0.0,
            MValue::Infinity => false,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, MValue::ExactRational(_) | MValue::ExactExpLog(_) | MValue::Infinity)
    }

    /// Natural logarithm as a double (`+inf` for [`MValue::Infinity`]).
    pub fn log_f64(&self) -> f64 {
        match self {
            MValue::ExactRational(q) => {
                if q.is_one() {
                    0.0
                } else {
                    numf::rat_ln(q)
                }
            }
            MValue::ExactExpLog(r) => numf::rat_to_f64(r),
            MValue::LogFloat(x) => *x,
            MValue::Infinity => f64::infinity(),
        }
    }

    /// The denoted real as a double, saturating to `+inf`.
    pub fn to_f64(&self) -> f64 {
        match self {
            MValue::ExactRational(q) => numf::rat_to_f64(q),
            MValue::ExactExpLog(r) => numf::rat_to_f64(r).exp(),
            MValue::LogFloat(x) => x.exp(),
            MValue::Infinity => f64::infinity(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            MValue::ExactRational(q) => Some(q),
            _ => None,
        }
    }

    /// Exponent `r` when the value is `e^r` exactly.
    pub fn as_exp_log(&self) -> Option<&BigRational> {
        match self {
            MValue::ExactExpLog(r) => Some(r),
            _ => None,
        }
    }

    /// Total order on the denoted reals. Exact representations are compared
    /// without floating point; a `LogFloat` exponent participates as the
    /// exact dyadic rational it stores.
    pub fn cmp_value(&self, other: &MValue) -> Ordering {
        use MValue::*;
        match (self, other) {
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, _) => Ordering::Greater,
            (_, Infinity) => Ordering::Less,
            (ExactRational(a), ExactRational(b)) => a.cmp(b),
            (ExactExpLog(a), ExactExpLog(b)) => a.cmp(b),
            (LogFloat(a), LogFloat(b)) => {
                a.partial_cmp(b).expect("LogFloat exponents are finite")
            }
            (ExactExpLog(a), LogFloat(b)) => a.cmp(&dyadic(*b)),
            (LogFloat(a), ExactExpLog(b)) => dyadic(*a).cmp(b),
            (ExactRational(q), ExactExpLog(r)) => cmp_rat_vs_exp(q, r),
            (ExactExpLog(r), ExactRational(q)) => cmp_rat_vs_exp(q, r).reverse(),
            (ExactRational(q), LogFloat(x)) => cmp_rat_vs_exp(q, &dyadic(*x)),
            (LogFloat(x), ExactRational(q)) => cmp_rat_vs_exp(q, &dyadic(*x)).reverse(),
        }
    }

    /// Exact quotient `self / other` when both share an exact representation
    /// and the quotient stays in the domain. Used by rearranged-product
    /// bookkeeping; mixed or inexact operands return `None`.
    pub(crate) fn div_exact(&self, other: &MValue) -> Option<MValue> {
        use MValue::*;
        if other.is_one() {
            return Some(self.clone());
        }
        match (self, other) {
            (ExactRational(a), ExactRational(b)) => {
                let q = a / b;
                (q >= BigRational::one()).then_some(()).map(|()| ExactRational(q))
            }
            (ExactExpLog(a), ExactExpLog(b)) => {
                let r = a - b;
                (!r.is_negative()).then_some(()).map(|()| ExactExpLog(r))
            }
            (Infinity, b) if !b.is_infinite() => Some(Infinity),
            _ => None,
        }
    }
}

/// The exact rational denoted by a finite double.
fn dyadic(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite double is an exact rational")
}

/// Exact rational sum through machine words when both operands fit; long
/// accumulations (gap products run to tens of millions of terms) spend most
/// of their time here, so skipping the big-integer temporaries matters.
/// Returns `None` on any potential overflow.
pub(crate) fn rat_add_fast(a: &BigRational, b: &BigRational) -> Option<BigRational> {
    rat_combine_fast(a, b, false)
}

/// Exact rational difference through machine words; see [`rat_add_fast`].
pub(crate) fn rat_sub_fast(a: &BigRational, b: &BigRational) -> Option<BigRational> {
    rat_combine_fast(a, b, true)
}

fn rat_combine_fast(a: &BigRational, b: &BigRational, subtract: bool) -> Option<BigRational> {
    use num_traits::ToPrimitive;
    let (an, ad) = (a.numer().to_i64()?, a.denom().to_i64()?);
    let (bn, bd) = (b.numer().to_i64()?, b.denom().to_i64()?);
    let bn = if subtract { (bn as i128).checked_neg()? } else { bn as i128 };
    let g = gcd_i128(ad as i128, bd as i128);
    let ad_r = ad as i128 / g;
    let bd_r = bd as i128 / g;
    let denom = (ad as i128).checked_mul(bd_r)?;
    let numer = (an as i128).checked_mul(bd_r)?.checked_add(bn.checked_mul(ad_r)?)?;
    let g2 = gcd_i128(numer, denom);
    // The result is fully reduced with a positive denominator, which is the
    // canonical form `BigRational::new` would produce.
    Some(BigRational::new_raw((numer / g2).into(), (denom / g2).into()))
}

pub(crate) fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn log_float_sum(x: f64, y: f64) -> MValue {
    let sum = x + y;
    if sum.is_infinite() {
        MValue::Infinity
    } else {
        MValue::LogFloat(sum)
    }
}

/// Multiplication: exact within a representation, absorbing at infinity,
/// degrading to `LogFloat` across representations. Multiplying by the
/// identity returns the other operand unchanged, whatever its form.
impl Mul<&MValue> for &MValue {
    type Output = MValue;

    fn mul(self, rhs: &MValue) -> MValue {
        use MValue::*;
        if self.is_infinite() || rhs.is_infinite() {
            return Infinity;
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        match (self, rhs) {
            (ExactRational(a), ExactRational(b)) => ExactRational(a * b),
            (ExactExpLog(a), ExactExpLog(b)) => {
                ExactExpLog(rat_add_fast(a, b).unwrap_or_else(|| a + b))
            }
            (LogFloat(a), LogFloat(b)) => log_float_sum(*a, *b),
            (ExactRational(q), ExactExpLog(r)) | (ExactExpLog(r), ExactRational(q)) => {
                log_float_sum(numf::rat_ln(q), numf::rat_to_f64(r))
            }
            (ExactRational(q), LogFloat(x)) | (LogFloat(x), ExactRational(q)) => {
                log_float_sum(numf::rat_ln(q), *x)
            }
            (ExactExpLog(r), LogFloat(x)) | (LogFloat(x), ExactExpLog(r)) => {
                log_float_sum(numf::rat_to_f64(r), *x)
            }
            (Infinity, _) | (_, Infinity) => unreachable!("handled above"),
        }
    }
}

impl Mul for MValue {
    type Output = MValue;

    fn mul(self, rhs: MValue) -> MValue {
        &self * &rhs
    }
}

impl PartialEq for MValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for MValue {}

impl PartialOrd for MValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl fmt::Display for MValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MValue::ExactRational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            MValue::ExactExpLog(r) => write!(f, "exp({}/{})", r.numer(), r.denom()),
            MValue::LogFloat(x) => {
                if *x <= 709.0 {
                    write!(f, "{}", x.exp())
                } else {
                    // e^x overflows a double; keep the exponent readable.
                    write!(f, "exp({x})")
                }
            }
            MValue::Infinity => write!(f, "inf"),
        }
    }
}
