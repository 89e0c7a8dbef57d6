//! The log-space image of positive-axis sets.
//!
//! Bounds in log space are kept symbolic so that `exp . log` is the identity
//! bit for bit: a bound is either a plain rational `r` (denoting `r` itself;
//! the form the Cantor constructions use) or `log q` for a stored positive
//! rational `q` (the image of a rational endpoint under the log transform).
//! `log 1` is canonicalized to the rational `0`, so structural equality of
//! bounds coincides with equality of the denoted reals; mixed comparisons
//! `log q` vs `r` are decided exactly by interval refinement, and equality
//! across the two forms is impossible for the remaining pairs.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::set::{Bound, CutPos, Interval, IntervalSet};
use super::IntervalError;
use crate::mvalue::cmp_rat_vs_exp;

/// A point of the real line in symbolic form.
#[derive(Clone, Debug)]
pub enum LogPoint {
    /// The rational itself.
    Rat(BigRational),
    /// `log q` for a stored rational `q > 0`, `q != 1`.
    LogOf(BigRational),
}

impl LogPoint {
    pub fn rat(r: BigRational) -> Self {
        LogPoint::Rat(r)
    }

    /// The symbolic `log q`; requires `q > 0`. `log 1` collapses to the
    /// canonical rational zero.
    pub fn log_of(q: BigRational) -> Result<Self, IntervalError> {
        if !q.is_positive() {
            return Err(IntervalError::NonPositiveEndpoint);
        }
        if q.is_one() {
            return Ok(LogPoint::Rat(BigRational::zero()));
        }
        Ok(LogPoint::LogOf(q))
    }

    /// The denoted value as a double (for reporting only).
    pub fn to_f64(&self) -> f64 {
        match self {
            LogPoint::Rat(r) => crate::numf::rat_to_f64(r),
            LogPoint::LogOf(q) => crate::numf::rat_ln(q),
        }
    }
}

impl PartialEq for LogPoint {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for LogPoint {}

impl PartialOrd for LogPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (LogPoint::Rat(a), LogPoint::Rat(b)) => a.cmp(b),
            (LogPoint::LogOf(p), LogPoint::LogOf(q)) => p.cmp(q),
            // log q vs r is q vs e^r; exact, and never equal because
            // q != 1 here and ln of such a rational is irrational.
            (LogPoint::LogOf(q), LogPoint::Rat(r)) => cmp_rat_vs_exp(q, r),
            (LogPoint::Rat(r), LogPoint::LogOf(q)) => cmp_rat_vs_exp(q, r).reverse(),
        }
    }
}

/// A non-empty interval of the real line with symbolic bounds.
pub type RealInterval = Interval<LogPoint>;

/// A canonical finite union of [`RealInterval`]s.
pub type RealIntervalSet = IntervalSet<LogPoint>;

impl Interval<LogPoint> {
    /// `[a, b]` with plain rational endpoints.
    pub fn closed_rat(lo: BigRational, hi: BigRational) -> Result<Self, IntervalError> {
        Interval::from_bounds(Bound::Closed(LogPoint::rat(lo)), Bound::Closed(LogPoint::rat(hi)))
            .ok_or(IntervalError::EmptyInterval)
    }

    /// `(a, b)` with plain rational endpoints.
    pub fn open_rat(lo: BigRational, hi: BigRational) -> Result<Self, IntervalError> {
        Interval::from_bounds(Bound::Open(LogPoint::rat(lo)), Bound::Open(LogPoint::rat(hi)))
            .ok_or(IntervalError::EmptyInterval)
    }
}

/// Map a positive-axis set to its log image; rational endpoints become
/// symbolic logs, the sentinels `0` and `+inf` become `-inf` and `+inf`.
pub fn log_transform(e: &super::PosIntervalSet) -> RealIntervalSet {
    let map = |cut: &CutPos<BigRational>| match cut {
        CutPos::Bottom => CutPos::Bottom,
        CutPos::Before(q) => {
            CutPos::Before(LogPoint::log_of(q.clone()).expect("endpoints are positive"))
        }
        CutPos::After(q) => {
            CutPos::After(LogPoint::log_of(q.clone()).expect("endpoints are positive"))
        }
        CutPos::Top => CutPos::Top,
    };
    // log is strictly monotone, so the canonical structure is preserved.
    let components = e
        .components()
        .iter()
        .map(|c| Interval { lo: map(&c.lo), hi: map(&c.hi) })
        .collect::<Vec<_>>();
    RealIntervalSet::from_components_unchecked(components)
}

/// Map a log-space set back through `exp`. Only symbolic-log bounds (and the
/// rational zero, which is `log 1`) are representable on the positive axis;
/// anything else is rejected.
pub fn exp_transform(r: &RealIntervalSet) -> Result<super::PosIntervalSet, IntervalError> {
    let map = |cut: &CutPos<LogPoint>| -> Result<CutPos<BigRational>, IntervalError> {
        Ok(match cut {
            CutPos::Bottom => CutPos::Bottom,
            CutPos::Top => CutPos::Top,
            CutPos::Before(p) => CutPos::Before(exp_point(p)?),
            CutPos::After(p) => CutPos::After(exp_point(p)?),
        })
    };
    let mut components = Vec::with_capacity(r.components().len());
    for c in r.components() {
        components.push(Interval { lo: map(&c.lo)?, hi: map(&c.hi)? });
    }
    Ok(super::PosIntervalSet::from_components_unchecked(components))
}

fn exp_point(p: &LogPoint) -> Result<BigRational, IntervalError> {
    match p {
        LogPoint::LogOf(q) => Ok(q.clone()),
        LogPoint::Rat(r) if r.is_zero() => Ok(BigRational::one()),
        LogPoint::Rat(_) => Err(IntervalError::NonRepresentableBound),
    }
}

impl fmt::Display for LogPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let write_rat = |f: &mut fmt::Formatter<'_>, q: &BigRational| {
            if q.denom().is_one() {
                write!(f, "{}", q.numer())
            } else {
                write!(f, "{}/{}", q.numer(), q.denom())
            }
        };
        match self {
            LogPoint::Rat(r) => write_rat(f, r),
            LogPoint::LogOf(q) => {
                write!(f, "log(")?;
                write_rat(f, q)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Interval<LogPoint> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lo {
            CutPos::Bottom => write!(f, "(-inf,")?,
            CutPos::Before(v) => write!(f, "[{v},")?,
            CutPos::After(v) => write!(f, "({v},")?,
            CutPos::Top => unreachable!(),
        }
        match &self.hi {
            CutPos::Top => write!(f, "inf)"),
            CutPos::After(v) => write!(f, "{v}]"),
            CutPos::Before(v) => write!(f, "{v})"),
            CutPos::Bottom => unreachable!(),
        }
    }
}

impl fmt::Display for IntervalSet<LogPoint> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        for (k, comp) in self.components().iter().enumerate() {
            if k > 0 {
                write!(f, " U ")?;
            }
            write!(f, "{comp}")?;
        }
        Ok(())
    }
}
