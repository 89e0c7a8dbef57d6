//! Interval sets on the positive axis `(0, +inf)` with rational endpoints.

use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::set::{Bound, CutPos, Interval, IntervalSet};
use super::IntervalError;
use crate::mvalue::MValue;

/// A subinterval of `(0, +inf)`; `Bound::Unbounded` stands for the open
/// endpoint at `0` on the left and at `+inf` on the right.
pub type PosInterval = Interval<BigRational>;

/// A canonical finite union of [`PosInterval`]s.
pub type PosIntervalSet = IntervalSet<BigRational>;

fn check_positive(value: &BigRational) -> Result<(), IntervalError> {
    if value.is_positive() {
        Ok(())
    } else {
        Err(IntervalError::NonPositiveEndpoint)
    }
}

impl Interval<BigRational> {
    /// General constructor with domain validation: finite endpoints must be
    /// strictly positive and the interval must be non-empty.
    pub fn make(lo: Bound<BigRational>, hi: Bound<BigRational>) -> Result<Self, IntervalError> {
        if let Bound::Closed(v) | Bound::Open(v) = &lo {
            check_positive(v)?;
        }
        if let Bound::Closed(v) | Bound::Open(v) = &hi {
            check_positive(v)?;
        }
        Interval::from_bounds(lo, hi).ok_or(IntervalError::EmptyInterval)
    }

    pub fn closed(lo: BigRational, hi: BigRational) -> Result<Self, IntervalError> {
        Self::make(Bound::Closed(lo), Bound::Closed(hi))
    }

    pub fn open(lo: BigRational, hi: BigRational) -> Result<Self, IntervalError> {
        Self::make(Bound::Open(lo), Bound::Open(hi))
    }

    pub fn closed_open(lo: BigRational, hi: BigRational) -> Result<Self, IntervalError> {
        Self::make(Bound::Closed(lo), Bound::Open(hi))
    }

    pub fn open_closed(lo: BigRational, hi: BigRational) -> Result<Self, IntervalError> {
        Self::make(Bound::Open(lo), Bound::Closed(hi))
    }

    /// The singleton `{a}`.
    pub fn point(a: BigRational) -> Result<Self, IntervalError> {
        Self::make(Bound::Closed(a.clone()), Bound::Closed(a))
    }

    /// `(0, hi]` or `(0, hi)`.
    pub fn from_zero(hi: BigRational, closed: bool) -> Result<Self, IntervalError> {
        let hi = if closed { Bound::Closed(hi) } else { Bound::Open(hi) };
        Self::make(Bound::Unbounded, hi)
    }

    /// `[lo, +inf)` or `(lo, +inf)`.
    pub fn to_infinity(lo: BigRational, closed: bool) -> Result<Self, IntervalError> {
        let lo = if closed { Bound::Closed(lo) } else { Bound::Open(lo) };
        Self::make(lo, Bound::Unbounded)
    }

    /// The whole space `(0, +inf)`.
    pub fn positive_axis() -> Self {
        Interval::from_bounds(Bound::Unbounded, Bound::Unbounded).expect("non-empty")
    }

    /// The multiplicative length `hi / lo`, blind to openness: `Infinity`
    /// when the interval touches `0` or is unbounded above, `1` on
    /// singletons.
    pub fn length(&self) -> MValue {
        match self.value_span() {
            (Some(lo), Some(hi)) => MValue::rational_unchecked(hi / lo),
            _ => MValue::Infinity,
        }
    }

    /// Is every finite endpoint closed and the interval bounded away from
    /// `0` and `inf`? Cover members must satisfy this.
    pub fn is_closed_bounded(&self) -> bool {
        matches!(&self.lo, CutPos::Before(_)) && matches!(&self.hi, CutPos::After(_))
    }
}

/// Canonicalize a list of intervals into a set (the `normalize` operation).
pub fn normalize(intervals: impl IntoIterator<Item = PosInterval>) -> PosIntervalSet {
    PosIntervalSet::from_intervals(intervals)
}

/// Scale a set by `c > 0`; the group action of `(0, +inf)` on itself.
pub fn dilate(c: &BigRational, e: &PosIntervalSet) -> Result<PosIntervalSet, IntervalError> {
    if !c.is_positive() {
        return Err(IntervalError::NonPositiveDilation);
    }
    let scale = |cut: &CutPos<BigRational>| match cut {
        CutPos::Bottom => CutPos::Bottom,
        CutPos::Before(v) => CutPos::Before(v * c),
        CutPos::After(v) => CutPos::After(v * c),
        CutPos::Top => CutPos::Top,
    };
    // Multiplication by c > 0 is a strictly monotone bijection of the cut
    // line, so the canonical component structure carries over unchanged.
    let components = e
        .components()
        .iter()
        .map(|comp| Interval { lo: scale(&comp.lo), hi: scale(&comp.hi) })
        .collect::<Vec<_>>();
    Ok(PosIntervalSet::from_components_unchecked(components))
}

/// The infimum gap `inf { |x - y| : x in a, y in b }` evaluated exactly from
/// endpoint values (openness cannot change an infimum). `None` when either
/// set is empty; `Some(0)` when the sets touch or overlap.
pub fn set_gap(a: &PosIntervalSet, b: &PosIntervalSet) -> Option<BigRational> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    if !a.is_disjoint_from(b) {
        return Some(BigRational::zero());
    }
    // Walk the components of both sets in cut order; only consecutive
    // components from different sets can realize the infimum.
    let mut tagged: Vec<(&PosInterval, bool)> = a
        .components()
        .iter()
        .map(|c| (c, true))
        .chain(b.components().iter().map(|c| (c, false)))
        .collect();
    tagged.sort_by(|(x, _), (y, _)| x.lo.cmp(&y.lo));
    let mut best: Option<BigRational> = None;
    for pair in tagged.windows(2) {
        let ((prev, from_a), (next, next_from_a)) = (&pair[0], &pair[1]);
        if from_a == next_from_a {
            continue;
        }
        let gap = match (prev.value_span().1, next.value_span().0) {
            (Some(hi), Some(lo)) => {
                let d = lo - hi;
                if d.is_negative() {
                    BigRational::zero()
                } else {
                    d
                }
            }
            // A sentinel endpoint between two disjoint sets means one set
            // reaches arbitrarily close to the other only through +inf/0,
            // which cannot happen for sorted disjoint components; the gap
            // through a sentinel is infinite, so skip it.
            _ => continue,
        };
        best = Some(match best {
            Some(b) if b <= gap => b,
            _ => gap,
        });
    }
    best
}

fn fmt_rat(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Interval<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lo {
            CutPos::Bottom => write!(f, "(0,")?,
            CutPos::Before(v) => {
                write!(f, "[")?;
                fmt_rat(f, v)?;
                write!(f, ",")?;
            }
            CutPos::After(v) => {
                write!(f, "(")?;
                fmt_rat(f, v)?;
                write!(f, ",")?;
            }
            CutPos::Top => unreachable!(),
        }
        match &self.hi {
            CutPos::Top => write!(f, "inf)"),
            CutPos::After(v) => {
                fmt_rat(f, v)?;
                write!(f, "]")
            }
            CutPos::Before(v) => {
                fmt_rat(f, v)?;
                write!(f, ")")
            }
            CutPos::Bottom => unreachable!(),
        }
    }
}

impl fmt::Display for IntervalSet<BigRational> {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;
    use alloc::format;
    use alloc::vec;

    fn rat(n: i64, d: i64) -> BigRational {
        ratio(n, d)
    }

    #[test]
    fn length_follows_the_ratio_formula() {
        let i = PosInterval::closed(rat(1, 1), rat(2, 1)).unwrap();
        assert_eq!(i.length(), MValue::rational(rat(2, 1)).unwrap());
        let singleton = PosInterval::point(rat(7, 3)).unwrap();
        assert!(singleton.length().is_one());
        let from_zero = PosInterval::from_zero(rat(1, 1), false).unwrap();
        assert!(from_zero.length().is_infinite());
        let ray = PosInterval::to_infinity(rat(5, 1), true).unwrap();
        assert!(ray.length().is_infinite());
    }

    #[test]
    fn domain_validation() {
        assert_eq!(
            PosInterval::closed(rat(2, 1), rat(1, 1)).unwrap_err(),
            IntervalError::EmptyInterval
        );
        assert_eq!(
            PosInterval::closed(rat(0, 1), rat(1, 1)).unwrap_err(),
            IntervalError::NonPositiveEndpoint
        );
        assert_eq!(
            PosInterval::closed(rat(-1, 2), rat(1, 1)).unwrap_err(),
            IntervalError::NonPositiveEndpoint
        );
        assert!(PosInterval::from_zero(rat(1, 1), false).is_ok());
    }

    #[test]
    fn complement_matches_spec_example() {
        let zero_one = PosIntervalSet::singleton(PosInterval::from_zero(rat(1, 1), false).unwrap());
        let complement = zero_one.complement();
        let expected =
            PosIntervalSet::singleton(PosInterval::to_infinity(rat(1, 1), true).unwrap());
        assert_eq!(complement, expected);
    }

    #[test]
    fn dilation_preserves_structure() {
        let e = normalize(vec![
            PosInterval::closed(rat(1, 1), rat(2, 1)).unwrap(),
            PosInterval::open(rat(3, 1), rat(4, 1)).unwrap(),
        ]);
        let scaled = dilate(&rat(3, 1), &e).unwrap();
        assert_eq!(scaled.components().len(), 2);
        assert_eq!(
            scaled.components()[0],
            PosInterval::closed(rat(3, 1), rat(6, 1)).unwrap()
        );
        assert_eq!(dilate(&rat(1, 1), &e).unwrap(), e);
        assert!(dilate(&rat(0, 1), &e).is_err());
        for (a, b) in e.components().iter().zip(scaled.components()) {
            assert_eq!(a.length(), b.length());
        }
    }

    #[test]
    fn gaps_use_endpoint_values() {
        let a = normalize(vec![PosInterval::closed(rat(1, 1), rat(2, 1)).unwrap()]);
        let b = normalize(vec![PosInterval::closed(rat(4, 1), rat(8, 1)).unwrap()]);
        assert_eq!(set_gap(&a, &b), Some(rat(2, 1)));
        let touching = normalize(vec![PosInterval::open_closed(rat(2, 1), rat(3, 1)).unwrap()]);
        assert_eq!(set_gap(&a, &touching), Some(rat(0, 1)));
        assert_eq!(set_gap(&a, &PosIntervalSet::empty()), None);
        let zero_one = normalize(vec![PosInterval::from_zero(rat(1, 1), false).unwrap()]);
        assert_eq!(set_gap(&zero_one, &b), Some(rat(3, 1)));
    }

    #[test]
    fn display_is_canonical() {
        let e = normalize(vec![
            PosInterval::open(rat(3, 1), rat(4, 1)).unwrap(),
            PosInterval::closed(rat(1, 2), rat(2, 1)).unwrap(),
        ]);
        assert_eq!(format!("{e}"), "[1/2,2] U (3,4)");
        assert_eq!(format!("{}", PosIntervalSet::empty()), "{}");
        let rays = normalize(vec![
            PosInterval::from_zero(rat(1, 3), true).unwrap(),
            PosInterval::to_infinity(rat(9, 1), false).unwrap(),
        ]);
        assert_eq!(format!("{rays}"), "(0,1/3] U (9,inf)");
    }
}
