//! Exact interval-set algebra.
//!
//! Two instantiations of one generic engine:
//!
//! * [`PosIntervalSet`] — subsets of the positive axis `(0, +inf)` with
//!   rational endpoints; the sets the measure engine evaluates exactly.
//! * [`RealIntervalSet`] — the log-space image. Its bounds are symbolic:
//!   either a plain rational or `log q` for a stored rational `q`, so the
//!   exp/log transforms round-trip bit-exactly.
//!
//! Openness is tracked through every operation even though the measure is
//! blind to endpoints; set results are exact as sets, and measure-blindness
//! then becomes a provable property rather than a shortcut.

mod logspace;
mod pos;
mod set;

pub use logspace::{exp_transform, log_transform, LogPoint, RealInterval, RealIntervalSet};
pub use pos::{dilate, normalize, set_gap, PosInterval, PosIntervalSet};
pub use set::{Bound, Interval, IntervalSet};

use core::fmt;

/// Errors from interval construction and the exp/log transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalError {
    /// Lower bound does not lie strictly below the upper bound (degenerate
    /// `[a, a]` singletons being the one exception).
    EmptyInterval,
    /// Endpoints of positive-axis intervals must be strictly positive.
    NonPositiveEndpoint,
    /// Dilation factors must be strictly positive.
    NonPositiveDilation,
    /// `exp_transform` met a bound that is not a symbolic log of a rational.
    NonRepresentableBound,
}

impl fmt::Display for IntervalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalError::EmptyInterval => write!(f, "interval bounds describe an empty set"),
            IntervalError::NonPositiveEndpoint => {
                write!(f, "positive-axis endpoints must be > 0")
            }
            IntervalError::NonPositiveDilation => write!(f, "dilation factor must be > 0"),
            IntervalError::NonRepresentableBound => {
                write!(f, "bound is not the symbolic log of a rational")
            }
        }
    }
}

impl core::error::Error for IntervalError {}
