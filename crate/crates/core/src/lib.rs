//! Exact-where-possible computation of the multiplicative measure on the
//! positive half-line.
//!
//! The toolkit works with the set function that assigns to a closed interval
//! `[a, b]` of `(0, +inf)` the ratio `b / a` and extends it, through covers
//! and countable products, to a measure valued in `[1, +inf]` that turns
//! disjoint countable unions into products. The crate is split along that
//! construction:
//!
//! * [`mvalue`] — arithmetic on `[1, +inf]` and finite / infinite / double
//!   product evaluation with certified tails,
//! * [`intervals`] — exact interval-set algebra over `(0, +inf)` with
//!   rational endpoints, plus the log/exp transforms to the real line,
//! * [`measure`] — the measure engine: component products, covers, the
//!   Caratheodory equality check, countable multiplicativity, and a
//!   quadrature oracle for `exp(int_E dx/x)`,
//! * [`families`] — canonical disjoint generator families (telescoping,
//!   geometric, Cantor-gap) with known exact limits.
//!
//! The crate is `no_std` (with `alloc`); everything is a pure function of
//! immutable values and safe to share across threads.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod families;
pub mod intervals;
pub mod measure;
pub mod mvalue;

mod numf;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Shorthand for building a `BigRational` from an integer pair.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}
