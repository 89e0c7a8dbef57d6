//! Command-line front end and expression language for the multiplicative
//! measure toolkit: parsing, typed evaluation, report rendering, and the
//! seeded verification suites.

pub mod ast;
pub mod cmd;
pub mod eval;
pub mod gen;
pub mod parse;
pub mod report;
pub mod rng;
pub mod suites;
