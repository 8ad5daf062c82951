//! Exact-arithmetic piecewise polynomial differential forms on finite
//! simplicial complexes, with coefficients in the exterior algebra of a
//! finite-dimensional Lie algebra.
//!
//! The crate models the cochain algebra of compatible families of local
//! forms `{omega_Delta}`, restriction morphisms to subcomplexes and to the
//! star basis of regular opens, partitions of unity with combinatorially
//! certified positive denominators, and cohomology computed block-by-block
//! with sparse exact elimination over the rationals.
//!
//! Everything is exact: coefficients are `num::BigRational`, equality is
//! decidable, and every identity checked by the test suite is symbolic.

pub mod cohomology;
pub mod complex;
pub mod error;
pub mod forms;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod piecewise;
pub mod poly;
pub mod sheaf;

pub use error::Error;

/// Exact rational scalar used throughout the crate.
pub type Rat = num::BigRational;

/// Shorthand for building a `Rat` from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Shorthand for building a `Rat` from a numerator/denominator pair.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}
