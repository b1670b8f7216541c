//! Exact arithmetic for quantum-invariant tables of knots and links.
//!
//! The crate works over the two-variable Laurent ring in `s = q^{1/2}` and
//! `v = t^{1/2}` with arbitrary-precision rational coefficients. On top of
//! that ring it provides:
//!
//! * canonical rational functions ([`RatFunc`]) and truncated power-series
//!   expansions in `q` ([`QSeries`]),
//! * partitions, partition vectors, and exact symmetric-group characters,
//! * formal series indexed by power sums ([`PSeries`]) or Schur functions
//!   ([`SchurCoeffs`]) with exact `log`/`exp` and Adams operations,
//! * the reformulation pipeline that takes a table of colored invariants to
//!   integer BPS-type tables (`Z -> F -> fhat -> P -> N -> n -> ncheck`),
//! * construction and verification of the infinite-product form of the
//!   partition function against its direct evaluation,
//! * a line-based text format for tables plus human-readable reports.
//!
//! All arithmetic is exact; floating point is never used.

pub mod character;
pub mod laurent;
pub mod partition;
pub mod pipeline;
pub mod product;
pub mod pseries;
pub mod qseries;
pub mod ratfunc;
pub mod tablefile;

pub use character::{character, character_vector, CharacterError};
pub use laurent::LaurentPoly;
pub use partition::{Partition, PartitionVector};
pub use pipeline::{
    CheckNTable, FTable, FhatTable, IntegralityOutcome, IntegralityReport, NRow, NTable,
    PConvention, Pipeline, PipelineError, PTable, SmallNRow, SmallNTable, WTable, ZTable,
};
pub use product::{
    unknot_closed_product, unknot_table, unlink_table, ExpandedSeries, ProductError, ProductRep,
    RoundtripReport, SymmetryReport,
};
pub use pseries::{PSeries, SchurCoeffs, SeriesError};
pub use qseries::{ExpandMode, QSeries};
pub use ratfunc::{RatFunc, RatFuncError};
pub use tablefile::{ParseError, TableFile};

/// Exact rational scalar used throughout the crate.
pub type Rational = num::BigRational;

/// Arbitrary-precision integer used for character values and counts.
pub type Int = num::BigInt;

/// Shorthand for a rational from an integer numerator and denominator.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Int::from(num), Int::from(den))
}

/// Shorthand for an integer rational.
pub fn rat_int(num: i64) -> Rational {
    Rational::from(Int::from(num))
}
