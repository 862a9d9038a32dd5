//! Orderings of candidate point sets induced by sums of distances to
//! vantage points.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalar`]: exact rationals, sums of square roots of rationals, and
//!   rigorous interval enclosures used to certify comparisons.
//! * [`geometry`]: points, candidate sets, vantage multisets, distance sums
//!   and exact ranking.
//! * [`enumeration`]: exact and sampled catalogs of achievable orderings.
//! * [`bounds`]: closed-form counting bounds and verifiable sign-pattern
//!   constructions.
//! * [`constructions`]: flanking compositions, effective distance functions
//!   and the recursive lower-bound builder.
//! * [`witnesses`]: protrusive orderings and explicit witness multisets,
//!   including the certified six-point verification.
//! * [`io`]: JSON formats for point sets, multisets and catalogs.

pub mod bounds;
pub mod constructions;
pub mod enumeration;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod scalar;
pub mod witnesses;

pub use error::{Error, Result};
pub use geometry::{CandidateSet, Ordering, Point, VantageMultiset};
pub use scalar::{compare, ComparisonResult, Interval, RadicalSum, Rational};
