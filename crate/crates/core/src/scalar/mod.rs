//! Exact scalars and certified comparison.

pub mod compare;
pub mod dyadic;
pub mod interval;
pub mod radical;
pub mod rational;

pub use compare::{compare, compare_with, eval_interval, precision_schedule, ComparisonResult, DEFAULT_PRECISION_CAP};
pub use dyadic::BigInterval;
pub use interval::Interval;
pub use radical::RadicalSum;
pub use rational::{format_rational, int, parse_rational, rat, Rational};
