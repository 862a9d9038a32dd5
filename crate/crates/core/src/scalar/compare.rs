//! Certified comparison of radical sums.

use serde::{Deserialize, Serialize};

use crate::scalar::dyadic::BigInterval;
use crate::scalar::radical::RadicalSum;

/// Default ceiling on working precision, in fractional bits.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// First precision tried by [`compare`].
pub const START_BITS: u32 = 53;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComparisonResult {
    Less,
    Equal,
    Greater,
    /// The enclosure of `a - b` still contained zero at `precision_bits`
    /// and the difference could not be shown to vanish symbolically.
    Indeterminate { precision_bits: u32 },
}

impl ComparisonResult {
    pub fn to_ordering(&self) -> Option<std::cmp::Ordering> {
        match self {
            ComparisonResult::Less => Some(std::cmp::Ordering::Less),
            ComparisonResult::Equal => Some(std::cmp::Ordering::Equal),
            ComparisonResult::Greater => Some(std::cmp::Ordering::Greater),
            ComparisonResult::Indeterminate { .. } => None,
        }
    }

    pub fn reverse(self) -> Self {
        match self {
            ComparisonResult::Less => ComparisonResult::Greater,
            ComparisonResult::Greater => ComparisonResult::Less,
            other => other,
        }
    }
}

/// The precisions visited for a given cap: 53, 128, 256, ... doubling, with
/// the cap itself as the last step.
pub fn precision_schedule(cap: u32) -> Vec<u32> {
    let mut out = vec![START_BITS.min(cap)];
    let mut b = 128u32;
    while b < cap {
        out.push(b);
        b = b.saturating_mul(2);
    }
    if *out.last().unwrap() < cap {
        out.push(cap);
    }
    out
}

pub fn compare(a: &RadicalSum, b: &RadicalSum) -> ComparisonResult {
    compare_with(a, b, DEFAULT_PRECISION_CAP)
}

pub fn compare_with(a: &RadicalSum, b: &RadicalSum, cap_bits: u32) -> ComparisonResult {
    compare_to_zero(&(a - b), cap_bits)
}

/// Sign of `x` as a comparison against zero.
pub fn compare_to_zero(x: &RadicalSum, cap_bits: u32) -> ComparisonResult {
    if x.is_zero() {
        return ComparisonResult::Equal;
    }
    if let Some(r) = x.as_rational() {
        return match r.cmp(&num_traits::Zero::zero()) {
            std::cmp::Ordering::Less => ComparisonResult::Less,
            std::cmp::Ordering::Equal => ComparisonResult::Equal,
            std::cmp::Ordering::Greater => ComparisonResult::Greater,
        };
    }
    let mut canonical_checked = false;
    let mut current = x.clone();
    let mut last = START_BITS;
    for bits in precision_schedule(cap_bits) {
        last = bits;
        let e = current.enclose(bits);
        if e.is_positive() {
            return ComparisonResult::Greater;
        }
        if e.is_negative() {
            return ComparisonResult::Less;
        }
        if !canonical_checked {
            canonical_checked = true;
            current = x.canonical();
            if current.is_zero() {
                return ComparisonResult::Equal;
            }
            // A reduced sum with distinct square-free radicands and nonzero
            // coefficients is nonzero, but partially reduced radicands can
            // hide equal classes, so keep escalating either way.
        }
    }
    ComparisonResult::Indeterminate {
        precision_bits: last,
    }
}

/// Enclosure of `x` at the given precision.
pub fn eval_interval(x: &RadicalSum, bits: u32) -> BigInterval {
    x.enclose(bits)
}
