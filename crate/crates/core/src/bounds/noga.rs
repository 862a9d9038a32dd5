//! The family `f_a(x) = Σ aᵢ (sqrt((x - i)² + δ²) - |x - i|)` whose sign at
//! `x = j` is `a_j`.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::compare::compare_to_zero;
use crate::scalar::{int, ComparisonResult, RadicalSum, Rational, DEFAULT_PRECISION_CAP};

fn check_delta(len: usize, delta: &Rational) -> Result<()> {
    if len == 0 || !delta.is_positive() || delta * int(len as i64) >= int(2) {
        return Err(Error::Domain(format!("need 0 < δ < 2/ℓ, got δ = {delta}, ℓ = {len}")));
    }
    Ok(())
}

pub fn noga_family_eval(a: &[i8], delta: &Rational, x: &Rational) -> Result<RadicalSum> {
    check_delta(a.len(), delta)?;
    let d2 = delta * delta;
    let mut acc = RadicalSum::zero();
    for (i, &ai) in a.iter().enumerate() {
        if ai != 1 && ai != -1 {
            return Err(Error::Domain(format!("entries must be ±1, got {ai}")));
        }
        let t = x - int(i as i64 + 1);
        let term = RadicalSum::sqrt(&(&t * &t + &d2))? - RadicalSum::from_rational(t.abs());
        acc = acc + term * int(ai as i64);
    }
    Ok(acc)
}

/// Certified sign of `f_a(j)`.
pub fn noga_sign(a: &[i8], delta: &Rational, j: usize) -> Result<i8> {
    let v = noga_family_eval(a, delta, &int(j as i64))?;
    match compare_to_zero(&v, DEFAULT_PRECISION_CAP) {
        ComparisonResult::Less => Ok(-1),
        ComparisonResult::Equal => Ok(0),
        ComparisonResult::Greater => Ok(1),
        ComparisonResult::Indeterminate { precision_bits } => Err(Error::Indeterminate(format!(
            "sign of f_a({j}) for a = {a:?} at {precision_bits} bits"
        ))),
    }
}

fn sign_vector(bits: u64, len: usize) -> Vec<i8> {
    (0..len).map(|i| if bits >> i & 1 == 1 { 1 } else { -1 }).collect()
}

/// Outcome of the exhaustive sign check.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct NogaReport {
    pub len: usize,
    pub checks: u64,
    pub failures: Vec<(Vec<i8>, usize)>,
    pub undecided: u64,
}

impl NogaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.undecided == 0
    }
}

/// Checks `sgn f_a(j) = a_j` for all `2^ℓ` vectors `a` and all `j ∈ [ℓ]`.
pub fn verify_noga_family(len: usize, delta: &Rational) -> Result<NogaReport> {
    check_delta(len, delta)?;
    if len > 20 {
        return Err(Error::Guard(format!("ℓ = {len} exceeds 20")));
    }
    let per: Vec<(Vec<(Vec<i8>, usize)>, u64)> = (0..1u64 << len)
        .into_par_iter()
        .map(|bits| {
            let a = sign_vector(bits, len);
            let mut bad = Vec::new();
            let mut undecided = 0;
            for j in 1..=len {
                match noga_sign(&a, delta, j) {
                    Ok(s) if s == a[j - 1] => {}
                    Ok(_) => bad.push((a.clone(), j)),
                    Err(_) => undecided += 1,
                }
            }
            (bad, undecided)
        })
        .collect();
    let mut report = NogaReport {
        len,
        checks: (len as u64) << len,
        failures: Vec::new(),
        undecided: 0,
    };
    for (bad, u) in per {
        report.failures.extend(bad);
        report.undecided += u;
    }
    Ok(report)
}

/// Rows `a⁽¹⁾, …, a⁽ᵐ⁾` over `ℓ = 2^m` columns, column `j` spelling `j - 1`
/// in binary, and the set of proper sign vectors
/// `(sgn f_{a⁽¹⁾}(j), …, sgn f_{a⁽ᵐ⁾}(j))` they realise at `x = j`.
pub fn noga_sign_patterns(m: usize, delta: &Rational) -> Result<BTreeSet<Vec<i8>>> {
    if m == 0 || m > 6 {
        return Err(Error::Guard(format!("m = {m} outside 1..=6")));
    }
    let len = 1usize << m;
    let rows: Vec<Vec<i8>> = (0..m)
        .map(|row| (0..len).map(|col| if col >> row & 1 == 1 { 1 } else { -1 }).collect())
        .collect();
    let mut out = BTreeSet::new();
    for j in 1..=len {
        let pattern: Vec<i8> = rows.iter().map(|a| noga_sign(a, delta, j)).collect::<Result<_>>()?;
        if pattern.iter().all(|s| !s.is_zero()) {
            out.insert(pattern);
        }
    }
    Ok(out)
}
