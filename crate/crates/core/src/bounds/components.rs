//! Connected components of `ℝ ∖ V(f)` for
//! `f(x) = c₀ + Σ cᵢ (sqrt(x² + aᵢ²) - dᵢ)`.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::compare::compare_to_zero;
use crate::scalar::rational::{from_f64, simple_between, to_f64};
use crate::scalar::{int, ComparisonResult, RadicalSum, Rational, DEFAULT_PRECISION_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadicalTerm {
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub coeff: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub a: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub d: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadicalComboSpec {
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub c0: Rational,
    pub terms: Vec<RadicalTerm>,
}

impl RadicalComboSpec {
    pub fn new(c0: Rational, terms: Vec<RadicalTerm>) -> Result<Self> {
        if terms.iter().any(|t| !t.a.is_positive()) {
            return Err(Error::Domain("every a_i must be positive".into()));
        }
        Ok(RadicalComboSpec { c0, terms })
    }

    /// Number of square roots, counting the constant as `sqrt(c₀²)`.
    pub fn r(&self) -> usize {
        self.terms.len() + 1
    }

    pub fn eval(&self, x: &Rational) -> Result<RadicalSum> {
        let x2 = x * x;
        let mut acc = RadicalSum::from_rational(self.c0.clone());
        for t in &self.terms {
            let root = RadicalSum::sqrt(&(&x2 + &t.a * &t.a))? - RadicalSum::from_rational(t.d.clone());
            acc = acc + root * t.coeff.clone();
        }
        Ok(acc)
    }

    fn sign_at(&self, x: &Rational) -> Option<i8> {
        let v = self.eval(x).ok()?;
        match compare_to_zero(&v, DEFAULT_PRECISION_CAP) {
            ComparisonResult::Less => Some(-1),
            ComparisonResult::Equal => Some(0),
            ComparisonResult::Greater => Some(1),
            ComparisonResult::Indeterminate { .. } => None,
        }
    }
}

/// Logarithmic sampling grid on `x > 0`, spanning the `aᵢ` with margins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanConfig {
    pub per_octave: u32,
    pub max_per_octave: u32,
    pub octaves_below: i32,
    pub octaves_above: i32,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            per_octave: 8,
            max_per_octave: 64,
            octaves_below: 24,
            octaves_above: 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentCount {
    /// Certified lower bound on the number of components.
    pub count: usize,
    pub r: usize,
    /// `2^{r-1} + 1`.
    pub upper_bound: u128,
    pub sign_changes: usize,
    pub samples: usize,
    pub undecided_samples: usize,
    pub per_octave: u32,
    /// The count still grew at the finest resolution.
    pub saturated: bool,
}

fn scan(spec: &RadicalComboSpec, cfg: &ScanConfig, q: u32) -> (usize, usize, usize, usize) {
    let logs: Vec<f64> = spec.terms.iter().map(|t| to_f64(&t.a).log2()).collect();
    let lo = logs.iter().cloned().fold(0.0, f64::min).floor() as i64 - cfg.octaves_below as i64;
    let hi = logs.iter().cloned().fold(0.0, f64::max).ceil() as i64 + cfg.octaves_above as i64;
    let q = q as i64;
    let mut xs = vec![Rational::zero()];
    xs.extend((lo * q..=hi * q).map(|e| from_f64((e as f64 / q as f64).exp2())));
    let signs: Vec<Option<i8>> = xs.par_iter().map(|x| spec.sign_at(x)).collect();
    let undecided = signs.iter().filter(|s| s.is_none()).count();
    let known: Vec<i8> = signs.iter().skip(1).flatten().copied().filter(|&s| s != 0).collect();
    let changes = known.windows(2).filter(|w| w[0] != w[1]).count();
    // f is even: mirror the half line.
    let count = match signs[0] {
        Some(0) => 2 * changes + 2,
        _ => 2 * changes + 1,
    };
    (count, changes, xs.len(), undecided)
}

/// Counts sign changes on a logarithmic grid, doubling the resolution
/// until the count stops growing. Every counted change is certified, so
/// the result is a lower bound.
pub fn count_components_radical(spec: &RadicalComboSpec, cfg: &ScanConfig) -> ComponentCount {
    let mut q = cfg.per_octave.max(1);
    let mut last = scan(spec, cfg, q);
    let mut saturated = true;
    while q * 2 <= cfg.max_per_octave {
        let next = scan(spec, cfg, q * 2);
        q *= 2;
        let grew = next.0 > last.0;
        last = next;
        if !grew {
            saturated = false;
            break;
        }
    }
    let r = spec.r();
    ComponentCount {
        count: last.0,
        r,
        upper_bound: (1u128 << (r - 1)) + 1,
        sign_changes: last.1,
        samples: last.2,
        undecided_samples: last.3,
        per_octave: q,
        saturated,
    }
}

/// A rational within 0.5% of `a^{1/10}`.
pub fn tenth_root_approx(a: &Rational) -> Rational {
    let v = to_f64(a).powf(0.1);
    simple_between(&from_f64(v * 0.995), &from_f64(v * 1.005))
}

/// `1 + Σ_{i<r} (-1)^i a_i^{1/10} (sqrt(x² + a_i²) - a_i)` for the given `a`.
pub fn alternating_spec(a: &[Rational]) -> Result<RadicalComboSpec> {
    let terms = a
        .iter()
        .enumerate()
        .map(|(i, ai)| {
            let c = tenth_root_approx(ai);
            RadicalTerm {
                coeff: if i % 2 == 0 { -c } else { c },
                a: ai.clone(),
                d: ai.clone(),
            }
        })
        .collect();
    RadicalComboSpec::new(int(1), terms)
}

/// Builds `a₁ = 2 < a₂ < … < a_{r-1}` with `a_{i+1} = a_i² 2^j`, taking the
/// smallest `j` at which the counter certifies two more components, and
/// returns the combination with its count.
pub fn component_sequence(r: usize, cfg: &ScanConfig) -> Result<(RadicalComboSpec, ComponentCount)> {
    if r < 1 {
        return Err(Error::Domain("need r >= 1".into()));
    }
    if r > 6 {
        return Err(Error::Guard(format!("r = {r} exceeds 6")));
    }
    let mut a: Vec<Rational> = Vec::new();
    let mut spec = alternating_spec(&a)?;
    let mut count = count_components_radical(&spec, cfg);
    for i in 1..r {
        let base = match a.last() {
            None => int(2),
            Some(prev) => prev * prev,
        };
        let target = 2 * i + 1;
        let mut found = None;
        for j in 0..64 {
            let mut trial = a.clone();
            trial.push(&base * Rational::from_integer(num_bigint::BigInt::from(1u64 << j)));
            let s = alternating_spec(&trial)?;
            let c = count_components_radical(&s, cfg);
            if c.count >= target {
                found = Some((trial, s, c));
                break;
            }
        }
        let (trial, s, c) =
            found.ok_or_else(|| Error::Stabilization(format!("no a_{i} gives {target} components")))?;
        a = trial;
        spec = s;
        count = c;
    }
    Ok((spec, count))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_has_one_component() {
        let spec = RadicalComboSpec::new(int(1), vec![]).unwrap();
        assert_eq!(count_components_radical(&spec, &ScanConfig::default()).count, 1);
    }

    #[test]
    fn two_roots_give_three() {
        let (spec, c) = component_sequence(2, &ScanConfig::default()).unwrap();
        assert_eq!(spec.r(), 2);
        assert_eq!(c.count, 3);
        assert!(!c.saturated);
    }

    #[test]
    fn ladder_reaches_five() {
        let (_, c) = component_sequence(3, &ScanConfig::default()).unwrap();
        assert_eq!(c.count, 5);
        assert!(c.count as u128 <= c.upper_bound);
    }

    #[test]
    fn tenth_roots() {
        let t = tenth_root_approx(&int(1024));
        assert!((to_f64(&t) - 2.0).abs() < 0.01);
        assert!(RadicalComboSpec::new(int(1), vec![RadicalTerm { coeff: int(1), a: int(0), d: int(0) }]).is_err());
    }
}
