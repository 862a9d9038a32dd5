//! The conjugate product `∏ (ξ₁ + ω^{t₂} ξ₂ + … + ω^{t_r} ξ_r)` over all
//! `0 <= t_i < s`, with `ω = e^{2πi/s}`, expanded exactly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Default cap on the number of linear factors `s^{r-1}`.
pub const GALOIS_GUARD: u64 = 10_000;

/// `Σ c_j ω^j` kept modulo `x^s - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicInt {
    coeffs: Vec<BigInt>,
}

impl CyclotomicInt {
    pub fn zero(s: usize) -> Self {
        CyclotomicInt {
            coeffs: vec![BigInt::zero(); s],
        }
    }

    /// `ω^j`.
    pub fn root_power(s: usize, j: usize) -> Self {
        let mut out = Self::zero(s);
        out.coeffs[j % s] = BigInt::one();
        out
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let s = self.order();
        let mut out = Self::zero(s);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[(i + j) % s] += a * b;
                }
            }
        }
        out
    }

    /// The value as a rational integer, if it is one: reduces modulo the
    /// `s`-th cyclotomic polynomial and checks only a constant remains.
    pub fn to_integer(&self) -> Option<BigInt> {
        let phi = cyclotomic_polynomial(self.order());
        let rem = poly_rem(&self.coeffs, &phi);
        if rem.iter().skip(1).all(Zero::is_zero) {
            Some(rem.first().cloned().unwrap_or_else(BigInt::zero))
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let s = self.order() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), std::f64::consts::TAU * j as f64 / s))
            .sum()
    }
}

/// Remainder of `a` modulo the monic `m` (ascending coefficients).
fn poly_rem(a: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let shift = r.len() - dm;
        for (i, c) in m[..dm].iter().enumerate() {
            r[shift + i] -= &lead * c;
        }
    }
    r
}

/// Exact quotient of `a` by the monic `m`.
fn poly_div_exact(a: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - dm];
    for k in (0..q.len()).rev() {
        let lead = r[k + dm].clone();
        for (i, c) in m.iter().enumerate() {
            r[k + i] -= &lead * c;
        }
        q[k] = lead;
    }
    q
}

/// `Φ_s`, ascending coefficients.
pub fn cyclotomic_polynomial(s: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); s + 1];
    p[0] = -BigInt::one();
    p[s] = BigInt::one();
    for d in 1..s {
        if s.is_multiple_of(d) {
            p = poly_div_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

/// Sparse polynomial in `ξ₁, …, ξ_r` with cyclotomic coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    pub vars: usize,
    pub order: usize,
    pub terms: BTreeMap<Vec<u32>, CyclotomicInt>,
}

impl MultiPoly {
    pub fn one(vars: usize, order: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; vars], CyclotomicInt::root_power(order, 0));
        MultiPoly { vars, order, terms }
    }

    /// Product with `Σ_i ω^{t_i} ξ_i`.
    pub fn mul_linear(&self, powers: &[usize]) -> Self {
        let mut terms: BTreeMap<Vec<u32>, CyclotomicInt> = BTreeMap::new();
        for (exp, c) in &self.terms {
            for (i, &t) in powers.iter().enumerate() {
                let mut e = exp.clone();
                e[i] += 1;
                let add = c.mul(&CyclotomicInt::root_power(self.order, t));
                terms
                    .entry(e)
                    .or_insert_with(|| CyclotomicInt::zero(self.order))
                    .add_assign(&add);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly {
            vars: self.vars,
            order: self.order,
            terms,
        }
    }
}

/// The expansion with integer coefficients, when they are integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaloisExpansion {
    pub r: usize,
    pub s: usize,
    pub factors: u64,
    /// `(exponents, coefficient)`; coefficients that are not rational
    /// integers are listed in `non_integer`.
    #[serde(serialize_with = "ser_terms")]
    pub terms: Vec<(Vec<u32>, BigInt)>,
    pub non_integer: Vec<Vec<u32>>,
    pub exponents_divisible: bool,
    pub integer_coefficients: bool,
}

fn ser_terms<S: serde::Serializer>(terms: &[(Vec<u32>, BigInt)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(terms.len()))?;
    for (e, c) in terms {
        seq.serialize_element(&(e, c.to_string()))?;
    }
    seq.end()
}

impl GaloisExpansion {
    pub fn verified(&self) -> bool {
        self.exponents_divisible && self.integer_coefficients
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    /// Exact value at a rational point.
    pub fn eval(&self, xi: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(xi)
                    .fold(Rational::from_integer(c.clone()), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }
}

pub fn galois_product_expand(r: usize, s: usize) -> Result<GaloisExpansion> {
    galois_product_expand_with(r, s, GALOIS_GUARD)
}

pub fn galois_product_expand_with(r: usize, s: usize, guard: u64) -> Result<GaloisExpansion> {
    if r < 2 || s < 2 {
        return Err(Error::Domain(format!("need r, s >= 2, got r = {r}, s = {s}")));
    }
    let factors = (s as u64)
        .checked_pow((r - 1) as u32)
        .filter(|&f| f <= guard)
        .ok_or_else(|| Error::Guard(format!("s^(r-1) factors exceed {guard} for r = {r}, s = {s}")))?;
    let mut poly = MultiPoly::one(r, s);
    let mut t = vec![0usize; r];
    for _ in 0..factors {
        poly = poly.mul_linear(&t);
        // Next tuple (t₂, …, t_r) in base s.
        for slot in t.iter_mut().skip(1) {
            *slot += 1;
            if *slot < s {
                break;
            }
            *slot = 0;
        }
    }
    let mut terms = Vec::new();
    let mut non_integer = Vec::new();
    for (e, c) in &poly.terms {
        match c.to_integer() {
            Some(n) if n.is_zero() => {}
            Some(n) => terms.push((e.clone(), n)),
            None => non_integer.push(e.clone()),
        }
    }
    let exponents_divisible = terms
        .iter()
        .map(|(e, _)| e)
        .chain(&non_integer)
        .all(|e| e.iter().all(|&k| k as usize % s == 0));
    Ok(GaloisExpansion {
        r,
        s,
        factors,
        integer_coefficients: non_integer.is_empty(),
        terms,
        non_integer,
        exponents_divisible,
    })
}

/// The defining product evaluated in floating point.
pub fn galois_product_numeric(r: usize, s: usize, xi: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut t = vec![0usize; r];
    for _ in 0..(s as u64).pow((r - 1) as u32) {
        let factor: Complex64 = xi
            .iter()
            .zip(&t)
            .map(|(&x, &k)| Complex64::from_polar(x, std::f64::consts::TAU * k as f64 / s as f64))
            .sum();
        acc *= factor;
        for slot in t.iter_mut().skip(1) {
            *slot += 1;
            if *slot < s {
                break;
            }
            *slot = 0;
        }
    }
    acc
}

/// Exact value of the expansion against the floating-point product at one
/// point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericCheck {
    pub point: Vec<f64>,
    pub exact: f64,
    pub numeric: (f64, f64),
    pub tolerance: f64,
    pub agrees: bool,
}

/// Compares the expansion with the defining product at `count` seeded
/// points with coordinates in `[-2, 2] ∩ (1/8)ℤ`.
pub fn galois_numeric_checks(exp: &GaloisExpansion, seed: u64, count: usize) -> Vec<NumericCheck> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let xi: Vec<Rational> = (0..exp.r).map(|_| Rational::new(rng.random_range(-16i64..=16).into(), 8.into())).collect();
            let xf: Vec<f64> = xi.iter().map(crate::scalar::rational::to_f64).collect();
            let exact = crate::scalar::rational::to_f64(&exp.eval(&xi));
            let z = galois_product_numeric(exp.r, exp.s, &xf);
            // Each factor is bounded by Σ|ξᵢ|; rounding error is relative to the product of bounds.
            let scale = xf.iter().map(|x| x.abs()).sum::<f64>().max(1.0).powi(exp.factors as i32);
            let tolerance = 1e-9 * scale;
            let agrees = (z.re - exact).abs() <= tolerance && z.im.abs() <= tolerance;
            NumericCheck {
                point: xf,
                exact,
                numeric: (z.re, z.im),
                tolerance,
                agrees,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn cyclotomic_polynomials() {
        let b = |v: &[i64]| v.iter().map(|&x| big(x)).collect::<Vec<_>>();
        assert_eq!(cyclotomic_polynomial(1), b(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), b(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), b(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), b(&[1, -1, 1]));
    }

    #[test]
    fn integer_detection() {
        // 1 + ω + ω² = 0 for s = 3
        let mut z = CyclotomicInt::root_power(3, 0);
        z.add_assign(&CyclotomicInt::root_power(3, 1));
        z.add_assign(&CyclotomicInt::root_power(3, 2));
        assert_eq!(z.to_integer(), Some(big(0)));
        assert_eq!(CyclotomicInt::root_power(4, 1).to_integer(), None);
        let i2 = CyclotomicInt::root_power(4, 1).mul(&CyclotomicInt::root_power(4, 1));
        assert_eq!(i2.to_integer(), Some(big(-1)));
    }

    #[test]
    fn small_expansions() {
        let e = galois_product_expand(2, 2).unwrap();
        assert_eq!(e.terms, vec![(vec![0, 2], big(-1)), (vec![2, 0], big(1))]);
        let e = galois_product_expand(2, 3).unwrap();
        assert_eq!(e.terms, vec![(vec![0, 3], big(1)), (vec![3, 0], big(1))]);
        let e = galois_product_expand(3, 2).unwrap();
        assert!(e.verified());
        assert_eq!(e.degree(), 4);
    }

    #[test]
    fn numeric_agreement() {
        let e = galois_product_expand(3, 3).unwrap();
        assert!(e.verified());
        let xi = [rat(3, 2), rat(-2, 3), rat(5, 7)];
        let exact = crate::scalar::rational::to_f64(&e.eval(&xi));
        let f: Vec<f64> = xi.iter().map(crate::scalar::rational::to_f64).collect();
        let z = galois_product_numeric(3, 3, &f);
        assert!((z.re - exact).abs() <= 1e-9 * exact.abs().max(1.0));
        assert!(z.im.abs() <= 1e-9 * exact.abs().max(1.0));
    }

    #[test]
    fn guard() {
        assert!(matches!(galois_product_expand(6, 7), Err(Error::Guard(_))));
    }
}
