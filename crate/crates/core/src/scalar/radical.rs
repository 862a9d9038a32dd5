//! Exact sums of square roots of nonnegative rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::dyadic::BigInterval;
use crate::scalar::rational::{format_rational, isqrt_exact, Rational};

/// Trial-division bound for full radicand canonicalization.
pub const SQUARE_FREE_TRIAL_BOUND: u32 = 1_000_000;

/// Primes used by the cheap reduction applied at construction time.
const CHEAP_PRIMES: [u32; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// `coeff * sqrt(radicand)` with an integer radicand `>= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub radicand: BigUint,
}

/// `sum_i q_i * sqrt(r_i)`, stored with integer radicands, distinct radicands
/// sorted ascending and no zero coefficients. The empty sum is zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RadicalSum {
    terms: Vec<Term>,
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = SQUARE_FREE_TRIAL_BOUND as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        sieve
            .iter()
            .enumerate()
            .filter_map(|(p, &is_p)| is_p.then_some(p as u32))
            .collect()
    })
}

/// Splits `n = s^2 * m`, pulling out square factors of the given primes and a
/// final perfect-square cofactor.
fn extract_squares<'a>(n: &BigUint, primes: impl IntoIterator<Item = &'a u32>) -> (BigUint, BigUint) {
    let mut outside = BigUint::one();
    let mut inside = n.clone();
    let (s, exact) = isqrt_exact(&inside);
    if exact {
        return (s, BigUint::one());
    }
    for &p in primes {
        let pp = BigUint::from(p) * p;
        if pp > inside {
            break;
        }
        let p_big = BigUint::from(p);
        loop {
            let (q, r) = inside.div_rem(&pp);
            if !r.is_zero() {
                break;
            }
            inside = q;
            outside *= &p_big;
        }
    }
    let (s, exact) = isqrt_exact(&inside);
    if exact {
        outside *= s;
        inside = BigUint::one();
    }
    (outside, inside)
}

impl Term {
    fn enclose(&self, bits: u32) -> BigInterval {
        let root = BigInterval::sqrt_rational(&Rational::from_integer(BigInt::from(self.radicand.clone())), bits)
            .expect("radicand is nonnegative");
        scale_exact(&root, &self.coeff)
    }
}

/// `x * r` rounded outward, exact in `r`.
fn scale_exact(x: &BigInterval, r: &Rational) -> BigInterval {
    let lo = x.lo_rational() * r;
    let hi = x.hi_rational() * r;
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    BigInterval::from_rational(&lo, x.bits()).hull(&BigInterval::from_rational(&hi, x.bits()))
}

impl RadicalSum {
    pub fn zero() -> Self {
        RadicalSum { terms: Vec::new() }
    }

    pub fn from_rational(r: Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        RadicalSum {
            terms: vec![Term {
                coeff: r,
                radicand: BigUint::one(),
            }],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `sqrt(r)` for a nonnegative rational `r`.
    pub fn sqrt(r: &Rational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Domain(format!("sqrt of negative {r}")));
        }
        if r.is_zero() {
            return Ok(Self::zero());
        }
        // sqrt(p/q) = sqrt(p*q) / q
        let q = r.denom().clone();
        let pq = (r.numer() * &q).to_biguint().expect("positive");
        Ok(Self::from_terms([(Rational::new(BigInt::one(), q), pq)]))
    }

    /// `coeff * sqrt(radicand)` for a nonnegative rational radicand.
    pub fn scaled_sqrt(coeff: Rational, radicand: &Rational) -> Result<Self> {
        Ok(Self::sqrt(radicand)? * coeff)
    }

    fn from_terms(raw: impl IntoIterator<Item = (Rational, BigUint)>) -> Self {
        let mut acc: BTreeMap<BigUint, Rational> = BTreeMap::new();
        for (c, n) in raw {
            if c.is_zero() || n.is_zero() {
                continue;
            }
            let (out, inside) = extract_squares(&n, CHEAP_PRIMES.iter());
            let c = c * Rational::from_integer(BigInt::from(out));
            *acc.entry(inside).or_insert_with(Rational::zero) += c;
        }
        RadicalSum {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(radicand, coeff)| Term { coeff, radicand })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a rational, when it has no irrational part.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [t] if t.radicand.is_one() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    /// Reduces every radicand by trial division up to
    /// [`SQUARE_FREE_TRIAL_BOUND`] and merges equal radicands. Radicands whose
    /// square part has a prime factor beyond the bound stay partially reduced.
    pub fn canonical(&self) -> Self {
        let primes = small_primes();
        let mut acc: BTreeMap<BigUint, Rational> = BTreeMap::new();
        for t in &self.terms {
            let (out, inside) = extract_squares(&t.radicand, primes.iter());
            let c = &t.coeff * Rational::from_integer(BigInt::from(out));
            *acc.entry(inside).or_insert_with(Rational::zero) += c;
        }
        RadicalSum {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(radicand, coeff)| Term { coeff, radicand })
                .collect(),
        }
    }

    /// Certified enclosure with `bits` fractional bits.
    pub fn enclose(&self, bits: u32) -> BigInterval {
        self.terms
            .iter()
            .fold(BigInterval::zero(bits), |acc, t| acc + t.enclose(bits))
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose(64).mid_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// Sign certified by enclosure escalation; exact zero is detected
    /// symbolically.
    pub fn signum(&self, cap_bits: u32) -> Result<i8> {
        match crate::scalar::compare::compare_to_zero(self, cap_bits) {
            crate::scalar::ComparisonResult::Less => Ok(-1),
            crate::scalar::ComparisonResult::Equal => Ok(0),
            crate::scalar::ComparisonResult::Greater => Ok(1),
            crate::scalar::ComparisonResult::Indeterminate { .. } => {
                Err(Error::Indeterminate(format!("sign of {self}")))
            }
        }
    }
}

impl From<Rational> for RadicalSum {
    fn from(r: Rational) -> Self {
        RadicalSum::from_rational(r)
    }
}

impl Add for RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: RadicalSum) -> RadicalSum {
        &self + &rhs
    }
}

impl Add<&RadicalSum> for &RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: &RadicalSum) -> RadicalSum {
        // Both sides are already cheaply reduced, so a plain merge suffices.
        let mut acc: BTreeMap<BigUint, Rational> = BTreeMap::new();
        for t in self.terms.iter().chain(rhs.terms.iter()) {
            *acc.entry(t.radicand.clone()).or_insert_with(Rational::zero) += &t.coeff;
        }
        RadicalSum {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(radicand, coeff)| Term { coeff, radicand })
                .collect(),
        }
    }
}

impl Neg for RadicalSum {
    type Output = RadicalSum;
    fn neg(mut self) -> RadicalSum {
        for t in &mut self.terms {
            t.coeff = -t.coeff.clone();
        }
        self
    }
}

impl Neg for &RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        -self.clone()
    }
}

impl Sub for RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: RadicalSum) -> RadicalSum {
        &self - &rhs
    }
}

impl Sub<&RadicalSum> for &RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: &RadicalSum) -> RadicalSum {
        self + &(-rhs)
    }
}

impl Mul<Rational> for RadicalSum {
    type Output = RadicalSum;
    fn mul(mut self, rhs: Rational) -> RadicalSum {
        if rhs.is_zero() {
            return RadicalSum::zero();
        }
        for t in &mut self.terms {
            t.coeff = &t.coeff * &rhs;
        }
        self
    }
}

impl Mul<&Rational> for &RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: &Rational) -> RadicalSum {
        self.clone() * rhs.clone()
    }
}

impl Mul<&RadicalSum> for &RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: &RadicalSum) -> RadicalSum {
        RadicalSum::from_terms(self.terms.iter().flat_map(|a| {
            rhs.terms
                .iter()
                .map(move |b| (&a.coeff * &b.coeff, &a.radicand * &b.radicand))
        }))
    }
}

impl Mul for RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: RadicalSum) -> RadicalSum {
        &self * &rhs
    }
}

impl std::iter::Sum for RadicalSum {
    fn sum<I: Iterator<Item = RadicalSum>>(iter: I) -> RadicalSum {
        iter.fold(RadicalSum::zero(), |a, b| a + b)
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if t.radicand.is_one() {
                write!(f, "{}", format_rational(&t.coeff))?;
            } else if t.coeff.is_one() {
                write!(f, "sqrt({})", t.radicand)?;
            } else {
                write!(f, "{}*sqrt({})", format_rational(&t.coeff), t.radicand)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::{int, rat};

    fn s(n: i64) -> RadicalSum {
        RadicalSum::sqrt(&int(n)).unwrap()
    }

    #[test]
    fn perfect_squares_collapse() {
        assert_eq!(s(4).as_rational(), Some(int(2)));
        assert_eq!(RadicalSum::sqrt(&rat(9, 16)).unwrap().as_rational(), Some(rat(3, 4)));
    }

    #[test]
    fn merging_like_radicals() {
        // sqrt(8) = 2 sqrt(2); sqrt(2) + sqrt(8) - sqrt(18) = 0
        let z = s(2) + s(8) - s(18);
        assert!(z.is_zero());
        let x = s(2) + s(2);
        assert_eq!(x.terms().len(), 1);
        assert_eq!(x.terms()[0].coeff, int(2));
    }

    #[test]
    fn rational_radicands_normalize() {
        // sqrt(1/2) = sqrt(2)/2
        let h = RadicalSum::sqrt(&rat(1, 2)).unwrap();
        assert_eq!(h, s(2) * rat(1, 2));
    }

    #[test]
    fn products() {
        let p = &(int(1).into_rs() + s(2)) * &(int(1).into_rs() - s(2));
        assert_eq!(p.as_rational(), Some(int(-1)));
        assert_eq!((&s(3) * &s(12)).as_rational(), Some(int(6)));
    }

    #[test]
    fn canonical_uses_large_primes() {
        // 1009^2 * 3 escapes the cheap primes but not the full sieve.
        let big = RadicalSum::sqrt(&int(1009 * 1009 * 3)).unwrap();
        let diff = &big - &(s(3) * int(1009));
        assert!(!diff.terms().is_empty() || diff.is_zero());
        assert!(diff.canonical().is_zero());
    }

    #[test]
    fn enclosure_contains_value() {
        let x = s(2) + int(1).into_rs();
        let e = x.enclose(53);
        let lo = e.lo_rational() - int(1);
        let hi = e.hi_rational() - int(1);
        assert!(&lo * &lo < int(2) && &hi * &hi > int(2));
    }

    trait IntoRs {
        fn into_rs(self) -> RadicalSum;
    }
    impl IntoRs for Rational {
        fn into_rs(self) -> RadicalSum {
            RadicalSum::from_rational(self)
        }
    }
}
