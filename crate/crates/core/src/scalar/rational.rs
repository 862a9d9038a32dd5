use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number in canonical form.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, integers, and decimals (optionally with an exponent)
/// without any floating-point rounding.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(Error::Parse(format!("no digits in {s:?}")));
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid number {s:?}")));
    }
    let digits = format!("{whole}{frac}");
    let mut num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| Error::Parse(format!("invalid number {s:?}")))?
    };
    if neg {
        num = -num;
    }
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// `p/q`, or just `p` for integers. Round-trips through [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact conversion of a finite float.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

/// Largest `f64` not above `r` and smallest `f64` not below `r`.
pub fn f64_bounds(r: &Rational) -> (f64, f64) {
    let mut lo = to_f64(r);
    let mut hi = lo;
    if !lo.is_finite() {
        return if lo > 0.0 { (f64::MAX, f64::INFINITY) } else { (f64::NEG_INFINITY, f64::MIN) };
    }
    while from_f64(lo) > *r {
        lo = lo.next_down();
    }
    while from_f64(hi) < *r {
        hi = hi.next_up();
    }
    (lo, hi)
}

pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// `floor(sqrt(n))` and whether `n` is a perfect square.
pub fn isqrt_exact(n: &BigUint) -> (BigUint, bool) {
    let s = n.sqrt();
    let exact = &s * &s == *n;
    (s, exact)
}

pub fn to_biguint(n: &BigInt) -> Option<BigUint> {
    match n.sign() {
        Sign::Minus => None,
        _ => n.to_biguint(),
    }
}

/// Bit length of `|r|` rounded up, used to size working precision.
pub fn magnitude_bits(r: &Rational) -> u64 {
    let n = r.numer().bits();
    let d = r.denom().bits();
    n.saturating_sub(d) + 1
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Midpoint of two rationals.
pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

/// The rational strictly inside `(lo, hi)` with the smallest power-of-two
/// denominator (and smallest numerator for that denominator).
pub fn simple_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo < hi);
    let mut den = BigInt::one();
    loop {
        let l = floor(&(lo * Rational::from_integer(den.clone()))) + 1;
        let cand = Rational::new(l, den.clone());
        if &cand > lo && &cand < hi {
            return cand;
        }
        den <<= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-2").unwrap(), int(-2));
        assert_eq!(parse_rational("0.1").unwrap(), rat(1, 10));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational("2.5e-1").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("1e3").unwrap(), int(1000));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "abc", "1.2.3", "--1", "1/x", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn f64_bounds_bracket() {
        let r = rat(1, 3);
        let (lo, hi) = f64_bounds(&r);
        assert!(from_f64(lo) <= r && r <= from_f64(hi));
        assert!(hi.next_down() <= lo);
        let (lo, hi) = f64_bounds(&rat(1, 2));
        assert_eq!((lo, hi), (0.5, 0.5));
    }

    #[test]
    fn floor_ceil_signs() {
        assert_eq!(floor(&rat(-3, 2)), BigInt::from(-2));
        assert_eq!(ceil(&rat(-3, 2)), BigInt::from(-1));
        assert_eq!(ceil(&rat(3, 2)), BigInt::from(2));
        assert_eq!(floor(&int(4)), BigInt::from(4));
    }

    #[test]
    fn simple_between_is_strict() {
        let x = simple_between(&rat(1, 3), &rat(1, 2));
        assert!(x > rat(1, 3) && x < rat(1, 2));
        let y = simple_between(&rat(-7, 5), &(rat(-7, 5) + rat(1, 1000)));
        assert!(y > rat(-7, 5));
    }
}
