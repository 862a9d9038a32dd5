//! Arbitrary-precision fixed-point intervals.
//!
//! A [`BigInterval`] with `bits = F` stands for `[lo / 2^F, hi / 2^F]` with
//! integer `lo <= hi`. Results are rounded outward to the grid `2^-F`, so
//! the working precision is absolute and the cost grows with the magnitude
//! of the enclosed values.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::interval::Interval;
use crate::scalar::rational::{ceil, f64_bounds, floor, to_biguint, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigInterval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::from(1u8) << bits as usize
}

/// floor(n / 2^s)
fn shr_floor(n: &BigInt, s: u32) -> BigInt {
    n.div_floor(&pow2(s))
}

/// ceil(n / 2^s)
fn shr_ceil(n: &BigInt, s: u32) -> BigInt {
    -((-n).div_floor(&pow2(s)))
}

impl BigInterval {
    pub fn zero(bits: u32) -> Self {
        BigInterval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            bits,
        }
    }

    pub fn from_rational(r: &Rational, bits: u32) -> Self {
        let scaled = r * Rational::from_integer(pow2(bits));
        BigInterval {
            lo: floor(&scaled),
            hi: ceil(&scaled),
            bits,
        }
    }

    /// Enclosure of the square root of a nonnegative rational.
    pub fn sqrt_rational(r: &Rational, bits: u32) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Domain("sqrt of a negative rational".into()));
        }
        // sqrt(p/q) = sqrt(p*q*4^F) / (q*2^F)
        let (p, q) = (r.numer(), r.denom());
        let radicand = to_biguint(&(p * q << (2 * bits as usize))).expect("nonnegative");
        let (s, exact) = crate::scalar::rational::isqrt_exact(&radicand);
        let s = BigInt::from(s);
        let hi_num = if exact { s.clone() } else { &s + 1 };
        // value = s/q in units of 2^-F
        let lo = s.div_floor(q);
        let hi = -((-hi_num).div_floor(q));
        Ok(BigInterval { lo, hi, bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn lo_rational(&self) -> Rational {
        Rational::new(self.lo.clone(), pow2(self.bits))
    }

    pub fn hi_rational(&self) -> Rational {
        Rational::new(self.hi.clone(), pow2(self.bits))
    }

    pub fn width_rational(&self) -> Rational {
        Rational::new(&self.hi - &self.lo, pow2(self.bits))
    }

    pub fn mid_rational(&self) -> Rational {
        Rational::new(&self.hi + &self.lo, pow2(self.bits + 1))
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.lo_rational() <= *r && *r <= self.hi_rational()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Outward-rounded machine interval containing this one.
    pub fn to_interval(&self) -> Interval {
        let (lo, _) = f64_bounds(&self.lo_rational());
        let (_, hi) = f64_bounds(&self.hi_rational());
        Interval::new(lo, hi)
    }

    /// Re-expresses at `bits` fractional bits, rounding outward.
    pub fn with_bits(&self, bits: u32) -> Self {
        use std::cmp::Ordering::*;
        match bits.cmp(&self.bits) {
            Equal => self.clone(),
            Greater => {
                let s = (bits - self.bits) as usize;
                BigInterval {
                    lo: &self.lo << s,
                    hi: &self.hi << s,
                    bits,
                }
            }
            Less => {
                let s = self.bits - bits;
                BigInterval {
                    lo: shr_floor(&self.lo, s),
                    hi: shr_ceil(&self.hi, s),
                    bits,
                }
            }
        }
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let bits = a.bits.max(b.bits);
        (a.with_bits(bits), b.with_bits(bits))
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self.clone()
        } else {
            BigInterval {
                lo: BigInt::zero(),
                hi: (-&self.lo).max(self.hi.clone()),
                bits: self.bits,
            }
        }
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.hi.is_negative() {
            return Err(Error::Domain("sqrt of a negative interval".into()));
        }
        let lo = if self.lo.is_negative() {
            BigInt::zero()
        } else {
            self.lo.clone()
        };
        // sqrt(L / 2^F) = sqrt(L * 2^F) / 2^F
        let f = self.bits as usize;
        let l = to_biguint(&(lo << f)).expect("nonnegative");
        let h = to_biguint(&(&self.hi << f)).expect("nonnegative");
        let (sl, _) = crate::scalar::rational::isqrt_exact(&l);
        let (sh, exact) = crate::scalar::rational::isqrt_exact(&h);
        let sh = if exact { sh } else { sh + 1u8 };
        Ok(BigInterval {
            lo: BigInt::from(sl),
            hi: BigInt::from(sh),
            bits: self.bits,
        })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.contains_zero() {
            return Err(Error::Domain("division by an interval containing zero".into()));
        }
        let (a, b) = Self::aligned(self, rhs);
        let f = a.bits as usize;
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for x in [&a.lo, &a.hi] {
            for y in [&b.lo, &b.hi] {
                // (x/2^F)/(y/2^F) = x*2^F/y in units of 2^-F
                let num = x << f;
                let (q_floor, q_ceil) = {
                    let fl = num.div_floor(y);
                    let ce = -((-&num).div_floor(y));
                    (fl, ce)
                };
                lo = Some(match lo {
                    Some(l) if l <= q_floor => l,
                    _ => q_floor,
                });
                hi = Some(match hi {
                    Some(h) if h >= q_ceil => h,
                    _ => q_ceil,
                });
            }
        }
        Ok(BigInterval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
            bits: a.bits,
        })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.clone() * BigInterval::from_rational(r, self.bits)
    }

    pub fn hull(&self, other: &Self) -> Self {
        let (a, b) = Self::aligned(self, other);
        BigInterval {
            lo: a.lo.min(b.lo),
            hi: a.hi.max(b.hi),
            bits: a.bits,
        }
    }

    /// Every point of `self` lies strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        let (a, b) = Self::aligned(self, other);
        a.hi < b.lo
    }
}

impl Add for BigInterval {
    type Output = BigInterval;
    fn add(self, rhs: BigInterval) -> BigInterval {
        let (a, b) = BigInterval::aligned(&self, &rhs);
        BigInterval {
            lo: a.lo + b.lo,
            hi: a.hi + b.hi,
            bits: a.bits,
        }
    }
}

impl Sub for BigInterval {
    type Output = BigInterval;
    fn sub(self, rhs: BigInterval) -> BigInterval {
        self + (-rhs)
    }
}

impl Neg for BigInterval {
    type Output = BigInterval;
    fn neg(self) -> BigInterval {
        BigInterval {
            lo: -self.hi,
            hi: -self.lo,
            bits: self.bits,
        }
    }
}

impl Mul for BigInterval {
    type Output = BigInterval;
    fn mul(self, rhs: BigInterval) -> BigInterval {
        let (a, b) = BigInterval::aligned(&self, &rhs);
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let lo = products.iter().min().unwrap();
        let hi = products.iter().max().unwrap();
        BigInterval {
            lo: shr_floor(lo, a.bits),
            hi: shr_ceil(hi, a.bits),
            bits: a.bits,
        }
    }
}

impl fmt::Display for BigInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.to_interval();
        write!(f, "[{:.17e}, {:.17e}]", i.lo(), i.hi())
    }
}
