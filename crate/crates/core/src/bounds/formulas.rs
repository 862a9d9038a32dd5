//! Closed-form counting bounds.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Unsigned Stirling number of the first kind, `s(n, r)`.
pub fn stirling_first_unsigned(n: usize, r: usize) -> Result<BigUint> {
    if r > n {
        return Err(Error::Domain(format!("s(n, r) needs r <= n, got n = {n}, r = {r}")));
    }
    Ok(stirling_row(n).swap_remove(r))
}

/// `s(n, 0), …, s(n, n)` by `s(n, r) = s(n-1, r-1) + (n-1) s(n-1, r)`.
fn stirling_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for m in 1..=n {
        let mut next = vec![BigUint::zero(); m + 1];
        for (r, slot) in next.iter_mut().enumerate() {
            if r >= 1 {
                *slot += &row[r - 1];
            }
            if r < m {
                *slot += &row[r] * BigUint::from(m - 1);
            }
        }
        row = next;
    }
    row
}

/// `s(n, n) + s(n, n-1) + … + s(n, n-d)`: at most this many orderings of
/// `n` points in `ℝ^d` come from one vantage point.
pub fn good_tideman_bound(n: usize, d: usize) -> BigUint {
    let row = stirling_row(n);
    (0..=d.min(n)).map(|i| row[n - i].clone()).sum()
}

pub fn binomial(m: u64, l: u64) -> BigUint {
    if l > m {
        return BigUint::zero();
    }
    let l = l.min(m - l);
    let mut acc = BigUint::one();
    for i in 0..l {
        acc = acc * BigUint::from(m - i) / BigUint::from(i + 1);
    }
    acc
}

fn pattern_sum(n: u64, m: u64) -> BigUint {
    (0..=n).map(|l| (BigUint::one() << l) * binomial(m, l)).sum()
}

/// `2 (2Δ)^N Σ_{ℓ=0}^{N} 2^ℓ C(m, ℓ)`: proper sign patterns of `m`
/// polynomials of degree at most `Δ` in `N` variables.
pub fn warren_bound(n: u64, m: u64, delta: u64) -> BigUint {
    BigUint::from(2u32) * BigUint::from(2 * delta).pow(n as u32) * pattern_sum(n, m)
}

/// `2 (2 s^{r-2} Δ)^N Σ_{ℓ=0}^{N} 2^ℓ C(m, ℓ)`: the same count for linear
/// combinations of `r` terms `g^{1/s}`.
pub fn radical_warren_bound(n: u64, m: u64, delta: u64, r: u64, s: u64) -> Result<BigUint> {
    if r < 2 || s < 1 {
        return Err(Error::Domain(format!("need r >= 2 and s >= 1, got r = {r}, s = {s}")));
    }
    let base = BigUint::from(2u32) * BigUint::from(s).pow((r - 2) as u32) * BigUint::from(delta);
    Ok(BigUint::from(2u32) * base.pow(n as u32) * pattern_sum(n, m))
}

/// Exponent `e` in `ψ^max_{d,k}(n) = Θ(n^e)`: `4⌈k/2⌉ - 2` on a line and
/// `2dk` otherwise.
pub fn main_theorem_exponent(d: u64, k: u64) -> Result<u64> {
    match (d, k) {
        (0, _) | (_, 0) => Err(Error::Domain("need d, k >= 1".into())),
        (1, k) => Ok(4 * k.div_ceil(2) - 2),
        (d, k) => Ok(2 * d * k),
    }
}
