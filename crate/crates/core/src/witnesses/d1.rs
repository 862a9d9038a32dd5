//! Witnesses for protrusive orderings of points on a line.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::{certify, doubling, is_protrusive, WitnessCertificate};
use crate::error::{Error, Result};
use crate::geometry::{CandidateSet, Ordering, Point, VantageMultiset};
use crate::scalar::Rational;

/// Builds a multiset realising a protrusive ordering of `c ⊂ ℝ`.
///
/// The last point of the ordering is an end of `c`. Recursing on the rest
/// and adding `K` copies of both ends of the remaining set leaves the
/// earlier order intact and pushes the stripped point to the back.
pub fn witness_d1(c: &CandidateSet, ordering: &Ordering) -> Result<WitnessCertificate> {
    if c.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: c.dim() });
    }
    if ordering.len() != c.len() || !ordering.is_permutation() {
        return Err(Error::Domain(format!("{ordering} is not an ordering of {} points", c.len())));
    }
    if !is_protrusive(c, ordering) {
        return Err(Error::NotProtrusive);
    }
    let xs: Vec<Rational> = ordering.perm.iter().map(|&i| c.point(i).coord(0).clone()).collect();
    let mult = build(&xs)?;
    let v = VantageMultiset::new(mult.into_iter().map(|(x, m)| (Point::scalar(x), m)).collect())?;
    let cert = certify(c, ordering, v)?;
    if !cert.verified {
        return Err(Error::Verification(format!("d=1 witness for {ordering} did not verify")));
    }
    Ok(cert)
}

fn dsum(v: &BTreeMap<Rational, u64>, x: &Rational) -> Rational {
    v.iter()
        .map(|(p, m)| (p - x).abs() * Rational::from_integer((*m).into()))
        .fold(Rational::zero(), |a, b| a + b)
}

/// Multiplicities for `xs` listed in the target order.
fn build(xs: &[Rational]) -> Result<BTreeMap<Rational, u64>> {
    let n = xs.len();
    if n == 1 {
        return Ok(BTreeMap::from([(xs[0].clone(), 1)]));
    }
    let v = build(&xs[..n - 1])?;
    let prefix = &xs[..n - 1];
    let lo = prefix.iter().min().unwrap().clone();
    let hi = prefix.iter().max().unwrap().clone();
    let last = &xs[n - 1];
    let worst = prefix.iter().map(|x| dsum(&v, x)).max().unwrap();
    let base = dsum(&v, last);
    let lo_d = (&lo - last).abs();
    let hi_d = (&hi - last).abs();
    let span = &hi - &lo;
    // For prefix points the K copies add exactly K·span.
    let k = doubling(|k| {
        let kq = Rational::from_integer(k.into());
        let gain = &kq * (&lo_d + &hi_d - &span);
        Ok((&base + gain > worst).then_some(k))
    })?;
    let mut out = v;
    for end in [lo, hi] {
        let m = out.entry(end).or_default();
        *m = m.checked_add(k).ok_or_else(|| Error::Guard("multiplicity overflow".into()))?;
    }
    Ok(out)
}
