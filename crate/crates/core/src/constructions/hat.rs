//! Flanking pairs of vantage points and their effective distance functions.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{
    distance, order_values, rank, CandidateSet, Ordering, Point, Side, TaggedOrdering, VantageMultiset,
};
use crate::scalar::{int, RadicalSum, Rational, DEFAULT_PRECISION_CAP};

/// The pair `Û = (û₁, û₂)` together with the number `k` of central vantage
/// points.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct HatConfig {
    pub k: u64,
    pub u1: Point,
    pub u2: Point,
}

/// `D̂¹(ĉ) = |ĉ - û₁| + ((k+1)ĉ + û₂)·e₁` on side one and
/// `D̂²(ĉ) = |ĉ - û₂| + ((k+1)ĉ + û₁)·e₁` on side two.
pub fn hat_d(u: &HatConfig, c: &Point, side: Side) -> Result<RadicalSum> {
    let (near, far) = match side {
        Side::One => (&u.u1, &u.u2),
        Side::Two => (&u.u2, &u.u1),
    };
    let linear = Rational::from_integer((u.k + 1).into()) * c.coord(0) + far.coord(0);
    Ok(distance(c, near)? + RadicalSum::from_rational(linear))
}

/// Values and tags of `c1 ⊔ c2`, in that order.
fn tagged_values<F>(c1: &[Point], c2: &[Point], f: F) -> Result<(Vec<RadicalSum>, Vec<(Side, usize)>)>
where
    F: Fn(&Point, Side) -> Result<RadicalSum>,
{
    let mut vals = Vec::with_capacity(c1.len() + c2.len());
    let mut tags = Vec::with_capacity(c1.len() + c2.len());
    for (i, c) in c1.iter().enumerate() {
        vals.push(f(c, Side::One)?);
        tags.push((Side::One, i));
    }
    for (i, c) in c2.iter().enumerate() {
        vals.push(f(c, Side::Two)?);
        tags.push((Side::Two, i));
    }
    Ok((vals, tags))
}

/// Sorts tagged values; ties are reported with indices into `c1 ++ c2`.
pub(crate) fn tagged_order(vals: &[RadicalSum], tags: &[(Side, usize)]) -> Result<TaggedOrdering> {
    let idx = order_values(vals, DEFAULT_PRECISION_CAP)?;
    Ok(TaggedOrdering {
        items: idx.into_iter().map(|i| tags[i]).collect(),
    })
}

/// `Σ̂_Û`: the ordering of `Ĉ₁ ⊔ Ĉ₂` by the hat distance functions.
pub fn hat_ordering(u: &HatConfig, c1: &[Point], c2: &[Point]) -> Result<TaggedOrdering> {
    let (vals, tags) = tagged_values(c1, c2, |c, s| hat_d(u, c, s))?;
    tagged_order(&vals, &tags)
}

/// `σ' ⊞ σ̂`: `σ'` first, then `σ̂` through `(1, i) ↦ m + i`,
/// `(2, j) ↦ m + |Ĉ₁| + j`.
pub fn boxplus(sigma: &Ordering, hat: &TaggedOrdering, n1: usize) -> Ordering {
    let m = sigma.len();
    let mut perm = sigma.perm.clone();
    perm.extend(hat.items.iter().map(|&(s, i)| match s {
        Side::One => m + i,
        Side::Two => m + n1 + i,
    }));
    Ordering::new(perm)
}

fn cube(r: &Rational) -> Rational {
    r * r * r
}

fn e1_shift(p: &Point, shift: &Rational) -> Point {
    let mut coords = p.coords().to_vec();
    coords[0] += shift;
    Point::new(coords)
}

/// `C' ∪ (R³e₁ + RĈ₁) ∪ (-R³e₁ - RĈ₂)`, with `C'` first.
pub fn build_flanked(center: &[Point], c1: &[Point], c2: &[Point], r: &Rational) -> Result<CandidateSet> {
    if !r.is_positive() {
        return Err(Error::Domain("R must be positive".into()));
    }
    let r3 = cube(r);
    let mut pts: Vec<Point> = center.to_vec();
    pts.extend(c1.iter().map(|c| e1_shift(&c.scale(r), &r3)));
    pts.extend(c2.iter().map(|c| e1_shift(&c.scale(&-r), &-&r3)));
    CandidateSet::new(pts).map_err(|e| match e {
        Error::Degenerate(m) => Error::Degenerate(format!("flanked parts overlap at R = {r}: {m}")),
        other => other,
    })
}

/// `V' ∪ {R³e₁ + Rû₁, -R³e₁ - Rû₂}`. With no central multiset only the two
/// flanking points remain.
pub fn lift_vantage(center: Option<&VantageMultiset>, u: &HatConfig, r: &Rational) -> Result<VantageMultiset> {
    let r3 = cube(r);
    let u1 = e1_shift(&u.u1.scale(r), &r3);
    let u2 = e1_shift(&u.u2.scale(&-r), &-&r3);
    let flank = VantageMultiset::from_points(vec![u1, u2])?;
    match center {
        Some(v) => v.union(&flank),
        None => Ok(flank),
    }
}

/// Upper end of the R-ladder.
pub fn ladder_cap() -> Rational {
    Rational::from_integer(num_bigint::BigInt::one() << 60)
}

/// Doubles `R` from `start` until `holds` succeeds at three consecutive
/// rungs and returns the first of them. Errors from `holds` count as
/// failures. Gives up past `2^60`.
pub fn stabilize<F>(start: Rational, mut holds: F) -> Result<Rational>
where
    F: FnMut(&Rational) -> Result<bool>,
{
    const RUN: usize = 3;
    let cap = ladder_cap();
    let mut r = start;
    let mut run_start: Option<Rational> = None;
    let mut run = 0;
    while r <= cap {
        if holds(&r).unwrap_or(false) {
            if run == 0 {
                run_start = Some(r.clone());
            }
            run += 1;
            if run == RUN {
                return Ok(run_start.unwrap());
            }
        } else {
            run = 0;
        }
        r = r * int(2);
    }
    Err(Error::Stabilization(format!("no run of {RUN} agreements up to R = 2^60")))
}

/// Whether the flanked configuration at scale `R` ranks as `σ' ⊞ σ̂`.
pub fn flanked_agrees(
    center: &[Point],
    center_v: Option<&VantageMultiset>,
    c1: &[Point],
    c2: &[Point],
    u: &HatConfig,
    r: &Rational,
) -> Result<bool> {
    let hat = hat_ordering(u, c1, c2)?;
    let sigma = match center_v {
        Some(v) if !center.is_empty() => rank(&CandidateSet::new(center.to_vec())?, v)?,
        _ => Ordering::new(Vec::new()),
    };
    let expected = boxplus(&sigma, &hat, c1.len());
    let c = build_flanked(center, c1, c2, r)?;
    let v = lift_vantage(center_v, u, r)?;
    Ok(rank(&c, &v)? == expected)
}

/// The sets `Ĉ₁ = {k(R+aᵢ), k(3R+aᵢ)}` and
/// `Ĉ₂ = {(k+2)(R+bᵢ), 2(k+2)R + k(R+bᵢ)}` on the line.
pub fn gen_d1_flanking(k: u64, r: &Rational, a: &[Rational], b: &[Rational]) -> Result<(Vec<Point>, Vec<Point>)> {
    if k == 0 || a.is_empty() || a.len() != b.len() {
        return Err(Error::Domain("need k >= 1 and equally many a and b values".into()));
    }
    let mut diffs = BTreeSet::new();
    for ai in a {
        for bj in b {
            if !diffs.insert(ai - bj) {
                return Err(Error::Degenerate("differences a_i - b_j are not distinct".into()));
            }
        }
    }
    let kk = Rational::from_integer(k.into());
    let k2 = &kk + int(2);
    let mut c1: Vec<Point> = a.iter().map(|ai| Point::scalar(&kk * (r + ai))).collect();
    c1.extend(a.iter().map(|ai| Point::scalar(&kk * (r * int(3) + ai))));
    let mut c2: Vec<Point> = b.iter().map(|bi| Point::scalar(&k2 * (r + bi))).collect();
    c2.extend(b.iter().map(|bi| Point::scalar(&k2 * r * int(2) + &kk * (r + bi))));
    Ok((c1, c2))
}

/// Default generic parameters `aᵢ = i/m`, `bᵢ = i`.
pub fn default_flanking_params(m: usize) -> (Vec<Rational>, Vec<Rational>) {
    let mm = m as i64;
    let a = (1..=mm).map(|i| crate::scalar::rat(i, mm)).collect();
    let b = (1..=mm).map(int).collect();
    (a, b)
}

/// `Û = (k(k+2)w₁, 2(k+2)R + k(k+2)w₂)`.
pub fn hat_u_d1(k: u64, r: &Rational, w1: &Rational, w2: &Rational) -> HatConfig {
    let kk = Rational::from_integer(k.into());
    let kk2 = &kk * (&kk + int(2));
    HatConfig {
        k,
        u1: Point::scalar(&kk2 * w1),
        u2: Point::scalar((&kk + int(2)) * r * int(2) + &kk2 * w2),
    }
}

/// One sample inside each interval cut out by the breakpoints
/// `(aᵢ - b_j)/2`, at which `aᵢ - w` and `b_j + w` swap.
fn interval_samples(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut cuts: Vec<Rational> = a
        .iter()
        .flat_map(|ai| b.iter().map(move |bj| (ai - bj) / int(2)))
        .collect();
    cuts.sort();
    cuts.dedup();
    let mut out = vec![&cuts[0] - Rational::one()];
    for w in cuts.windows(2) {
        out.push((&w[0] + &w[1]) / int(2));
    }
    out.push(cuts.last().unwrap() + Rational::one());
    out
}

/// `(w₁, w₂)` pairs with one `w₁` per ordering of `aᵢ - w₁, b_j + w₁` and
/// one `w₁ - w₂` per ordering of the second family.
pub fn flanking_w_grid(a: &[Rational], b: &[Rational]) -> Vec<(Rational, Rational)> {
    let s = interval_samples(a, b);
    let mut out = Vec::with_capacity(s.len() * s.len());
    for w1 in &s {
        for t in &s {
            out.push((w1.clone(), w1 - t));
        }
    }
    out
}

/// A scale for `gen_d1_flanking` at which the four linear formulas for the
/// hat values hold on the whole grid and the two families separate.
pub fn flanking_scale(k: u64, a: &[Rational], b: &[Rational]) -> Rational {
    let max_abs = |xs: &[Rational]| xs.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero);
    let spread = max_abs(a) + max_abs(b);
    // |w| <= spread / 2 + 1 on the grid, and |w₁ - w₂| as well.
    let bound = (spread * int(4) + int(8)) * Rational::from_integer((k + 2).into());
    let mut r = Rational::one();
    while r <= bound {
        r *= int(2);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{enumerate_hat_psi, ParamSource};
    use crate::scalar::rat;

    fn p(x: i64) -> Point {
        Point::scalar(int(x))
    }

    #[test]
    fn hat_values() {
        let u = HatConfig { k: 0, u1: p(0), u2: p(0) };
        assert_eq!(hat_d(&u, &p(2), Side::One).unwrap().as_rational(), Some(int(4)));
        let u = HatConfig { k: 0, u1: p(5), u2: p(7) };
        assert_eq!(hat_d(&u, &p(5), Side::One).unwrap().as_rational(), Some(int(12)));
        let u = HatConfig { k: 1, u1: p(0), u2: p(1) };
        assert_eq!(hat_d(&u, &p(3), Side::Two).unwrap().as_rational(), Some(int(8)));
    }

    #[test]
    fn boxplus_cases() {
        let empty = Ordering::new(vec![]);
        let hat = TaggedOrdering {
            items: vec![(Side::Two, 0), (Side::One, 0)],
        };
        assert_eq!(boxplus(&empty, &hat, 1).perm, vec![1, 0]);
        let none = TaggedOrdering { items: vec![] };
        assert_eq!(boxplus(&Ordering::new(vec![1, 0]), &none, 0).perm, vec![1, 0]);
        let one = TaggedOrdering {
            items: vec![(Side::One, 0)],
        };
        assert_eq!(boxplus(&Ordering::new(vec![0]), &one, 1).perm, vec![0, 1]);
    }

    #[test]
    fn flanked_layout() {
        let c = build_flanked(&[p(0)], &[p(1)], &[p(1)], &int(10)).unwrap();
        let xs: Vec<_> = c.points().iter().map(|q| q.coord(0).clone()).collect();
        assert_eq!(xs, vec![int(0), int(1010), int(-1010)]);
        let c = build_flanked(&[p(3)], &[], &[], &int(10)).unwrap();
        assert_eq!(c.len(), 1);
        // Overlap when R is tiny.
        assert!(build_flanked(&[p(2)], &[p(1)], &[], &int(1)).is_err());
    }

    #[test]
    fn flanking_sets() {
        let (a, b) = (vec![int(0)], vec![int(1)]);
        let (c1, c2) = gen_d1_flanking(1, &int(100), &a, &b).unwrap();
        assert_eq!(c1, vec![p(100), p(300)]);
        assert_eq!(c2, vec![p(303), p(701)]);
        let (a, b) = default_flanking_params(3);
        let (c1, c2) = gen_d1_flanking(2, &int(50), &a, &b).unwrap();
        assert_eq!((c1.len(), c2.len()), (6, 6));
        assert!(gen_d1_flanking(1, &int(10), &[int(0), int(1)], &[int(0), int(1)]).is_err());
    }

    #[test]
    fn displayed_hat_formulas_hold() {
        let k = 2u64;
        let (a, b) = default_flanking_params(2);
        let r = flanking_scale(k, &a, &b);
        let (c1, c2) = gen_d1_flanking(k, &r, &a, &b).unwrap();
        let kk = int(k as i64);
        let kk2 = &kk * (&kk + int(2));
        for (w1, w2) in flanking_w_grid(&a, &b) {
            let u = hat_u_d1(k, &r, &w1, &w2);
            let base = (&kk + int(2)) * &r * int(2);
            for (i, ai) in a.iter().enumerate() {
                let v = hat_d(&u, &c1[i], Side::One).unwrap().as_rational().unwrap();
                assert_eq!(v, &kk2 * (&r + ai) - &kk2 * &w1 + &base + &kk2 * &w2);
                let v = hat_d(&u, &c1[i + 2], Side::One).unwrap().as_rational().unwrap();
                assert_eq!(v, &kk2 * (&r * int(3) + ai) - &kk2 * &w1 + &base + &kk2 * &w2);
            }
            for (i, bi) in b.iter().enumerate() {
                let v = hat_d(&u, &c2[i], Side::Two).unwrap().as_rational().unwrap();
                assert_eq!(v, &kk2 * (&r + bi) + &kk2 * &w1 + &base + &kk2 * &w2);
                let v = hat_d(&u, &c2[i + 2], Side::Two).unwrap().as_rational().unwrap();
                assert_eq!(v, &kk2 * (&r * int(3) + bi) + &kk2 * &w1 + &base - &kk2 * &w2);
            }
        }
    }

    #[test]
    fn grid_realizes_m_to_the_fourth() {
        let (a, b) = default_flanking_params(2);
        for k in [1u64, 2] {
            let r = flanking_scale(k, &a, &b);
            let (c1, c2) = gen_d1_flanking(k, &r, &a, &b).unwrap();
            let grid: Vec<HatConfig> = flanking_w_grid(&a, &b)
                .iter()
                .map(|(w1, w2)| hat_u_d1(k, &r, w1, w2))
                .collect();
            let cat = enumerate_hat_psi(&c1, &c2, k, ParamSource::List(grid));
            assert_eq!(cat.len(), 25);
        }
    }

    #[test]
    fn composition_stabilizes() {
        let center = vec![p(0), Point::scalar(rat(1, 3)), p(1)];
        let v = VantageMultiset::single(Point::scalar(rat(1, 5)));
        let c1 = vec![p(0), p(2)];
        let c2 = vec![p(1), Point::scalar(rat(5, 2))];
        let u = HatConfig {
            k: 1,
            u1: Point::scalar(rat(3, 2)),
            u2: Point::scalar(rat(-1, 7)),
        };
        let r = stabilize(int(1), |r| flanked_agrees(&center, Some(&v), &c1, &c2, &u, r)).unwrap();
        assert!(r >= int(1));
        for j in 0..3 {
            let rr = &r * int(1 << j);
            assert!(flanked_agrees(&center, Some(&v), &c1, &c2, &u, &rr).unwrap());
        }
    }

    #[test]
    fn ladder_reports_failure() {
        assert!(matches!(stabilize(int(1), |_| Ok(false)), Err(Error::Stabilization(_))));
        let mut calls = 0;
        let r = stabilize(int(1), |r| {
            calls += 1;
            Ok(*r >= int(8))
        })
        .unwrap();
        assert_eq!(r, int(8));
        assert_eq!(calls, 6);
    }
}
