//! Recursive lower-bound configurations: a generic base set for one
//! vantage point, doubling for two, and two flanking clusters for every
//! further pair of vantage points.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::check::{check_catalog, embed_check_config, embed_check_sets, check_ordering};
use crate::constructions::hat::{
    boxplus, build_flanked, default_flanking_params, flanking_scale, flanking_w_grid, gen_d1_flanking,
    hat_ordering, hat_u_d1, lift_vantage, stabilize, HatConfig,
};
use crate::enumeration::{enumerate_psi1_exact, verify_catalog, Catalog, OrderingCatalog};
use crate::error::{Error, Result};
use crate::geometry::{rank, CandidateSet, Ordering, Point, TaggedOrdering, VantageMultiset};
use crate::scalar::{int, Rational};

/// Largest candidate budget accepted.
pub const LOWER_BOUND_MAX_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerKind {
    /// Generic base set, one vantage point.
    Base,
    /// Every vantage point doubled.
    Doubled,
    /// Two flanking clusters at `±R³e₁`.
    Flanking,
    /// Two far vantage points at `±Re₁` that shift every sum alike.
    Padding,
}

/// One step of the recursion, innermost first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Layer {
    pub kind: LayerKind,
    pub k: usize,
    pub n: usize,
    pub center: usize,
    pub flank_one: usize,
    pub flank_two: usize,
    #[serde(serialize_with = "crate::io::ser_rational_opt")]
    pub scale: Option<Rational>,
    pub catalog_size: usize,
}

#[derive(Debug, Clone)]
pub struct LowerBoundConfig {
    pub dim: usize,
    pub k: usize,
    pub candidates: CandidateSet,
    pub catalog: OrderingCatalog,
    pub layers: Vec<Layer>,
}

/// `n` points with every midpoint distinct: powers of two on the line,
/// `(2^i, 3^i)` in the plane, padded with zeros above.
pub fn generic_base_points(d: usize, n: usize) -> Vec<Point> {
    (0..n as u32)
        .map(|i| {
            let mut coords = vec![Rational::zero(); d];
            coords[0] = int(1i64 << i);
            if d >= 2 {
                coords[1] = int(3i64.pow(i));
            }
            Point::new(coords)
        })
        .collect()
}

fn pad(p: &Point, d: usize) -> Point {
    let mut coords = p.coords().to_vec();
    coords.resize(d, Rational::zero());
    Point::new(coords)
}

fn base(d: usize, n: usize) -> Result<LowerBoundConfig> {
    let planar = d.min(2);
    let pts = generic_base_points(planar, n);
    let exact = enumerate_psi1_exact(&CandidateSet::new(pts.clone())?)?;
    let mut catalog = OrderingCatalog {
        trials: exact.trials,
        ties_skipped: exact.ties_skipped,
        ..Default::default()
    };
    for (o, v) in exact.entries {
        let lifted = v.entries().iter().map(|(p, m)| (pad(p, d), *m)).collect();
        catalog.insert(o, VantageMultiset::new(lifted)?);
    }
    let candidates = CandidateSet::new(pts.iter().map(|p| pad(p, d)).collect())?;
    let layers = vec![Layer {
        kind: LayerKind::Base,
        k: 1,
        n,
        center: n,
        flank_one: 0,
        flank_two: 0,
        scale: None,
        catalog_size: catalog.len(),
    }];
    Ok(LowerBoundConfig {
        dim: d,
        k: 1,
        candidates,
        catalog,
        layers,
    })
}

fn doubled(inner: LowerBoundConfig) -> Result<LowerBoundConfig> {
    let mut catalog = OrderingCatalog {
        trials: inner.catalog.trials,
        ..Default::default()
    };
    for (o, v) in inner.catalog.entries {
        let twice = v.entries().iter().map(|(p, m)| (p.clone(), 2 * m)).collect();
        catalog.insert(o, VantageMultiset::new(twice)?);
    }
    let mut layers = inner.layers;
    layers.push(Layer {
        kind: LayerKind::Doubled,
        k: inner.k * 2,
        n: inner.candidates.len(),
        center: inner.candidates.len(),
        flank_one: 0,
        flank_two: 0,
        scale: None,
        catalog_size: catalog.len(),
    });
    Ok(LowerBoundConfig {
        dim: inner.dim,
        k: inner.k * 2,
        candidates: inner.candidates,
        catalog,
        layers,
    })
}

fn axis_point(d: usize, x: Rational) -> Point {
    let mut coords = vec![Rational::zero(); d];
    coords[0] = x;
    Point::new(coords)
}

/// Adds `±Re₁` to every witness. On a line beyond the candidates this
/// changes no ordering; in higher dimension `R` comes from the ladder.
fn padded(inner: LowerBoundConfig) -> Result<LowerBoundConfig> {
    let d = inner.dim;
    let c = &inner.candidates;
    let entries: Vec<(&Ordering, &VantageMultiset)> = inner.catalog.entries.iter().collect();
    let with = |r: &Rational, v: &VantageMultiset| -> Result<VantageMultiset> {
        v.union(&VantageMultiset::from_points(vec![
            axis_point(d, r.clone()),
            axis_point(d, -r.clone()),
        ])?)
    };
    let r = stabilize(Rational::one(), |r| {
        Ok(entries
            .par_iter()
            .all(|(o, v)| with(r, v).and_then(|w| rank(c, &w)).map(|got| &got == *o).unwrap_or(false)))
    })?;
    let mut catalog = OrderingCatalog {
        trials: inner.catalog.trials,
        ..Default::default()
    };
    for (o, v) in &entries {
        catalog.insert((*o).clone(), with(&r, v)?);
    }
    let mut layers = inner.layers;
    layers.push(Layer {
        kind: LayerKind::Padding,
        k: inner.k + 2,
        n: c.len(),
        center: c.len(),
        flank_one: 0,
        flank_two: 0,
        scale: Some(r),
        catalog_size: catalog.len(),
    });
    Ok(LowerBoundConfig {
        dim: d,
        k: inner.k + 2,
        candidates: inner.candidates,
        catalog,
        layers,
    })
}

/// Flanking sets and hat configurations with pairwise distinct hat
/// orderings, for `k` central vantage points.
type HatFamily = (Vec<Point>, Vec<Point>, Catalog<TaggedOrdering, HatConfig>);

fn hat_family_d1(k: u64, m: usize) -> Result<HatFamily> {
    let (a, b) = default_flanking_params(m);
    let r = flanking_scale(k, &a, &b);
    let (c1, c2) = gen_d1_flanking(k, &r, &a, &b)?;
    let mut cat: Catalog<TaggedOrdering, HatConfig> = Catalog::default();
    for (w1, w2) in flanking_w_grid(&a, &b) {
        cat.trials += 1;
        let u = hat_u_d1(k, &r, &w1, &w2);
        match hat_ordering(&u, &c1, &c2) {
            Ok(o) => {
                cat.insert(o, u);
            }
            Err(Error::Tie { .. }) => cat.ties_skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((c1, c2, cat))
}

/// Check orderings of a small set in `ℝ^{d-1}`, embedded as hat orderings
/// at a common scale.
fn hat_family_check(d: usize, k: u64, p: usize) -> Result<HatFamily> {
    let small = generic_base_points(d - 1, p);
    let checks = check_catalog(&small, 0x5eed)?;
    let entries: Vec<_> = checks.entries.iter().collect();
    let r = stabilize(Rational::one(), |r| {
        let (h1, h2) = embed_check_sets(&small, &small, r);
        Ok(entries.par_iter().all(|(o, v)| {
            hat_ordering(&embed_check_config(v, k, r), &h1, &h2)
                .map(|got| &got == *o)
                .unwrap_or(false)
        }))
    })?;
    let (h1, h2) = embed_check_sets(&small, &small, &r);
    let mut cat: Catalog<TaggedOrdering, HatConfig> = Catalog::default();
    cat.trials = checks.trials;
    for (o, v) in &entries {
        debug_assert_eq!(&check_ordering(v, &small, &small)?, *o);
        cat.insert((*o).clone(), embed_check_config(v, k, &r));
    }
    Ok((h1, h2, cat))
}

fn flanked(center: LowerBoundConfig, family: HatFamily) -> Result<LowerBoundConfig> {
    let (c1, c2, hats) = family;
    let d = center.dim;
    let centre_pts = center.candidates.points().to_vec();
    let pairs: Vec<(&Ordering, &VantageMultiset, &TaggedOrdering, &HatConfig)> = center
        .catalog
        .entries
        .iter()
        .flat_map(|(o, v)| hats.entries.iter().map(move |(h, u)| (o, v, h, u)))
        .collect();
    let n1 = centre_pts.len();
    let r = stabilize(Rational::one(), |r| {
        let c = build_flanked(&centre_pts, &c1, &c2, r)?;
        Ok(pairs.par_iter().all(|(o, v, h, u)| {
            lift_vantage(Some(v), u, r)
                .and_then(|w| rank(&c, &w))
                .map(|got| got == boxplus(o, h, c1.len()))
                .unwrap_or(false)
        }))
    })?;
    let candidates = build_flanked(&centre_pts, &c1, &c2, &r)?;
    let mut catalog = OrderingCatalog {
        trials: pairs.len() as u64,
        ..Default::default()
    };
    for (o, v, h, u) in &pairs {
        catalog.insert(boxplus(o, h, c1.len()), lift_vantage(Some(v), u, &r)?);
    }
    let k = center.k + 2;
    let mut layers = center.layers;
    layers.push(Layer {
        kind: LayerKind::Flanking,
        k,
        n: candidates.len(),
        center: n1,
        flank_one: c1.len(),
        flank_two: c2.len(),
        scale: Some(r),
        catalog_size: catalog.len(),
    });
    Ok(LowerBoundConfig {
        dim: d,
        k,
        candidates,
        catalog,
        layers,
    })
}

/// Size the d = 1 recursion expects, with `(m² + 1)²` hat orderings per
/// flanking layer.
fn predicted_d1(k: usize, n: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    let own = match k {
        1 | 2 => (n * (n - 1) / 2 + 1) as u128,
        _ => predicted_d1(k - 2, n),
    };
    if k < 3 {
        return own;
    }
    let flank = (1..)
        .take_while(|m| 4 * m < n)
        .map(|m: usize| predicted_d1(k - 2, n - 4 * m) * ((m * m + 1) as u128).pow(2))
        .max()
        .unwrap_or(0);
    own.max(flank)
}

/// Best flanking split for d = 1: the `m` maximising the predicted size.
fn best_m(k: usize, n: usize) -> Option<usize> {
    (1..)
        .take_while(|m| 4 * m < n)
        .max_by_key(|m: &usize| (predicted_d1(k - 2, n - 4 * m) * ((m * m + 1) as u128).pow(2), usize::MAX - m))
}

/// Assembles a candidate set of `n_budget` points in `ℝ^d` with a catalog of
/// distinct orderings, each witnessed by `k` explicit vantage points and
/// re-verified by rank.
pub fn build_lower_bound_config(d: usize, k: usize, n_budget: usize) -> Result<LowerBoundConfig> {
    if d == 0 || k == 0 || n_budget == 0 {
        return Err(Error::Domain("need d, k, n >= 1".into()));
    }
    if n_budget > LOWER_BOUND_MAX_N {
        return Err(Error::Guard(format!(
            "candidate budget {n_budget} exceeds {LOWER_BOUND_MAX_N}"
        )));
    }
    let out = build(d, k, n_budget)?;
    verify_catalog(&out.candidates, &out.catalog)?;
    for v in out.catalog.entries.values() {
        if v.size() != k as u64 {
            return Err(Error::Verification(format!("witness has {} vantage points, not {k}", v.size())));
        }
    }
    Ok(out)
}

fn build(d: usize, k: usize, n: usize) -> Result<LowerBoundConfig> {
    match k {
        1 => base(d, n),
        2 => doubled(base(d, n)?),
        _ => {
            let inner_k = (k - 2) as u64;
            let flank = if d == 1 {
                match best_m(k, n) {
                    Some(m) if predicted_d1(k - 2, n - 4 * m) * ((m * m + 1) as u128).pow(2) > predicted_d1(k - 2, n) => {
                        Some(flanked(build(d, k - 2, n - 4 * m)?, hat_family_d1(inner_k, m)?)?)
                    }
                    _ => None,
                }
            } else if n >= 5 && d <= 3 {
                let p = ((n - 1) / 2).min(3);
                Some(flanked(build(d, k - 2, n - 2 * p)?, hat_family_check(d, inner_k, p)?)?)
            } else {
                None
            };
            let pad = padded(build(d, k - 2, n)?)?;
            Ok(match flank {
                Some(f) if f.catalog.len() > pad.catalog.len() => f,
                _ => pad,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::estimate_psi;

    #[test]
    fn d1_k1_is_the_midpoint_count() {
        for n in 2..=8 {
            let out = build_lower_bound_config(1, 1, n).unwrap();
            assert_eq!(out.catalog.len(), n * (n - 1) / 2 + 1);
        }
    }

    #[test]
    fn planar_base_counts() {
        assert_eq!(build_lower_bound_config(2, 1, 3).unwrap().catalog.len(), 6);
        assert_eq!(build_lower_bound_config(2, 1, 4).unwrap().catalog.len(), 18);
    }

    #[test]
    fn doubling_keeps_orderings() {
        let out = build_lower_bound_config(1, 2, 5).unwrap();
        assert_eq!(out.catalog.len(), 11);
        assert!(out.catalog.entries.values().all(|v| v.size() == 2));
    }

    #[test]
    fn flanking_beats_one_vantage_point() {
        let out = build_lower_bound_config(1, 3, 10).unwrap();
        assert_eq!(out.layers.last().unwrap().kind, LayerKind::Flanking);
        let k1 = estimate_psi(&out.candidates, 1, &Default::default(), 20_000, 1);
        assert!(out.catalog.len() > k1.len().max(46), "{} vs {}", out.catalog.len(), k1.len());
    }

    #[test]
    fn small_budgets_fall_back_to_padding() {
        let out = build_lower_bound_config(1, 3, 4).unwrap();
        assert_eq!(out.catalog.len(), 7);
        assert_eq!(out.layers.last().unwrap().kind, LayerKind::Padding);
    }

    #[test]
    fn planar_three_vantage_points() {
        let out = build_lower_bound_config(2, 3, 5).unwrap();
        assert!(out.catalog.len() >= 1);
        assert!(out.catalog.entries.values().all(|v| v.size() == 3));
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(build_lower_bound_config(1, 1, 40), Err(Error::Guard(_))));
    }
}
