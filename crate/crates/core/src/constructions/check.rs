//! The further-reduced "check" problem: distance functions
//! `Ď¹(c) = sqrt(x² + |c - v₁|²) - x` and `Ď²(c) = y |c - v₂|²`, the θ
//! functions governing `Ď¹`, Δ-sets and good pairs.

use std::cmp::Ordering as CmpOrdering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::constructions::hat::{stabilize, tagged_order, HatConfig};
use crate::constructions::hat_ordering;
use crate::enumeration::{rank_single, Catalog};
use crate::error::{Error, Result};
use crate::geometry::{squared_distance, Point, Side, TaggedOrdering};
use crate::scalar::rational::{ceil, simple_between};
use crate::scalar::{compare, int, BigInterval, ComparisonResult, RadicalSum, Rational};

/// `V̌ = (v̌₁, v̌₂, x̌, y̌)` with `y̌ > 0`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CheckConfig {
    pub v1: Point,
    pub v2: Point,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub x: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub y: Rational,
}

pub fn check_d(v: &CheckConfig, c: &Point, side: Side) -> Result<RadicalSum> {
    match side {
        Side::One => {
            let r = squared_distance(c, &v.v1)?;
            Ok(RadicalSum::sqrt(&(&v.x * &v.x + r))? - RadicalSum::from_rational(v.x.clone()))
        }
        Side::Two => {
            if !v.y.is_positive() {
                return Err(Error::Domain("y must be positive".into()));
            }
            Ok(RadicalSum::from_rational(&v.y * squared_distance(c, &v.v2)?))
        }
    }
}

/// `Σ̌_V̌`: the ordering of `Č₁ ⊔ Č₂` by the check distance functions.
pub fn check_ordering(v: &CheckConfig, c1: &[Point], c2: &[Point]) -> Result<TaggedOrdering> {
    let mut vals = Vec::new();
    let mut tags = Vec::new();
    for (i, c) in c1.iter().enumerate() {
        vals.push(check_d(v, c, Side::One)?);
        tags.push((Side::One, i));
    }
    for (i, c) in c2.iter().enumerate() {
        vals.push(check_d(v, c, Side::Two)?);
        tags.push((Side::Two, i));
    }
    tagged_order(&vals, &tags)
}

/// A real number `±sqrt(square)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedSqrt {
    pub negative: bool,
    pub square: Rational,
}

impl SignedSqrt {
    pub fn from_rational(x: &Rational) -> Self {
        SignedSqrt {
            negative: x.is_negative(),
            square: x * x,
        }
    }

    pub fn signum(&self) -> i8 {
        if self.square.is_zero() {
            0
        } else if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn to_radical(&self) -> RadicalSum {
        let r = RadicalSum::sqrt(&self.square).expect("square is nonnegative");
        if self.negative {
            -r
        } else {
            r
        }
    }

    pub fn enclose(&self, bits: u32) -> BigInterval {
        self.to_radical().enclose(bits)
    }

    pub fn to_f64(&self) -> f64 {
        let m = crate::scalar::rational::to_f64(&self.square).sqrt();
        if self.negative {
            -m
        } else {
            m
        }
    }
}

impl PartialOrd for SignedSqrt {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}

impl Ord for SignedSqrt {
    fn cmp(&self, other: &Self) -> CmpOrdering {
        self.signum().cmp(&other.signum()).then_with(|| {
            let mag = self.square.cmp(&other.square);
            if self.negative && self.signum() != 0 {
                mag.reverse()
            } else {
                mag
            }
        })
    }
}

/// A point of the extended real line.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtendedX {
    NegInf,
    Finite(SignedSqrt),
    PosInf,
}

/// `ϑ_a(x) = sqrt(x² + a²) - x`, with `a` given by its square.
pub fn theta(a2: &Rational, x: &SignedSqrt) -> Result<RadicalSum> {
    if !a2.is_positive() {
        return Err(Error::Domain("theta needs a > 0".into()));
    }
    Ok(RadicalSum::sqrt(&(&x.square + a2))? - x.to_radical())
}

/// `ϑ_{a,b}(x)` as the quotient `num / den` of positive radical sums.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaRatio {
    pub num: RadicalSum,
    pub den: RadicalSum,
}

impl ThetaRatio {
    pub fn enclose(&self, bits: u32) -> Result<BigInterval> {
        self.num.enclose(bits).div(&self.den.enclose(bits))
    }

    /// Compares with a rational, using `den > 0`.
    pub fn cmp_rational(&self, t: &Rational) -> ComparisonResult {
        compare(&self.num, &(&self.den * t))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        Some(self.num.as_rational()? / self.den.as_rational()?)
    }
}

pub fn theta_ratio(a2: &Rational, b2: &Rational, x: &ExtendedX) -> Result<ThetaRatio> {
    if !a2.is_positive() || !b2.is_positive() {
        return Err(Error::Domain("theta ratio needs a, b > 0".into()));
    }
    Ok(match x {
        ExtendedX::NegInf => ThetaRatio {
            num: RadicalSum::from_int(1),
            den: RadicalSum::from_int(1),
        },
        ExtendedX::PosInf => ThetaRatio {
            num: RadicalSum::from_rational(a2 / b2),
            den: RadicalSum::from_int(1),
        },
        ExtendedX::Finite(x) => ThetaRatio {
            num: theta(a2, x)?,
            den: theta(b2, x)?,
        },
    })
}

/// The unique `x` with `ϑ_a(x)/ϑ_b(x) = p/q`, for `a > b > 0`,
/// `p >= q > 0` and `p/q <= a²/b²`. Its square comes from the closed form;
/// its sign from comparing `p/q` with `ϑ_{a,b}(0) = a/b`.
pub fn theta_crossing(a2: &Rational, b2: &Rational, p: &Rational, q: &Rational) -> Result<ExtendedX> {
    if !(b2.is_positive() && a2 > b2 && q.is_positive() && p >= q && p * b2 <= a2 * q) {
        return Err(Error::Domain(format!(
            "theta crossing needs a > b > 0, p >= q > 0, p/q <= a²/b² (a² = {a2}, b² = {b2}, p = {p}, q = {q})"
        )));
    }
    if p == q {
        return Ok(ExtendedX::NegInf);
    }
    let den_factor = a2 * q - b2 * p;
    if den_factor.is_zero() {
        return Ok(ExtendedX::PosInf);
    }
    let num = a2 * q * q - b2 * p * p;
    let square = &num * &num / (p * q * int(4) * (p - q) * den_factor);
    // x > 0 iff p/q > a/b iff p² b² > a² q².
    let negative = p * p * b2 < a2 * q * q;
    Ok(ExtendedX::Finite(SignedSqrt { negative, square }))
}

/// Brackets the crossing by certified bisection on rationals until the
/// bracket is narrower than `width`. Each step decides the sign of
/// `q ϑ_a(x) - p ϑ_b(x)` exactly.
pub fn theta_crossing_bisect(
    a2: &Rational,
    b2: &Rational,
    p: &Rational,
    q: &Rational,
    width: &Rational,
) -> Result<(Rational, Rational)> {
    let above = |x: &Rational| -> Result<bool> {
        let xs = SignedSqrt::from_rational(x);
        let d = theta(a2, &xs)? * q.clone() - theta(b2, &xs)? * p.clone();
        match crate::scalar::compare::compare_to_zero(&d, crate::scalar::DEFAULT_PRECISION_CAP) {
            ComparisonResult::Greater => Ok(true),
            ComparisonResult::Less => Ok(false),
            ComparisonResult::Equal => Ok(true),
            ComparisonResult::Indeterminate { .. } => Err(Error::Indeterminate("bisection step".into())),
        }
    };
    let mut lo = int(-1);
    let mut hi = int(1);
    let mut guard = 0;
    while above(&lo)? {
        lo *= int(2);
        guard += 1;
        if guard > 200 {
            return Err(Error::Domain("crossing is at -infinity".into()));
        }
    }
    while !above(&hi)? {
        hi *= int(2);
        guard += 1;
        if guard > 400 {
            return Err(Error::Domain("crossing is at +infinity".into()));
        }
    }
    while &hi - &lo >= *width {
        let mid = (&lo + &hi) / int(2);
        if above(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// A ratio `|v - far|² / |v - near|² > 1` and the candidate indices behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaEntry {
    pub ratio: Rational,
    pub far: usize,
    pub near: usize,
}

/// Squared distances from `v`, rejecting `v ∈ C`.
fn squared_distances(v: &Point, c: &[Point]) -> Result<Vec<Rational>> {
    let r: Vec<Rational> = c.iter().map(|p| squared_distance(v, p)).collect::<Result<_>>()?;
    if r.iter().any(Zero::is_zero) {
        return Err(Error::Domain(format!("{v} is a candidate")));
    }
    Ok(r)
}

pub fn delta_entries(v: &Point, c: &[Point]) -> Result<Vec<DeltaEntry>> {
    let r = squared_distances(v, c)?;
    let mut out = Vec::new();
    for i in 0..c.len() {
        for j in 0..c.len() {
            if r[i] > r[j] {
                out.push(DeltaEntry {
                    ratio: &r[i] / &r[j],
                    far: i,
                    near: j,
                });
            }
        }
    }
    Ok(out)
}

/// `Δ(v)`: the squared-distance ratios above one.
pub fn delta_set(v: &Point, c: &[Point]) -> Result<BTreeSet<Rational>> {
    Ok(delta_entries(v, c)?.into_iter().map(|e| e.ratio).collect())
}

/// `Γ(v₁, v₂)`: pairs `(a, b) ∈ Δ(v₁) × Δ(v₂)` with `a > b`.
pub fn gamma_count(v1: &Point, v2: &Point, c: &[Point]) -> Result<usize> {
    let d1 = delta_set(v1, c)?;
    let d2 = delta_set(v2, c)?;
    Ok(d1.iter().map(|a| d2.iter().filter(|b| a > *b).count()).sum())
}

/// Record of a goodness test.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodPairCertificate {
    pub good: bool,
    pub outside_candidates: bool,
    pub delta1: BTreeSet<Rational>,
    pub delta2: BTreeSet<Rational>,
    pub full_size: bool,
    pub disjoint: bool,
    /// Finite crossings `x` with `ϑ_P(x) ∈ Δ(v₂)`, over pairs `P` of
    /// candidates ordered by distance to `v₁`.
    pub crossings_checked: usize,
    /// Two different pairs reaching `Δ(v₂)` at the same `x`, if any.
    pub conflict: Option<((usize, usize), (usize, usize))>,
}

/// Decides whether `(v₁, v₂)` is good for `C`:
/// neither lies in `C`; `Δ(v₁)` and `Δ(v₂)` are disjoint of full size; and
/// no `x` sends two different `ϑ_{|v₁-c₁|,|v₁-c₂|}` into `Δ(v₂)` at once.
/// The last condition is decided exactly by comparing crossing points.
pub fn is_good_pair(v1: &Point, v2: &Point, c: &[Point]) -> Result<GoodPairCertificate> {
    let n = c.len();
    let mut cert = GoodPairCertificate {
        good: false,
        outside_candidates: !c.contains(v1) && !c.contains(v2),
        delta1: BTreeSet::new(),
        delta2: BTreeSet::new(),
        full_size: false,
        disjoint: false,
        crossings_checked: 0,
        conflict: None,
    };
    if !cert.outside_candidates {
        return Ok(cert);
    }
    let e1 = delta_entries(v1, c)?;
    let e2 = delta_entries(v2, c)?;
    cert.delta1 = e1.iter().map(|e| e.ratio.clone()).collect();
    cert.delta2 = e2.iter().map(|e| e.ratio.clone()).collect();
    let full = n * (n - 1) / 2;
    cert.full_size = cert.delta1.len() == full && cert.delta2.len() == full;
    cert.disjoint = cert.delta1.is_disjoint(&cert.delta2);
    if !(cert.full_size && cert.disjoint) {
        return Ok(cert);
    }
    let r1 = squared_distances(v1, c)?;
    let mut seen: BTreeMap<SignedSqrt, (usize, usize)> = BTreeMap::new();
    for e in &e1 {
        let (a2, b2) = (&r1[e.far], &r1[e.near]);
        for t in &cert.delta2 {
            if t * b2 >= *a2 {
                continue;
            }
            let ExtendedX::Finite(x) = theta_crossing(a2, b2, t, &Rational::one())? else {
                continue;
            };
            cert.crossings_checked += 1;
            let pair = (e.far, e.near);
            match seen.get(&x) {
                Some(&other) if other != pair => {
                    cert.conflict = Some((other, pair));
                    return Ok(cert);
                }
                _ => {
                    seen.insert(x, pair);
                }
            }
        }
    }
    cert.good = true;
    Ok(cert)
}

/// One element of `Ξ` with its crossing point.
#[derive(Debug, Clone, PartialEq)]
pub struct XiEntry {
    pub c1: usize,
    pub c2: usize,
    pub c3: usize,
    pub c4: usize,
    pub x: SignedSqrt,
}

/// Output of [`gen_check_orderings`].
#[derive(Debug, Clone)]
pub struct CheckOrderings {
    pub gamma: usize,
    pub xi: Vec<XiEntry>,
    pub catalog: Catalog<TaggedOrdering, CheckConfig>,
}

/// A rational strictly between two distinct signed square roots.
fn rational_between(lo: &SignedSqrt, hi: &SignedSqrt) -> Rational {
    let mut bits = 64;
    loop {
        let a = lo.enclose(bits);
        let b = hi.enclose(bits);
        if a.certainly_lt(&b) {
            return simple_between(&a.hi_rational(), &b.lo_rational());
        }
        bits *= 2;
    }
}

/// A rational strictly between two radical sums known to satisfy `lo < hi`,
/// preferring the midpoint of their enclosures. `nudge` in `(0, 1)` picks
/// a different point of the gap for retries.
fn rational_inside(lo: &RadicalSum, hi: &RadicalSum, nudge: &Rational) -> Result<Rational> {
    let mut bits = 64;
    while bits <= crate::scalar::DEFAULT_PRECISION_CAP {
        let a = lo.enclose(bits);
        let b = hi.enclose(bits);
        if a.certainly_lt(&b) {
            let l = a.hi_rational();
            let h = b.lo_rational();
            return Ok(&l + (&h - &l) * nudge);
        }
        bits *= 2;
    }
    Err(Error::Indeterminate("interval for y is too narrow".into()))
}

/// For a good pair, builds `Γ(v₁, v₂)` check configurations with pairwise
/// distinct orderings of `C ⊔ C`, each satisfying
/// `Ď¹(c₂) < Ď²(c₄) < Ď²(c₃) < Ď¹(c₁)` for its element of `Ξ`.
pub fn gen_check_orderings(c: &[Point], v1: &Point, v2: &Point) -> Result<CheckOrderings> {
    let cert = is_good_pair(v1, v2, c)?;
    if !cert.good {
        return Err(Error::NotApplicable("the vantage pair is not good".into()));
    }
    let r1 = squared_distances(v1, c)?;
    let r2 = squared_distances(v2, c)?;
    let e1 = delta_entries(v1, c)?;
    let e2 = delta_entries(v2, c)?;
    let mut xi = Vec::new();
    for a in &e1 {
        for b in &e2 {
            if b.ratio < a.ratio {
                let x = match theta_crossing(&r1[a.far], &r1[a.near], &b.ratio, &Rational::one())? {
                    ExtendedX::Finite(x) => x,
                    _ => return Err(Error::Verification("infinite crossing for a good pair".into())),
                };
                xi.push(XiEntry {
                    c1: a.far,
                    c2: a.near,
                    c3: b.far,
                    c4: b.near,
                    x,
                });
            }
        }
    }
    xi.sort_by(|p, q| p.x.cmp(&q.x));
    if xi.windows(2).any(|w| w[0].x == w[1].x) {
        return Err(Error::Verification("crossings of a good pair coincide".into()));
    }
    let gamma = xi.len();
    let mut catalog: Catalog<TaggedOrdering, CheckConfig> = Catalog::default();
    for (j, e) in xi.iter().enumerate() {
        let xp = match xi.get(j + 1) {
            Some(next) => rational_between(&e.x, &next.x),
            None => Rational::from_integer(ceil(&e.x.enclose(64).hi_rational())) + int(1),
        };
        let xs = SignedSqrt::from_rational(&xp);
        let lower = theta(&r1[e.c2], &xs)? * (Rational::one() / &r2[e.c4]);
        let upper = theta(&r1[e.c1], &xs)? * (Rational::one() / &r2[e.c3]);
        let mut placed = false;
        for nudge in [crate::scalar::rat(1, 2), crate::scalar::rat(1, 3), crate::scalar::rat(2, 3), crate::scalar::rat(1, 5)] {
            catalog.trials += 1;
            let y = rational_inside(&lower, &upper, &nudge)?;
            let cfg = CheckConfig {
                v1: v1.clone(),
                v2: v2.clone(),
                x: xp.clone(),
                y,
            };
            let chain = [
                check_d(&cfg, &c[e.c2], Side::One)?,
                check_d(&cfg, &c[e.c4], Side::Two)?,
                check_d(&cfg, &c[e.c3], Side::Two)?,
                check_d(&cfg, &c[e.c1], Side::One)?,
            ];
            for w in chain.windows(2) {
                if compare(&w[0], &w[1]) != ComparisonResult::Less {
                    return Err(Error::Verification(format!("inequality chain fails for element {j} of Ξ")));
                }
            }
            match check_ordering(&cfg, c, c) {
                Ok(o) => {
                    if !catalog.insert(o, cfg) {
                        return Err(Error::Verification(format!("ordering {j} repeats an earlier one")));
                    }
                    placed = true;
                    break;
                }
                Err(Error::Tie { .. }) => catalog.ties_skipped += 1,
                Err(err) => return Err(err),
            }
        }
        if !placed {
            return Err(Error::Verification(format!("no tie-free y found for element {j} of Ξ")));
        }
    }
    Ok(CheckOrderings { gamma, xi, catalog })
}

/// Embeds the check problem into the hat problem:
/// `Ĉ₁ = {0} × Č₁`, `Ĉ₂ = {0} × RČ₂`.
pub fn embed_check_sets(c1: &[Point], c2: &[Point], r: &Rational) -> (Vec<Point>, Vec<Point>) {
    let h1 = c1.iter().map(|c| c.prepend(Rational::zero())).collect();
    let h2 = c2.iter().map(|c| c.scale(r).prepend(Rational::zero())).collect();
    (h1, h2)
}

/// `Û = ((x̌, v̌₁), (R²/(2y̌), R v̌₂))`.
pub fn embed_check_config(v: &CheckConfig, k: u64, r: &Rational) -> HatConfig {
    HatConfig {
        k,
        u1: v.v1.prepend(v.x.clone()),
        u2: v.v2.scale(r).prepend(r * r / (&v.y * int(2))),
    }
}

/// Smallest ladder rung from which the embedded hat ordering matches the
/// check ordering three times in a row.
pub fn embed_stabilization(c1: &[Point], c2: &[Point], v: &CheckConfig, k: u64) -> Result<Rational> {
    let target = check_ordering(v, c1, c2)?;
    stabilize(Rational::one(), |r| {
        let (h1, h2) = embed_check_sets(c1, c2, r);
        Ok(hat_ordering(&embed_check_config(v, k, r), &h1, &h2)? == target)
    })
}

/// `D̂²((0, Rč)) - (Ď²(č) + R²/(2y̌) + x̌)`, the error of the check
/// approximation on side two, enclosed at `bits`.
pub fn embed_error(v: &CheckConfig, c: &Point, k: u64, r: &Rational, bits: u32) -> Result<BigInterval> {
    let (_, h2) = embed_check_sets(&[], std::slice::from_ref(c), r);
    let u = embed_check_config(v, k, r);
    let hat = crate::constructions::hat_d(&u, &h2[0], Side::Two)?;
    let approx = check_d(v, c, Side::Two)? + RadicalSum::from_rational(r * r / (&v.y * int(2)) + &v.x);
    Ok((hat - approx).enclose(bits))
}

/// Perturbs `(near1, near2)` by shrinking pseudo-random rational offsets
/// until the pair is good, keeping each point in the `Ψ₁` cell of its
/// starting point. Returns `None` after `attempts` failures.
pub fn find_good_pair(
    c: &[Point],
    near1: &Point,
    near2: &Point,
    seed: u64,
    attempts: usize,
) -> Result<Option<(Point, Point, GoodPairCertificate)>> {
    use rand::{Rng, SeedableRng};
    let set = crate::geometry::CandidateSet::new(c.to_vec())?;
    let cell1 = rank_single(&set, near1);
    let cell2 = rank_single(&set, near2);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut jitter = |p: &Point, level: usize| -> Point {
        let den = Rational::from_integer(num_bigint::BigInt::from(1000u32) << level);
        Point::new(
            p.coords()
                .iter()
                .map(|x| x + Rational::from_integer(rng.random_range(-997i64..=997).into()) / &den)
                .collect(),
        )
    };
    for attempt in 0..attempts {
        let level = attempt / 4;
        let v1 = jitter(near1, level);
        let v2 = jitter(near2, level);
        if rank_single(&set, &v1) != cell1 || rank_single(&set, &v2) != cell2 {
            continue;
        }
        let cert = is_good_pair(&v1, &v2, c)?;
        if cert.good {
            return Ok(Some((v1, v2, cert)));
        }
    }
    Ok(None)
}

/// Check orderings of `C ⊔ C` from one good pair per ordered pair of
/// distinct `Ψ₁` cells of `C` (candidates on a line or in the plane).
pub fn check_catalog(c: &[Point], seed: u64) -> Result<Catalog<TaggedOrdering, CheckConfig>> {
    let set = crate::geometry::CandidateSet::new(c.to_vec())?;
    let (_, cells) = crate::enumeration::arrangement_cells(&set)?;
    let mut out: Catalog<TaggedOrdering, CheckConfig> = Catalog::default();
    for (i, a) in cells.iter().enumerate() {
        for (j, b) in cells.iter().enumerate() {
            if i == j {
                continue;
            }
            let pair_seed = seed ^ ((i as u64) << 32 | j as u64);
            let Some((v1, v2, _)) = find_good_pair(c, &a.sample, &b.sample, pair_seed, 256)? else {
                return Err(Error::NotApplicable(format!("no good pair found for cells {i} and {j}")));
            };
            let got = gen_check_orderings(c, &v1, &v2)?;
            out.trials += got.catalog.trials;
            out.ties_skipped += got.catalog.ties_skipped;
            for (o, cfg) in got.catalog.entries {
                out.insert(o, cfg);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(x: i64) -> Point {
        Point::scalar(int(x))
    }

    fn ss(x: i64) -> SignedSqrt {
        SignedSqrt::from_rational(&int(x))
    }

    #[test]
    fn theta_basics() {
        assert_eq!(theta(&int(9), &ss(0)).unwrap().as_rational(), Some(int(3)));
        let r = theta_ratio(&int(4), &int(1), &ExtendedX::NegInf).unwrap();
        assert_eq!(r.as_rational(), Some(int(1)));
        let r = theta_ratio(&int(4), &int(1), &ExtendedX::PosInf).unwrap();
        assert_eq!(r.as_rational(), Some(int(4)));
        let r = theta_ratio(&int(4), &int(1), &ExtendedX::Finite(ss(0))).unwrap();
        assert_eq!(r.as_rational(), Some(int(2)));
    }

    #[test]
    fn crossing_examples() {
        let x = theta_crossing(&int(4), &int(1), &int(2), &int(1)).unwrap();
        assert_eq!(x, ExtendedX::Finite(SignedSqrt { negative: false, square: int(0) }));
        assert_eq!(theta_crossing(&int(4), &int(1), &int(3), &int(3)).unwrap(), ExtendedX::NegInf);
        assert_eq!(theta_crossing(&int(4), &int(1), &int(4), &int(1)).unwrap(), ExtendedX::PosInf);
        assert!(theta_crossing(&int(4), &int(1), &int(5), &int(1)).is_err());
        assert!(theta_crossing(&int(1), &int(4), &int(2), &int(1)).is_err());
    }

    #[test]
    fn crossing_matches_bisection() {
        for (a2, b2, p, q) in [(9, 2, 3, 1), (5, 1, 3, 2), (7, 3, 2, 1)] {
            let (a2, b2, p, q) = (int(a2), int(b2), int(p), int(q));
            let ExtendedX::Finite(x) = theta_crossing(&a2, &b2, &p, &q).unwrap() else {
                panic!("finite crossing expected")
            };
            let (lo, hi) = theta_crossing_bisect(&a2, &b2, &p, &q, &rat(1, 1 << 30)).unwrap();
            let e = x.enclose(128);
            assert!(e.lo_rational() >= lo && e.hi_rational() <= hi);
            let r = theta_ratio(&a2, &b2, &ExtendedX::Finite(x)).unwrap();
            assert_eq!(r.cmp_rational(&(&p / &q)), ComparisonResult::Equal);
        }
    }

    #[test]
    fn signed_sqrt_order() {
        let mut xs = vec![ss(3), ss(-5), ss(0), ss(-1), ss(2)];
        xs.sort();
        assert_eq!(xs, vec![ss(-5), ss(-1), ss(0), ss(2), ss(3)]);
    }

    #[test]
    fn delta_examples() {
        let c = vec![p(0), p(1)];
        assert_eq!(delta_set(&p(3), &c).unwrap(), [rat(9, 4)].into_iter().collect());
        assert!(delta_set(&Point::scalar(rat(1, 2)), &c).unwrap().is_empty());
        assert!(delta_set(&p(0), &c).is_err());
    }

    #[test]
    fn goodness_examples() {
        let c = vec![p(0), p(1)];
        assert!(!is_good_pair(&p(0), &p(3), &c).unwrap().good);
        assert!(!is_good_pair(&p(3), &Point::scalar(rat(1, 2)), &c).unwrap().good);
        // Δ(3) = Δ(-2) = {9/4}
        assert!(!is_good_pair(&p(3), &p(-2), &c).unwrap().good);
        assert!(is_good_pair(&p(3), &p(-3), &c).unwrap().good);
    }

    #[test]
    fn gamma_examples() {
        // Δ(v₁) = {9/4}, Δ(v₂) = {4}
        let c = vec![p(0), p(1)];
        assert_eq!(gamma_count(&p(3), &p(2), &c).unwrap(), 0);
        assert_eq!(gamma_count(&p(2), &p(3), &c).unwrap(), 1);
    }

    #[test]
    fn check_orderings_for_a_good_pair() {
        let c = vec![p(0), p(1), p(3)];
        let v1 = Point::scalar(rat(-7, 3));
        let v2 = Point::scalar(rat(11, 5));
        let cert = is_good_pair(&v1, &v2, &c).unwrap();
        assert!(cert.good);
        let out = gen_check_orderings(&c, &v1, &v2).unwrap();
        assert_eq!(out.gamma, gamma_count(&v1, &v2, &c).unwrap());
        assert_eq!(out.catalog.len(), out.gamma);
        for (o, cfg) in &out.catalog.entries {
            assert_eq!(&check_ordering(cfg, &c, &c).unwrap(), o);
        }
    }

    #[test]
    fn good_pairs_inside_cells() {
        let c = vec![p(0), p(1), p(3)];
        let cat = check_catalog(&c, 7).unwrap();
        assert!(!cat.is_empty());
        for (o, cfg) in &cat.entries {
            assert_eq!(&check_ordering(cfg, &c, &c).unwrap(), o);
        }
    }

    #[test]
    fn singleton_embedding_stabilizes() {
        let c1 = vec![p(0)];
        let c2 = vec![p(1)];
        let v = CheckConfig {
            v1: Point::scalar(rat(1, 2)),
            v2: p(3),
            x: rat(1, 3),
            y: rat(1, 7),
        };
        let r = embed_stabilization(&c1, &c2, &v, 1).unwrap();
        assert!(r >= int(1));
    }

    #[test]
    fn embedding_error_decays_quadratically() {
        let v = CheckConfig {
            v1: p(0),
            v2: p(1),
            x: int(2),
            y: int(1),
        };
        let c = p(4);
        let err = |r: i64| -> f64 {
            let e = embed_error(&v, &c, 1, &int(r), 256).unwrap();
            crate::scalar::rational::to_f64(&e.mid_rational()).abs()
        };
        let slope = (err(1 << 12).ln() - err(1 << 8).ln()) / ((1u64 << 12) as f64 / (1u64 << 8) as f64).ln();
        assert!((slope + 2.0).abs() < 0.1, "slope {slope}");
    }
}
