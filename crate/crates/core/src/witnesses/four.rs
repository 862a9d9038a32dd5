//! Witnesses for protrusive orderings of at most four points.
//!
//! Three points are handled by the line and affine constructions. For four
//! planar points the first three lie on an ellipse that keeps the fourth
//! outside; piling copies of its foci onto a witness for the first three
//! pushes the fourth point to the back.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{certify, is_protrusive, witness_affine_independent, witness_d1, WitnessCertificate};
use crate::error::{Error, Result};
use crate::geometry::{rank, CandidateSet, Ordering, Point, VantageMultiset};
use crate::io::ser_rational;
use crate::linalg::{rank as matrix_rank, solve};
use crate::scalar::{int, BigInterval, Rational};

/// `A x² + B xy + C y² + D x + E y + F = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConicCoeffs {
    #[serde(serialize_with = "ser_rational")]
    pub a: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub b: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub c: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub d: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub e: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub f: Rational,
}

impl ConicCoeffs {
    pub fn eval(&self, p: &Point) -> Rational {
        let (x, y) = (p.coord(0), p.coord(1));
        &self.a * x * x + &self.b * x * y + &self.c * y * y + &self.d * x + &self.e * y + &self.f
    }

    /// `B² − 4AC`.
    pub fn discriminant(&self) -> Rational {
        &self.b * &self.b - int(4) * &self.a * &self.c
    }

    pub fn is_ellipse(&self) -> bool {
        self.discriminant().is_negative()
    }

    /// `s·q1 + t·q2`.
    fn combine(s: &Rational, q1: &Self, t: &Rational, q2: &Self) -> Self {
        let mix = |x: &Rational, y: &Rational| s * x + t * y;
        ConicCoeffs {
            a: mix(&q1.a, &q2.a),
            b: mix(&q1.b, &q2.b),
            c: mix(&q1.c, &q2.c),
            d: mix(&q1.d, &q2.d),
            e: mix(&q1.e, &q2.e),
            f: mix(&q1.f, &q2.f),
        }
    }

    fn negated(&self) -> Self {
        ConicCoeffs {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
            e: -&self.e,
            f: -&self.f,
        }
    }

    /// Solves for the center of a central conic.
    pub fn center(&self) -> Result<Point> {
        let two = int(2);
        let m = vec![vec![&two * &self.a, self.b.clone()], vec![self.b.clone(), &two * &self.c]];
        Ok(Point::new(solve(&m, &[-self.d.clone(), -self.e.clone()])?))
    }
}

/// `(α, β, γ)` with `αx + βy + γ = 0` through `p` and `q`.
fn line(p: &Point, q: &Point) -> [Rational; 3] {
    let alpha = q.coord(1) - p.coord(1);
    let beta = p.coord(0) - q.coord(0);
    let gamma = -(&alpha * p.coord(0) + &beta * p.coord(1));
    [alpha, beta, gamma]
}

fn line_pair(l1: &[Rational; 3], l2: &[Rational; 3]) -> ConicCoeffs {
    let [a1, b1, c1] = l1;
    let [a2, b2, c2] = l2;
    ConicCoeffs {
        a: a1 * a2,
        b: a1 * b2 + a2 * b1,
        c: b1 * b2,
        d: a1 * c2 + a2 * c1,
        e: b1 * c2 + b2 * c1,
        f: c1 * c2,
    }
}

fn orient(a: &Point, b: &Point, c: &Point) -> Rational {
    let u = b.sub(a);
    let v = c.sub(a);
    u.coord(0) * v.coord(1) - u.coord(1) * v.coord(0)
}

fn strictly_inside(p: &Point, t: [&Point; 3]) -> bool {
    let s = [orient(t[0], t[1], p), orient(t[1], t[2], p), orient(t[2], t[0], p)];
    s.iter().all(Signed::is_positive) || s.iter().all(Signed::is_negative)
}

/// Four planar points, no three collinear and none inside the triangle of
/// the others.
pub fn in_convex_position(p: &[Point]) -> bool {
    if p.len() != 4 || p.iter().any(|q| q.dim() != 2) {
        return false;
    }
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                if orient(&p[i], &p[j], &p[k]).is_zero() {
                    return false;
                }
            }
        }
    }
    (0..4).all(|i| {
        let o: Vec<&Point> = (0..4).filter(|&j| j != i).map(|j| &p[j]).collect();
        !strictly_inside(&p[i], [o[0], o[1], o[2]])
    })
}

/// An ellipse through four points in convex position, taken from the
/// pencil spanned by two line-pair conics through them.
pub fn ellipse_through(p: &[Point]) -> Result<ConicCoeffs> {
    if !in_convex_position(p) {
        return Err(Error::Domain("points are not in convex position".into()));
    }
    let q1 = line_pair(&line(&p[0], &p[1]), &line(&p[2], &p[3]));
    let q2 = line_pair(&line(&p[0], &p[2]), &line(&p[1], &p[3]));
    // Δ(λ) = B² − 4AC along λQ₁ + (1−λ)Q₂ is quadratic in λ.
    let (da, db, dc) = (&q1.a - &q2.a, &q1.b - &q2.b, &q1.c - &q2.c);
    let qa = &db * &db - int(4) * &da * &dc;
    let qb = int(2) * &q2.b * &db - int(4) * (&q2.a * &dc + &q2.c * &da);
    let mut candidates = Vec::new();
    // A circle through the points, when there is one.
    let (u1, u2) = (&q1.a - &q1.c, &q2.a - &q2.c);
    if (&u1 * &q2.b - &u2 * &q1.b).is_zero() {
        let (s, t) = if !u1.is_zero() || !u2.is_zero() { (u2, -u1) } else { (q2.b.clone(), -q1.b.clone()) };
        if !s.is_zero() || !t.is_zero() {
            candidates.push(ConicCoeffs::combine(&s, &q1, &t, &q2));
        }
    }
    let mut lambdas = Vec::new();
    if qa.is_positive() {
        // The vertex sits midway between the roots.
        lambdas.push(-&qb / (int(2) * &qa));
    }
    lambdas.push(Rational::new(1.into(), 2.into()));
    lambdas.extend((-32..=32).map(|k| Rational::new(k.into(), 4.into())));
    for j in 4..64 {
        let big = Rational::from_integer(num_bigint::BigInt::one() << j);
        lambdas.push(big.clone());
        lambdas.push(-big);
    }
    candidates.extend(lambdas.iter().map(|l| ConicCoeffs::combine(l, &q1, &(Rational::one() - l), &q2)));
    candidates.push(ConicCoeffs::combine(&int(1), &q1, &int(-1), &q2));
    let found = candidates
        .into_iter()
        .find(ConicCoeffs::is_ellipse)
        .ok_or_else(|| Error::NotApplicable("no ellipse found in the pencil".into()))?;
    // Positive definite quadratic part, so the inside is where the form is negative.
    Ok(if (&found.a + &found.c).is_negative() { found.negated() } else { found })
}

/// Foci of an ellipse, as rationals within roughly `2^-bits`. The two foci
/// are exactly symmetric about the center, and coincide at the center for
/// a circle.
pub fn ellipse_foci(q: &ConicCoeffs, bits: u32) -> Result<(Point, Point)> {
    if !q.is_ellipse() {
        return Err(Error::Domain("conic is not an ellipse".into()));
    }
    let q = if (&q.a + &q.c).is_negative() { q.negated() } else { q.clone() };
    let center = q.center()?;
    let half = Rational::new(1.into(), 2.into());
    let f_shift = &q.f + (&q.d * center.coord(0) + &q.e * center.coord(1)) * &half;
    if !f_shift.is_negative() {
        return Err(Error::Domain("ellipse has no real points".into()));
    }
    let h = &q.b * &half;
    let amc = (&q.a - &q.c) * &half;
    let r = &amc * &amc + &h * &h;
    if r.is_zero() {
        return Ok((center.clone(), center));
    }
    let det = &q.a * &q.c - &h * &h;
    let sqrt_r = BigInterval::sqrt_rational(&r, bits)?;
    // c² = −F′(λ₊ − λ₋)/(λ₊λ₋)
    let c = sqrt_r.scale(&(int(-2) * &f_shift / &det)).sqrt()?;
    // Eigenvector of the smaller eigenvalue λ₋ = (A+C)/2 − √R.
    let (ux, uy) = if h.is_zero() {
        let bits_one = BigInterval::from_rational(&Rational::one(), bits);
        let zero = BigInterval::zero(bits);
        if q.a < q.c {
            (bits_one, zero)
        } else {
            (zero, bits_one)
        }
    } else {
        (BigInterval::from_rational(&h, bits), BigInterval::from_rational(&-&amc, bits) - sqrt_r)
    };
    let norm = (ux.clone() * ux.clone() + uy.clone() * uy.clone()).sqrt()?;
    let fx = BigInterval::from_rational(center.coord(0), bits) + (c.clone() * ux).div(&norm)?;
    let fy = BigInterval::from_rational(center.coord(1), bits) + (c * uy).div(&norm)?;
    let f1 = Point::new(vec![fx.mid_rational(), fy.mid_rational()]);
    let f2 = center.scale(&int(2)).sub(&f1);
    Ok((f1, f2))
}

/// A point with positive barycentric weights on all of `c` that is in
/// convex position with the three points `tri`.
pub fn interior_convex_point(c: &CandidateSet, tri: &[Point]) -> Result<Point> {
    let pts = c.points();
    for n in 1..=24i64 {
        for w in weights(pts.len(), n) {
            let total: i64 = w.iter().sum();
            let z = pts
                .iter()
                .zip(&w)
                .fold(Point::origin(2), |acc, (p, &wi)| acc.add(&p.scale(&int(wi))))
                .scale(&Rational::new(1.into(), total.into()));
            let mut quad = tri.to_vec();
            quad.push(z.clone());
            if in_convex_position(&quad) {
                return Ok(z);
            }
        }
    }
    Err(Error::NotApplicable("no interior point in convex position found".into()))
}

/// Positive integer weight vectors with maximum entry exactly `n`.
fn weights(len: usize, n: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (1..=n).map(move |x| {
                    let mut w = w.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.retain(|w| w.contains(&n));
    out
}

fn span_dim(c: &CandidateSet) -> usize {
    let p0 = c.point(0);
    let diffs: Vec<Vec<Rational>> = c.points()[1..].iter().map(|p| p.sub(p0).coords().to_vec()).collect();
    if diffs.is_empty() {
        0
    } else {
        matrix_rank(&diffs)
    }
}

/// Witness for a set whose points lie on one line, through its 1-D
/// parametrisation.
fn witness_collinear(c: &CandidateSet, ordering: &Ordering) -> Result<WitnessCertificate> {
    let p0 = c.point(0);
    let Some(u) = c.points().iter().map(|p| p.sub(p0)).find(|d| d.coords().iter().any(|x| !x.is_zero())) else {
        return certify(c, ordering, VantageMultiset::single(p0.clone()));
    };
    let uu = u.dot(&u);
    let ts: Vec<Rational> = c.points().iter().map(|p| p.sub(p0).dot(&u) / &uu).collect();
    let line_cert = witness_d1(&CandidateSet::on_line(&ts)?, ordering)?;
    let entries = line_cert
        .vantage
        .entries()
        .iter()
        .map(|(t, m)| (p0.add(&u.scale(t.coord(0))), *m))
        .collect();
    certify(c, ordering, VantageMultiset::new(entries)?)
}

/// Any protrusive ordering of at most four points.
pub fn witness_small(c: &CandidateSet, ordering: &Ordering) -> Result<WitnessCertificate> {
    let n = c.len();
    if n > 4 {
        return Err(Error::NotApplicable(format!("{n} points; at most 4 supported")));
    }
    if ordering.len() != n || !ordering.is_permutation() {
        return Err(Error::Domain(format!("{ordering} is not an ordering of {n} points")));
    }
    if !is_protrusive(c, ordering) {
        return Err(Error::NotProtrusive);
    }
    let cert = match span_dim(c) {
        s if s <= 1 => witness_collinear(c, ordering)?,
        s if s == n - 1 => witness_affine_independent(c, ordering)?,
        _ => witness_four_planar(c, ordering)?,
    };
    if !cert.verified {
        return Err(Error::Verification(format!("witness for {ordering} did not verify")));
    }
    Ok(cert)
}

const FOCI_BITS_CAP: u32 = 8192;

/// Witness for a protrusive ordering of four points spanning a plane.
pub fn witness_four_planar(c: &CandidateSet, ordering: &Ordering) -> Result<WitnessCertificate> {
    if c.len() != 4 || c.dim() != 2 {
        return Err(Error::NotApplicable("needs four points in the plane".into()));
    }
    if ordering.len() != 4 || !ordering.is_permutation() {
        return Err(Error::Domain(format!("{ordering} is not an ordering of 4 points")));
    }
    if span_dim(c) != 2 {
        return Err(Error::NotApplicable("points are collinear".into()));
    }
    if !is_protrusive(c, ordering) {
        return Err(Error::NotProtrusive);
    }
    let first: Vec<Point> = ordering.perm[..3].iter().map(|&i| c.point(i).clone()).collect();
    let sub = CandidateSet::new(first.clone())?;
    let inner = witness_small(&sub, &Ordering::identity(3))?;

    // Foci at a given precision; exact when `exact` is set.
    let (foci, exact): (Box<dyn Fn(u32) -> Result<(Point, Point)>>, bool) = if span_dim(&sub) == 1 {
        // Ends of the segment through the three points.
        let dir = first[1].sub(&first[0]);
        let dir = if dir.coords().iter().all(Zero::is_zero) { first[2].sub(&first[0]) } else { dir };
        let key = |p: &Point| p.sub(&first[0]).dot(&dir);
        let lo = first.iter().min_by_key(|p| key(p)).unwrap().clone();
        let hi = first.iter().max_by_key(|p| key(p)).unwrap().clone();
        (Box::new(move |_| Ok((lo.clone(), hi.clone()))), true)
    } else {
        let z = interior_convex_point(c, &first)?;
        let mut quad = first.clone();
        quad.push(z);
        let conic = ellipse_through(&quad)?;
        let last = c.point(ordering.perm[3]);
        if !conic.eval(last).is_positive() {
            return Err(Error::Verification("last point is not outside the ellipse".into()));
        }
        let circle = (&conic.a - &conic.c).is_zero() && conic.b.is_zero();
        (Box::new(move |bits| ellipse_foci(&conic, bits)), circle)
    };

    let last = ordering.perm[3];
    let mut bits = 64u32;
    let mut k = 1u64;
    loop {
        let (f1, f2) = foci(bits)?;
        let mut entries = inner.vantage.entries().to_vec();
        entries.push((f1, k));
        entries.push((f2, k));
        let v = VantageMultiset::new(entries)?.normalized();
        let pushed = match rank(c, &v) {
            Ok(o) if &o == ordering => return certify(c, ordering, v),
            Ok(o) => o.perm[3] == last,
            Err(Error::Tie { .. }) => false,
            Err(e) => return Err(e),
        };
        if pushed && !exact {
            if bits >= FOCI_BITS_CAP {
                return Err(Error::Stabilization("foci precision cap reached".into()));
            }
            bits *= 2;
        } else {
            if k >= 1 << 60 {
                return Err(Error::Stabilization("multiplicity ladder reached 2^60".into()));
            }
            k *= 2;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::distance;
    use crate::scalar::rat;
    use crate::witnesses::all_orderings;

    fn pts(rows: &[[i64; 2]]) -> Vec<Point> {
        rows.iter().map(|r| Point::from_ints(r)).collect()
    }

    #[test]
    fn unit_square_is_a_circle() {
        let q = ellipse_through(&pts(&[[0, 0], [1, 0], [1, 1], [0, 1]])).unwrap();
        let (f1, f2) = ellipse_foci(&q, 64).unwrap();
        let mid = Point::new(vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(f1, mid);
        assert_eq!(f2, mid);
    }

    fn focal_spread(p: &[Point], f: &(Point, Point), bits: u32) -> Rational {
        let sums: Vec<BigInterval> = p
            .iter()
            .map(|x| (distance(x, &f.0).unwrap() + distance(x, &f.1).unwrap()).enclose(bits))
            .collect();
        let hi = sums.iter().map(|s| s.hi_rational()).max().unwrap();
        let lo = sums.iter().map(|s| s.lo_rational()).min().unwrap();
        hi - lo
    }

    #[test]
    fn focal_sums_agree() {
        for quad in [pts(&[[0, 0], [2, 0], [2, 1], [0, 1]]), pts(&[[0, 0], [5, 1], [4, 3], [-1, 2]])] {
            let q = ellipse_through(&quad).unwrap();
            assert!(quad.iter().all(|p| q.eval(p).is_zero()));
            let f = ellipse_foci(&q, 200).unwrap();
            assert_eq!(f.0.add(&f.1), q.center().unwrap().scale(&int(2)));
            assert!(focal_spread(&quad, &f, 256) < Rational::new(1.into(), num_bigint::BigInt::one() << 180));
        }
        let rect = pts(&[[0, 0], [2, 0], [2, 1], [0, 1]]);
        let f = ellipse_foci(&ellipse_through(&rect).unwrap(), 64).unwrap();
        assert_eq!(f.0.coord(1), &rat(1, 2));
    }

    #[test]
    fn pencil_is_not_always_a_circle() {
        let quad = pts(&[[0, 0], [4, 0], [3, 2], [0, 1]]);
        let q = ellipse_through(&quad).unwrap();
        assert!(q.is_ellipse());
        let f = ellipse_foci(&q, 128).unwrap();
        assert_ne!(f.0, f.1);
        let d = distance(&f.0, &f.1).unwrap();
        assert!(d.to_f64() > 0.0);
    }

    #[test]
    fn square_with_any_vertex_last() {
        let c = CandidateSet::from_ints(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]).unwrap();
        for o in all_orderings(4) {
            let cert = witness_four_planar(&c, &o).unwrap();
            assert!(cert.verified, "{o}");
        }
    }

    #[test]
    fn collinear_prefix() {
        let c = CandidateSet::from_ints(&[&[0, 0], &[1, 0], &[3, 0], &[1, 2]]).unwrap();
        for o in all_orderings(4).into_iter().filter(|o| is_protrusive(&c, o)) {
            assert!(witness_four_planar(&c, &o).unwrap().verified, "{o}");
        }
    }

    #[test]
    fn generic_quadrilateral_and_triangle_with_interior_point() {
        let quads = [
            CandidateSet::from_ints(&[&[0, 0], &[7, 1], &[5, 4], &[-1, 3]]).unwrap(),
            CandidateSet::from_ints(&[&[0, 0], &[6, 0], &[0, 6], &[1, 2]]).unwrap(),
        ];
        for c in &quads {
            let mut ok = 0;
            for o in all_orderings(4) {
                match witness_small(c, &o) {
                    Ok(cert) => {
                        assert!(cert.verified);
                        ok += 1;
                    }
                    Err(e) => assert_eq!(e, Error::NotProtrusive, "{o}"),
                }
            }
            assert!(ok > 0);
        }
    }

    #[test]
    fn non_protrusive_rejected() {
        let c = CandidateSet::from_ints(&[&[0, 0], &[6, 0], &[0, 6], &[1, 2]]).unwrap();
        assert_eq!(witness_four_planar(&c, &Ordering::new(vec![0, 1, 2, 3])), Err(Error::NotProtrusive));
    }

    #[test]
    fn convex_position() {
        assert!(in_convex_position(&pts(&[[0, 0], [1, 0], [1, 1], [0, 1]])));
        assert!(!in_convex_position(&pts(&[[0, 0], [4, 0], [0, 4], [1, 1]])));
        assert!(!in_convex_position(&pts(&[[0, 0], [1, 0], [2, 0], [0, 1]])));
    }
}
