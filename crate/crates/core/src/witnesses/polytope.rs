//! Vertex sets of a few vertex-transitive polytopes with rational
//! coordinates.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, CandidateSet, Point};
use crate::scalar::{int, BigInterval, RadicalSum, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolytopeKind {
    RegularPolygon(usize),
    Simplex(usize),
    Hypercube(usize),
    CrossPolytope(usize),
}

/// Hard limit on the number of generated vertices.
const MAX_VERTICES: usize = 1 << 12;

/// Vertices of the polytope.
///
/// Triangles and hexagons are realised exactly in ℝ³ (on the plane
/// `x + y + z = const`), squares in ℝ². Other polygons are rational
/// approximations of the unit circle points to well below `10^-30`.
pub fn gen_vertex_transitive(kind: &PolytopeKind) -> Result<CandidateSet> {
    let pts = match *kind {
        PolytopeKind::RegularPolygon(m) if m < 3 => {
            return Err(Error::Domain(format!("a polygon needs at least 3 vertices, got {m}")))
        }
        PolytopeKind::RegularPolygon(m) if m > MAX_VERTICES => return Err(Error::Guard(format!("{m} vertices"))),
        PolytopeKind::RegularPolygon(3) => unit_vectors(3),
        PolytopeKind::RegularPolygon(4) => [[0, 0], [1, 0], [1, 1], [0, 1]].iter().map(|p| Point::from_ints(p)).collect(),
        PolytopeKind::RegularPolygon(6) => {
            // Consecutive vertices differ by a single transposition of entries.
            [[1, -1, 0], [1, 0, -1], [0, 1, -1], [-1, 1, 0], [-1, 0, 1], [0, -1, 1]]
                .iter()
                .map(|p| Point::from_ints(p))
                .collect()
        }
        PolytopeKind::RegularPolygon(m) => circle_points(m),
        PolytopeKind::Simplex(d) if d == 0 || d + 1 > MAX_VERTICES => return Err(Error::Domain(format!("simplex({d})"))),
        PolytopeKind::Simplex(d) => unit_vectors(d + 1),
        PolytopeKind::Hypercube(d) if d == 0 || d > 12 => return Err(Error::Domain(format!("hypercube({d})"))),
        PolytopeKind::Hypercube(d) => (0..1usize << d)
            .map(|mask| Point::new((0..d).rev().map(|i| int(((mask >> i) & 1) as i64)).collect()))
            .collect(),
        PolytopeKind::CrossPolytope(d) if d == 0 || 2 * d > MAX_VERTICES => {
            return Err(Error::Domain(format!("cross_polytope({d})")))
        }
        PolytopeKind::CrossPolytope(d) => (0..d)
            .flat_map(|i| {
                [1, -1].map(|s| Point::new((0..d).map(|j| int(if i == j { s } else { 0 })).collect()))
            })
            .collect(),
    };
    CandidateSet::new(pts)
}

fn unit_vectors(n: usize) -> Vec<Point> {
    (0..n)
        .map(|i| Point::new((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()))
        .collect()
}

const WORK_BITS: usize = 224;
const OUT_BITS: usize = 112;

/// `atan(1/x)` scaled by `2^WORK_BITS`.
fn atan_inv(x: u32) -> BigInt {
    let one = BigInt::one() << WORK_BITS;
    let x2 = BigInt::from(x) * x;
    let mut power = &one / x;
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// `(cos θ, sin θ)` scaled by `2^WORK_BITS`, for `0 <= θ < 8`.
fn cos_sin(theta: &BigInt) -> (BigInt, BigInt) {
    let one = BigInt::one() << WORK_BITS;
    let (mut c, mut s) = (BigInt::zero(), BigInt::zero());
    let mut term = one;
    let mut k = 0u32;
    while !term.is_zero() {
        match k % 4 {
            0 => c += &term,
            1 => s += &term,
            2 => c -= &term,
            _ => s -= &term,
        }
        k += 1;
        term = (term * theta >> WORK_BITS) / k;
    }
    (c, s)
}

fn circle_points(m: usize) -> Vec<Point> {
    let pi = (atan_inv(5) * 16) - (atan_inv(239) * 4);
    let denom = BigInt::one() << OUT_BITS;
    let round = |v: BigInt| {
        let shift = WORK_BITS - OUT_BITS;
        let half = BigInt::one() << (shift - 1);
        Rational::new((v + half) >> shift, denom.clone())
    };
    (0..m)
        .map(|k| {
            let theta = &pi * 2 * k / m;
            let (c, s) = cos_sin(&theta);
            Point::new(vec![round(c), round(s)])
        })
        .collect()
}

/// An upper bound on the spread between the largest and smallest row sum
/// of the distance matrix.
pub fn row_sum_spread(c: &CandidateSet, bits: u32) -> Result<Rational> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for p in c.points() {
        let mut row = RadicalSum::zero();
        for q in c.points() {
            row = row + distance(p, q)?;
        }
        let e: BigInterval = row.enclose(bits);
        let (l, h) = (e.lo_rational(), e.hi_rational());
        if lo.as_ref().is_none_or(|x| &l < x) {
            lo = Some(l);
        }
        if hi.as_ref().is_none_or(|x| &h > x) {
            hi = Some(h);
        }
    }
    Ok(hi.unwrap() - lo.unwrap())
}
