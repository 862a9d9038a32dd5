//! Points, candidate sets, vantage multisets and exact ranking.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{compare_with, format_rational, ComparisonResult, RadicalSum, Rational, DEFAULT_PRECISION_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(!coords.is_empty(), "points have positive dimension");
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| crate::scalar::int(c)).collect())
    }

    pub fn scalar(x: Rational) -> Self {
        Point::new(vec![x])
    }

    pub fn origin(dim: usize) -> Self {
        Point::new(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, r: &Rational) -> Point {
        Point::new(self.coords.iter().map(|a| a * r).collect())
    }

    pub fn dot(&self, other: &Point) -> Rational {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// `(head, self...)`.
    pub fn prepend(&self, head: Rational) -> Point {
        let mut coords = Vec::with_capacity(self.dim() + 1);
        coords.push(head);
        coords.extend(self.coords.iter().cloned());
        Point::new(coords)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(crate::scalar::rational::to_f64).collect()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

/// Distinct candidate points; a candidate's id is its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    dim: usize,
    points: Vec<Point>,
}

impl CandidateSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Degenerate("empty candidate set".into()));
        };
        let dim = first.dim();
        for p in &points {
            p.check_dim(dim)?;
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::Degenerate(format!("candidates {i} and {j} coincide")));
                }
            }
        }
        Ok(CandidateSet { dim, points })
    }

    /// One-dimensional candidate set from rationals.
    pub fn on_line(xs: &[Rational]) -> Result<Self> {
        CandidateSet::new(xs.iter().cloned().map(Point::scalar).collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        CandidateSet::new(rows.iter().map(|r| Point::from_ints(r)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    /// Approximate diameter, used only to size samplers.
    pub fn diameter_f64(&self) -> f64 {
        let mut best = 0.0f64;
        for a in &self.points {
            for b in &self.points {
                let d: f64 = a
                    .to_f64()
                    .iter()
                    .zip(b.to_f64())
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt();
                best = best.max(d);
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VantageMultiset {
    dim: usize,
    entries: Vec<(Point, u64)>,
}

impl VantageMultiset {
    pub fn new(entries: Vec<(Point, u64)>) -> Result<Self> {
        let Some((first, _)) = entries.first() else {
            return Err(Error::Degenerate("empty vantage multiset".into()));
        };
        let dim = first.dim();
        for (p, m) in &entries {
            p.check_dim(dim)?;
            if *m == 0 {
                return Err(Error::Degenerate("zero multiplicity".into()));
            }
        }
        Ok(VantageMultiset { dim, entries })
    }

    pub fn from_points(points: Vec<Point>) -> Result<Self> {
        VantageMultiset::new(points.into_iter().map(|p| (p, 1)).collect())
    }

    pub fn single(p: Point) -> Self {
        VantageMultiset {
            dim: p.dim(),
            entries: vec![(p, 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(Point, u64)] {
        &self.entries
    }

    /// Total size `k`, counting multiplicity.
    pub fn size(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Equal points merged, entries sorted.
    pub fn normalized(&self) -> Self {
        let mut map: std::collections::BTreeMap<Point, u64> = Default::default();
        for (p, m) in &self.entries {
            *map.entry(p.clone()).or_default() += m;
        }
        VantageMultiset {
            dim: self.dim,
            entries: map.into_iter().collect(),
        }
    }

    /// Every entry expanded to multiplicity one.
    pub fn split(&self) -> Self {
        VantageMultiset {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .flat_map(|(p, m)| std::iter::repeat_n((p.clone(), 1), *m as usize))
                .collect(),
        }
    }

    pub fn union(&self, other: &VantageMultiset) -> Result<Self> {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        VantageMultiset::new(entries)
    }
}

/// A permutation of candidate indices listed by increasing distance sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ordering {
    pub perm: Vec<usize>,
}

impl Ordering {
    pub fn new(perm: Vec<usize>) -> Self {
        Ordering { perm }
    }

    pub fn identity(n: usize) -> Self {
        Ordering { perm: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.perm.len()];
        for &i in &self.perm {
            if i >= seen.len() || seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }

    /// Position of each candidate in the ordering.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (pos, &i) in self.perm.iter().enumerate() {
            inv[i] = pos;
        }
        inv
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.perm.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Which of the two flanking candidate sets an element comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

/// An ordering of the tagged disjoint union of two candidate sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TaggedOrdering {
    pub items: Vec<(Side, usize)>,
}

impl fmt::Display for TaggedOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .items
            .iter()
            .map(|(s, i)| match s {
                Side::One => format!("a{i}"),
                Side::Two => format!("b{i}"),
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn squared_distance(p: &Point, q: &Point) -> Result<Rational> {
    q.check_dim(p.dim())?;
    Ok(p.coords
        .iter()
        .zip(&q.coords)
        .fold(Rational::zero(), |acc, (a, b)| {
            let d = a - b;
            acc + &d * &d
        }))
}

pub fn distance(p: &Point, q: &Point) -> Result<RadicalSum> {
    RadicalSum::sqrt(&squared_distance(p, q)?)
}

/// `D_V(c)`: the sum of distances from `c` to the vantage points, with
/// multiplicity.
pub fn distance_sum(v: &VantageMultiset, c: &Point) -> Result<RadicalSum> {
    c.check_dim(v.dim())?;
    let mut acc = RadicalSum::zero();
    for (p, m) in &v.entries {
        let d = distance(p, c)?;
        acc = acc + d * Rational::from_integer((*m).into());
    }
    Ok(acc)
}

/// Index order of `values` by strictly increasing value. Enclosures at a
/// modest precision settle most pairs; anything they leave open is decided
/// by [`compare_with`].
pub fn order_values(values: &[RadicalSum], cap_bits: u32) -> Result<Vec<usize>> {
    let n = values.len();
    let encl: Vec<_> = values.iter().map(|v| v.enclose(64)).collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| encl[a].mid_rational().cmp(&encl[b].mid_rational()));
    let mut consistent = true;
    for w in idx.windows(2) {
        let (a, b) = (w[0], w[1]);
        if encl[a].certainly_lt(&encl[b]) {
            continue;
        }
        match exact_order(values, a, b, cap_bits)? {
            std::cmp::Ordering::Less => {}
            _ => {
                consistent = false;
                break;
            }
        }
    }
    if consistent {
        return Ok(idx);
    }
    // Rare: midpoints misordered within overlapping enclosures.
    let mut out: Vec<usize> = Vec::with_capacity(n);
    for i in idx {
        let mut pos = out.len();
        while pos > 0 {
            let prev = out[pos - 1];
            let ord = if encl[prev].certainly_lt(&encl[i]) {
                std::cmp::Ordering::Less
            } else if encl[i].certainly_lt(&encl[prev]) {
                std::cmp::Ordering::Greater
            } else {
                exact_order(values, prev, i, cap_bits)?
            };
            if ord == std::cmp::Ordering::Less {
                break;
            }
            pos -= 1;
        }
        out.insert(pos, i);
    }
    Ok(out)
}

fn exact_order(values: &[RadicalSum], a: usize, b: usize, cap_bits: u32) -> Result<std::cmp::Ordering> {
    match compare_with(&values[a], &values[b], cap_bits) {
        ComparisonResult::Less => Ok(std::cmp::Ordering::Less),
        ComparisonResult::Greater => Ok(std::cmp::Ordering::Greater),
        ComparisonResult::Equal => Err(Error::Tie { i: a.min(b), j: a.max(b) }),
        ComparisonResult::Indeterminate { precision_bits } => Err(Error::Indeterminate(format!(
            "values {a} and {b} at {precision_bits} bits"
        ))),
    }
}

pub fn distance_sums(c: &CandidateSet, v: &VantageMultiset) -> Result<Vec<RadicalSum>> {
    if c.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            found: v.dim(),
        });
    }
    c.points().iter().map(|p| distance_sum(v, p)).collect()
}

/// `Σ_V^C`, the ordering of `C` by increasing `D_V`.
pub fn rank(c: &CandidateSet, v: &VantageMultiset) -> Result<Ordering> {
    rank_with(c, v, DEFAULT_PRECISION_CAP)
}

pub fn rank_with(c: &CandidateSet, v: &VantageMultiset, cap_bits: u32) -> Result<Ordering> {
    let sums = distance_sums(c, v)?;
    Ok(Ordering::new(order_values(&sums, cap_bits)?))
}

/// Whether `V` gives the candidates pairwise distinct distance sums.
pub fn distinguishes(c: &CandidateSet, v: &VantageMultiset) -> Result<bool> {
    match rank(c, v) {
        Ok(_) => Ok(true),
        Err(Error::Tie { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Smallest gap between consecutive distance sums along `ordering`, as an
/// exact radical sum. Useful as a certificate margin.
pub fn min_margin(c: &CandidateSet, v: &VantageMultiset, ordering: &Ordering) -> Result<RadicalSum> {
    let sums = distance_sums(c, v)?;
    let mut best: Option<RadicalSum> = None;
    for w in ordering.perm.windows(2) {
        let gap = &sums[w[1]] - &sums[w[0]];
        best = Some(match best {
            None => gap,
            Some(b) => match crate::scalar::compare(&gap, &b) {
                ComparisonResult::Less => gap,
                _ => b,
            },
        });
    }
    Ok(best.unwrap_or_default())
}

/// Replaces the two middle order statistics of a one-dimensional multiset of
/// even size by two copies of their midpoint.
pub fn collapse_median(v: &VantageMultiset) -> Result<VantageMultiset> {
    if v.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: v.dim(),
        });
    }
    let k = v.size();
    if k % 2 != 0 {
        return Err(Error::Domain(format!("median collapse needs even size, got {k}")));
    }
    let mut values: Vec<Rational> = v
        .entries
        .iter()
        .flat_map(|(p, m)| std::iter::repeat_n(p.coord(0).clone(), *m as usize))
        .collect();
    values.sort();
    let h = values.len() / 2;
    let mid = (&values[h - 1] + &values[h]) / crate::scalar::int(2);
    values[h - 1] = mid.clone();
    values[h] = mid;
    let out = VantageMultiset::from_points(values.into_iter().map(Point::scalar).collect())?;
    Ok(out.normalized())
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}
