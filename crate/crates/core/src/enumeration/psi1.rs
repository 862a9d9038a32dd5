//! Exact `Ψ₁` by the arrangement of perpendicular bisectors.

use std::cmp::Ordering as CmpOrdering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::enumeration::OrderingCatalog;
use crate::error::{Error, Result};
use crate::geometry::{squared_distance, CandidateSet, Ordering, Point, VantageMultiset};
use crate::scalar::{int, Rational};

/// The hyperplane `normal . x + offset = 0`, scaled so that the first
/// nonzero normal entry is 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Line {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Line {
    fn normalized(normal: Vec<Rational>, offset: Rational) -> Option<Line> {
        let lead = normal.iter().find(|c| !c.is_zero())?.clone();
        Some(Line {
            normal: normal.iter().map(|c| c / &lead).collect(),
            offset: offset / lead,
        })
    }

    pub fn eval(&self, p: &Point) -> Rational {
        self.normal
            .iter()
            .zip(p.coords())
            .fold(self.offset.clone(), |acc, (a, x)| acc + a * x)
    }

    pub fn side(&self, p: &Point) -> i8 {
        crate::geometry::sign(&self.eval(p))
    }
}

/// A full-dimensional cell: its side of every arrangement hyperplane and a
/// rational interior point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementCell {
    pub constraints: Vec<(usize, i8)>,
    pub sample: Point,
}

impl ArrangementCell {
    /// Every constraint holds strictly at the sample point.
    pub fn sample_is_interior(&self, lines: &[Line]) -> bool {
        self.constraints
            .iter()
            .all(|&(id, side)| side != 0 && lines[id].side(&self.sample) == side)
    }
}

/// Distinct perpendicular bisectors of candidate pairs, where
/// `|x - c_i|^2 - |x - c_j|^2 = 0`.
pub fn bisector_lines(c: &CandidateSet) -> Vec<Line> {
    let mut set = BTreeSet::new();
    let pts = c.points();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let normal: Vec<Rational> = pts[j]
                .coords()
                .iter()
                .zip(pts[i].coords())
                .map(|(cj, ci)| (cj - ci) * int(2))
                .collect();
            let offset = pts[i].dot(&pts[i]) - pts[j].dot(&pts[j]);
            if let Some(l) = Line::normalized(normal, offset) {
                set.insert(l);
            }
        }
    }
    set.into_iter().collect()
}

/// Ordering of candidates by distance to a single point, or `None` on a tie.
pub(crate) fn rank_single(c: &CandidateSet, v: &Point) -> Option<Ordering> {
    let d: Vec<Rational> = c
        .points()
        .iter()
        .map(|p| squared_distance(p, v).expect("dims checked"))
        .collect();
    let mut idx: Vec<usize> = (0..d.len()).collect();
    idx.sort_by(|&a, &b| d[a].cmp(&d[b]));
    if idx.windows(2).any(|w| d[w[0]] == d[w[1]]) {
        return None;
    }
    Some(Ordering::new(idx))
}

fn make_cell(lines: &[Line], sample: Point) -> ArrangementCell {
    let constraints = lines.iter().enumerate().map(|(i, l)| (i, l.side(&sample))).collect();
    ArrangementCell { constraints, sample }
}

fn cells_d1(lines: &[Line]) -> Vec<ArrangementCell> {
    // Each line is the point x = -offset.
    let mut cuts: Vec<Rational> = lines.iter().map(|l| -&l.offset).collect();
    cuts.sort();
    let mut samples = Vec::new();
    match (cuts.first(), cuts.last()) {
        (Some(first), Some(last)) => {
            samples.push(first - Rational::one());
            for w in cuts.windows(2) {
                samples.push((&w[0] + &w[1]) / int(2));
            }
            samples.push(last + Rational::one());
        }
        _ => samples.push(Rational::zero()),
    }
    samples
        .into_iter()
        .map(|x| make_cell(lines, Point::scalar(x)))
        .collect()
}

/// Orders 2D direction vectors by angle in `[0, 2π)`.
fn angle_cmp(a: &(Rational, Rational), b: &(Rational, Rational)) -> CmpOrdering {
    let half = |v: &(Rational, Rational)| -> u8 {
        if v.1.is_positive() || (v.1.is_zero() && v.0.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a.0 * &b.1 - &a.1 * &b.0;
        if cross.is_positive() {
            CmpOrdering::Less
        } else if cross.is_negative() {
            CmpOrdering::Greater
        } else {
            CmpOrdering::Equal
        }
    })
}

fn intersect(l: &Line, m: &Line) -> Option<Point> {
    let (a1, b1, c1) = (&l.normal[0], &l.normal[1], &l.offset);
    let (a2, b2, c2) = (&m.normal[0], &m.normal[1], &m.offset);
    let det = a1 * b2 - a2 * b1;
    if det.is_zero() {
        return None;
    }
    let x = (b1 * c2 - b2 * c1) / &det;
    let y = (a2 * c1 - a1 * c2) / &det;
    Some(Point::new(vec![x, y]))
}

fn cells_d2(lines: &[Line]) -> Vec<ArrangementCell> {
    if lines.is_empty() {
        return vec![make_cell(lines, Point::origin(2))];
    }
    let mut vertices: BTreeMap<Point, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(p) = intersect(&lines[i], &lines[j]) {
                let e = vertices.entry(p).or_default();
                e.insert(i);
                e.insert(j);
            }
        }
    }
    let mut samples: Vec<Point> = Vec::new();
    if vertices.is_empty() {
        // All lines parallel: sweep along the common normal.
        let n = &lines[0].normal;
        let nn = &n[0] * &n[0] + &n[1] * &n[1];
        let mut cuts: Vec<Rational> = lines.iter().map(|l| -&l.offset).collect();
        cuts.sort();
        let mut ts = vec![&cuts[0] - Rational::one()];
        for w in cuts.windows(2) {
            ts.push((&w[0] + &w[1]) / int(2));
        }
        ts.push(cuts.last().unwrap() + Rational::one());
        for t in ts {
            // normal . (t n / |n|^2) = t
            samples.push(Point::new(vec![&n[0] * &t / &nn, &n[1] * &t / &nn]));
        }
    } else {
        for (v, incident) in &vertices {
            let mut rays: Vec<(Rational, Rational)> = Vec::new();
            for &i in incident {
                let n = &lines[i].normal;
                let dir = (-&n[1], n[0].clone());
                rays.push((-&dir.0, -&dir.1));
                rays.push(dir);
            }
            rays.sort_by(angle_cmp);
            rays.dedup_by(|a, b| angle_cmp(a, b) == CmpOrdering::Equal);
            for r in 0..rays.len() {
                let a = &rays[r];
                let b = &rays[(r + 1) % rays.len()];
                // Consecutive rays are less than π apart, so their sum points
                // strictly into the wedge between them.
                let w = (&a.0 + &b.0, &a.1 + &b.1);
                let mut t = Rational::one();
                for (id, l) in lines.iter().enumerate() {
                    if incident.contains(&id) {
                        continue;
                    }
                    let val = l.eval(v).abs();
                    let rate = (&l.normal[0] * &w.0 + &l.normal[1] * &w.1).abs();
                    if !rate.is_zero() {
                        let lim = val / rate / int(2);
                        if lim < t {
                            t = lim;
                        }
                    }
                }
                samples.push(Point::new(vec![&v.coords()[0] + &t * &w.0, &v.coords()[1] + &t * &w.1]));
            }
        }
    }
    let mut seen: BTreeMap<Vec<i8>, ArrangementCell> = BTreeMap::new();
    for s in samples {
        let cell = make_cell(lines, s);
        let key: Vec<i8> = cell.constraints.iter().map(|&(_, s)| s).collect();
        debug_assert!(!key.contains(&0));
        seen.entry(key).or_insert(cell);
    }
    seen.into_values().collect()
}

/// The bisector arrangement of `c` and one interior sample per cell.
pub fn arrangement_cells(c: &CandidateSet) -> Result<(Vec<Line>, Vec<ArrangementCell>)> {
    let lines = bisector_lines(c);
    let cells = match c.dim() {
        1 => cells_d1(&lines),
        2 => cells_d2(&lines),
        d => {
            return Err(Error::NotApplicable(format!(
                "exact single-vantage enumeration supports dimension 1 or 2, got {d}"
            )))
        }
    };
    Ok((lines, cells))
}

/// `Ψ₁(C)` exactly, for candidates on a line or in the plane.
pub fn enumerate_psi1_exact(c: &CandidateSet) -> Result<OrderingCatalog> {
    let (_, cells) = arrangement_cells(c)?;
    let mut out = OrderingCatalog::default();
    for cell in cells {
        out.trials += 1;
        match rank_single(c, &cell.sample) {
            Some(o) => {
                out.insert(o, VantageMultiset::single(cell.sample));
            }
            None => out.ties_skipped += 1,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn line(xs: &[i64]) -> CandidateSet {
        CandidateSet::on_line(&xs.iter().map(|&x| int(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn collinear_counts() {
        assert_eq!(enumerate_psi1_exact(&line(&[0, 1, 2])).unwrap().len(), 4);
        assert_eq!(enumerate_psi1_exact(&line(&[0, 1, 3])).unwrap().len(), 4);
        assert_eq!(enumerate_psi1_exact(&line(&[0, 1, 2, 3])).unwrap().len(), 6);
        assert_eq!(enumerate_psi1_exact(&line(&[5])).unwrap().len(), 1);
        // generic collinear: C(n,2) + 1
        assert_eq!(enumerate_psi1_exact(&line(&[0, 1, 4, 9])).unwrap().len(), 7);
    }

    #[test]
    fn planar_counts() {
        let tri = CandidateSet::from_ints(&[&[0, 0], &[1, 0], &[0, 2]]).unwrap();
        assert_eq!(enumerate_psi1_exact(&tri).unwrap().len(), 6);
        let single = CandidateSet::from_ints(&[&[3, 3]]).unwrap();
        assert_eq!(enumerate_psi1_exact(&single).unwrap().len(), 1);
        // Collinear points embedded in the plane behave like the line.
        let l = CandidateSet::from_ints(&[&[0, 0], &[1, 1], &[2, 2], &[3, 3]]).unwrap();
        assert_eq!(enumerate_psi1_exact(&l).unwrap().len(), 6);
    }

    #[test]
    fn square_has_concurrent_bisectors() {
        // Four bisectors of the unit square meet at its center; the diagonal
        // pairs share bisectors.
        let sq = CandidateSet::from_ints(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]).unwrap();
        let (lines, cells) = arrangement_cells(&sq).unwrap();
        assert_eq!(lines.len(), 4);
        assert_eq!(cells.len(), 8);
        assert!(cells.iter().all(|c| c.sample_is_interior(&lines)));
        assert_eq!(enumerate_psi1_exact(&sq).unwrap().len(), 8);
    }

    #[test]
    fn samples_are_interior_and_witnesses_verify() {
        let c = CandidateSet::new(vec![
            Point::new(vec![int(0), int(0)]),
            Point::new(vec![int(3), rat(1, 3)]),
            Point::new(vec![int(1), int(4)]),
            Point::new(vec![rat(-2, 5), int(2)]),
        ])
        .unwrap();
        let (lines, cells) = arrangement_cells(&c).unwrap();
        assert!(cells.iter().all(|cell| cell.sample_is_interior(&lines)));
        let cat = enumerate_psi1_exact(&c).unwrap();
        crate::enumeration::verify_catalog(&c, &cat).unwrap();
        assert_eq!(cat.len(), 18);
    }
}
