//! Small exact linear algebra: Gaussian elimination, feasibility by
//! Fourier-Motzkin elimination, and a dense simplex for hull membership.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{BigInterval, Rational};

pub type Matrix = Vec<Vec<Rational>>;

/// Solves `a x = b` exactly. Errors if `a` is singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Err(Error::Degenerate("singular matrix".into()));
        };
        m.swap(col, piv);
        let inv = Rational::one() / &m[col][col];
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let sub = &f * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    Ok(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m: Matrix = a.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        det *= &m[col][col];
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                for c in col..n {
                    let sub = &f * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    det
}

/// Rank of a rational matrix.
pub fn rank(a: &[Vec<Rational>]) -> usize {
    let mut m: Matrix = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in r + 1..rows {
            if !m[i][col].is_zero() {
                let f = &m[i][col] / &m[r][col];
                for c in col..cols {
                    let sub = &f * &m[r][c];
                    m[i][c] -= sub;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// The solutions of `a x = b` (any shape) as `x₀ + span(basis)`, or `None`
/// when the system is inconsistent.
pub fn affine_solutions(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = Rational::one() / &m[r][col];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for c in col..=cols {
                    let sub = &f * &m[r][c];
                    m[i][c] -= sub;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x0 = vec![Rational::zero(); cols];
    for (i, &pc) in pivots.iter().enumerate() {
        x0[pc] = m[i][cols].clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); cols];
            v[fc] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][fc].clone();
            }
            v
        })
        .collect();
    Some((x0, basis))
}

/// Gaussian elimination over intervals. Fails with `Indeterminate` when a
/// pivot column has no entry bounded away from zero.
pub fn solve_interval(a: &[Vec<BigInterval>], b: &[BigInterval]) -> Result<Vec<BigInterval>> {
    let n = a.len();
    let mut m: Vec<Vec<BigInterval>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        // Pick the pivot with the largest lower bound on magnitude.
        let piv = (col..n)
            .filter(|&r| !m[r][col].contains_zero())
            .max_by_key(|&r| m[r][col].abs().lo_rational());
        let Some(piv) = piv else {
            return Err(Error::Indeterminate("interval pivot contains zero".into()));
        };
        m.swap(col, piv);
        let p = m[col][col].clone();
        for c in col..=n {
            m[col][c] = m[col][c].div(&p)?;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col].clone();
                for c in col..=n {
                    let sub = f.clone() * m[col][c].clone();
                    m[r][c] = m[r][c].clone() - sub;
                }
            }
        }
    }
    Ok(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// A strict linear inequality `coeffs . x + constant > 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StrictIneq {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl StrictIneq {
    pub fn new(coeffs: Vec<Rational>, constant: Rational) -> Self {
        StrictIneq { coeffs, constant }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (a, b)| acc + a * b)
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        self.eval(x).is_positive()
    }

    pub fn negated(&self) -> Self {
        StrictIneq {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            constant: -&self.constant,
        }
    }

    /// Scaled so the first nonzero entry has absolute value one.
    fn normalized(&self) -> Self {
        let lead = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.constant))
            .find(|c| !c.is_zero())
            .map(|c| c.abs());
        match lead {
            Some(l) => StrictIneq {
                coeffs: self.coeffs.iter().map(|c| c / &l).collect(),
                constant: &self.constant / &l,
            },
            None => self.clone(),
        }
    }
}

/// Finds a rational point strictly satisfying every inequality, or `None`
/// if the open polyhedron is empty. All inequalities share the dimension
/// `dim`.
pub fn strict_feasible_point(system: &[StrictIneq], dim: usize) -> Option<Vec<Rational>> {
    let mut sys: Vec<StrictIneq> = system.iter().map(StrictIneq::normalized).collect();
    sys.sort();
    sys.dedup();
    fm_solve(sys, dim)
}

fn fm_solve(sys: Vec<StrictIneq>, dim: usize) -> Option<Vec<Rational>> {
    if dim == 0 {
        return sys.iter().all(|c| c.constant.is_positive()).then(Vec::new);
    }
    let var = dim - 1;
    let mut lower = Vec::new(); // x_var > expr
    let mut upper = Vec::new(); // x_var < expr
    let mut rest = Vec::new();
    for c in sys {
        let a = c.coeffs[var].clone();
        if a.is_zero() {
            rest.push(truncate(&c, var));
        } else {
            // a x_var + r(x') + k > 0  =>  x_var (>|<) -(r + k)/a
            let scaled = StrictIneq {
                coeffs: c.coeffs.iter().map(|v| v / a.abs()).collect(),
                constant: &c.constant / a.abs(),
            };
            if a.is_positive() {
                lower.push(scaled);
            } else {
                upper.push(scaled);
            }
        }
    }
    // lower: x + r_l + k_l > 0; upper: -x + r_u + k_u > 0; sum eliminates x.
    let mut next = rest;
    for l in &lower {
        for u in &upper {
            let coeffs: Vec<Rational> = (0..var).map(|i| &l.coeffs[i] + &u.coeffs[i]).collect();
            let c = StrictIneq::new(coeffs, &l.constant + &u.constant).normalized();
            next.push(c);
        }
    }
    next.sort();
    next.dedup();
    // Trivially false constraints end the search early.
    if next
        .iter()
        .any(|c| c.coeffs.iter().all(Zero::is_zero) && !c.constant.is_positive())
    {
        return None;
    }
    next.retain(|c| !c.coeffs.iter().all(Zero::is_zero));
    let mut x = fm_solve(next, var)?;
    // Back substitution: x_var in (max lower bound, min upper bound).
    let bound = |c: &StrictIneq| -> Rational {
        // c: ±x + r(x') + k > 0, bound is -(r(x') + k) for lower,
        // (r(x') + k) for upper.
        (0..var).fold(c.constant.clone(), |acc, i| acc + &c.coeffs[i] * &x[i])
    };
    let lo = lower.iter().map(|c| -bound(c)).max();
    let hi = upper.iter().map(&bound).min();
    let v = match (lo, hi) {
        (Some(lo), Some(hi)) => {
            debug_assert!(lo < hi);
            crate::scalar::rational::simple_between(&lo, &hi)
        }
        (Some(lo), None) => Rational::from_integer(crate::scalar::rational::floor(&lo) + 1),
        (None, Some(hi)) => Rational::from_integer(crate::scalar::rational::ceil(&hi) - 1),
        (None, None) => Rational::zero(),
    };
    x.push(v);
    Some(x)
}

fn truncate(c: &StrictIneq, len: usize) -> StrictIneq {
    StrictIneq {
        coeffs: c.coeffs[..len].to_vec(),
        constant: c.constant.clone(),
    }
}

/// Whether `Ax = b, x >= 0` has a solution, by phase-one simplex with
/// Bland's rule. Returns a feasible `x` when one exists.
pub fn nonneg_feasible(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    // Tableau columns: n originals, m artificials, rhs.
    let width = n + m + 1;
    let mut t: Matrix = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![Rational::zero(); width];
        for j in 0..n {
            row[j] = if flip { -&a[i][j] } else { a[i][j].clone() };
        }
        row[n + i] = Rational::one();
        row[width - 1] = b[i].abs();
        t.push(row);
    }
    // Objective row: minimize the sum of artificials, stored as reduced
    // costs of the original columns.
    let mut obj = vec![Rational::zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        let Some(enter) = (0..n + m).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // Unbounded cannot happen in phase one.
            break;
        };
        let p = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x = &*x / &p;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, y) in obj.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        basis[r] = enter;
    }
    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            x[bj] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

/// Convex-combination weights expressing `p` in terms of `points`, if `p`
/// lies in their (closed) convex hull.
pub fn convex_weights(p: &[Rational], points: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    if points.is_empty() {
        return None;
    }
    let d = p.len();
    let k = points.len();
    let mut a: Matrix = Vec::with_capacity(d + 1);
    let mut b = Vec::with_capacity(d + 1);
    for i in 0..d {
        a.push((0..k).map(|j| points[j][i].clone()).collect());
        b.push(p[i].clone());
    }
    a.push(vec![Rational::one(); k]);
    b.push(Rational::one());
    nonneg_feasible(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn affine_solution_space() {
        // x + y = 2 in the plane.
        let (x0, basis) = affine_solutions(&[vec![int(1), int(1)]], &[int(2)], 2).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(&x0[0] + &x0[1], int(2));
        assert_eq!(&basis[0][0] + &basis[0][1], int(0));
        assert!(affine_solutions(&[vec![int(1)], vec![int(2)]], &[int(1), int(3)], 1).is_none());
        let (x0, basis) = affine_solutions(&[], &[], 2).unwrap();
        assert_eq!((x0, basis.len()), (vec![int(0), int(0)], 2));
    }

    fn row(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn exact_solve() {
        let a = vec![row(&[2, 1]), row(&[1, 3])];
        let x = solve(&a, &row(&[3, 5])).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        assert!(solve(&[row(&[1, 2]), row(&[2, 4])], &row(&[1, 1])).is_err());
        assert_eq!(determinant(&a), int(5));
        assert_eq!(rank(&[row(&[1, 2]), row(&[2, 4])]), 1);
    }

    #[test]
    fn strict_systems() {
        // 0 < x < 1, 0 < y < x
        let sys = vec![
            StrictIneq::new(row(&[1, 0]), int(0)),
            StrictIneq::new(row(&[-1, 0]), int(1)),
            StrictIneq::new(row(&[0, 1]), int(0)),
            StrictIneq::new(row(&[1, -1]), int(0)),
        ];
        let p = strict_feasible_point(&sys, 2).unwrap();
        assert!(sys.iter().all(|c| c.holds(&p)));
        // x > 0 and x < 0
        let bad = vec![
            StrictIneq::new(row(&[1]), int(0)),
            StrictIneq::new(row(&[-1]), int(0)),
        ];
        assert!(strict_feasible_point(&bad, 1).is_none());
        // open strip of zero width
        let thin = vec![
            StrictIneq::new(row(&[1, 1]), int(-1)),
            StrictIneq::new(row(&[-1, -1]), int(1)),
        ];
        assert!(strict_feasible_point(&thin, 2).is_none());
        // unbounded
        let p = strict_feasible_point(&[StrictIneq::new(row(&[1, 1]), int(-5))], 2).unwrap();
        assert!(&p[0] + &p[1] > int(5));
    }

    #[test]
    fn hull_membership() {
        let tri = vec![row(&[0, 0]), row(&[4, 0]), row(&[0, 4])];
        assert!(convex_weights(&row(&[1, 1]), &tri).is_some());
        assert!(convex_weights(&row(&[2, 2]), &tri).is_some());
        assert!(convex_weights(&row(&[3, 3]), &tri).is_none());
        let w = convex_weights(&row(&[1, 2]), &tri).unwrap();
        assert_eq!(w.iter().fold(int(0), |a, b| a + b), int(1));
        let seg = vec![row(&[0]), row(&[2])];
        assert!(convex_weights(&row(&[1]), &seg).is_some());
        assert!(convex_weights(&row(&[3]), &seg).is_none());
    }

    #[test]
    fn interval_solve_encloses_exact() {
        let a = vec![row(&[2, 1]), row(&[1, 3])];
        let ai: Vec<Vec<BigInterval>> = a
            .iter()
            .map(|r| r.iter().map(|x| BigInterval::from_rational(x, 80)).collect())
            .collect();
        let bi: Vec<BigInterval> = row(&[3, 5]).iter().map(|x| BigInterval::from_rational(x, 80)).collect();
        let x = solve_interval(&ai, &bi).unwrap();
        assert!(x[0].contains(&rat(4, 5)) && x[1].contains(&rat(7, 5)));
    }
}
