//! Exact `Ψ_k(C)` for candidates on a line.
//!
//! Once every `v_ℓ` is confined to an open interval between consecutive
//! candidates, each difference `D_V(c_i) - D_V(c_j)` is affine in `V`. So
//! the parameter space splits into boxes, and each box into the cells of an
//! arrangement of hyperplanes, found by recursive splitting with exact
//! feasibility checks.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::enumeration::OrderingCatalog;
use crate::error::{Error, Result};
use crate::geometry::{CandidateSet, Ordering, Point, VantageMultiset};
use crate::linalg::{strict_feasible_point, StrictIneq};
use crate::scalar::{int, Rational};

pub const PSI_K_MAX_K: usize = 3;
pub const PSI_K_MAX_N: usize = 6;

struct Cell {
    constraints: Vec<StrictIneq>,
    sample: Vec<Rational>,
}

/// Boxes as nondecreasing interval indices (multisets are unordered, so
/// sorted `V` loses nothing).
fn boxes(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for t in start..=n {
            cur.push(t);
            rec(n, k, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn unit(k: usize, l: usize, scale: Rational) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); k];
    v[l] = scale;
    v
}

fn enumerate_box(c: &[Rational], sorted: &[Rational], k: usize, idx: &[usize]) -> Vec<(Ordering, Vec<Rational>)> {
    let n = sorted.len();
    let mut base = Vec::new();
    for (l, &t) in idx.iter().enumerate() {
        if t > 0 {
            base.push(StrictIneq::new(unit(k, l, int(1)), -sorted[t - 1].clone()));
        }
        if t < n {
            base.push(StrictIneq::new(unit(k, l, int(-1)), sorted[t].clone()));
        }
        if l + 1 < k && idx[l + 1] == t {
            let mut co = vec![Rational::zero(); k];
            co[l] = int(-1);
            co[l + 1] = int(1);
            base.push(StrictIneq::new(co, Rational::zero()));
        }
    }
    let Some(sample) = strict_feasible_point(&base, k) else {
        return Vec::new();
    };
    // |v_ℓ - c_i| = s (v_ℓ - c_i) with s = +1 when c_i lies left of the box.
    let sgn = |l: usize, ci: &Rational| -> Rational {
        if t_left(sorted, idx[l], ci) {
            int(1)
        } else {
            int(-1)
        }
    };
    let mut cells = vec![Cell {
        constraints: base,
        sample,
    }];
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            let mut coeffs = vec![Rational::zero(); k];
            let mut constant = Rational::zero();
            for (l, co) in coeffs.iter_mut().enumerate() {
                let si = sgn(l, &c[i]);
                let sj = sgn(l, &c[j]);
                *co = &si - &sj;
                constant += -(&si * &c[i]) + &sj * &c[j];
            }
            if coeffs.iter().all(Zero::is_zero) {
                if constant.is_zero() {
                    // c_i and c_j tie everywhere in this box.
                    return Vec::new();
                }
                continue;
            }
            let f = StrictIneq::new(coeffs, constant);
            let mut next = Vec::with_capacity(cells.len() * 2);
            for cell in cells {
                let at = f.eval(&cell.sample);
                for (side, keeps_sample) in [(f.clone(), at.is_positive()), (f.negated(), at.is_negative())] {
                    let mut cons = cell.constraints.clone();
                    cons.push(side);
                    let sample = if keeps_sample {
                        Some(cell.sample.clone())
                    } else {
                        strict_feasible_point(&cons, k)
                    };
                    if let Some(sample) = sample {
                        next.push(Cell {
                            constraints: cons,
                            sample,
                        });
                    }
                }
            }
            cells = next;
        }
    }
    cells
        .into_iter()
        .map(|cell| {
            let vals: Vec<Rational> = c
                .iter()
                .map(|ci| cell.sample.iter().fold(Rational::zero(), |acc, v| acc + (v - ci).abs()))
                .collect();
            let mut order: Vec<usize> = (0..c.len()).collect();
            order.sort_by(|&a, &b| vals[a].cmp(&vals[b]));
            (Ordering::new(order), cell.sample)
        })
        .collect()
}

/// Whether `ci` lies left of interval `t` of the sorted candidates.
fn t_left(sorted: &[Rational], t: usize, ci: &Rational) -> bool {
    t > 0 && *ci <= sorted[t - 1]
}

/// `Ψ_k(C)` for `C` on a line, `k <= 3` and `|C| <= 6`.
pub fn enumerate_psi_k_d1_exact(c: &CandidateSet, k: usize) -> Result<OrderingCatalog> {
    if c.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: c.dim(),
        });
    }
    if k == 0 || k > PSI_K_MAX_K || c.len() > PSI_K_MAX_N {
        return Err(Error::Guard(format!(
            "exact enumeration needs 1 <= k <= {PSI_K_MAX_K} and n <= {PSI_K_MAX_N}, got k = {k}, n = {}",
            c.len()
        )));
    }
    let xs: Vec<Rational> = c.points().iter().map(|p| p.coord(0).clone()).collect();
    let mut sorted = xs.clone();
    sorted.sort();
    let all = boxes(sorted.len(), k);
    let found: Vec<Vec<(Ordering, Vec<Rational>)>> =
        all.par_iter().map(|idx| enumerate_box(&xs, &sorted, k, idx)).collect();
    let mut out = OrderingCatalog::default();
    for (ordering, sample) in found.into_iter().flatten() {
        out.trials += 1;
        let v = VantageMultiset::from_points(sample.into_iter().map(Point::scalar).collect())?;
        out.insert(ordering, v);
    }
    Ok(out)
}
