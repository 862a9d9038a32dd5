//! Protrusive orderings: each point leaves the hull of its predecessors.

use crate::geometry::{CandidateSet, Ordering};
use crate::linalg::convex_weights;
use crate::scalar::Rational;

pub fn is_protrusive(c: &CandidateSet, ordering: &Ordering) -> bool {
    let pts: Vec<Vec<Rational>> = ordering.perm.iter().map(|&i| c.point(i).coords().to_vec()).collect();
    (1..pts.len()).all(|i| convex_weights(&pts[i], &pts[..i]).is_none())
}

/// No `i₁ < i₂ < i₃` with `perm[i₃]` strictly between `perm[i₁]` and
/// `perm[i₂]`.
pub fn avoids_132_312(perm: &[usize]) -> bool {
    let n = perm.len();
    for k in 0..n {
        // The entries before position k must all lie on one side of perm[k].
        let below = perm[..k].iter().any(|&x| x < perm[k]);
        let above = perm[..k].iter().any(|&x| x > perm[k]);
        if below && above {
            return false;
        }
    }
    true
}

/// All protrusive orderings of a set on a line, smallest index first.
pub fn protrusive_orderings_d1(n: usize) -> Vec<Ordering> {
    // Built backwards: the last entry is an end of the remaining interval.
    fn rec(lo: usize, hi: usize, tail: &mut Vec<usize>, out: &mut Vec<Ordering>) {
        if lo == hi {
            let mut perm = vec![lo];
            perm.extend(tail.iter().rev());
            out.push(Ordering::new(perm));
            return;
        }
        tail.push(hi);
        rec(lo, hi - 1, tail, out);
        tail.pop();
        tail.push(lo);
        rec(lo + 1, hi, tail, out);
        tail.pop();
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(0, n - 1, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}
