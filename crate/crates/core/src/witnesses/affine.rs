//! Witnesses for affinely independent candidate sets.
//!
//! For each prefix of the target ordering there is a point equidistant
//! from the prefix and strictly closer to it than to every later
//! candidate. Stacking these centers with rapidly increasing weights
//! realises the ordering.

use num_traits::Zero;

use super::{certify, doubling, WitnessCertificate};
use crate::error::{Error, Result};
use crate::geometry::{CandidateSet, Ordering, Point, VantageMultiset};
use crate::linalg::{affine_solutions, rank as matrix_rank, strict_feasible_point, StrictIneq};
use crate::scalar::Rational;

/// A point equidistant from `prefix` and strictly farther from each of
/// `rest`.
pub fn equidistant_center(c: &CandidateSet, prefix: &[usize], rest: &[usize]) -> Result<Point> {
    let d = c.dim();
    let Some(&first) = prefix.first() else {
        return Err(Error::Domain("empty prefix".into()));
    };
    let p1 = c.point(first);
    let n1 = p1.dot(p1);
    // 2(cⱼ − c₁)·x = |cⱼ|² − |c₁|²
    let (a, b): (Vec<Vec<Rational>>, Vec<Rational>) = prefix[1..]
        .iter()
        .map(|&j| {
            let pj = c.point(j);
            let row = pj.sub(p1).coords().iter().map(|x| x * Rational::from_integer(2.into())).collect();
            (row, pj.dot(pj) - &n1)
        })
        .unzip();
    let fail = || Error::NotApplicable(format!("no center separates prefix {prefix:?} from {rest:?}"));
    let (x0, basis) = affine_solutions(&a, &b, d).ok_or_else(fail)?;
    // |c_l|² − |c₁|² − 2(c_l − c₁)·x > 0, rewritten in the parameters t of x = x₀ + Σ tᵢ bᵢ.
    let system: Vec<StrictIneq> = rest
        .iter()
        .map(|&l| {
            let pl = c.point(l);
            let dir: Vec<Rational> = pl.sub(p1).coords().iter().map(|x| x * Rational::from_integer(2.into())).collect();
            let lin = |v: &[Rational]| dir.iter().zip(v).fold(Rational::zero(), |acc, (p, q)| acc + p * q);
            let constant = pl.dot(pl) - &n1 - lin(&x0);
            StrictIneq::new(basis.iter().map(|bv| -lin(bv)).collect(), constant)
        })
        .collect();
    let t = if basis.is_empty() {
        system.iter().all(|s| s.holds(&[])).then(Vec::new).ok_or_else(fail)?
    } else {
        strict_feasible_point(&system, basis.len()).ok_or_else(fail)?
    };
    let mut x = x0;
    for (ti, bv) in t.iter().zip(&basis) {
        for (xi, bi) in x.iter_mut().zip(bv) {
            *xi += ti * bi;
        }
    }
    Ok(Point::new(x))
}

fn affinely_independent(c: &CandidateSet) -> bool {
    let p0 = c.point(0);
    let diffs: Vec<Vec<Rational>> = c.points()[1..].iter().map(|p| p.sub(p0).coords().to_vec()).collect();
    diffs.is_empty() || matrix_rank(&diffs) == c.len() - 1
}

/// Realises any ordering of an affinely independent set. The center for
/// the prefix of length `i − 1` gets weight `M^(i−2)`, with `M` doubled
/// until the ranking verifies.
pub fn witness_affine_independent(c: &CandidateSet, ordering: &Ordering) -> Result<WitnessCertificate> {
    let n = c.len();
    if ordering.len() != n || !ordering.is_permutation() {
        return Err(Error::Domain(format!("{ordering} is not an ordering of {n} points")));
    }
    if !affinely_independent(c) {
        return Err(Error::NotApplicable("candidates are not affinely independent".into()));
    }
    let perm = &ordering.perm;
    if n == 1 {
        return certify(c, ordering, VantageMultiset::single(c.point(perm[0]).clone()));
    }
    let centers: Vec<Point> = (2..=n)
        .map(|i| equidistant_center(c, &perm[..i - 1], &perm[i - 1..]))
        .collect::<Result<_>>()?;
    doubling(|m| {
        if m.checked_pow(n as u32 - 2).is_none_or(|t| t > 1 << 60) {
            return Err(Error::Stabilization("weight ladder reached 2^60".into()));
        }
        let entries = centers
            .iter()
            .enumerate()
            .map(|(j, p)| (p.clone(), m.pow(j as u32)))
            .collect();
        let cert = certify(c, ordering, VantageMultiset::new(entries)?.normalized())?;
        Ok(cert.verified.then_some(cert))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::squared_distance;
    use crate::scalar::int;
    use crate::witnesses::{all_orderings, gen_vertex_transitive, PolytopeKind};

    #[test]
    fn center_is_equidistant() {
        let c = CandidateSet::from_ints(&[&[0, 0], &[4, 0], &[1, 3]]).unwrap();
        let x = equidistant_center(&c, &[0, 1], &[2]).unwrap();
        let d0 = squared_distance(&x, c.point(0)).unwrap();
        assert_eq!(d0, squared_distance(&x, c.point(1)).unwrap());
        assert!(squared_distance(&x, c.point(2)).unwrap() > d0);
        assert_eq!(x.coord(0), &int(2));
    }

    #[test]
    fn triangle_all_orderings() {
        let c = CandidateSet::from_ints(&[&[0, 0], &[5, 1], &[2, 4]]).unwrap();
        for o in all_orderings(3) {
            assert!(witness_affine_independent(&c, &o).unwrap().verified, "{o}");
        }
    }

    #[test]
    fn two_points_and_simplex() {
        let c = CandidateSet::from_ints(&[&[0, 0], &[1, 1]]).unwrap();
        for o in all_orderings(2) {
            assert!(witness_affine_independent(&c, &o).unwrap().verified);
        }
        let s = gen_vertex_transitive(&PolytopeKind::Simplex(3)).unwrap();
        for o in all_orderings(4).into_iter().step_by(5) {
            assert!(witness_affine_independent(&s, &o).unwrap().verified, "{o}");
        }
    }

    #[test]
    fn dependent_sets_are_rejected() {
        let c = CandidateSet::from_ints(&[&[0, 0], &[1, 1], &[2, 2]]).unwrap();
        assert!(matches!(
            witness_affine_independent(&c, &Ordering::identity(3)),
            Err(Error::NotApplicable(_))
        ));
    }
}
