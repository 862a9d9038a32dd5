//! Witnesses built from the inverse distance matrix. When `M⁻¹1` is
//! entrywise positive, every ordering is realised by a multiset supported
//! on the candidates themselves.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{certify, doubling, WitnessCertificate};
use crate::error::{Error, Result};
use crate::geometry::{distance, squared_distance, CandidateSet, Ordering, Point, VantageMultiset};
use crate::io::ser_rational;
use crate::linalg::{solve, solve_interval};
use crate::scalar::rational::{floor, to_f64};
use crate::scalar::{precision_schedule, BigInterval, RadicalSum, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub entries: Vec<Vec<RadicalSum>>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The matrix as rationals, when every distance is rational.
    pub fn as_rational(&self) -> Option<Vec<Vec<Rational>>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(RadicalSum::as_rational).collect())
            .collect()
    }

    pub fn enclose(&self, bits: u32) -> Vec<Vec<BigInterval>> {
        self.entries.iter().map(|row| row.iter().map(|x| x.enclose(bits)).collect()).collect()
    }
}

pub fn distance_matrix(c: &CandidateSet) -> Result<DistanceMatrix> {
    let pts = c.points();
    let entries = pts
        .iter()
        .map(|p| pts.iter().map(|q| distance(p, q)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(DistanceMatrix { entries })
}

/// A solution of `M x = b` as per-entry rational bounds; `lo == hi` when
/// solved exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuVector {
    #[serde(serialize_with = "ser_bounds")]
    pub bounds: Vec<(Rational, Rational)>,
    pub exact: bool,
    pub bits: u32,
    pub signs: Vec<i8>,
}

fn ser_bounds<S: serde::Serializer>(b: &[(Rational, Rational)], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(b.iter().map(|(lo, hi)| [crate::scalar::format_rational(lo), crate::scalar::format_rational(hi)]))
}

impl NuVector {
    pub fn all_positive(&self) -> bool {
        self.signs.iter().all(|&s| s > 0)
    }

    pub fn approx(&self) -> Vec<f64> {
        self.bounds.iter().map(|(lo, hi)| to_f64(&((lo + hi) / Rational::from_integer(2.into())))).collect()
    }
}

fn sign_of(lo: &Rational, hi: &Rational) -> Option<i8> {
    if lo.is_positive() {
        Some(1)
    } else if hi.is_negative() {
        Some(-1)
    } else if lo.is_zero() && hi.is_zero() {
        Some(0)
    } else {
        None
    }
}

/// Solves `M x = b`, escalating precision until every entry has a known
/// sign and width at most `width`.
fn solve_certified(m: &DistanceMatrix, b: &[Rational], width: &Rational, cap_bits: u32) -> Result<NuVector> {
    if let Some(exact) = m.as_rational() {
        let x = solve(&exact, b)?;
        let signs = x.iter().map(|v| sign_of(v, v).unwrap()).collect();
        return Ok(NuVector {
            bounds: x.into_iter().map(|v| (v.clone(), v)).collect(),
            exact: true,
            bits: 0,
            signs,
        });
    }
    let mut last = 0;
    for bits in precision_schedule(cap_bits) {
        last = bits;
        let rhs: Vec<BigInterval> = b.iter().map(|v| BigInterval::from_rational(v, bits)).collect();
        let x = match solve_interval(&m.enclose(bits), &rhs) {
            Ok(x) => x,
            Err(Error::Indeterminate(_)) => continue,
            Err(e) => return Err(e),
        };
        let bounds: Vec<(Rational, Rational)> = x.iter().map(|v| (v.lo_rational(), v.hi_rational())).collect();
        let signs: Option<Vec<i8>> = bounds.iter().map(|(lo, hi)| sign_of(lo, hi)).collect();
        if let Some(signs) = signs {
            if bounds.iter().all(|(lo, hi)| &(hi - lo) <= width) {
                return Ok(NuVector { bounds, exact: false, bits, signs });
            }
        }
    }
    Err(Error::Indeterminate(format!("linear solve unresolved at {last} bits")))
}

/// `ν = M⁻¹ 1` with certified signs.
pub fn nu_vector(c: &CandidateSet, cap_bits: u32) -> Result<NuVector> {
    let m = distance_matrix(c)?;
    let ones = vec![Rational::one(); c.len()];
    solve_certified(&m, &ones, &Rational::new(1.into(), (1u64 << 20).into()), cap_bits)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceMatrixWitness {
    pub certificate: WitnessCertificate,
    pub k: u64,
    /// Scale taking the candidates to diameter at most `1/(10n)`.
    #[serde(serialize_with = "ser_rational")]
    pub scale: Rational,
    pub multiplicities: Vec<u64>,
    /// Upper bound on `|M ρ′ − M ρ|_∞` for the scaled candidates.
    #[serde(serialize_with = "ser_rational")]
    pub rounding_gap: Rational,
}

/// Rational upper bound on the diameter.
fn diameter_upper(c: &CandidateSet) -> Result<Rational> {
    let mut best = Rational::zero();
    for (i, p) in c.points().iter().enumerate() {
        for q in &c.points()[i + 1..] {
            let d2 = squared_distance(p, q)?;
            if d2 > best {
                best = d2;
            }
        }
    }
    Ok(BigInterval::sqrt_rational(&best, 32)?.hi_rational())
}

/// Multiset of candidate copies realising `ordering`.
///
/// With `μᵢ` the position of `cᵢ` in the ordering, `ρ = Kν + M⁻¹μ` (taken
/// at the scaled diameter) gives distance sums `K + μᵢ`; flooring moves
/// each by at most `1/10`.
pub fn witness_by_distance_matrix(c: &CandidateSet, ordering: &Ordering, cap_bits: u32) -> Result<DistanceMatrixWitness> {
    let n = c.len();
    if ordering.len() != n || !ordering.is_permutation() {
        return Err(Error::Domain(format!("{ordering} is not an ordering of {n} points")));
    }
    let m = distance_matrix(c)?;
    let tight = Rational::new(1.into(), (1u64 << 20).into());
    let nu = solve_certified(&m, &vec![Rational::one(); n], &tight, cap_bits)?;
    if !nu.all_positive() {
        return Err(Error::NotApplicable(format!("M⁻¹1 has a non-positive entry: {:?}", nu.signs)));
    }
    let mut mu = vec![Rational::zero(); n];
    for (pos, &i) in ordering.perm.iter().enumerate() {
        mu[i] = Rational::from_integer(pos.into());
    }
    let x = solve_certified(&m, &mu, &tight, cap_bits)?;
    let scale = Rational::one() / (diameter_upper(c)? * Rational::from_integer((10 * n).into()));

    // ρ at the scaled diameter: (Kν + x) / scale. Bounds widen with K, so
    // resolve again when they stop pinning down the floor.
    let (k, mult, rho) = doubling(|k| {
        let kq = Rational::from_integer(k.into());
        let rho: Vec<(Rational, Rational)> = nu
            .bounds
            .iter()
            .zip(&x.bounds)
            .map(|((nl, nh), (xl, xh))| ((&kq * nl + xl) / &scale, (&kq * nh + xh) / &scale))
            .collect();
        if rho.iter().any(|(lo, _)| lo < &Rational::one()) {
            return Ok(None);
        }
        if rho.iter().any(|(lo, hi)| hi - lo >= Rational::one()) {
            return Err(Error::Indeterminate("ρ enclosure wider than one".into()));
        }
        let mult: Vec<u64> = rho
            .iter()
            .map(|(_, hi)| u64::try_from(floor(hi)).map_err(|_| Error::Guard("multiplicity overflow".into())))
            .collect::<Result<_>>()?;
        Ok(Some((k, mult, rho)))
    })?;

    let mhi: Vec<Vec<Rational>> = m.enclose(64).iter().map(|row| row.iter().map(|e| e.hi_rational()).collect()).collect();
    let dev: Vec<Rational> = rho
        .iter()
        .zip(&mult)
        .map(|((lo, hi), &r)| {
            let r = Rational::from_integer(r.into());
            std::cmp::max((&r - lo).abs(), (&r - hi).abs())
        })
        .collect();
    let rounding_gap = mhi
        .iter()
        .map(|row| row.iter().zip(&dev).fold(Rational::zero(), |acc, (a, b)| acc + a * b) * &scale)
        .max()
        .unwrap_or_else(Rational::zero);

    let entries: Vec<(Point, u64)> = c
        .points()
        .iter()
        .cloned()
        .zip(mult.iter().copied())
        .filter(|(_, m)| *m > 0)
        .collect();
    let certificate = certify(c, ordering, VantageMultiset::new(entries)?)?;
    if !certificate.verified {
        return Err(Error::Verification(format!("distance-matrix witness for {ordering} did not verify")));
    }
    Ok(DistanceMatrixWitness {
        certificate,
        k,
        scale,
        multiplicities: mult,
        rounding_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{compare, int, rat, ComparisonResult, DEFAULT_PRECISION_CAP};
    use crate::witnesses::{all_orderings, gen_vertex_transitive, PolytopeKind};

    fn square() -> CandidateSet {
        gen_vertex_transitive(&PolytopeKind::RegularPolygon(4)).unwrap()
    }

    #[test]
    fn square_nu_is_constant() {
        let nu = nu_vector(&square(), DEFAULT_PRECISION_CAP).unwrap();
        assert!(nu.all_positive());
        // 1/(2+√2) = 1 − √2/2
        let expect = RadicalSum::from_int(1) - RadicalSum::scaled_sqrt(rat(1, 2), &int(2)).unwrap();
        for (lo, hi) in &nu.bounds {
            assert_eq!(compare(&RadicalSum::from_rational(lo.clone()), &expect), ComparisonResult::Less);
            assert_eq!(compare(&RadicalSum::from_rational(hi.clone()), &expect), ComparisonResult::Greater);
        }
    }

    #[test]
    fn two_points() {
        let c = CandidateSet::on_line(&[int(0), int(3)]).unwrap();
        let nu = nu_vector(&c, DEFAULT_PRECISION_CAP).unwrap();
        assert!(nu.exact);
        assert_eq!(nu.bounds, vec![(rat(1, 3), rat(1, 3)), (rat(1, 3), rat(1, 3))]);
    }

    #[test]
    fn square_every_ordering() {
        let c = square();
        for o in all_orderings(4) {
            let w = witness_by_distance_matrix(&c, &o, DEFAULT_PRECISION_CAP).unwrap();
            assert!(w.certificate.verified);
            assert!(w.rounding_gap <= rat(1, 10));
            assert!(w.certificate.vantage.entries().iter().all(|(p, _)| c.points().contains(p)));
        }
    }

    #[test]
    fn collinear_is_not_applicable() {
        let c = CandidateSet::on_line(&[int(0), int(1), int(2)]).unwrap();
        let r = witness_by_distance_matrix(&c, &Ordering::new(vec![0, 2, 1]), DEFAULT_PRECISION_CAP);
        assert!(matches!(r, Err(Error::NotApplicable(_))));
    }
}
