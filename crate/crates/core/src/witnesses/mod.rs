//! Witnesses for orderings with unboundedly many vantage points, and the
//! six-point counterexample check.

mod affine;
mod d1;
mod distmatrix;
mod four;
mod polytope;
mod protrusive;
mod sixpoint;

use serde::Serialize;

pub use affine::{equidistant_center, witness_affine_independent};
pub use d1::witness_d1;
pub use distmatrix::{distance_matrix, nu_vector, witness_by_distance_matrix, DistanceMatrix, DistanceMatrixWitness, NuVector};
pub use four::{
    ellipse_foci, ellipse_through, in_convex_position, interior_convex_point, witness_four_planar, witness_small, ConicCoeffs,
};
pub use polytope::{gen_vertex_transitive, row_sum_spread, PolytopeKind};
pub use protrusive::{avoids_132_312, is_protrusive, protrusive_orderings_d1};
pub use sixpoint::{six_point_config, six_point_f, verify_six_point, SixPointReport};

use crate::error::{Error, Result};
use crate::geometry::{min_margin, rank, CandidateSet, Ordering, VantageMultiset};
use crate::scalar::RadicalSum;

/// A multiset realising an ordering, with its smallest consecutive gap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessCertificate {
    pub ordering: Ordering,
    pub vantage: VantageMultiset,
    #[serde(serialize_with = "ser_margin")]
    pub margin: RadicalSum,
    pub verified: bool,
}

fn ser_margin<S: serde::Serializer>(m: &RadicalSum, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("margin", 2)?;
    st.serialize_field("approx", &m.to_f64())?;
    st.serialize_field("exact", &m.to_string())?;
    st.end()
}

/// Ranks `c` by `v` and records whether the result is `ordering`.
pub fn certify(c: &CandidateSet, ordering: &Ordering, v: VantageMultiset) -> Result<WitnessCertificate> {
    let got = match rank(c, &v) {
        Ok(o) => o,
        Err(Error::Tie { .. }) => {
            return Ok(WitnessCertificate {
                ordering: ordering.clone(),
                vantage: v,
                margin: RadicalSum::zero(),
                verified: false,
            })
        }
        Err(e) => return Err(e),
    };
    let verified = &got == ordering;
    let margin = if verified { min_margin(c, &v, ordering)? } else { RadicalSum::zero() };
    Ok(WitnessCertificate {
        ordering: ordering.clone(),
        vantage: v,
        margin,
        verified,
    })
}

/// Every permutation of `0..n` in lexicographic order.
pub fn all_orderings(n: usize) -> Vec<Ordering> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![Ordering::new(perm.clone())];
    loop {
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
        out.push(Ordering::new(perm.clone()));
    }
}

/// Doubling ladder on a multiplicity, up to `2^60`.
pub(crate) fn doubling<T>(mut f: impl FnMut(u64) -> Result<Option<T>>) -> Result<T> {
    let mut k = 1u64;
    loop {
        if let Some(t) = f(k)? {
            return Ok(t);
        }
        if k >= 1 << 60 {
            return Err(Error::Stabilization("multiplicity ladder reached 2^60".into()));
        }
        k *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations() {
        assert_eq!(all_orderings(3).len(), 6);
        assert_eq!(all_orderings(4).len(), 24);
        assert_eq!(all_orderings(1).len(), 1);
    }
}
