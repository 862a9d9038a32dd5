//! Catalogs of achievable orderings: exact enumeration for one vantage point
//! (and for several on a line), plus seeded sampling.

mod psi1;
mod psik;
mod sampling;

use std::collections::BTreeMap;

pub use psi1::{arrangement_cells, bisector_lines, enumerate_psi1_exact, ArrangementCell, Line};
pub(crate) use psi1::rank_single;
pub use psik::{enumerate_psi_k_d1_exact, PSI_K_MAX_K, PSI_K_MAX_N};
pub use sampling::{
    enumerate_check_psi, enumerate_hat_psi, estimate_psi, sample_point, ParamSource, SamplerSpec,
};

use crate::geometry::{CandidateSet, Ordering, VantageMultiset};

/// Distinct orderings, each with one witness parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog<K: Ord, W> {
    pub entries: BTreeMap<K, W>,
    /// Parameters tried (sampling) or cells visited (exact enumeration).
    pub trials: u64,
    pub ties_skipped: u64,
    pub undecided_skipped: u64,
}

pub type OrderingCatalog = Catalog<Ordering, VantageMultiset>;

impl<K: Ord, W> Default for Catalog<K, W> {
    fn default() -> Self {
        Catalog {
            entries: BTreeMap::new(),
            trials: 0,
            ties_skipped: 0,
            undecided_skipped: 0,
        }
    }
}

impl<K: Ord, W> Catalog<K, W> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Keeps the first witness seen for each key.
    pub fn insert(&mut self, key: K, witness: W) -> bool {
        use std::collections::btree_map::Entry;
        match self.entries.entry(key) {
            Entry::Vacant(e) => {
                e.insert(witness);
                true
            }
            Entry::Occupied(_) => false,
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }
}

/// Re-ranks every stored witness and checks it reproduces its ordering.
pub fn verify_catalog(c: &CandidateSet, catalog: &OrderingCatalog) -> crate::Result<()> {
    for (ordering, v) in &catalog.entries {
        let got = crate::geometry::rank(c, v)?;
        if &got != ordering {
            return Err(crate::Error::Verification(format!(
                "witness for {ordering} ranks as {got}"
            )));
        }
    }
    Ok(())
}
