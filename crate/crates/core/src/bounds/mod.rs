//! Counting bounds and the explicit constructions behind the sign-pattern
//! estimates.

mod components;
mod formulas;
mod galois;
mod noga;

pub use components::{
    alternating_spec, component_sequence, count_components_radical, tenth_root_approx, ComponentCount,
    RadicalComboSpec, RadicalTerm, ScanConfig,
};
pub use formulas::{
    binomial, good_tideman_bound, main_theorem_exponent, radical_warren_bound, stirling_first_unsigned,
    warren_bound,
};
pub use galois::{
    cyclotomic_polynomial, galois_product_expand, galois_product_expand_with, galois_product_numeric, galois_numeric_checks, NumericCheck,
    CyclotomicInt, GaloisExpansion, MultiPoly, GALOIS_GUARD,
};
pub use noga::{noga_family_eval, noga_sign, noga_sign_patterns, verify_noga_family, NogaReport};
