//! Explicit constructions behind the lower bounds: flanking clusters and
//! their hat functions, the check reduction with its θ machinery, and the
//! recursive assembly of large catalogs.

pub mod check;
pub mod hat;
pub mod lower_bound;

pub use check::{
    check_catalog, check_d, check_ordering, delta_entries, delta_set, embed_check_config, embed_check_sets,
    embed_error, embed_stabilization, find_good_pair, gamma_count, gen_check_orderings, is_good_pair, theta,
    theta_crossing, theta_crossing_bisect, theta_ratio, CheckConfig, CheckOrderings, DeltaEntry, ExtendedX,
    GoodPairCertificate, SignedSqrt, ThetaRatio, XiEntry,
};
pub use hat::{
    boxplus, build_flanked, default_flanking_params, flanked_agrees, flanking_scale, flanking_w_grid,
    gen_d1_flanking, hat_d, hat_ordering, hat_u_d1, ladder_cap, lift_vantage, stabilize, HatConfig,
};
pub use lower_bound::{
    build_lower_bound_config, generic_base_points, Layer, LayerKind, LowerBoundConfig, LOWER_BOUND_MAX_N,
};
