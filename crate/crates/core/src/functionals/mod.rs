//! Coefficient functions, the divergence-form vector field and the
//! level-set functionals built from them.

mod curve;
mod divergence;
mod identity;
mod level;
mod params;
mod pointwise;

pub use curve::{monotonicity_scan, scan_levels, FunctionalCurve, Violation, ViolationKind, RELATIVE_NOISE};
pub use divergence::{
    divergence_terms, eval_z_div, z_div_from_sample, z_field, DivergenceTerms, Invariants,
    ZDivergence,
};
pub use identity::{identity_from_levels, integral_identity_check, uniform_s_grid, IdentityCheck};
pub use level::{
    functional_f_beta, functional_f_beta_prime, functional_h, functional_relations, level_functionals,
    log_derivative, LevelFunctionals, RelationDefects,
};
pub use params::{coeff_f, coeff_g, ParamSet};
pub use pointwise::{
    default_sweep, exterior_points, pointwise_suite, PointwiseRow, PointwiseSummary, PointwiseTolerances,
};
