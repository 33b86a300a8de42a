//! Exterior Dirichlet problem by a piecewise-constant single-layer
//! collocation method.

mod operator;
mod panel;
mod solution;

pub use solution::{
    boundary_gradient_norm, capacity, eval_field, solve_exterior_potential, PotentialSolution,
    SolverDiagnostics, SolverOptions, DEFAULT_EXCLUSION, FLAT_EXCLUSION,
};
