//! Exterior capacity potentials of closed surfaces and numerical checks of
//! the Willmore-type inequalities and monotone level-set functionals built
//! on them.

pub mod error;
pub mod field;
pub mod functionals;
pub mod geometry;
pub mod inequalities;
pub mod jet;
pub mod levelset;
pub mod oracles;
pub mod potential;
pub mod quadrature;
pub mod report;

pub use error::{Error, Result};
