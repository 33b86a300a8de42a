//! Closed-form and mesh-free references, independent of the boundary
//! element solver.

mod ball;
mod fd;
mod radial;
mod spheroid;
mod willmore;

pub use ball::{ball_reference_values, BallReference, ReferenceSides};
pub use fd::{finite_difference_validate, FdReport, FD_FLOOR};
pub use radial::{radial_field, unit_sphere_area, RadialField, RadialSample};
pub use spheroid::{spheroid_capacity, SpheroidField};
pub use willmore::{willmore_energy_quadrature, willmore_energy_quadrature_with};
