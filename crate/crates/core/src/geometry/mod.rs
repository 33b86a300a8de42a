//! Closed surfaces, their quadrature data and curvature.

mod mesh;
mod off;
mod shape;

pub use mesh::{discrete_mean_curvature, icosphere, make_surface, MeshSource, SurfaceMesh};
pub(crate) use mesh::{area_weighted_normals, triangle_areas};
pub use off::{read_mesh_off, read_off, write_mesh_off, write_off, OffData};
pub use shape::{
    perturbation, spheroid_area, HarmonicMode, ParametricShape, PointGeometry, Vec3,
    MAX_MODE_DEGREE,
};

use crate::error::Result;

/// ∫ f dσ for per-vertex samples `values`.
pub fn surface_integral(mesh: &SurfaceMesh, values: &[f64]) -> Result<f64> {
    mesh.integrate(values)
}

/// Per-vertex mean curvature: the exact value for parametric meshes,
/// otherwise the cotangent-Laplacian estimate.
pub fn mesh_curvature(mesh: &SurfaceMesh) -> Result<Vec<f64>> {
    match mesh.source() {
        MeshSource::Parametric { .. } => Ok(mesh.mean_curvature().to_vec()),
        MeshSource::Imported => discrete_mean_curvature(mesh),
    }
}
