//! Pointwise samples of a harmonic potential and the level-set geometry they
//! determine.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{SurfaceMesh, Vec3};

/// Value, gradient and Hessian of u at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub point: Vec3,
    pub u: f64,
    pub grad: Vec3,
    pub hessian: Matrix3<f64>,
}

impl FieldSample {
    pub fn grad_norm(&self) -> f64 {
        self.grad.norm()
    }

    /// ν = −Du/|Du|, pointing towards infinity.
    pub fn level_normal(&self) -> Vec3 {
        -self.grad / self.grad.norm()
    }

    /// Mean curvature of the level set through the point: D²u(Du,Du)/|Du|³.
    pub fn level_mean_curvature(&self) -> f64 {
        let g = self.grad.norm();
        self.grad.dot(&(self.hessian * self.grad)) / (g * g * g)
    }

    /// Second fundamental form of the level set as a tangential 3×3 matrix:
    /// −P D²u P / |Du| with P the tangential projector.
    pub fn level_second_fundamental_form(&self) -> Matrix3<f64> {
        let g = self.grad.norm();
        let nu = self.grad / g;
        let p = Matrix3::identity() - nu * nu.transpose();
        -(p * self.hessian * p) / g
    }

    /// |tr D²u| relative to the Frobenius norm of D²u.
    pub fn relative_trace(&self) -> f64 {
        let f = self.hessian.norm();
        if f == 0.0 {
            0.0
        } else {
            self.hessian.trace().abs() / f
        }
    }
}

/// Spread between the extreme principal curvatures of a tangential second
/// fundamental form (zero exactly at umbilic points).
pub fn umbilicity(h: &Matrix3<f64>, normal: &Vec3) -> f64 {
    let eig = h.symmetric_eigen();
    // Drop the eigenvalue belonging to the normal direction.
    let mut pairs: Vec<(f64, f64)> = (0..3)
        .map(|i| (eig.eigenvectors.column(i).dot(normal).abs(), eig.eigenvalues[i]))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    (pairs[0].1 - pairs[1].1).abs()
}

/// A harmonic function on the exterior of a compact set, equal to 1 on its
/// boundary and decaying at infinity.
pub trait HarmonicField: Sync {
    fn sample(&self, x: &Vec3) -> Result<FieldSample>;

    /// u and Du only; the Hessian may be left zero.
    fn sample_gradient(&self, x: &Vec3) -> Result<FieldSample> {
        self.sample(x)
    }

    fn capacity(&self) -> f64;

    /// Diameter of the conductor; sets the scale of the critical-point guard.
    fn diameter(&self) -> f64;

    /// Field data at a vertex of the conductor's boundary mesh.
    fn boundary_sample(&self, mesh: &SurfaceMesh, vertex: usize) -> Result<FieldSample> {
        self.sample(&mesh.vertices()[vertex])
    }

    /// Gradient magnitude below which a point is treated as critical.
    fn critical_threshold(&self) -> f64 {
        1e-6 * self.capacity() / (self.diameter() * self.diameter())
    }
}
