use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::field::{FieldSample, HarmonicField};
use crate::geometry::Vec3;

/// Capacity of the prolate spheroid with semi-axes a ≥ b = c.
pub fn spheroid_capacity(a: f64, b: f64) -> f64 {
    assert!(a >= b && b > 0.0, "spheroid_capacity needs a >= b > 0");
    let e2 = 1.0 - (b / a) * (b / a);
    if e2 < 1e-6 {
        // Series in the eccentricity keeps the a → b limit smooth.
        return a * (1.0 - e2 / 3.0 - 4.0 * e2 * e2 / 45.0);
    }
    let f = (a * a - b * b).sqrt();
    f / (a / b).acosh()
}

/// Exact potential of a prolate spheroid (axis along x) in prolate
/// spheroidal coordinates: u = arccoth ξ / arccoth ξ₀ with
/// ξ = (r₁ + r₂)/(2f) and r₁, r₂ the distances to the foci (±f, 0, 0).
#[derive(Debug, Clone, PartialEq)]
pub struct SpheroidField {
    a: f64,
    b: f64,
    focal: f64,
    boundary_q: f64,
}

fn arccoth(x: f64) -> f64 {
    0.5 * ((x + 1.0) / (x - 1.0)).ln()
}

impl SpheroidField {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > b && b > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "prolate spheroid needs a > b > 0, got a = {a}, b = {b}"
            )));
        }
        let focal = (a * a - b * b).sqrt();
        Ok(SpheroidField {
            a,
            b,
            focal,
            boundary_q: arccoth(a / focal),
        })
    }

    pub fn semi_axes(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

impl HarmonicField for SpheroidField {
    fn sample(&self, x: &Vec3) -> Result<FieldSample> {
        let f = self.focal;
        let d1 = x - Vec3::new(f, 0.0, 0.0);
        let d2 = x - Vec3::new(-f, 0.0, 0.0);
        let (r1, r2) = (d1.norm(), d2.norm());
        let xi = (r1 + r2) / (2.0 * f);
        let xi0 = self.a / f;
        if xi < xi0 * (1.0 - 1e-12) {
            return Err(Error::InsideDomain { point: (*x).into() });
        }
        let xi = xi.max(xi0);
        let (e1, e2) = (d1 / r1, d2 / r2);
        let dxi = (e1 + e2) / (2.0 * f);
        let id = Matrix3::identity();
        let d2xi = ((id - e1 * e1.transpose()) / r1 + (id - e2 * e2.transpose()) / r2) / (2.0 * f);
        let q0 = self.boundary_q;
        let s = xi * xi - 1.0;
        let du = -1.0 / (s * q0);
        let d2u = 2.0 * xi / (s * s * q0);
        Ok(FieldSample {
            point: *x,
            u: arccoth(xi) / q0,
            grad: dxi * du,
            hessian: dxi * dxi.transpose() * d2u + d2xi * du,
        })
    }

    fn capacity(&self) -> f64 {
        self.focal / self.boundary_q
    }

    fn diameter(&self) -> f64 {
        2.0 * self.a
    }
}
