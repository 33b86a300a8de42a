use nalgebra::{DMatrix, DVector, Matrix3};

use crate::error::{Error, Result};
use crate::field::{FieldSample, HarmonicField};
use crate::geometry::Vec3;

/// Potential of the ball B_R(z) in R^n: u = (R/|x − z|)^{n−2}.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    pub radius: f64,
    pub center: Vec<f64>,
    pub n: u32,
}

/// Field sample in arbitrary dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSample {
    pub u: f64,
    pub grad: DVector<f64>,
    pub hessian: DMatrix<f64>,
}

impl RadialField {
    pub fn new(radius: f64, center: Vec<f64>) -> Result<Self> {
        let n = center.len() as u32;
        if n < 3 {
            return Err(Error::InvalidArgument(format!("dimension {n} is below 3")));
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
        }
        Ok(RadialField { radius, center, n })
    }

    /// The ball of radius `radius` about the origin of R³.
    pub fn ball3(radius: f64) -> Self {
        RadialField {
            radius,
            center: vec![0.0; 3],
            n: 3,
        }
    }

    pub fn capacity_value(&self) -> f64 {
        self.radius.powi(self.n as i32 - 2)
    }

    /// Closed-form u, Du, D²u; points on the sphere itself are allowed.
    pub fn sample_nd(&self, x: &[f64]) -> Result<RadialSample> {
        if x.len() != self.n as usize {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, field lives in dimension {}",
                x.len(),
                self.n
            )));
        }
        let y = DVector::from_iterator(x.len(), x.iter().zip(&self.center).map(|(a, b)| a - b));
        let r = y.norm();
        if r < self.radius * (1.0 - 1e-12) {
            let mut p = [0.0; 3];
            p.iter_mut().zip(x).for_each(|(a, b)| *a = *b);
            return Err(Error::InsideDomain { point: p });
        }
        let m = self.n as i32 - 2;
        let mf = m as f64;
        let rm = self.radius.powi(m);
        let u = (self.radius / r).powi(m);
        let c = mf * rm / r.powi(m + 2);
        let grad = &y * (-c);
        let yhat = &y / r;
        let n = self.n as usize;
        let hessian = (DMatrix::identity(n, n) - &yhat * yhat.transpose() * (self.n as f64)) * (-c);
        Ok(RadialSample { u, grad, hessian })
    }
}

impl HarmonicField for RadialField {
    fn sample(&self, x: &Vec3) -> Result<FieldSample> {
        if self.n != 3 {
            return Err(Error::Unsupported(
                "three-dimensional samples need a field in R^3".into(),
            ));
        }
        let s = self.sample_nd(x.as_slice())?;
        Ok(FieldSample {
            point: *x,
            u: s.u,
            grad: Vec3::new(s.grad[0], s.grad[1], s.grad[2]),
            hessian: Matrix3::from_fn(|i, j| s.hessian[(i, j)]),
        })
    }

    fn capacity(&self) -> f64 {
        self.capacity_value()
    }

    fn diameter(&self) -> f64 {
        2.0 * self.radius
    }
}

/// Area of the unit sphere S^{n−1} ⊂ R^n.
pub fn unit_sphere_area(n: u32) -> f64 {
    use std::f64::consts::PI;
    // |S^0| = 2, |S^1| = 2π, |S^k| = 2π/(k−1)·|S^{k−2}|.
    let k = n as i64 - 1;
    let (mut area, mut j) = if k % 2 == 0 { (2.0, 0) } else { (2.0 * PI, 1) };
    while j < k {
        j += 2;
        area *= 2.0 * PI / (j as f64 - 1.0);
    }
    area
}

/// The radial potential through a free function.
pub fn radial_field(field: &RadialField, x: &[f64]) -> Result<RadialSample> {
    field.sample_nd(x)
}
