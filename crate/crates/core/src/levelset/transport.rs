//! Gradient-flow transport of single points between level sets.

use crate::error::{Error, Result};
use crate::field::{FieldSample, HarmonicField};
use crate::geometry::Vec3;

/// Stepper and polish settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportOptions {
    /// Relative residual |u − u₀|/u₀ required after the polish.
    pub residual_tolerance: f64,
    /// Local error per step, relative to the distance from the conductor
    /// plus its diameter.
    pub step_tolerance: f64,
    pub max_steps: usize,
    pub max_polish: usize,
    /// Largest allowed angle between ν = −Du/|Du| and the mesh normal.
    pub max_normal_angle_degrees: f64,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions {
            residual_tolerance: 1e-8,
            step_tolerance: 1e-7,
            max_steps: 10_000,
            max_polish: 12,
            max_normal_angle_degrees: 5.0,
        }
    }
}

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B_LOW: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

pub(crate) struct Mover<'a, F: HarmonicField + ?Sized> {
    pub field: &'a F,
    pub options: TransportOptions,
    pub center: Vec3,
    pub scale: f64,
    pub threshold: f64,
}

impl<F: HarmonicField + ?Sized> Mover<'_, F> {
    /// dx/ds = −Du/|Du|², along which u decreases at unit rate.
    fn velocity(&self, vertex: usize, x: &Vec3) -> Result<Vec3> {
        let s = self.field.sample_gradient(x)?;
        let g2 = s.grad.norm_squared();
        if !(g2.sqrt() >= self.threshold) {
            return Err(Error::CriticalPoint {
                vertex,
                u: s.u,
                grad_norm: g2.sqrt(),
            });
        }
        Ok(-s.grad / g2)
    }

    /// Carries x, where u = `start`, to the level u = `target`.
    pub fn carry(&self, vertex: usize, x0: Vec3, start: f64, target: f64) -> Result<FieldSample> {
        let span = start - target;
        let mut x = x0;
        let mut s = 0.0;
        let mut h = span;
        let mut k0 = self.velocity(vertex, &x)?;
        let mut steps = 0;
        while (span - s).abs() > 1e-14 * span.abs().max(1e-300) {
            steps += 1;
            if steps > self.options.max_steps {
                return Err(Error::LevelOutOfRange {
                    vertex,
                    start,
                    target,
                });
            }
            if (s + h - span) * span.signum() > 0.0 {
                h = span - s;
            }
            let mut k = [k0; 7];
            for i in 1..7 {
                let mut y = x;
                for j in 0..i {
                    y += k[j] * (h * A[i - 1][j]);
                }
                k[i] = self.velocity(vertex, &y)?;
            }
            let mut next = x;
            let mut err = Vec3::zeros();
            for i in 0..7 {
                let b = if i < 6 { A[5][i] } else { 0.0 };
                next += k[i] * (h * b);
                err += k[i] * (h * (b - B_LOW[i]));
            }
            let tol = self.options.step_tolerance * ((x - self.center).norm() + self.scale);
            let ratio = err.norm() / tol;
            if ratio <= 1.0 {
                x = next;
                s += h;
                k0 = k[6];
            }
            let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        }
        self.polish(vertex, x, target)
    }

    /// Newton iteration along Du onto u = target; returns the final sample
    /// (with Hessian).
    pub fn polish(&self, vertex: usize, mut x: Vec3, target: f64) -> Result<FieldSample> {
        let mut residual = f64::INFINITY;
        for _ in 0..=self.options.max_polish {
            let s = self.field.sample(&x)?;
            let g2 = s.grad.norm_squared();
            if !(g2.sqrt() >= self.threshold) {
                return Err(Error::CriticalPoint {
                    vertex,
                    u: s.u,
                    grad_norm: g2.sqrt(),
                });
            }
            residual = (s.u - target).abs() / target;
            if residual <= self.options.residual_tolerance {
                return Ok(s);
            }
            x -= s.grad * ((s.u - target) / g2);
        }
        Err(Error::PolishFailed { vertex, residual })
    }
}
