use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSample, HarmonicField};
use crate::geometry::Vec3;

/// Worst-case relative errors of central differences against the analytic
/// derivatives, one entry per step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdReport {
    pub steps: Vec<f64>,
    pub grad_errors: Vec<f64>,
    pub hessian_errors: Vec<f64>,
    /// Observed orders between consecutive steps.
    pub grad_orders: Vec<f64>,
    pub hessian_orders: Vec<f64>,
    /// True when every error is at the round-off floor or shrinks at
    /// (close to) second order.
    pub consistent: bool,
}

/// Errors below this relative level count as round-off.
pub const FD_FLOOR: f64 = 1e-8;

fn sample_offset<F: HarmonicField + ?Sized>(field: &F, x: &Vec3, h: f64) -> Result<FieldSample> {
    field.sample(x).map_err(|e| match e {
        Error::NearSurface { .. } | Error::InsideDomain { .. } => Error::InvalidArgument(format!(
            "finite-difference step {h:e} reaches the exclusion shell or the domain near {:?}: {e}",
            <[f64; 3]>::from(*x)
        )),
        other => other,
    })
}

pub fn finite_difference_validate<F: HarmonicField + ?Sized>(
    field: &F,
    points: &[Vec3],
    steps: &[f64],
) -> Result<FdReport> {
    if points.is_empty() || steps.is_empty() {
        return Err(Error::InvalidArgument("need at least one point and one step".into()));
    }
    let mut grad_errors = Vec::with_capacity(steps.len());
    let mut hessian_errors = Vec::with_capacity(steps.len());
    for &h in steps {
        let (mut eg, mut eh): (f64, f64) = (0.0, 0.0);
        for x in points {
            let s = field.sample(x)?;
            let mut fd_grad = Vec3::zeros();
            let mut fd_hess = Matrix3::zeros();
            for k in 0..3 {
                let mut e = Vec3::zeros();
                e[k] = h;
                let plus = sample_offset(field, &(x + e), h)?;
                let minus = sample_offset(field, &(x - e), h)?;
                fd_grad[k] = (plus.u - minus.u) / (2.0 * h);
                fd_hess.set_column(k, &((plus.grad - minus.grad) / (2.0 * h)));
            }
            eg = eg.max((fd_grad - s.grad).norm() / s.grad.norm());
            eh = eh.max((fd_hess - s.hessian).norm() / s.hessian.norm());
        }
        grad_errors.push(eg);
        hessian_errors.push(eh);
    }
    let orders = |errs: &[f64]| -> Vec<f64> {
        errs.windows(2)
            .zip(steps.windows(2))
            .map(|(e, h)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
            .collect()
    };
    let grad_orders = orders(&grad_errors);
    let hessian_orders = orders(&hessian_errors);
    let ok = |errs: &[f64], ords: &[f64]| {
        errs.windows(2)
            .zip(ords)
            .all(|(e, o)| e[1] <= FD_FLOOR || *o >= 1.5)
            && errs.last().is_some_and(|e| *e <= FD_FLOOR || errs.len() > 1)
    };
    let consistent = ok(&grad_errors, &grad_orders) && ok(&hessian_errors, &hessian_orders);
    Ok(FdReport {
        steps: steps.to_vec(),
        grad_errors,
        hessian_errors,
        grad_orders,
        hessian_orders,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::RadialField;

    struct CorruptHessian(RadialField);

    impl HarmonicField for CorruptHessian {
        fn sample(&self, x: &Vec3) -> Result<FieldSample> {
            let mut s = self.0.sample(x)?;
            s.hessian[(0, 1)] += 0.1 * s.hessian.norm();
            s.hessian[(1, 0)] = s.hessian[(0, 1)];
            Ok(s)
        }
        fn capacity(&self) -> f64 {
            self.0.capacity()
        }
        fn diameter(&self) -> f64 {
            self.0.diameter()
        }
    }

    fn points() -> Vec<Vec3> {
        vec![Vec3::new(2.0, 0.5, -1.0), Vec3::new(-0.3, 3.0, 0.2)]
    }

    #[test]
    fn exact_field_reaches_round_off() {
        let r = finite_difference_validate(&RadialField::ball3(1.0), &points(), &[1e-2, 5e-3, 2.5e-3]).unwrap();
        assert!(r.consistent);
        assert!(r.grad_orders.iter().all(|o| (o - 2.0).abs() < 0.1));
        let r = finite_difference_validate(&RadialField::ball3(1.0), &points(), &[1e-5]).unwrap();
        assert!(r.grad_errors[0] < 1e-9 && r.hessian_errors[0] < 1e-9);
    }

    #[test]
    fn corrupted_hessian_is_flagged() {
        let f = CorruptHessian(RadialField::ball3(1.0));
        let r = finite_difference_validate(&f, &points(), &[1e-2, 5e-3, 2.5e-3]).unwrap();
        assert!(!r.consistent);
        assert!(r.hessian_errors.iter().all(|e| *e > 0.05));
    }

    #[test]
    fn oversized_step_is_rejected() {
        let err = finite_difference_validate(&RadialField::ball3(1.0), &[Vec3::new(1.1, 0.0, 0.0)], &[0.2]);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }
}
