use serde::{Deserialize, Serialize};

use super::radial::unit_sphere_area;
use crate::error::{Error, Result};
use crate::functionals::ParamSet;
use crate::inequalities::InequalityKind;

/// Both sides of one inequality in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSides {
    pub id: InequalityKind,
    pub lhs: f64,
    pub rhs: f64,
}

/// Every quantity of the ball B_R ⊂ R^n in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallReference {
    pub radius: f64,
    pub n: u32,
    pub params: ParamSet,
    pub capacity: f64,
    pub boundary_grad_norm: f64,
    pub boundary_mean_curvature: f64,
    pub boundary_area: f64,
    /// Constant in τ.
    pub f_beta: f64,
    pub f_beta_prime: f64,
    /// Constant in τ.
    pub h_cd: f64,
    pub inequalities: Vec<ReferenceSides>,
}

impl BallReference {
    /// Level set {u = 1/τ} is the sphere of radius R·τ^{1/(n−2)}; returns
    /// (radius, |Du|, H) there.
    pub fn level(&self, tau: f64) -> (f64, f64, f64) {
        let n = self.n as f64;
        let r = self.radius * tau.powf(1.0 / (n - 2.0));
        let g = (n - 2.0) * self.radius.powf(n - 2.0) / r.powf(n - 1.0);
        (r, g, (n - 1.0) / r)
    }

    /// F_β(τ) integrated on the level sphere (equals `f_beta` for every τ).
    pub fn f_beta_at(&self, tau: f64) -> f64 {
        let n = self.n as f64;
        let (r, g, _) = self.level(tau);
        let k = (n - 1.0) / (n - 2.0);
        tau.powf(k * self.params.beta) * unit_sphere_area(self.n) * r.powf(n - 1.0) * g.powf(self.params.beta + 1.0)
    }

    /// H_β^{c,d}(τ) integrated on the level sphere.
    pub fn h_cd_at(&self, tau: f64) -> Result<f64> {
        let n = self.n as f64;
        let (r, g, h) = self.level(tau);
        let u = 1.0 / tau;
        let p = &self.params;
        let area = unit_sphere_area(self.n) * r.powf(n - 1.0);
        Ok(area * (p.beta * p.coeff_f(u)? * g.powf(p.beta) * h + p.coeff_g(u)? * g.powf(p.beta + 1.0)))
    }

    pub fn sides(&self, id: InequalityKind) -> Option<ReferenceSides> {
        self.inequalities.iter().copied().find(|s| s.id == id)
    }
}

/// Closed-form reference values for the ball of radius `radius` in R^n.
/// The generalized Willmore sides use p = β + 1.
pub fn ball_reference_values(radius: f64, n: u32, p: &ParamSet) -> Result<BallReference> {
    let p = p.with_dimension(n);
    p.validate()?;
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
    }
    let nf = n as f64;
    let s = unit_sphere_area(n);
    let cap = radius.powf(nf - 2.0);
    let g = (nf - 2.0) / radius;
    let h = (nf - 1.0) / radius;
    let area = s * radius.powf(nf - 1.0);
    let beta = p.beta;
    let k = p.k();
    let f_beta = (nf - 2.0).powf(beta + 1.0) * s * radius.powf(nf - 2.0 - beta);

    // Each inequality: the left side as stated, the right side by
    // integrating the constant boundary data over the sphere.
    let parametric = ReferenceSides {
        id: InequalityKind::Parametric,
        lhs: p.d * (nf - 2.0).powf(beta + 1.0) * s * cap.powf((nf - 2.0 - beta) / (nf - 2.0)),
        rhs: beta * (p.c + p.d) * g.powf(beta) * h * area
            + (p.d - k * beta * (p.c + p.d)) * g.powf(beta + 1.0) * area,
    };
    let willmore = ReferenceSides {
        id: InequalityKind::Willmore,
        lhs: s,
        rhs: (h / (nf - 1.0)).powf(nf - 1.0) * area,
    };
    let q = beta + 1.0;
    let generalized = ReferenceSides {
        id: InequalityKind::GeneralizedWillmore,
        lhs: s * cap.powf((nf - 1.0 - q) / (nf - 2.0)),
        rhs: (h / (nf - 1.0)).powf(q) * area,
    };
    let e = (nf - 2.0) / (nf - 1.0);
    let mink_lhs = e * g.powf(e) * (h - k * g) * area;
    let pre = (nf - 2.0).powf((2.0 * nf - 3.0) / (nf - 1.0)) * s.powf(e);
    // |Du| is constant, so the weighted measure coincides with dσ.
    let minkowski = ReferenceSides {
        id: InequalityKind::WeightedMinkowski,
        lhs: mink_lhs,
        rhs: pre * (cap / area).powf(e) * (h / (nf - 1.0) * area - s.powf(1.0 / (nf - 1.0)) * area.powf(e)),
    };
    let willmore_energy = (h / (nf - 1.0)).powf(nf - 1.0) * area;
    let quantitative = ReferenceSides {
        id: InequalityKind::QuantitativeWillmore,
        lhs: mink_lhs,
        rhs: pre * cap.powf(e) * (willmore_energy.powf(1.0 / (nf - 1.0)) - s.powf(1.0 / (nf - 1.0))),
    };
    let geom_a = ReferenceSides {
        id: InequalityKind::GeomA,
        lhs: (nf - 2.0).powf(beta + 1.0) * s * cap.powf((nf - 2.0 - beta) / (nf - 2.0)),
        rhs: g.powf(beta + 1.0) * area,
    };
    let geom_b = ReferenceSides {
        id: InequalityKind::GeomB,
        lhs: k * g.powf(beta + 1.0) * area,
        rhs: g.powf(beta) * h * area,
    };
    let mut reference = BallReference {
        radius,
        n,
        params: p,
        capacity: cap,
        boundary_grad_norm: g,
        boundary_mean_curvature: h,
        boundary_area: area,
        f_beta,
        f_beta_prime: 0.0,
        h_cd: 0.0,
        inequalities: vec![
            parametric,
            willmore,
            generalized,
            minkowski,
            quantitative,
            geom_a,
            geom_b,
        ],
    };
    reference.h_cd = reference.h_cd_at(1.0)?;
    Ok(reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_ball_in_three_dimensions() {
        let r = ball_reference_values(1.0, 3, &ParamSet::new(2.0, -1.0, 1.0)).unwrap();
        assert_eq!(r.capacity, 1.0);
        assert_eq!(r.boundary_grad_norm, 1.0);
        assert_eq!(r.boundary_mean_curvature, 2.0);
        assert!((r.f_beta - 4.0 * PI).abs() < 1e-13);
        assert!((r.h_cd - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn all_sides_saturate() {
        for (n, beta, c, d, radius) in [(3, 2.0, 1.0, 0.0, 1.0), (3, 0.5, -1.0, 1.0, 2.5), (5, 1.0, 0.3, 0.7, 0.7)] {
            let r = ball_reference_values(radius, n, &ParamSet::new(beta, c, d)).unwrap();
            for s in &r.inequalities {
                let scale = 1.0 + s.lhs.abs().max(s.rhs.abs());
                assert!((s.lhs - s.rhs).abs() < 1e-12 * scale, "{:?}", s);
            }
        }
    }

    #[test]
    fn functionals_are_constant_along_levels() {
        let r = ball_reference_values(1.3, 4, &ParamSet::new(1.5, 0.2, 0.9)).unwrap();
        for tau in [1.0, 2.0, 7.5, 50.0] {
            assert!((r.f_beta_at(tau) - r.f_beta).abs() < 1e-12 * r.f_beta);
            assert!((r.h_cd_at(tau).unwrap() - r.params.d * r.f_beta).abs() < 1e-11 * r.f_beta);
        }
    }

    #[test]
    fn threshold_exponent_on_the_unit_ball() {
        let r = ball_reference_values(1.0, 3, &ParamSet::new(1.0, -1.0, 1.0)).unwrap();
        let a = r.sides(InequalityKind::GeomA).unwrap();
        assert!((a.rhs - 4.0 * PI).abs() < 1e-13);
        assert!(ball_reference_values(1.0, 3, &ParamSet::new(0.4, 1.0, 0.0)).is_err());
    }
}
