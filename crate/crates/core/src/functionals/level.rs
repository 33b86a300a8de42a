use serde::{Deserialize, Serialize};

use super::params::ParamSet;
use crate::error::{Error, Result};
use crate::levelset::LevelSetMesh;

/// Functional values on one level set {u = 1/τ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelFunctionals {
    pub tau: f64,
    pub f_beta: f64,
    pub f_beta_prime: f64,
    /// Size of the two competing terms of F′_β; F′_β is judged against it.
    pub f_beta_prime_scale: f64,
    pub h_cd: f64,
    /// ∫ (|β F |Du|^β H| + |G| |Du|^{β+1}) dσ, the size of the two terms
    /// of H_β^{c,d}.
    pub h_cd_scale: f64,
    pub residual: f64,
}

fn three_dimensional(p: &ParamSet) -> Result<()> {
    if p.n == 3 {
        Ok(())
    } else {
        Err(Error::Unsupported("level sets are three-dimensional".into()))
    }
}

/// F_β(τ) = τ^{kβ} ∫ |Du|^{β+1} dσ over the level set, k = (n−1)/(n−2).
pub fn functional_f_beta(ls: &LevelSetMesh, beta: f64) -> f64 {
    let k = ParamSet::new(beta, 0.0, 0.0).k();
    ls.tau().powf(k * beta) * ls.integrate_with(|s| s.grad_norm().powf(beta + 1.0))
}

/// F′_β(τ) = −β τ^{kβ−2} ∫ |Du|^β (H − k|Du|/u) dσ.
pub fn functional_f_beta_prime(ls: &LevelSetMesh, beta: f64) -> f64 {
    f_beta_prime_parts(ls, beta).0
}

fn f_beta_prime_parts(ls: &LevelSetMesh, beta: f64) -> (f64, f64) {
    let k = ParamSet::new(beta, 0.0, 0.0).k();
    let pre = beta * ls.tau().powf(k * beta - 2.0);
    let value = ls.integrate_with(|s| {
        let g = s.grad_norm();
        g.powf(beta) * (s.level_mean_curvature() - k * g / s.u)
    });
    let scale = ls.integrate_with(|s| {
        let g = s.grad_norm();
        g.powf(beta) * (s.level_mean_curvature().abs() + k * g / s.u)
    });
    (-pre * value, pre.abs() * scale)
}

/// H_β^{c,d}(τ) = ∫ (β F(u) |Du|^β H + G(u) |Du|^{β+1}) dσ.
pub fn functional_h(ls: &LevelSetMesh, p: &ParamSet) -> Result<f64> {
    Ok(h_parts(ls, p)?.0)
}

fn h_parts(ls: &LevelSetMesh, p: &ParamSet) -> Result<(f64, f64)> {
    three_dimensional(p)?;
    let (mut total, mut scale) = (0.0, 0.0);
    for (w, s) in ls.weights().iter().zip(ls.samples()) {
        let g = s.grad_norm();
        let first = p.beta * p.coeff_f(s.u)? * g.powf(p.beta) * s.level_mean_curvature();
        let second = p.coeff_g(s.u)? * g.powf(p.beta + 1.0);
        total += w * (first + second);
        scale += w * (first.abs() + second.abs());
    }
    Ok((total, scale))
}

pub fn level_functionals(ls: &LevelSetMesh, p: &ParamSet) -> Result<LevelFunctionals> {
    let (f_beta_prime, f_beta_prime_scale) = f_beta_prime_parts(ls, p.beta);
    let (h_cd, h_cd_scale) = h_parts(ls, p)?;
    Ok(LevelFunctionals {
        tau: ls.tau(),
        f_beta: functional_f_beta(ls, p.beta),
        f_beta_prime,
        f_beta_prime_scale,
        h_cd,
        h_cd_scale,
        residual: ls.max_residual(),
    })
}

/// Relative defects of the three algebraic relations between the
/// functionals at one level:
/// H^{c,d} = −(c+dτ)F′ + dF, F′ = −H^{1,0}, F = H^{−1,1} + (1−τ)H^{1,0}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationDefects {
    pub tau: f64,
    pub h_from_derivative: f64,
    pub derivative_from_h: f64,
    pub f_from_h: f64,
}

impl RelationDefects {
    pub fn max(&self) -> f64 {
        self.h_from_derivative.max(self.derivative_from_h).max(self.f_from_h)
    }
}

pub fn functional_relations(ls: &LevelSetMesh, p: &ParamSet) -> Result<RelationDefects> {
    three_dimensional(p)?;
    let tau = ls.tau();
    let (fp, fp_scale) = f_beta_prime_parts(ls, p.beta);
    let f = functional_f_beta(ls, p.beta);
    let h = functional_h(ls, p)?;
    let h10 = functional_h(ls, &ParamSet { c: 1.0, d: 0.0, ..*p })?;
    let h01 = functional_h(ls, &ParamSet { c: -1.0, d: 1.0, ..*p })?;
    let rel = |a: f64, b: f64, scale: f64| if scale > 0.0 { (a - b).abs() / scale } else { (a - b).abs() };
    let cd = p.c + p.d * tau;
    Ok(RelationDefects {
        tau,
        h_from_derivative: rel(h, -cd * fp + p.d * f, cd.abs() * fp_scale + p.d.abs() * f.abs()),
        derivative_from_h: rel(fp, -h10, fp_scale),
        f_from_h: rel(f, h01 + (1.0 - tau) * h10, f.abs() + (tau - 1.0) * fp_scale),
    })
}

/// Derivative of `values` with respect to τ by three-point differences in
/// ln τ (one-sided at the ends); second order on any increasing grid.
pub fn log_derivative(taus: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    let n = taus.len();
    if n < 3 || values.len() != n {
        return Err(Error::InvalidArgument("need at least three matching samples".into()));
    }
    let t: Vec<f64> = taus.iter().map(|x| x.ln()).collect();
    let d = |i: usize, j: usize, k: usize, at: usize| {
        // Derivative at t[at] of the quadratic through nodes i, j, k.
        let (a, b, c) = (t[i], t[j], t[k]);
        let x = t[at];
        values[i] * (2.0 * x - b - c) / ((a - b) * (a - c))
            + values[j] * (2.0 * x - a - c) / ((b - a) * (b - c))
            + values[k] * (2.0 * x - a - b) / ((c - a) * (c - b))
    };
    Ok((0..n)
        .map(|i| {
            let g = match i {
                0 => d(0, 1, 2, 0),
                i if i == n - 1 => d(n - 3, n - 2, n - 1, i),
                i => d(i - 1, i, i + 1, i),
            };
            g / taus[i]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::geometry::{make_surface, ParametricShape};
    use crate::levelset::{geometric_grid, level_family};
    use crate::oracles::{spheroid_capacity, RadialField, SpheroidField};

    fn ball_levels(taus: &[f64]) -> Vec<LevelSetMesh> {
        let mesh = make_surface(&ParametricShape::unit_sphere(), 4).unwrap();
        level_family(&RadialField::ball3(1.0), &mesh, taus).unwrap()
    }

    fn spheroid_levels(taus: &[f64]) -> Vec<LevelSetMesh> {
        let mesh = make_surface(&ParametricShape::spheroid(2.0, 1.0), 3).unwrap();
        level_family(&SpheroidField::new(2.0, 1.0).unwrap(), &mesh, taus).unwrap()
    }

    #[test]
    fn ball_values() {
        let levels = ball_levels(&[1.0, 3.0, 20.0]);
        for ls in &levels {
            // Mesh area converges to 4πτ² from below.
            let f = functional_f_beta(ls, 2.0);
            assert!((f / (4.0 * PI) - 1.0).abs() < 2e-3, "{f}");
            let (fp, scale) = f_beta_prime_parts(ls, 2.0);
            assert!(fp.abs() <= 1e-9 * scale);
            let h10 = functional_h(ls, &ParamSet::new(2.0, 1.0, 0.0)).unwrap();
            let (_, h_scale) = h_parts(ls, &ParamSet::new(2.0, 1.0, 0.0)).unwrap();
            assert!(h10.abs() <= 1e-9 * h_scale);
            let h = functional_h(ls, &ParamSet::new(2.0, -1.0, 1.0)).unwrap();
            assert!((h - f).abs() <= 1e-9 * f);
        }
    }

    #[test]
    fn relations_hold_on_spheroid_levels() {
        let levels = spheroid_levels(&[1.0, 1.5, 4.0, 30.0]);
        for ls in &levels {
            for p in [ParamSet::new(2.0, 1.0, 1.0), ParamSet::new(0.5, -1.0, 1.0), ParamSet::new(3.0, 0.0, 1.0)] {
                let r = functional_relations(ls, &p).unwrap();
                assert!(r.max() < 1e-9, "{r:?}");
            }
        }
    }

    #[test]
    fn h_is_linear_in_c_and_d() {
        let levels = spheroid_levels(&[1.0, 2.0]);
        for ls in &levels {
            let h = |c, d| functional_h(ls, &ParamSet::new(1.5, c, d)).unwrap();
            let (a, b) = (h(1.0, 0.0), h(0.0, 1.0));
            assert!((h(-0.7, 2.0) - (-0.7 * a + 2.0 * b)).abs() < 1e-10 * (a.abs() + b.abs()));
        }
    }

    #[test]
    fn finite_difference_derivative_matches_formula() {
        let taus = geometric_grid(1.0, 50.0, 40);
        let levels = spheroid_levels(&taus);
        for beta in [0.5, 2.0] {
            let (f, fp): (Vec<f64>, Vec<(f64, f64)>) = levels
                .iter()
                .map(|ls| (functional_f_beta(ls, beta), f_beta_prime_parts(ls, beta)))
                .unzip();
            let fd = log_derivative(&taus, &f).unwrap();
            for (i, (a, (b, s))) in fd.iter().zip(&fp).enumerate() {
                assert!((a - b).abs() < 0.02 * s, "β={beta} τ={}: {a} vs {b}", taus[i]);
            }
        }
    }

    #[test]
    fn far_limit_of_f_beta() {
        let cap = spheroid_capacity(2.0, 1.0);
        let ls = &spheroid_levels(&[50.0])[0];
        for beta in [0.5, 1.0, 2.0, 3.0] {
            let limit = 4.0 * PI * cap.powf(1.0 - beta);
            assert!((functional_f_beta(ls, beta) / limit - 1.0).abs() < 0.03);
        }
    }

    #[test]
    fn log_derivative_is_exact_for_quadratics_in_log_tau() {
        let taus = [1.0, 1.3, 2.0, 2.2, 5.0];
        let v: Vec<f64> = taus.iter().map(|t: &f64| 3.0 * t.ln().powi(2) - t.ln() + 2.0).collect();
        let d = log_derivative(&taus, &v).unwrap();
        for (t, g) in taus.iter().zip(d) {
            assert!((g - (6.0 * t.ln() - 1.0) / t).abs() < 1e-12);
        }
        assert!(log_derivative(&taus[..2], &v[..2]).is_err());
    }

    #[test]
    fn other_dimensions_are_unsupported() {
        let ls = &ball_levels(&[1.0])[0];
        let p = ParamSet::new(1.0, 1.0, 0.0).with_dimension(4);
        assert!(matches!(functional_h(ls, &p), Err(Error::Unsupported(_))));
    }
}
