use serde::{Deserialize, Serialize};

use super::params::ParamSet;
use crate::error::{Error, Result};
use crate::field::{FieldSample, HarmonicField};
use crate::geometry::Vec3;

/// Rotation-invariant scalars of (u, Du, D²u) that the divergence depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    pub u: f64,
    /// |Du|
    pub grad_norm: f64,
    /// D²u(Du, Du)
    pub hess_grad_grad: f64,
    /// |D²u·Du|²
    pub hess_grad_sq: f64,
    /// |D²u|² (Frobenius)
    pub hess_sq: f64,
}

impl Invariants {
    pub fn from_sample(s: &FieldSample) -> Self {
        let hg = s.hessian * s.grad;
        Invariants {
            u: s.u,
            grad_norm: s.grad.norm(),
            hess_grad_grad: s.grad.dot(&hg),
            hess_grad_sq: hg.norm_squared(),
            hess_sq: s.hessian.norm_squared(),
        }
    }
}

/// Divergence of Z and the two pieces it splits into.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceTerms {
    pub div: f64,
    /// |D²u|² − (n/(n−1))·|D|Du||²
    pub kato_slack: f64,
    /// The a_β term alone; `div` exceeds it by F·β·|Du|^{β−2}·kato_slack.
    pub lower_bound: f64,
    /// Sum of the magnitudes of all contributions, for relative tolerances.
    pub scale: f64,
}

/// Closed-form divergence from the invariants (any dimension n ≥ 3).
pub fn divergence_terms(inv: &Invariants, p: &ParamSet) -> Result<DivergenceTerms> {
    let g = inv.grad_norm;
    if !(g > 0.0) {
        return Err(Error::InvalidArgument("divergence needs a nonzero gradient".into()));
    }
    let n = p.n as f64;
    let k = p.k();
    let u = inv.u;
    let f = p.coeff_f(u)?;
    let g2 = g * g;
    let v_first = 4.0 * k * k * g2 * g2 * g2 / (u * u);
    let v_cross = 8.0 * k * g2 * inv.hess_grad_grad / u;
    let v_last = 4.0 * inv.hess_grad_sq;
    let v_sq = v_first - v_cross + v_last;
    let kato_full = n / (n - 1.0) * inv.hess_grad_sq / g2;
    let kato = inv.hess_sq - kato_full;
    let pre = f * g.powf(p.beta - 4.0);
    let a = p.a_beta();
    let lower = pre * a * v_sq;
    let div = lower + pre * p.beta * g2 * kato;
    let scale = pre.abs()
        * (a.abs() * (v_first + v_cross.abs() + v_last) + p.beta.abs() * g2 * (inv.hess_sq + kato_full));
    Ok(DivergenceTerms {
        div,
        kato_slack: kato,
        lower_bound: lower,
        scale,
    })
}

/// Z = F(u)·D|Du|^β + G(u)·|Du|^β·Du.
pub fn z_field(s: &FieldSample, p: &ParamSet) -> Result<Vec3> {
    let g = s.grad.norm();
    if !(g > 0.0) {
        return Err(Error::VanishingGradient { point: s.point.into() });
    }
    let f = p.coeff_f(s.u)?;
    let gc = p.coeff_g(s.u)?;
    let d_grad_pow = s.hessian * s.grad * (p.beta * g.powf(p.beta - 2.0));
    Ok(d_grad_pow * f + s.grad * (gc * g.powf(p.beta)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZDivergence {
    pub point: Vec3,
    pub z: Vec3,
    pub div: f64,
    pub kato_slack: f64,
    pub lower_bound: f64,
    pub scale: f64,
}

pub fn z_div_from_sample(s: &FieldSample, p: &ParamSet) -> Result<ZDivergence> {
    let z = z_field(s, p)?;
    let t = divergence_terms(&Invariants::from_sample(s), p)?;
    Ok(ZDivergence {
        point: s.point,
        z,
        div: t.div,
        kato_slack: t.kato_slack,
        lower_bound: t.lower_bound,
        scale: t.scale,
    })
}

/// Z, div Z and the Kato slack at an exterior point.
pub fn eval_z_div<F: HarmonicField + ?Sized>(field: &F, x: &Vec3, p: &ParamSet) -> Result<ZDivergence> {
    p.validate_for_identity()?;
    if p.n != 3 {
        return Err(Error::Unsupported("field evaluation is three-dimensional".into()));
    }
    z_div_from_sample(&field.sample(x)?, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{RadialField, SpheroidField};

    fn sweep() -> Vec<ParamSet> {
        let mut out = Vec::new();
        for beta in [0.5, 1.0, 2.0, 3.0] {
            for (c, d) in [(1.0, 0.0), (0.0, 1.0), (-1.0, 1.0), (1.0, 1.0)] {
                out.push(ParamSet::new(beta, c, d));
            }
        }
        out
    }

    /// Central differences of Z, with each Z taken from the exact field.
    fn fd_divergence<F: HarmonicField>(field: &F, x: &Vec3, p: &ParamSet, h: f64) -> f64 {
        (0..3)
            .map(|i| {
                let mut e = Vec3::zeros();
                e[i] = h;
                let plus = z_field(&field.sample(&(x + e)).unwrap(), p).unwrap();
                let minus = z_field(&field.sample(&(x - e)).unwrap(), p).unwrap();
                (plus[i] - minus[i]) / (2.0 * h)
            })
            .sum()
    }

    #[test]
    fn closed_form_matches_differenced_z_on_the_spheroid() {
        let field = SpheroidField::new(2.0, 1.0).unwrap();
        for x in [Vec3::new(0.0, 1.2, 0.0), Vec3::new(2.3, 0.4, -0.2), Vec3::new(1.0, 1.5, 1.0)] {
            for p in sweep() {
                let z = eval_z_div(&field, &x, &p).unwrap();
                let fd = fd_divergence(&field, &x, &p, 1e-4);
                assert!((z.div - fd).abs() < 1e-5 * z.scale, "{p:?} at {x:?}: {} vs {fd}", z.div);
            }
        }
    }

    #[test]
    fn ball_is_divergence_free_and_kato_sharp() {
        let field = RadialField::ball3(1.0);
        for x in [Vec3::new(1.1, 0.0, 0.0), Vec3::new(-2.0, 3.0, 1.0), Vec3::new(0.3, -0.4, 9.0)] {
            for p in sweep() {
                let z = eval_z_div(&field, &x, &p).unwrap();
                assert!(z.div.abs() <= 1e-12 * z.scale.max(1e-300), "{p:?}: {:e}", z.div);
                let s = field.sample(&x).unwrap();
                assert!(z.kato_slack.abs() <= 1e-12 * s.hessian.norm_squared());
            }
        }
    }

    #[test]
    fn spheroid_divergence_is_strictly_positive_near_the_equator() {
        let field = SpheroidField::new(2.0, 1.0).unwrap();
        let z = eval_z_div(&field, &Vec3::new(0.0, 1.05, 0.0), &ParamSet::new(2.0, 1.0, 1.0)).unwrap();
        assert!(z.div > 1e-3 * z.scale, "{z:?}");
        assert!(z.kato_slack > 0.0);
        // The two sides of the pointwise inequality differ by the Kato term.
        assert!(z.div >= z.lower_bound);
    }

    #[test]
    fn kato_slack_is_nonnegative_off_the_ball() {
        let field = SpheroidField::new(2.0, 1.0).unwrap();
        let p = ParamSet::new(1.0, 1.0, 0.0);
        for k in 0..50 {
            let t = k as f64 * 0.37;
            let x = Vec3::new(2.5 * t.cos(), 1.6 * t.sin(), 0.3 * (2.0 * t).sin());
            let z = eval_z_div(&field, &x, &p).unwrap();
            let s = field.sample(&x).unwrap();
            assert!(z.kato_slack >= -1e-8 * s.hessian.norm_squared());
            assert!(z.div >= -1e-12 * z.scale);
        }
    }

    #[test]
    fn vanishing_gradient_is_rejected() {
        let inv = Invariants {
            u: 0.5,
            grad_norm: 0.0,
            hess_grad_grad: 0.0,
            hess_grad_sq: 0.0,
            hess_sq: 1.0,
        };
        assert!(divergence_terms(&inv, &ParamSet::new(1.0, 1.0, 0.0)).is_err());
    }
}
