use serde::{Deserialize, Serialize};

use super::divergence::{divergence_terms, Invariants};
use super::level::functional_h;
use super::params::ParamSet;
use crate::error::{Error, Result};
use crate::field::HarmonicField;
use crate::geometry::SurfaceMesh;
use crate::levelset::{level_family, LevelSetMesh};
use crate::quadrature::simpson;

/// Both sides of ∫_{u₀<u<u₁} div Z = H_β^{c,d}(1/u₁) − H_β^{c,d}(1/u₀).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub params: ParamSet,
    pub u0: f64,
    pub u1: f64,
    /// Volume integral by the coarea formula.
    pub lhs: f64,
    /// Difference of the two level-set functionals.
    pub rhs: f64,
    pub gap: f64,
    /// gap / max(|lhs|, |rhs|)
    pub relative_gap: f64,
    /// |Simpson on all nodes − Simpson on every other node|, when the node
    /// count allows it; else the Simpson–trapezoid difference.
    pub quadrature_estimate: f64,
    pub s_nodes: Vec<f64>,
    /// ∫_{u=s} div Z / |Du| dσ at each node.
    pub inner: Vec<f64>,
    /// ∫_{u=s} |div Z| / |Du| dσ at each node, the scale for sign checks.
    pub inner_scale: Vec<f64>,
}

impl IdentityCheck {
    /// Smallest inner integral relative to its scale (≥ 0 when div Z ≥ 0).
    pub fn min_relative_inner(&self) -> f64 {
        self.inner
            .iter()
            .zip(&self.inner_scale)
            .map(|(v, s)| if *s > 0.0 { v / s } else { 0.0 })
            .fold(f64::INFINITY, f64::min)
    }
}

/// `count` equispaced values of s from `u0` to `u1`.
pub fn uniform_s_grid(u0: f64, u1: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| match i {
            0 => u0,
            i if i + 1 == count => u1,
            i => u0 + (u1 - u0) * i as f64 / (count - 1) as f64,
        })
        .collect()
}

fn inner_integrals(ls: &LevelSetMesh, p: &ParamSet) -> Result<(f64, f64)> {
    let mut value = 0.0;
    let mut scale = 0.0;
    for (w, s) in ls.weights().iter().zip(ls.samples()) {
        let t = divergence_terms(&Invariants::from_sample(s), p)?;
        let g = s.grad_norm();
        value += w * t.div / g;
        scale += w * t.div.abs() / g;
    }
    Ok((value, scale))
}

/// The identity on the given level sets, ordered by increasing τ = 1/s
/// (decreasing s); the coarea integral over s runs as Simpson's rule.
pub fn identity_from_levels(levels: &[LevelSetMesh], p: &ParamSet) -> Result<IdentityCheck> {
    p.validate_for_identity()?;
    if levels.len() < 3 || levels.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument("the s-grid needs an odd number (≥ 3) of nodes".into()));
    }
    let ordered: Vec<&LevelSetMesh> = levels.iter().rev().collect();
    let s_nodes: Vec<f64> = ordered.iter().map(|l| l.level()).collect();
    if s_nodes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("levels must be ordered by decreasing u".into()));
    }
    let (inner, inner_scale): (Vec<f64>, Vec<f64>) =
        ordered.iter().map(|ls| inner_integrals(ls, p)).collect::<Result<Vec<_>>>()?.into_iter().unzip();
    let lhs = simpson(&s_nodes, &inner).expect("odd node count checked above");
    let quadrature_estimate = if (s_nodes.len() - 1).is_multiple_of(4) {
        let every_other = |v: &[f64]| v.iter().step_by(2).copied().collect::<Vec<_>>();
        (lhs - simpson(&every_other(&s_nodes), &every_other(&inner)).expect("odd node count")).abs()
    } else {
        (lhs - crate::quadrature::trapezoid(&s_nodes, &inner)).abs()
    };
    let (first, last) = (ordered[0], ordered[ordered.len() - 1]);
    let rhs = functional_h(last, p)? - functional_h(first, p)?;
    let gap = (lhs - rhs).abs();
    let m = lhs.abs().max(rhs.abs());
    Ok(IdentityCheck {
        params: *p,
        u0: s_nodes[0],
        u1: s_nodes[s_nodes.len() - 1],
        lhs,
        rhs,
        gap,
        relative_gap: if m > 0.0 { gap / m } else { gap },
        quadrature_estimate,
        s_nodes,
        inner,
        inner_scale,
    })
}

/// Transports the boundary to u = s for every node of `s_grid` (increasing,
/// within (0, 1]) and compares the two sides of the identity.
/// [`uniform_s_grid`] gives the default nodes.
pub fn integral_identity_check<F: HarmonicField + ?Sized>(
    field: &F,
    mesh: &SurfaceMesh,
    p: &ParamSet,
    s_grid: &[f64],
) -> Result<IdentityCheck> {
    p.validate_for_identity()?;
    if s_grid.iter().any(|s| !(*s > 0.0 && *s <= 1.0)) {
        return Err(Error::InvalidArgument("s-nodes must lie in (0, 1]".into()));
    }
    let taus: Vec<f64> = s_grid.iter().rev().map(|s| 1.0 / s).collect();
    let levels = level_family(field, mesh, &taus)?;
    identity_from_levels(&levels, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ParametricShape;
    use crate::geometry::make_surface;
    use crate::oracles::{RadialField, SpheroidField};

    #[test]
    fn ball_sides_vanish() {
        let mesh = make_surface(&ParametricShape::unit_sphere(), 3).unwrap();
        let field = RadialField::ball3(1.0);
        for p in [ParamSet::new(2.0, 1.0, 0.0), ParamSet::new(1.0, -1.0, 1.0), ParamSet::new(0.0, 1.0, 1.0)] {
            let check = integral_identity_check(&field, &mesh, &p, &uniform_s_grid(0.25, 1.0, 9)).unwrap();
            assert!(check.lhs.abs() < 1e-9, "{check:?}");
            if p.d == 0.0 {
                assert!(check.rhs.abs() < 1e-9);
            } else {
                // H is constant in τ on the ball, so only its mesh error remains.
                assert!(check.rhs.abs() < 1e-9 * 4.0 * std::f64::consts::PI);
            }
        }
    }

    #[test]
    fn spheroid_sides_agree() {
        let mesh = make_surface(&ParametricShape::spheroid(2.0, 1.0), 3).unwrap();
        let field = SpheroidField::new(2.0, 1.0).unwrap();
        let p = ParamSet::new(2.0, 1.0, 1.0);
        let check = integral_identity_check(&field, &mesh, &p, &uniform_s_grid(0.2, 1.0, 33)).unwrap();
        assert!(check.relative_gap < 0.01, "{check:?}");
        assert!(check.lhs > 0.0);
        assert!(check.min_relative_inner() > 0.0);
        assert!(check.quadrature_estimate < 0.01 * check.lhs);
        assert_eq!((check.u0, check.u1), (0.2, 1.0));
    }

    #[test]
    fn grids_are_validated() {
        let mesh = make_surface(&ParametricShape::unit_sphere(), 1).unwrap();
        let field = RadialField::ball3(1.0);
        let p = ParamSet::new(2.0, 1.0, 1.0);
        assert!(integral_identity_check(&field, &mesh, &p, &[0.5, 1.0]).is_err());
        assert!(integral_identity_check(&field, &mesh, &p, &[0.0, 0.5, 1.0]).is_err());
        assert!(integral_identity_check(&field, &mesh, &p, &[0.5, 1.0, 1.5]).is_err());
        let g = uniform_s_grid(0.2, 1.0, 5);
        assert_eq!(g, vec![0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
    }
}
