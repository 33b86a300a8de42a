use serde::{Deserialize, Serialize};

use super::level::{level_functionals, log_derivative};
use super::params::ParamSet;
use crate::error::{Error, Result};
use crate::field::HarmonicField;
use crate::geometry::SurfaceMesh;
use crate::levelset::{level_family, LevelSetMesh};
use crate::report::fmt_sig;

/// Relative floor below which changes count as round-off.
pub const RELATIVE_NOISE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// H_β^{c,d} increased between consecutive levels.
    HIncrease,
    /// F_β increased between consecutive levels.
    FIncrease,
    /// F′_β came out positive.
    PositiveDerivative,
    /// F_β lies above the chord of its two neighbours.
    Convexity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Grid index the violation is attributed to (the later τ for increases).
    pub index: usize,
    pub tau: f64,
    pub excess: f64,
    pub tolerance: f64,
}

/// τ ↦ (H_β^{c,d}, F_β, F′_β) sampled on a grid of level sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalCurve {
    pub params: ParamSet,
    pub taus: Vec<f64>,
    pub h_cd: Vec<f64>,
    pub h_cd_scale: Vec<f64>,
    pub f_beta: Vec<f64>,
    pub f_beta_prime: Vec<f64>,
    pub f_beta_prime_scale: Vec<f64>,
    pub residuals: Vec<f64>,
    pub violations: Vec<Violation>,
}

impl FunctionalCurve {
    /// Evaluates the functionals on level sets ordered by increasing τ.
    /// No violations are flagged yet.
    pub fn from_levels(levels: &[LevelSetMesh], p: &ParamSet) -> Result<Self> {
        if levels.windows(2).any(|w| w[1].tau() <= w[0].tau()) {
            return Err(Error::InvalidArgument("levels must have increasing τ".into()));
        }
        let values = levels.iter().map(|ls| level_functionals(ls, p)).collect::<Result<Vec<_>>>()?;
        Ok(FunctionalCurve {
            params: *p,
            taus: values.iter().map(|v| v.tau).collect(),
            h_cd: values.iter().map(|v| v.h_cd).collect(),
            h_cd_scale: values.iter().map(|v| v.h_cd_scale).collect(),
            f_beta: values.iter().map(|v| v.f_beta).collect(),
            f_beta_prime: values.iter().map(|v| v.f_beta_prime).collect(),
            f_beta_prime_scale: values.iter().map(|v| v.f_beta_prime_scale).collect(),
            residuals: values.iter().map(|v| v.residual).collect(),
            violations: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// Flags increases of H_β^{c,d} and F_β, positive F′_β and convexity
    /// defects of F_β. Each tested quantity (an increment, F′_β, or a chord
    /// defect) must exceed both 1e-6 of the size of the functional's terms
    /// and its change against `coarse`, the same curve computed one
    /// refinement step lower.
    pub fn detect_violations(&mut self, coarse: Option<&FunctionalCurve>) -> Result<()> {
        if let Some(c) = coarse {
            let same = c.len() == self.len()
                && c.taus.iter().zip(&self.taus).all(|(a, b)| (a - b).abs() <= 1e-12 * b);
            if !same {
                return Err(Error::InvalidArgument("coarse curve uses a different τ grid".into()));
            }
        }
        let mut out = Vec::new();
        let n = self.len();
        let noise = |fine: f64, coarse: Option<f64>| coarse.map_or(0.0, |c| (fine - c).abs());
        for i in 1..n {
            for (kind, v, size, cv) in [
                (ViolationKind::HIncrease, &self.h_cd, &self.h_cd_scale, coarse.map(|c| &c.h_cd)),
                (ViolationKind::FIncrease, &self.f_beta, &self.f_beta, coarse.map(|c| &c.f_beta)),
            ] {
                let inc = v[i] - v[i - 1];
                let tol = (RELATIVE_NOISE * size[i].abs().max(size[i - 1].abs()))
                    .max(noise(inc, cv.map(|c| c[i] - c[i - 1])));
                if inc > tol {
                    out.push(self.violation(kind, i, inc, tol));
                }
            }
        }
        for i in 0..n {
            let fp = self.f_beta_prime[i];
            let tol = (RELATIVE_NOISE * self.f_beta_prime_scale[i]).max(noise(fp, coarse.map(|c| c.f_beta_prime[i])));
            if fp > tol {
                out.push(self.violation(ViolationKind::PositiveDerivative, i, fp, tol));
            }
        }
        for i in 1..n.saturating_sub(1) {
            let defect = chord_defect(&self.taus, &self.f_beta, i);
            let tol = (RELATIVE_NOISE * self.f_beta[i].abs())
                .max(noise(defect, coarse.map(|c| chord_defect(&c.taus, &c.f_beta, i))));
            if defect > tol {
                out.push(self.violation(ViolationKind::Convexity, i, defect, tol));
            }
        }
        out.sort_by_key(|v| v.index);
        self.violations = out;
        Ok(())
    }

    fn violation(&self, kind: ViolationKind, index: usize, excess: f64, tolerance: f64) -> Violation {
        Violation {
            kind,
            index,
            tau: self.taus[index],
            excess,
            tolerance,
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.violations.is_empty()
    }

    /// Largest deviation of H_β^{c,d} from `h_ref` relative to the size of
    /// its terms, and of F_β from `f_ref` relative to `f_ref`, over the grid.
    pub fn deviation_from(&self, h_ref: f64, f_ref: f64) -> (f64, f64) {
        let h = self
            .h_cd
            .iter()
            .zip(&self.h_cd_scale)
            .map(|(h, s)| (h - h_ref).abs() / s)
            .fold(0.0, f64::max);
        let f = self.f_beta.iter().map(|f| (f - f_ref).abs() / f_ref.abs()).fold(0.0, f64::max);
        (h, f)
    }

    /// |dF_β/dτ (finite differences in ln τ) − F′_β| relative to the F′_β
    /// term scale, per grid point.
    pub fn derivative_defects(&self) -> Result<Vec<f64>> {
        let fd = log_derivative(&self.taus, &self.f_beta)?;
        Ok(fd
            .iter()
            .zip(&self.f_beta_prime)
            .zip(&self.f_beta_prime_scale)
            .map(|((a, b), s)| if *s > 0.0 { (a - b).abs() / s } else { (a - b).abs() })
            .collect())
    }

    fn flagged(&self, i: usize) -> bool {
        self.violations.iter().any(|v| v.index == i)
    }

    /// CSV with columns tau, H_cd, F_beta, F_beta_prime, residual,
    /// violation_flag.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("tau,H_cd,F_beta,F_beta_prime,residual,violation_flag\n");
        for i in 0..self.len() {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_sig(self.taus[i]),
                fmt_sig(self.h_cd[i]),
                fmt_sig(self.f_beta[i]),
                fmt_sig(self.f_beta_prime[i]),
                fmt_sig(self.residuals[i]),
                u8::from(self.flagged(i))
            ));
        }
        s
    }
}

/// F_i minus the chord through its neighbours at τ_i; positive means a
/// convexity defect.
fn chord_defect(taus: &[f64], f: &[f64], i: usize) -> f64 {
    let (a, b, c) = (taus[i - 1], taus[i], taus[i + 1]);
    let chord = ((c - b) * f[i - 1] + (b - a) * f[i + 1]) / (c - a);
    f[i] - chord
}

/// Curves for several parameter sets on one family of level sets, with
/// violations judged against the same family one refinement lower when
/// given.
pub fn scan_levels(
    levels: &[LevelSetMesh],
    params: &[ParamSet],
    coarse_levels: Option<&[LevelSetMesh]>,
) -> Result<Vec<FunctionalCurve>> {
    params
        .iter()
        .map(|p| {
            p.validate()?;
            let mut curve = FunctionalCurve::from_levels(levels, p)?;
            let coarse = coarse_levels.map(|c| FunctionalCurve::from_levels(c, p)).transpose()?;
            curve.detect_violations(coarse.as_ref())?;
            Ok(curve)
        })
        .collect()
}

/// Transports the boundary to every τ of the grid and scans one parameter
/// set.
pub fn monotonicity_scan<F: HarmonicField + ?Sized>(
    field: &F,
    mesh: &SurfaceMesh,
    p: &ParamSet,
    taus: &[f64],
) -> Result<FunctionalCurve> {
    p.validate()?;
    let levels = level_family(field, mesh, taus)?;
    let mut curves = scan_levels(&levels, std::slice::from_ref(p), None)?;
    Ok(curves.remove(0))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::geometry::{make_surface, ParametricShape};
    use crate::levelset::geometric_grid;
    use crate::oracles::{RadialField, SpheroidField};

    fn synthetic(h: Vec<f64>, f: Vec<f64>, fp: Vec<f64>) -> FunctionalCurve {
        let n = h.len();
        FunctionalCurve {
            params: ParamSet::new(1.0, 1.0, 0.0),
            taus: (0..n).map(|i| 1.0 + i as f64).collect(),
            h_cd_scale: vec![1.0; n],
            h_cd: h,
            f_beta: f,
            f_beta_prime: fp,
            f_beta_prime_scale: vec![1.0; n],
            residuals: vec![0.0; n],
            violations: Vec::new(),
        }
    }

    #[test]
    fn each_kind_of_violation_is_flagged() {
        let mut c = synthetic(vec![3.0, 2.0, 2.5, 1.0], vec![4.0, 2.0, 1.5, 1.4], vec![-1.0, -0.5, 0.2, -0.1]);
        c.detect_violations(None).unwrap();
        let kinds: Vec<(ViolationKind, usize)> = c.violations.iter().map(|v| (v.kind, v.index)).collect();
        assert!(kinds.contains(&(ViolationKind::HIncrease, 2)));
        assert!(kinds.contains(&(ViolationKind::PositiveDerivative, 2)));
        assert!(!kinds.iter().any(|k| k.0 == ViolationKind::FIncrease));
        // F at τ=3 is 1.5 against the chord value 1.7: convex there.
        assert!(!kinds.contains(&(ViolationKind::Convexity, 2)));
        let mut bump = synthetic(vec![0.0; 3], vec![2.0, 1.9, 1.0], vec![-1.0; 3]);
        bump.detect_violations(None).unwrap();
        assert_eq!(bump.violations.len(), 1);
        assert_eq!(bump.violations[0].kind, ViolationKind::Convexity);
        assert!(!bump.is_monotone());
        let csv = bump.to_csv();
        assert_eq!(csv.lines().nth(2).unwrap().rsplit(',').next(), Some("1"));
    }

    #[test]
    fn refinement_noise_masks_unresolved_changes() {
        let mut fine = synthetic(vec![1.0, 1.001], vec![1.0, 1.0], vec![0.0, 0.0]);
        let coarse = synthetic(vec![1.0, 1.01], vec![1.0, 1.0], vec![0.0, 0.0]);
        fine.detect_violations(Some(&coarse)).unwrap();
        assert!(fine.is_monotone());
        fine.detect_violations(None).unwrap();
        assert_eq!(fine.violations[0].kind, ViolationKind::HIncrease);
        let other = synthetic(vec![1.0; 3], vec![1.0; 3], vec![0.0; 3]);
        assert!(fine.detect_violations(Some(&other)).is_err());
    }

    #[test]
    fn ball_curves_are_flat() {
        let mesh = make_surface(&ParametricShape::unit_sphere(), 3).unwrap();
        let field = RadialField::ball3(1.0);
        let taus = geometric_grid(1.0, 50.0, 12);
        for p in [ParamSet::new(2.0, 1.0, 0.0), ParamSet::new(0.5, -1.0, 1.0), ParamSet::new(1.0, 0.0, 1.0)] {
            let c = monotonicity_scan(&field, &mesh, &p, &taus).unwrap();
            assert!(c.is_monotone(), "{:?}", c.violations);
            let f_ref = 4.0 * PI;
            let (dh, df) = c.deviation_from(p.d * f_ref, f_ref);
            assert!(dh < 0.01 && df < 0.01, "{dh} {df}");
            assert_eq!(c.to_csv().lines().count(), taus.len() + 1);
        }
    }

    #[test]
    fn spheroid_curves_decrease() {
        let mesh = make_surface(&ParametricShape::spheroid(2.0, 1.0), 3).unwrap();
        let field = SpheroidField::new(2.0, 1.0).unwrap();
        let taus = geometric_grid(1.0, 50.0, 20);
        let c = monotonicity_scan(&field, &mesh, &ParamSet::new(2.0, 1.0, 0.0), &taus).unwrap();
        assert!(c.is_monotone(), "{:?}", c.violations);
        assert!(c.h_cd.windows(2).all(|w| w[1] < w[0]));
        assert!(c.h_cd[0] > 0.0 && c.h_cd[19].abs() < 1e-3 * c.h_cd[0]);
        assert!(c.derivative_defects().unwrap().iter().all(|d| *d < 0.02));
    }

    #[test]
    fn inadmissible_parameters_are_rejected() {
        let mesh = make_surface(&ParametricShape::unit_sphere(), 1).unwrap();
        let field = RadialField::ball3(1.0);
        let r = monotonicity_scan(&field, &mesh, &ParamSet::new(2.0, -2.0, 1.0), &[1.0, 2.0]);
        assert!(matches!(r, Err(Error::Inadmissible(_))));
    }
}
