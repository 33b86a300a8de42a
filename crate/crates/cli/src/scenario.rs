use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use willmore_core::functionals::{default_sweep, ParamSet};
use willmore_core::geometry::ParametricShape;

use crate::Failure;

/// Steps a scenario can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Capacity,
    Inequalities,
    Monotonicity,
    Pointwise,
    Identity,
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Capacity => "capacity",
            Check::Inequalities => "inequalities",
            Check::Monotonicity => "monotonicity",
            Check::Pointwise => "pointwise",
            Check::Identity => "identity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    #[serde(default = "default_sweep")]
    pub params: Vec<ParamSet>,
    #[serde(default = "default_exponents")]
    pub p_exponents: Vec<f64>,
}

fn default_exponents() -> Vec<f64> {
    vec![1.5, 2.0, 3.0]
}

impl Default for Sweep {
    fn default() -> Self {
        Sweep {
            params: default_sweep(),
            p_exponents: default_exponents(),
        }
    }
}

/// Geometric τ grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TauGrid {
    pub first: f64,
    pub last: f64,
    pub count: usize,
}

impl Default for TauGrid {
    fn default() -> Self {
        TauGrid {
            first: 1.0,
            last: 50.0,
            count: 40,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IdentityConfig {
    pub beta: f64,
    pub c: f64,
    pub d: f64,
    pub u0: f64,
    pub u1: f64,
    /// Odd number of equispaced s-nodes.
    pub nodes: usize,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig {
            beta: 2.0,
            c: 1.0,
            d: 1.0,
            u0: 0.2,
            u1: 1.0,
            nodes: 33,
        }
    }
}

impl IdentityConfig {
    pub fn params(&self) -> ParamSet {
        ParamSet::new(self.beta, self.c, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PointwiseConfig {
    pub points: usize,
    pub seed: u64,
}

impl Default for PointwiseConfig {
    fn default() -> Self {
        PointwiseConfig { points: 500, seed: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceConfig {
    pub refinements: Vec<u32>,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            refinements: vec![2, 3, 4],
        }
    }
}

/// Thresholds; all relative unless noted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Capacity against its closed form.
    pub capacity: f64,
    /// Charge capacity against the flux capacity.
    pub capacity_pair: f64,
    /// Per-panel |Du| against its closed form (balls).
    pub boundary_gradient: f64,
    /// |relative slack| on balls.
    pub rigidity: f64,
    /// Mesh Willmore energy against the parametric quadrature.
    pub willmore_oracle: f64,
    pub relations: f64,
    pub derivative: f64,
    /// Deviation of the functionals from their constant values on balls.
    pub constancy: f64,
    /// F_β at the last τ against its limit, and |H_β^{1,0}| there against
    /// the size of its terms.
    pub far_limit: f64,
    pub identity: f64,
    pub trace: f64,
    pub kato: f64,
    /// Multiple of the refinement estimate that div Z may dip below zero by.
    pub div_estimate_factor: f64,
    /// |div Z| and the Kato slack relative to their scales on balls.
    pub ball_pointwise: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            capacity: 0.01,
            capacity_pair: 0.005,
            boundary_gradient: 0.01,
            rigidity: 0.01,
            willmore_oracle: 0.01,
            relations: 0.01,
            derivative: 0.02,
            constancy: 0.01,
            far_limit: 0.03,
            identity: 0.02,
            trace: 1e-6,
            kato: 1e-8,
            div_estimate_factor: 3.0,
            ball_pointwise: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub plots: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("out"),
            plots: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "default_name")]
    pub name: String,
    pub shape: ParametricShape,
    #[serde(default = "default_refinement")]
    pub refinement: u32,
    #[serde(default = "default_checks")]
    pub checks: Vec<Check>,
    #[serde(default)]
    pub sweep: Sweep,
    #[serde(default)]
    pub tau: TauGrid,
    #[serde(default)]
    pub identity: IdentityConfig,
    #[serde(default)]
    pub pointwise: PointwiseConfig,
    #[serde(default)]
    pub convergence: ConvergenceConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_name() -> String {
    "scenario".into()
}

fn default_refinement() -> u32 {
    3
}

fn default_checks() -> Vec<Check> {
    vec![Check::Capacity, Check::Inequalities, Check::Monotonicity, Check::Pointwise]
}

/// Finest refinement a scenario may ask for.
pub const MAX_REFINEMENT: u32 = 6;

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, Failure> {
        let s: Scenario = toml::from_str(text).map_err(|e| Failure::Config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn is_ball(&self) -> bool {
        matches!(self.shape, ParametricShape::Sphere { .. })
    }

    /// Rejects anything a run would trip over later, most importantly
    /// parameter sets outside the admissible region.
    pub fn validate(&self) -> Result<(), Failure> {
        let bad = |m: String| Err(Failure::Config(m));
        self.shape.validate().map_err(|e| Failure::Config(e.to_string()))?;
        if self.refinement > MAX_REFINEMENT {
            return bad(format!("refinement {} exceeds {MAX_REFINEMENT}", self.refinement));
        }
        if self.checks.is_empty() {
            return bad("at least one check is required".into());
        }
        for p in &self.sweep.params {
            p.validate().map_err(|e| Failure::Config(format!("sweep {p:?}: {e}")))?;
        }
        let threshold = 1.5;
        if let Some(q) = self.sweep.p_exponents.iter().find(|q| !(**q >= threshold)) {
            return bad(format!("exponent p = {q} is below (2n-3)/(n-1) = {threshold}"));
        }
        let t = &self.tau;
        if !(t.first >= 1.0 && t.last > t.first && t.last.is_finite() && t.count >= 3) {
            return bad(format!("tau grid needs 1 <= first < last and count >= 3, got {t:?}"));
        }
        let id = &self.identity;
        id.params()
            .validate()
            .map_err(|e| Failure::Config(format!("identity parameters: {e}")))?;
        if !(id.u0 > 0.0 && id.u0 < id.u1 && id.u1 <= 1.0) {
            return bad(format!("identity needs 0 < u0 < u1 <= 1, got u0 = {}, u1 = {}", id.u0, id.u1));
        }
        if id.nodes < 3 || id.nodes.is_multiple_of(2) {
            return bad(format!("identity needs an odd node count >= 3, got {}", id.nodes));
        }
        if self.pointwise.points == 0 {
            return bad("pointwise needs at least one point".into());
        }
        let r = &self.convergence.refinements;
        if r.len() < 3 || r.windows(2).any(|w| w[1] <= w[0]) || r.iter().any(|k| *k > MAX_REFINEMENT) {
            return bad(format!(
                "convergence needs at least three increasing refinements up to {MAX_REFINEMENT}, got {r:?}"
            ));
        }
        Ok(())
    }
}
