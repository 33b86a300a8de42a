//! Both sides of the capacity/curvature inequalities for a solved boundary.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::ParamSet;
use crate::geometry::SurfaceMesh;
use crate::oracles::unit_sphere_area;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InequalityKind {
    #[serde(rename = "parametric_1_2")]
    Parametric,
    #[serde(rename = "willmore_1_5")]
    Willmore,
    #[serde(rename = "generalized_1_6")]
    GeneralizedWillmore,
    #[serde(rename = "weighted_minkowski_1_7")]
    WeightedMinkowski,
    #[serde(rename = "quantitative_willmore_1_8")]
    QuantitativeWillmore,
    #[serde(rename = "geomA_1_9")]
    GeomA,
    #[serde(rename = "geomB_1_10")]
    GeomB,
}

impl InequalityKind {
    pub const ALL: [InequalityKind; 7] = [
        InequalityKind::Parametric,
        InequalityKind::Willmore,
        InequalityKind::GeneralizedWillmore,
        InequalityKind::WeightedMinkowski,
        InequalityKind::QuantitativeWillmore,
        InequalityKind::GeomA,
        InequalityKind::GeomB,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            InequalityKind::Parametric => "parametric_1_2",
            InequalityKind::Willmore => "willmore_1_5",
            InequalityKind::GeneralizedWillmore => "generalized_1_6",
            InequalityKind::WeightedMinkowski => "weighted_minkowski_1_7",
            InequalityKind::QuantitativeWillmore => "quantitative_willmore_1_8",
            InequalityKind::GeomA => "geomA_1_9",
            InequalityKind::GeomB => "geomB_1_10",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
}

/// Parameters an inequality was evaluated with; unused ones are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportParams {
    pub beta: Option<f64>,
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub p_exp: Option<f64>,
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub id: InequalityKind,
    pub params: ReportParams,
    pub lhs: f64,
    pub rhs: f64,
    /// rhs − lhs; nonnegative when the inequality holds.
    pub slack: f64,
    /// slack / scale, with scale the sum of the magnitudes of all terms.
    pub relative_slack: f64,
    pub scale: f64,
    /// Absolute discretization estimate the verdict was judged against.
    pub tolerance: f64,
    pub verdict: Verdict,
    pub rigidity_score: f64,
}

impl InequalityReport {
    fn new(id: InequalityKind, params: ReportParams, lhs: f64, rhs: f64, scale: f64) -> Self {
        let slack = rhs - lhs;
        let relative = if scale > 0.0 { slack / scale } else { 0.0 };
        InequalityReport {
            id,
            params,
            lhs,
            rhs,
            slack,
            relative_slack: relative,
            scale,
            tolerance: 0.0,
            verdict: if slack >= 0.0 { Verdict::Holds } else { Verdict::Violated },
            rigidity_score: relative,
        }
    }

    /// Re-judges the verdict: violated only if slack < −3·`estimate`.
    pub fn with_tolerance(mut self, estimate: f64) -> Self {
        self.tolerance = estimate.abs();
        self.verdict = if self.slack < -3.0 * self.tolerance {
            Verdict::Violated
        } else {
            Verdict::Holds
        };
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Boundary traces the inequalities are built from: per-panel |Du| and
/// per-vertex H on a closed mesh, plus the capacity.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub n: u32,
    pub areas: Vec<f64>,
    pub triangles: Vec<[usize; 3]>,
    pub panel_grad_norm: Vec<f64>,
    pub vertex_mean_curvature: Vec<f64>,
    pub capacity: f64,
}

impl BoundaryData {
    pub fn new(mesh: &SurfaceMesh, panel_grad_norm: Vec<f64>, capacity: f64) -> Result<Self> {
        if panel_grad_norm.len() != mesh.triangle_count() {
            return Err(Error::SampleCount {
                expected: mesh.triangle_count(),
                got: panel_grad_norm.len(),
            });
        }
        Ok(BoundaryData {
            n: 3,
            areas: mesh.areas().to_vec(),
            triangles: mesh.triangles().to_vec(),
            panel_grad_norm,
            vertex_mean_curvature: mesh.mean_curvature().to_vec(),
            capacity,
        })
    }

    pub fn area(&self) -> f64 {
        self.areas.iter().sum()
    }

    fn panel_curvature(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        let h = &self.vertex_mean_curvature;
        (h[a] + h[b] + h[c]) / 3.0
    }

    /// ∫ |Du|^a H^b dσ with H averaged over each panel (b ∈ {0, 1}).
    pub fn grad_curv_integral(&self, a: f64, with_curvature: bool) -> f64 {
        (0..self.areas.len())
            .map(|t| {
                let h = if with_curvature { self.panel_curvature(t) } else { 1.0 };
                self.areas[t] * self.panel_grad_norm[t].powf(a) * h
            })
            .sum()
    }

    /// ∫ (|H|/(n−1))^p dσ with vertex samples.
    pub fn curvature_power_integral(&self, p: f64) -> f64 {
        let k = self.n as f64 - 1.0;
        let h = &self.vertex_mean_curvature;
        self.triangles
            .iter()
            .zip(&self.areas)
            .map(|(t, a)| a * t.iter().map(|&i| (h[i].abs() / k).powf(p)).sum::<f64>() / 3.0)
            .sum()
    }

    fn sphere_area(&self) -> f64 {
        unit_sphere_area(self.n)
    }
}

fn params_of(p: &ParamSet) -> ReportParams {
    ReportParams {
        beta: Some(p.beta),
        c: Some(p.c),
        d: Some(p.d),
        p_exp: None,
        n: p.n,
    }
}

/// d(n−2)^{β+1}|S|Cap^{(n−2−β)/(n−2)} ≤ β(c+d)∫|Du|^βH + [d − kβ(c+d)]∫|Du|^{β+1}.
pub fn check_parametric(data: &BoundaryData, p: &ParamSet) -> Result<InequalityReport> {
    p.validate()?;
    let n = data.n as f64;
    let lhs = p.d * (n - 2.0).powf(p.beta + 1.0) * data.sphere_area()
        * data.capacity.powf((n - 2.0 - p.beta) / (n - 2.0));
    let i_h = data.grad_curv_integral(p.beta, true);
    let i_g = data.grad_curv_integral(p.beta + 1.0, false);
    let t1 = p.beta * (p.c + p.d) * i_h;
    let t2 = (p.d - p.k() * p.beta * (p.c + p.d)) * i_g;
    let scale = lhs.abs() + t1.abs() + t2.abs();
    Ok(InequalityReport::new(InequalityKind::Parametric, params_of(p), lhs, t1 + t2, scale))
}

/// |S^{n−1}| ≤ ∫ (|H|/(n−1))^{n−1} dσ.
pub fn check_willmore(data: &BoundaryData) -> InequalityReport {
    let lhs = data.sphere_area();
    let rhs = data.curvature_power_integral(data.n as f64 - 1.0);
    let params = ReportParams {
        p_exp: Some(data.n as f64 - 1.0),
        n: data.n,
        ..Default::default()
    };
    InequalityReport::new(InequalityKind::Willmore, params, lhs, rhs, lhs + rhs.abs())
}

/// |S|Cap^{(n−1−p)/(n−2)} ≤ ∫ (|H|/(n−1))^p dσ for p ≥ (2n−3)/(n−1).
pub fn check_generalized_willmore(data: &BoundaryData, p_exp: f64) -> Result<InequalityReport> {
    let n = data.n as f64;
    let threshold = (2.0 * n - 3.0) / (n - 1.0);
    if !(p_exp >= threshold - 1e-12) {
        return Err(Error::Inadmissible(format!(
            "exponent p = {p_exp} is below (2n-3)/(n-1) = {threshold}"
        )));
    }
    let lhs = data.sphere_area() * data.capacity.powf((n - 1.0 - p_exp) / (n - 2.0));
    let rhs = data.curvature_power_integral(p_exp);
    let params = ReportParams {
        p_exp: Some(p_exp),
        n: data.n,
        ..Default::default()
    };
    Ok(InequalityReport::new(
        InequalityKind::GeneralizedWillmore,
        params,
        lhs,
        rhs,
        lhs.abs() + rhs.abs(),
    ))
}

/// Left side shared by the weighted Minkowski and quantitative Willmore
/// inequalities, returned as (value, magnitude of its terms).
fn minkowski_lhs(data: &BoundaryData) -> (f64, f64) {
    let n = data.n as f64;
    let e = (n - 2.0) / (n - 1.0);
    let k = (n - 1.0) / (n - 2.0);
    let a = e * data.grad_curv_integral(e, true);
    let b = e * k * data.grad_curv_integral(e + 1.0, false);
    (a - b, a.abs() + b.abs())
}

fn minkowski_prefactor(data: &BoundaryData) -> f64 {
    let n = data.n as f64;
    let e = (n - 2.0) / (n - 1.0);
    (n - 2.0).powf((2.0 * n - 3.0) / (n - 1.0)) * data.sphere_area().powf(e)
}

pub fn check_weighted_minkowski(data: &BoundaryData) -> InequalityReport {
    let n = data.n as f64;
    let e = (n - 2.0) / (n - 1.0);
    let area = data.area();
    let mean_grad = data.grad_curv_integral(1.0, false) / area;
    // ∫ H/(n−1) dσ̄ with dσ̄ = (|Du|/mean|Du|)^e dσ.
    let weighted_h = (0..data.areas.len())
        .map(|t| {
            data.areas[t] * (data.panel_grad_norm[t] / mean_grad).powf(e) * data.panel_curvature(t)
                / (n - 1.0)
        })
        .sum::<f64>();
    let pre = minkowski_prefactor(data) * (data.capacity / area).powf(e);
    let r1 = pre * weighted_h;
    let r2 = pre * data.sphere_area().powf(1.0 / (n - 1.0)) * area.powf(e);
    let (lhs, lhs_scale) = minkowski_lhs(data);
    let params = ReportParams {
        beta: Some(e),
        n: data.n,
        ..Default::default()
    };
    InequalityReport::new(
        InequalityKind::WeightedMinkowski,
        params,
        lhs,
        r1 - r2,
        lhs_scale + r1.abs() + r2.abs(),
    )
}

pub fn check_quantitative_willmore(data: &BoundaryData) -> InequalityReport {
    let n = data.n as f64;
    let e = (n - 2.0) / (n - 1.0);
    let pre = minkowski_prefactor(data) * data.capacity.powf(e);
    let w = data.curvature_power_integral(n - 1.0);
    let r1 = pre * w.powf(1.0 / (n - 1.0));
    let r2 = pre * data.sphere_area().powf(1.0 / (n - 1.0));
    let (lhs, lhs_scale) = minkowski_lhs(data);
    let params = ReportParams {
        beta: Some(e),
        n: data.n,
        ..Default::default()
    };
    InequalityReport::new(
        InequalityKind::QuantitativeWillmore,
        params,
        lhs,
        r1 - r2,
        lhs_scale + r1.abs() + r2.abs(),
    )
}

/// (n−2)^{β+1}|S|Cap^{(n−2−β)/(n−2)} ≤ ∫|Du|^{β+1} and
/// ((n−1)/(n−2))∫|Du|^{β+1} ≤ ∫|Du|^β H.
pub fn check_geom_ab(data: &BoundaryData, beta: f64) -> Result<(InequalityReport, InequalityReport)> {
    let p = ParamSet::new(beta, 1.0, 0.0).with_dimension(data.n);
    p.validate()?;
    let n = data.n as f64;
    let params = ReportParams {
        beta: Some(beta),
        n: data.n,
        ..Default::default()
    };
    let i_g = data.grad_curv_integral(beta + 1.0, false);
    let i_h = data.grad_curv_integral(beta, true);
    let a_lhs = (n - 2.0).powf(beta + 1.0)
        * data.sphere_area()
        * data.capacity.powf((n - 2.0 - beta) / (n - 2.0));
    let a = InequalityReport::new(InequalityKind::GeomA, params, a_lhs, i_g, a_lhs.abs() + i_g.abs());
    let b_lhs = p.k() * i_g;
    let b = InequalityReport::new(InequalityKind::GeomB, params, b_lhs, i_h, b_lhs.abs() + i_h.abs());
    Ok((a, b))
}

/// The Cauchy–Schwarz route from the two geometric inequalities to the
/// Willmore inequality in R³ (β = 1):
/// 2∫|Du|² ≤ ∫|Du|H ≤ (∫|Du|²)^{1/2}(∫H²)^{1/2}, hence ∫|Du|² ≤ ∫(H/2)²,
/// and 4π·Cap⁰ ≤ ∫|Du|².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderChain {
    pub twice_grad_sq: f64,
    pub grad_times_curvature: f64,
    pub cauchy_schwarz_bound: f64,
    pub grad_sq: f64,
    pub willmore: f64,
    pub sphere_area: f64,
}

impl HolderChain {
    /// Whether each link holds up to the relative tolerance `tol`.
    pub fn links(&self, tol: f64) -> [bool; 4] {
        let le = |a: f64, b: f64| a <= b + tol * (a.abs() + b.abs());
        [
            le(self.twice_grad_sq, self.grad_times_curvature),
            le(self.grad_times_curvature, self.cauchy_schwarz_bound),
            le(self.grad_sq, self.willmore),
            le(self.sphere_area, self.grad_sq),
        ]
    }
}

pub fn holder_chain(data: &BoundaryData) -> Result<HolderChain> {
    if data.n != 3 {
        return Err(Error::Unsupported("the chain is evaluated in R^3".into()));
    }
    let grad_sq = data.grad_curv_integral(2.0, false);
    let gh = data.grad_curv_integral(1.0, true);
    let h_sq = 4.0 * data.curvature_power_integral(2.0);
    Ok(HolderChain {
        twice_grad_sq: 2.0 * grad_sq,
        grad_times_curvature: gh,
        cauchy_schwarz_bound: (grad_sq * h_sq).sqrt(),
        grad_sq,
        willmore: h_sq / 4.0,
        sphere_area: data.sphere_area(),
    })
}

/// Parameters for one full pass over the seven inequalities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalitySweep {
    pub params: Vec<ParamSet>,
    pub p_exponents: Vec<f64>,
}

impl Default for InequalitySweep {
    fn default() -> Self {
        InequalitySweep {
            params: vec![
                ParamSet::new(1.0, 1.0, 0.0),
                ParamSet::new(1.0, -1.0, 1.0),
                ParamSet::new(2.0, 1.0, 1.0),
                ParamSet::new(2.0, -1.0, 1.0),
            ],
            p_exponents: vec![1.5, 2.0, 3.0],
        }
    }
}

/// Every report for the sweep, in a fixed order.
pub fn check_all(data: &BoundaryData, sweep: &InequalitySweep) -> Result<Vec<InequalityReport>> {
    let mut out = Vec::new();
    for p in &sweep.params {
        out.push(check_parametric(data, p)?);
    }
    out.push(check_willmore(data));
    for &q in &sweep.p_exponents {
        out.push(check_generalized_willmore(data, q)?);
    }
    out.push(check_weighted_minkowski(data));
    out.push(check_quantitative_willmore(data));
    let mut betas: Vec<f64> = sweep.params.iter().map(|p| p.beta).collect();
    betas.sort_by(f64::total_cmp);
    betas.dedup();
    for b in betas {
        let (a, bb) = check_geom_ab(data, b)?;
        out.push(a);
        out.push(bb);
    }
    Ok(out)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(crate::report::fmt_sig).unwrap_or_default()
}

pub const REPORT_CSV_HEADER: &str =
    "shape,id,beta,c,d,p_exp,n,lhs,rhs,slack,relative_slack,tolerance,verdict";

/// One CSV row per report (no header).
pub fn reports_to_csv(shape: &str, reports: &[InequalityReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            shape,
            r.id.id(),
            fmt_opt(r.params.beta),
            fmt_opt(r.params.c),
            fmt_opt(r.params.d),
            fmt_opt(r.params.p_exp),
            r.params.n,
            crate::report::fmt_sig(r.lhs),
            crate::report::fmt_sig(r.rhs),
            crate::report::fmt_sig(r.slack),
            crate::report::fmt_sig(r.relative_slack),
            crate::report::fmt_sig(r.tolerance),
            if r.holds() { "holds" } else { "violated" }
        );
    }
    s
}

/// Fixed-width table for terminals.
pub fn reports_to_table(reports: &[InequalityReport]) -> String {
    let mut s = format!(
        "{:<28} {:>8} {:>6} {:>6} {:>6} {:>16} {:>16} {:>12} {:>9}\n",
        "inequality", "beta", "c", "d", "p", "lhs", "rhs", "rel. slack", "verdict"
    );
    let o = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
    for r in reports {
        let _ = writeln!(
            s,
            "{:<28} {:>8} {:>6} {:>6} {:>6} {:>16.9e} {:>16.9e} {:>12.3e} {:>9}",
            r.id.id(),
            o(r.params.beta),
            o(r.params.c),
            o(r.params.d),
            o(r.params.p_exp),
            r.lhs,
            r.rhs,
            r.relative_slack,
            if r.holds() { "holds" } else { "VIOLATED" }
        );
    }
    s
}
