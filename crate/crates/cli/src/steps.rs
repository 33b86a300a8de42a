//! The checks a scenario runs and the files each one writes.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};
use willmore_core::functionals::{
    exterior_points, functional_relations, identity_from_levels, level_functionals, pointwise_suite, scan_levels,
    uniform_s_grid, FunctionalCurve, IdentityCheck, ParamSet,
};
use willmore_core::geometry::{make_surface, ParametricShape, SurfaceMesh};
use willmore_core::inequalities::{
    check_all, holder_chain, reports_to_csv, BoundaryData, InequalityReport, InequalitySweep, REPORT_CSV_HEADER,
};
use willmore_core::levelset::{geometric_grid, level_family, LevelSetMesh};
use willmore_core::oracles::{
    ball_reference_values, spheroid_capacity, unit_sphere_area, willmore_energy_quadrature,
};
use willmore_core::potential::{solve_exterior_potential, PotentialSolution};
use willmore_core::report::fmt_sig;

use crate::output::OutDir;
use crate::plot::curve_svg;
use crate::scenario::{Check, Scenario};
use crate::Failure;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub plots: bool,
}

impl RunOptions {
    pub fn from_scenario(s: &Scenario) -> Self {
        RunOptions {
            out_dir: s.output.dir.clone(),
            plots: s.output.plots,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepOutcome {
    pub check: String,
    pub passed: bool,
    pub metrics: BTreeMap<String, Value>,
    pub notes: Vec<String>,
}

impl StepOutcome {
    fn new(check: &str) -> Self {
        StepOutcome {
            check: check.into(),
            passed: true,
            metrics: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn metric<T: Serialize>(&mut self, name: &str, value: T) {
        self.metrics.insert(name.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    /// Records `value` and fails the step unless `ok`.
    fn require(&mut self, name: &str, value: f64, limit: f64, ok: bool) {
        self.metric(name, value);
        if !ok {
            self.passed = false;
            self.notes.push(format!("{name} = {} outside the limit {}", fmt_sig(value), fmt_sig(limit)));
        }
    }

    fn at_most(&mut self, name: &str, value: f64, limit: f64) {
        self.require(name, value, limit, value <= limit);
    }

    pub fn metric_f64(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).and_then(Value::as_f64)
    }

    /// One human-readable line.
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        if self.notes.is_empty() {
            format!("{status} {}", self.check)
        } else {
            format!("{status} {}: {}", self.check, self.notes.join("; "))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub name: String,
    pub shape: ParametricShape,
    pub refinement: u32,
    pub panels: usize,
    pub passed: bool,
    pub steps: Vec<StepOutcome>,
}

impl Summary {
    pub fn step(&self, check: &str) -> Option<&StepOutcome> {
        self.steps.iter().find(|s| s.check == check)
    }
}

/// Closed-form capacity where one is known: balls and prolate spheroids
/// with their long axis along x.
pub fn capacity_oracle(shape: &ParametricShape) -> Option<f64> {
    match *shape {
        ParametricShape::Sphere { radius, .. } => Some(radius),
        ParametricShape::Ellipsoid { a, b, c } if b == c && a >= b => Some(spheroid_capacity(a, b)),
        _ => None,
    }
}

/// ∫ (H/2)² dσ on the mesh.
pub fn mesh_willmore_energy(mesh: &SurfaceMesh) -> Result<f64, Failure> {
    let data = BoundaryData::new(mesh, vec![1.0; mesh.triangle_count()], 1.0)?;
    Ok(data.curvature_power_integral(2.0))
}

struct Solved {
    mesh: SurfaceMesh,
    sol: PotentialSolution,
}

fn solve(shape: &ParametricShape, refinement: u32) -> Result<Solved, Failure> {
    let mesh = make_surface(shape, refinement)?;
    let sol = solve_exterior_potential(&mesh)?;
    Ok(Solved { mesh, sol })
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn param_tag(p: &ParamSet) -> String {
    format!("beta{}_c{}_d{}", p.beta, p.c, p.d)
}

struct Context<'a> {
    s: &'a Scenario,
    fine: Solved,
    /// The same problem one refinement lower, for discretization estimates.
    coarse: Option<Solved>,
    out: OutDir,
    plots: bool,
}

/// Runs every check listed in the scenario and writes its outputs plus
/// `summary.json`.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<Summary, Failure> {
    s.validate()?;
    let out = OutDir::create(&opts.out_dir)?;
    let mut checks = s.checks.clone();
    checks.sort();
    checks.dedup();
    let fine = solve(&s.shape, s.refinement)?;
    let needs_coarse = checks.iter().any(|c| *c != Check::Capacity);
    let coarse = if needs_coarse && s.refinement > 0 {
        Some(solve(&s.shape, s.refinement - 1)?)
    } else {
        None
    };
    let ctx = Context {
        s,
        fine,
        coarse,
        out,
        plots: opts.plots,
    };
    ctx.out.write("solution.json", &ctx.fine.sol.to_json()?)?;
    let mut steps = Vec::new();
    for check in checks {
        steps.push(match check {
            Check::Capacity => capacity_step(&ctx)?,
            Check::Inequalities => inequality_step(&ctx)?,
            Check::Monotonicity => monotonicity_step(&ctx)?,
            Check::Pointwise => pointwise_step(&ctx)?,
            Check::Identity => identity_step(&ctx)?,
        });
    }
    let summary = Summary {
        name: s.name.clone(),
        shape: s.shape.clone(),
        refinement: s.refinement,
        panels: ctx.fine.mesh.triangle_count(),
        passed: steps.iter().all(|st| st.passed),
        steps,
    };
    ctx.out.write_json("summary.json", &summary)?;
    Ok(summary)
}

fn capacity_step(ctx: &Context) -> Result<StepOutcome, Failure> {
    let tol = &ctx.s.tolerances;
    let sol = &ctx.fine.sol;
    let mut st = StepOutcome::new(Check::Capacity.name());
    let (charge, flux) = sol.capacity_pair();
    st.metric("capacity", charge);
    st.metric("capacity_flux", flux);
    st.at_most("capacity_pair_gap", relative(flux, charge), tol.capacity_pair);
    let d = sol.diagnostics();
    st.metric("panels", d.panels);
    st.metric("iterations", d.iterations);
    st.metric("relative_residual", d.relative_residual);
    st.metric("condition_estimate", d.condition_estimate);
    if let Some(exact) = capacity_oracle(&ctx.s.shape) {
        st.metric("capacity_exact", exact);
        st.at_most("capacity_error", relative(charge, exact), tol.capacity);
    }
    if let ParametricShape::Sphere { radius, .. } = ctx.s.shape {
        let worst = sol
            .boundary_gradient_norm()
            .iter()
            .map(|g| relative(*g, 1.0 / radius))
            .fold(0.0, f64::max);
        st.at_most("max_gradient_error", worst, tol.boundary_gradient);
    }
    let mesh_energy = mesh_willmore_energy(&ctx.fine.mesh)?;
    st.metric("willmore_energy", mesh_energy);
    if let Ok(exact) = willmore_energy_quadrature(&ctx.s.shape, 2.0) {
        st.metric("willmore_energy_exact", exact);
        st.at_most("willmore_energy_error", relative(mesh_energy, exact), tol.willmore_oracle);
    }
    ctx.out.write_json("capacity.json", &st.metrics)?;
    Ok(st)
}

fn boundary_data(solved: &Solved) -> Result<BoundaryData, Failure> {
    Ok(BoundaryData::new(
        &solved.mesh,
        solved.sol.boundary_gradient_norm(),
        solved.sol.capacity(),
    )?)
}

fn inequality_step(ctx: &Context) -> Result<StepOutcome, Failure> {
    let s = ctx.s;
    let sweep = InequalitySweep {
        params: s.sweep.params.clone(),
        p_exponents: s.sweep.p_exponents.clone(),
    };
    let data = boundary_data(&ctx.fine)?;
    let mut reports = check_all(&data, &sweep)?;
    if let Some(c) = &ctx.coarse {
        let coarse = check_all(&boundary_data(c)?, &sweep)?;
        reports = reports
            .into_iter()
            .zip(coarse)
            .map(|(r, c)| {
                let change = r.slack - c.slack;
                r.with_tolerance(change)
            })
            .collect();
    }
    let chain = holder_chain(&data)?;
    let links = chain.links(s.tolerances.rigidity);

    let mut st = StepOutcome::new(Check::Inequalities.name());
    st.metric("reports", reports.len());
    let violated: Vec<&InequalityReport> = reports.iter().filter(|r| !r.holds()).collect();
    st.metric("violated", violated.len());
    for r in &violated {
        st.notes.push(format!("{} violated (relative slack {})", r.id.id(), fmt_sig(r.relative_slack)));
    }
    if !violated.is_empty() {
        st.passed = false;
    }
    let worst = reports.iter().map(|r| r.relative_slack.abs()).fold(0.0, f64::max);
    let min_slack = reports.iter().map(|r| r.relative_slack).fold(f64::INFINITY, f64::min);
    st.metric("min_relative_slack", min_slack);
    if s.is_ball() {
        st.at_most("max_abs_relative_slack", worst, s.tolerances.rigidity);
    } else {
        st.metric("max_abs_relative_slack", worst);
    }
    st.metric("holder_links", links);
    if links.iter().any(|l| !l) {
        st.passed = false;
        st.notes.push("a link of the Hoelder chain fails".into());
    }

    ctx.out.write_json(
        "inequalities.json",
        &json!({ "reports": reports, "holder_chain": chain, "holder_links": links }),
    )?;
    let shape = s.shape.kind_name();
    ctx.out.write(
        "inequalities.csv",
        &format!("{REPORT_CSV_HEADER}\n{}", reports_to_csv(shape, &reports)),
    )?;
    Ok(st)
}

fn levels(solved: &Solved, taus: &[f64]) -> Result<Vec<LevelSetMesh>, Failure> {
    Ok(level_family(&solved.sol, &solved.mesh, taus)?)
}

fn monotonicity_step(ctx: &Context) -> Result<StepOutcome, Failure> {
    let s = ctx.s;
    let tol = &s.tolerances;
    let taus = geometric_grid(s.tau.first, s.tau.last, s.tau.count);
    let fine = levels(&ctx.fine, &taus)?;
    let coarse = ctx.coarse.as_ref().map(|c| levels(c, &taus)).transpose()?;
    let curves = scan_levels(&fine, &s.sweep.params, coarse.as_deref())?;

    let mut st = StepOutcome::new(Check::Monotonicity.name());
    st.metric("levels", taus.len());
    st.metric("curves", curves.len());

    let violations: usize = curves.iter().map(|c| c.violations.len()).sum();
    st.metric("violations", violations);
    let mut per_curve = Vec::new();
    let mut worst_relation = 0.0f64;
    let mut worst_fd = 0.0f64;
    let (mut worst_h_dev, mut worst_f_dev) = (0.0f64, 0.0f64);
    for c in &curves {
        let p = &c.params;
        let relation = fine
            .iter()
            .map(|ls| functional_relations(ls, p).map(|r| r.max()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let fd = c.derivative_defects()?.into_iter().fold(0.0, f64::max);
        worst_relation = worst_relation.max(relation);
        worst_fd = worst_fd.max(fd);
        let mut entry = json!({
            "params": p,
            "violations": c.violations,
            "max_relation_defect": relation,
            "max_derivative_defect": fd,
        });
        if let ParametricShape::Sphere { radius, .. } = s.shape {
            let reference = ball_reference_values(radius, 3, p)?;
            let (h_dev, f_dev) = c.deviation_from(reference.h_cd, reference.f_beta);
            worst_h_dev = worst_h_dev.max(h_dev);
            worst_f_dev = worst_f_dev.max(f_dev);
            entry["h_deviation"] = json!(h_dev);
            entry["f_deviation"] = json!(f_dev);
        }
        per_curve.push(entry);
        let tag = param_tag(p);
        ctx.out.write(&format!("curves/{tag}.csv"), &c.to_csv())?;
        if ctx.plots {
            ctx.out.write(&format!("plots/{tag}.svg"), &curve_svg(c))?;
        }
    }
    if s.is_ball() {
        // Constant curves: judged by their distance from the closed form;
        // flagged increments are listed but are noise on a flat curve.
        st.at_most("max_h_deviation", worst_h_dev, tol.constancy);
        st.at_most("max_f_deviation", worst_f_dev, tol.constancy);
    } else if violations > 0 {
        st.passed = false;
        st.notes.push(format!("{violations} monotonicity violations"));
    }
    st.at_most("max_relation_defect", worst_relation, tol.relations);
    st.at_most("max_derivative_defect", worst_fd, tol.derivative);

    let far = far_limits(&curves, ctx.fine.sol.capacity())?;
    let worst_limit = far.iter().map(|f| f.1).fold(0.0, f64::max);
    let worst_h10 = far.iter().filter_map(|f| f.2).fold(0.0, f64::max);
    st.at_most("max_far_limit_error", worst_limit, tol.far_limit);
    st.at_most("max_far_h10_relative", worst_h10, tol.far_limit);

    ctx.out.write_json(
        "monotonicity.json",
        &json!({
            "taus": taus,
            "curves": per_curve,
            "far_limit": far.iter().map(|(b, e, h)| json!({"beta": b, "f_error": e, "h10_relative": h})).collect::<Vec<_>>(),
        }),
    )?;
    Ok(st)
}

/// Per β at the last level: |F_β/(4π Cap^{1−β}) − 1| and, when a (1, 0)
/// curve is present, |H_β^{1,0}| relative to its term scale.
fn far_limits(curves: &[FunctionalCurve], capacity: f64) -> Result<Vec<(f64, f64, Option<f64>)>, Failure> {
    let mut betas: Vec<f64> = curves.iter().map(|c| c.params.beta).collect();
    betas.sort_by(f64::total_cmp);
    betas.dedup();
    Ok(betas
        .into_iter()
        .map(|beta| {
            let of_beta: Vec<&FunctionalCurve> = curves.iter().filter(|c| c.params.beta == beta).collect();
            let last = of_beta[0].len() - 1;
            let limit = 4.0 * PI * capacity.powf(1.0 - beta);
            let f_err = relative(of_beta[0].f_beta[last], limit);
            let h10 = of_beta
                .iter()
                .find(|c| c.params.c == 1.0 && c.params.d == 0.0)
                .map(|c| c.h_cd[last].abs() / c.h_cd_scale[last]);
            (beta, f_err, h10)
        })
        .collect())
}

fn pointwise_step(ctx: &Context) -> Result<StepOutcome, Failure> {
    let s = ctx.s;
    let tol = &s.tolerances;
    let points = exterior_points(&s.shape, s.pointwise.points, s.pointwise.seed);
    let coarse = ctx.coarse.as_ref().map(|c| &c.sol);
    let summary = pointwise_suite(&ctx.fine.sol, coarse, &points, &s.sweep.params)?;
    let mut st = StepOutcome::new(Check::Pointwise.name());
    st.metric("points", points.len());
    st.metric("evaluations", summary.rows.len());
    st.at_most("max_relative_trace", summary.max_relative_trace, tol.trace);
    st.require("min_relative_kato", summary.min_relative_kato, -tol.kato, summary.min_relative_kato >= -tol.kato);
    let below = summary
        .rows
        .iter()
        .filter(|r| r.div < -tol.div_estimate_factor * r.estimate - 1e-14 * r.scale)
        .count();
    st.metric("min_div_margin", summary.min_div_margin);
    st.require("div_below_estimate", below as f64, 0.0, below == 0);
    if s.is_ball() {
        // div Z and the Kato slack vanish identically on a ball; what is
        // left is discretization error.
        st.at_most("max_abs_relative_div", summary.max_abs_relative_div, tol.ball_pointwise);
        st.at_most("max_abs_relative_kato", summary.max_abs_relative_kato, tol.ball_pointwise);
    } else {
        st.metric("max_abs_relative_div", summary.max_abs_relative_div);
        st.metric("max_abs_relative_kato", summary.max_abs_relative_kato);
    }
    ctx.out.write("pointwise.csv", &summary.to_csv())?;
    ctx.out.write_json("pointwise.json", &st.metrics)?;
    Ok(st)
}

/// The identity on `solved`, plus the H term scale at both ends.
fn identity_on(s: &Scenario, solved: &Solved) -> Result<(IdentityCheck, f64), Failure> {
    let id = &s.identity;
    let p = id.params();
    let taus: Vec<f64> = uniform_s_grid(id.u0, id.u1, id.nodes).iter().rev().map(|u| 1.0 / u).collect();
    let ls = levels(solved, &taus)?;
    let check = identity_from_levels(&ls, &p)?;
    let ends = level_functionals(&ls[0], &p)?.h_cd_scale + level_functionals(&ls[ls.len() - 1], &p)?.h_cd_scale;
    Ok((check, ends))
}

fn identity_step(ctx: &Context) -> Result<StepOutcome, Failure> {
    let s = ctx.s;
    let (check, ends) = identity_on(s, &ctx.fine)?;
    // Both sides vanish on a ball, so there the gap is measured against the
    // size of the terms of H.
    let gap_of = |c: &IdentityCheck, ends: f64| if s.is_ball() { c.gap / ends } else { c.relative_gap };
    let gap = gap_of(&check, ends);
    let mut st = StepOutcome::new(Check::Identity.name());
    st.metric("lhs", check.lhs);
    st.metric("rhs", check.rhs);
    st.metric("quadrature_estimate", check.quadrature_estimate);
    st.metric("min_relative_inner", check.min_relative_inner());
    st.at_most("relative_gap", gap, s.tolerances.identity);
    let coarse_gap = match &ctx.coarse {
        Some(c) => match identity_on(s, c) {
            Ok((cc, e)) => Some(gap_of(&cc, e)),
            Err(e) => {
                st.notes.push(format!("coarse identity not available: {e}"));
                None
            }
        },
        None => None,
    };
    st.metric("coarse_relative_gap", coarse_gap);
    if let Some(cg) = coarse_gap {
        let shrinks = gap < cg;
        st.metric("gap_shrinks", shrinks);
        if !shrinks {
            st.passed = false;
            st.notes.push("identity gap does not shrink under refinement".into());
        }
    }
    let mut csv = String::from("s,inner,inner_scale\n");
    for i in 0..check.s_nodes.len() {
        csv.push_str(&format!(
            "{},{},{}\n",
            fmt_sig(check.s_nodes[i]),
            fmt_sig(check.inner[i]),
            fmt_sig(check.inner_scale[i])
        ));
    }
    ctx.out.write("identity.csv", &csv)?;
    ctx.out.write_json("identity.json", &json!({ "check": check, "coarse_relative_gap": coarse_gap }))?;
    Ok(st)
}

/// Row of a convergence study.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub refinement: u32,
    pub panels: usize,
    pub iterations: usize,
    pub capacity: f64,
    /// Against the closed form, or against the next finer capacity.
    pub capacity_error: Option<f64>,
    /// log2 of the ratio of consecutive capacity errors.
    pub capacity_order: Option<f64>,
    /// Largest change of a relative inequality slack against the previous
    /// refinement.
    pub slack_drift: Option<f64>,
    pub willmore_error: Option<f64>,
    pub identity_gap: Option<f64>,
}

/// Whether |v| decreases strictly; a stalled sequence does not converge.
pub fn errors_decrease(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1].abs() < w[0].abs())
}

/// Capacity, inequality slacks and (when the scenario lists it) the
/// identity gap over the configured refinements. Passes when the errors
/// decrease monotonically.
pub fn run_convergence(s: &Scenario, opts: &RunOptions) -> Result<StepOutcome, Failure> {
    s.validate()?;
    let out = OutDir::create(&opts.out_dir)?;
    let exact = capacity_oracle(&s.shape);
    let willmore = willmore_energy_quadrature(&s.shape, 2.0).ok();
    let sweep = InequalitySweep {
        params: s.sweep.params.clone(),
        p_exponents: s.sweep.p_exponents.clone(),
    };
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    let mut previous_slacks: Option<Vec<f64>> = None;
    for &k in &s.convergence.refinements {
        let solved = solve(&s.shape, k)?;
        let identity_gap = if s.checks.contains(&Check::Identity) {
            identity_on(s, &solved).ok().map(|(c, _)| c.relative_gap)
        } else {
            None
        };
        let slacks: Vec<f64> =
            check_all(&boundary_data(&solved)?, &sweep)?.iter().map(|r| r.relative_slack).collect();
        let slack_drift = previous_slacks
            .as_ref()
            .map(|p| p.iter().zip(&slacks).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        previous_slacks = Some(slacks);
        let energy = mesh_willmore_energy(&solved.mesh)?;
        rows.push(ConvergenceRow {
            refinement: k,
            panels: solved.mesh.triangle_count(),
            iterations: solved.sol.diagnostics().iterations,
            capacity: solved.sol.capacity(),
            capacity_error: exact.map(|e| (solved.sol.capacity() - e) / e),
            capacity_order: None,
            slack_drift,
            willmore_error: willmore.map(|w| (energy - w) / w),
            identity_gap,
        });
    }
    if exact.is_none() {
        let caps: Vec<f64> = rows.iter().map(|r| r.capacity).collect();
        for (i, r) in rows.iter_mut().enumerate() {
            r.capacity_error = caps.get(i + 1).map(|next| (r.capacity - next) / next);
        }
    }
    for i in 1..rows.len() {
        if let (Some(a), Some(b)) = (rows[i - 1].capacity_error, rows[i].capacity_error) {
            rows[i].capacity_order = Some((a.abs() / b.abs()).log2());
        }
    }
    let mut st = StepOutcome::new("convergence");
    let cap_errors: Vec<f64> = rows.iter().filter_map(|r| r.capacity_error).collect();
    if !errors_decrease(&cap_errors) {
        st.passed = false;
        st.notes.push("no convergence: capacity errors do not decrease".into());
    }
    let gaps: Vec<f64> = rows.iter().filter_map(|r| r.identity_gap).collect();
    if !errors_decrease(&gaps) {
        st.passed = false;
        st.notes.push("no convergence: identity gaps do not decrease".into());
    }
    let opt = |v: Option<f64>| v.map(fmt_sig).unwrap_or_else(|| "n/a".into());
    let mut csv = String::from(
        "refinement,panels,iterations,capacity,capacity_error,capacity_order,slack_drift,willmore_error,identity_gap\n",
    );
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.refinement,
            r.panels,
            r.iterations,
            fmt_sig(r.capacity),
            opt(r.capacity_error),
            opt(r.capacity_order),
            opt(r.slack_drift),
            opt(r.willmore_error),
            opt(r.identity_gap)
        ));
    }
    st.metric("rows", &rows);
    out.write("convergence.csv", &csv)?;
    out.write_json("convergence.json", &st)?;
    Ok(st)
}

/// Closed-form and quadrature references for the scenario's shape.
pub fn run_oracle_dump(s: &Scenario, opts: &RunOptions) -> Result<Value, Failure> {
    s.validate()?;
    let out = OutDir::create(&opts.out_dir)?;
    let mut exponents = s.sweep.p_exponents.clone();
    exponents.push(2.0);
    exponents.sort_by(f64::total_cmp);
    exponents.dedup();
    let willmore: Vec<Value> = exponents
        .iter()
        .map(|&p| json!({ "p": p, "energy": willmore_energy_quadrature(&s.shape, p).ok() }))
        .collect();
    let ball = match s.shape {
        ParametricShape::Sphere { radius, .. } => s
            .sweep
            .params
            .iter()
            .map(|p| ball_reference_values(radius, 3, p))
            .collect::<Result<Vec<_>, _>>()?,
        _ => Vec::new(),
    };
    let value = json!({
        "shape": s.shape,
        "unit_sphere_area": unit_sphere_area(3),
        "capacity": capacity_oracle(&s.shape),
        "willmore_energy": willmore,
        "ball_reference": ball,
    });
    out.write_json("oracles.json", &value)?;
    Ok(value)
}
