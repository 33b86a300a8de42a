use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::divergence::z_div_from_sample;
use super::params::ParamSet;
use crate::error::{Error, Result};
use crate::field::HarmonicField;
use crate::geometry::{ParametricShape, Vec3};
use crate::report::fmt_sig;

/// Seeded points outside a parametric surface: a uniformly random surface
/// point pushed along its exact normal by a distance log-uniform between
/// 2% and 200% of the surface diameter.
pub fn exterior_points(shape: &ParametricShape, count: usize, seed: u64) -> Vec<Vec3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diameter = 2.0 * shape.bounding_radius();
    (0..count)
        .map(|_| {
            let on_surface = match shape {
                ParametricShape::Torus { major, minor } => {
                    ParametricShape::torus_point(*major, *minor, rng.random_range(0.0..2.0 * PI), rng.random_range(0.0..2.0 * PI))
                }
                _ => {
                    let z: f64 = rng.random_range(-1.0..1.0);
                    let phi = rng.random_range(0.0..2.0 * PI);
                    let rho = (1.0 - z * z).sqrt();
                    shape.map_from_sphere(&Vec3::new(rho * phi.cos(), rho * phi.sin(), z))
                }
            };
            let normal = shape.geometry_at(&on_surface).normal;
            let distance = diameter * 10f64.powf(rng.random_range(0.02f64.log10()..2f64.log10()));
            on_surface + normal * distance
        })
        .collect()
}

/// One (point, parameter set) evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointwiseRow {
    pub point: usize,
    pub params: ParamSet,
    pub div: f64,
    /// |div Z − div Z on the coarse field|, zero without one.
    pub estimate: f64,
    /// Sum of the magnitudes of the terms of div Z.
    pub scale: f64,
    /// (|D²u|² − (n/(n−1))|D|Du||²) / |D²u|²
    pub relative_kato: f64,
    /// |trace D²u| / |D²u|
    pub relative_trace: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseSummary {
    pub points: Vec<Vec3>,
    pub rows: Vec<PointwiseRow>,
    pub max_relative_trace: f64,
    pub min_relative_kato: f64,
    pub max_abs_relative_kato: f64,
    /// min (div Z + 3·estimate) / scale; negative means a violation.
    pub min_div_margin: f64,
    pub max_abs_relative_div: f64,
}

/// Thresholds of the pointwise suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointwiseTolerances {
    pub trace: f64,
    pub kato: f64,
    /// Multiple of the refinement estimate div Z may fall below zero by.
    pub div_estimate_factor: f64,
}

impl Default for PointwiseTolerances {
    fn default() -> Self {
        PointwiseTolerances {
            trace: 1e-6,
            kato: 1e-8,
            div_estimate_factor: 3.0,
        }
    }
}

impl PointwiseSummary {
    pub fn passes(&self, tol: &PointwiseTolerances) -> bool {
        self.max_relative_trace <= tol.trace
            && self.min_relative_kato >= -tol.kato
            && self.rows.iter().all(|r| r.div >= -tol.div_estimate_factor * r.estimate - 1e-14 * r.scale)
    }

    /// Point index, coordinates, parameters and the per-row quantities.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("point,x,y,z,beta,c,d,div_z,div_estimate,div_scale,relative_kato,relative_trace\n");
        for r in &self.rows {
            let x = self.points[r.point];
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.point,
                fmt_sig(x.x),
                fmt_sig(x.y),
                fmt_sig(x.z),
                fmt_sig(r.params.beta),
                fmt_sig(r.params.c),
                fmt_sig(r.params.d),
                fmt_sig(r.div),
                fmt_sig(r.estimate),
                fmt_sig(r.scale),
                fmt_sig(r.relative_kato),
                fmt_sig(r.relative_trace)
            );
        }
        s
    }
}

/// Harmonicity, refined Kato and div Z ≥ 0 at every point for every
/// parameter set. The refinement estimate of div Z is its change against
/// `coarse`, the same problem one refinement lower.
pub fn pointwise_suite<F, G>(
    field: &F,
    coarse: Option<&G>,
    points: &[Vec3],
    params: &[ParamSet],
) -> Result<PointwiseSummary>
where
    F: HarmonicField + ?Sized,
    G: HarmonicField + ?Sized,
{
    if points.is_empty() {
        return Err(Error::InvalidArgument("no sample points".into()));
    }
    for p in params {
        p.validate()?;
        if p.n != 3 {
            return Err(Error::Unsupported("field evaluation is three-dimensional".into()));
        }
    }
    let per_point: Vec<Result<Vec<PointwiseRow>>> = points
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let s = field.sample(x)?;
            let c = coarse.map(|g| g.sample(x)).transpose()?;
            let hess_sq = s.hessian.norm_squared();
            let relative_trace = s.relative_trace();
            params
                .iter()
                .map(|p| {
                    let z = z_div_from_sample(&s, p)?;
                    let estimate = match &c {
                        Some(cs) => (z.div - z_div_from_sample(cs, p)?.div).abs(),
                        None => 0.0,
                    };
                    Ok(PointwiseRow {
                        point: i,
                        params: *p,
                        div: z.div,
                        estimate,
                        scale: z.scale,
                        relative_kato: if hess_sq > 0.0 { z.kato_slack / hess_sq } else { 0.0 },
                        relative_trace,
                    })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(points.len() * params.len());
    for r in per_point {
        rows.extend(r?);
    }
    let ratio = |a: f64, s: f64| if s > 0.0 { a / s } else { 0.0 };
    Ok(PointwiseSummary {
        points: points.to_vec(),
        max_relative_trace: rows.iter().map(|r| r.relative_trace).fold(0.0, f64::max),
        min_relative_kato: rows.iter().map(|r| r.relative_kato).fold(f64::INFINITY, f64::min),
        max_abs_relative_kato: rows.iter().map(|r| r.relative_kato.abs()).fold(0.0, f64::max),
        min_div_margin: rows
            .iter()
            .map(|r| ratio(r.div + 3.0 * r.estimate, r.scale))
            .fold(f64::INFINITY, f64::min),
        max_abs_relative_div: rows.iter().map(|r| ratio(r.div.abs(), r.scale)).fold(0.0, f64::max),
        rows,
    })
}

/// β ∈ {(n−2)/(n−1), 1, 2, 3} × (c, d) ∈ {(1, 0), (0, 1), (−1, 1)} in R³.
pub fn default_sweep() -> Vec<ParamSet> {
    let mut out = Vec::new();
    for beta in [ParamSet::beta_threshold(3), 1.0, 2.0, 3.0] {
        for (c, d) in [(1.0, 0.0), (0.0, 1.0), (-1.0, 1.0)] {
            out.push(ParamSet::new(beta, c, d));
        }
    }
    out
}
