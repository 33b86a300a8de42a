//! Level sets {u = u₀} realized by carrying a boundary mesh along the
//! gradient flow of u.

mod transport;

use std::io::Write;

use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{umbilicity, FieldSample, HarmonicField};
use crate::geometry::{area_weighted_normals, triangle_areas, write_off, SurfaceMesh, Vec3};

pub use transport::TransportOptions;
use transport::Mover;

/// A transported copy of the boundary mesh lying on one level set of u.
#[derive(Debug, Clone)]
pub struct LevelSetMesh {
    level: f64,
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    samples: Vec<FieldSample>,
    areas: Vec<f64>,
    weights: Vec<f64>,
    max_residual: f64,
}

/// Geometric data of a level set at one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelQuantities {
    pub u: f64,
    pub grad_norm: f64,
    pub mean_curvature: f64,
    /// Tangential second fundamental form −P D²u P / |Du|.
    pub second_fundamental_form: Matrix3<f64>,
    pub normal: Vec3,
}

/// Where a transport starts.
#[derive(Debug, Clone, Copy)]
pub enum LevelStart<'a> {
    Surface(&'a SurfaceMesh),
    Level(&'a LevelSetMesh),
}

impl LevelSetMesh {
    fn assemble(level: f64, triangles: Vec<[usize; 3]>, samples: Vec<FieldSample>) -> Self {
        let vertices: Vec<Vec3> = samples.iter().map(|s| s.point).collect();
        let areas = triangle_areas(&vertices, &triangles);
        let mut weights = vec![0.0; vertices.len()];
        for (t, a) in triangles.iter().zip(&areas) {
            for &i in t {
                weights[i] += a / 3.0;
            }
        }
        let max_residual = samples.iter().map(|s| (s.u - level).abs()).fold(0.0, f64::max);
        LevelSetMesh {
            level,
            vertices,
            triangles,
            samples,
            areas,
            weights,
            max_residual,
        }
    }

    /// The level u = 1 on the mesh itself, with field data from the
    /// boundary traces of `field`.
    pub fn boundary<F: HarmonicField + ?Sized>(field: &F, mesh: &SurfaceMesh) -> Result<Self> {
        let samples = (0..mesh.vertex_count())
            .into_par_iter()
            .map(|i| field.boundary_sample(mesh, i))
            .collect::<Vec<_>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(1.0, mesh.triangles().to_vec(), samples))
    }

    /// Target value u₀.
    pub fn level(&self) -> f64 {
        self.level
    }

    /// τ = 1/u₀.
    pub fn tau(&self) -> f64 {
        1.0 / self.level
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn samples(&self) -> &[FieldSample] {
        &self.samples
    }

    pub fn triangle_areas(&self) -> &[f64] {
        &self.areas
    }

    /// Per-vertex quadrature weights (a third of the adjacent triangle areas).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// max |u(vertex) − u₀|.
    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }

    /// ∫ f dσ for per-vertex samples of f.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.vertices.len() {
            return Err(Error::SampleCount {
                expected: self.vertices.len(),
                got: values.len(),
            });
        }
        Ok(self.weights.iter().zip(values).map(|(w, f)| w * f).sum())
    }

    /// ∫ f dσ with f evaluated from each vertex sample.
    pub fn integrate_with<G: Fn(&FieldSample) -> f64>(&self, f: G) -> f64 {
        self.weights.iter().zip(&self.samples).map(|(w, s)| w * f(s)).sum()
    }

    pub fn quantities(&self) -> Vec<LevelQuantities> {
        self.samples
            .iter()
            .map(|s| LevelQuantities {
                u: s.u,
                grad_norm: s.grad_norm(),
                mean_curvature: s.level_mean_curvature(),
                second_fundamental_form: s.level_second_fundamental_form(),
                normal: s.level_normal(),
            })
            .collect()
    }

    /// Spread of the principal curvatures at each vertex.
    pub fn umbilicity(&self) -> Vec<f64> {
        self.samples
            .iter()
            .map(|s| umbilicity(&s.level_second_fundamental_form(), &s.level_normal()))
            .collect()
    }

    /// OFF text with per-vertex columns u, grad_norm, H and umbilicity.
    pub fn write_off<W: Write>(&self, out: &mut W) -> Result<()> {
        let q = self.quantities();
        let u: Vec<f64> = q.iter().map(|q| q.u).collect();
        let g: Vec<f64> = q.iter().map(|q| q.grad_norm).collect();
        let h: Vec<f64> = q.iter().map(|q| q.mean_curvature).collect();
        let um = self.umbilicity();
        write_off(
            out,
            &self.vertices,
            &self.triangles,
            &[("u", &u), ("grad_norm", &g), ("H", &h), ("umbilicity", &um)],
        )
    }

    /// Largest angle (degrees) between ν = −Du/|Du| and the area-weighted
    /// vertex normals of the transported triangles.
    pub fn max_normal_deviation(&self) -> (usize, f64) {
        let normals = area_weighted_normals(&self.vertices, &self.triangles);
        normals
            .iter()
            .zip(&self.samples)
            .map(|(n, s)| n.dot(&s.level_normal()).clamp(-1.0, 1.0).acos().to_degrees())
            .enumerate()
            .fold((0, 0.0), |best, (i, a)| if a > best.1 { (i, a) } else { best })
    }
}

/// Per-vertex (u, |Du|, H, h) of a level set.
pub fn level_quantities(ls: &LevelSetMesh) -> Vec<LevelQuantities> {
    ls.quantities()
}

/// Carries every vertex of `start` along dx/ds = −Du/|Du|² to u = `target`.
pub fn transport_to_level<F: HarmonicField + ?Sized>(
    field: &F,
    start: LevelStart<'_>,
    target: f64,
) -> Result<LevelSetMesh> {
    transport_with(field, start, target, &TransportOptions::default())
}

pub fn transport_with<F: HarmonicField + ?Sized>(
    field: &F,
    start: LevelStart<'_>,
    target: f64,
    options: &TransportOptions,
) -> Result<LevelSetMesh> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidArgument(format!("target level {target} outside (0, 1)")));
    }
    let (points, triangles, center, scale) = match start {
        LevelStart::Surface(mesh) => (mesh.vertices().to_vec(), mesh.triangles(), mesh.centroid(), mesh.diameter()),
        LevelStart::Level(ls) => {
            let c = ls.vertices.iter().sum::<Vec3>() / ls.vertices.len() as f64;
            (ls.vertices.clone(), ls.triangles(), c, field.diameter())
        }
    };
    let mover = Mover {
        field,
        options: *options,
        center,
        scale,
        threshold: field.critical_threshold(),
    };
    let results: Vec<Result<FieldSample>> = (0..points.len())
        .into_par_iter()
        .map(|i| match start {
            LevelStart::Surface(mesh) => {
                let (x, u) = lift_off(field, mesh, i)?;
                mover.carry(i, x, u, target)
            }
            LevelStart::Level(ls) => mover.carry(i, points[i], ls.samples[i].u, target),
        })
        .collect();
    let samples = results.into_iter().collect::<Result<Vec<_>>>()?;
    let ls = LevelSetMesh::assemble(target, triangles.to_vec(), samples);
    let (vertex, degrees) = ls.max_normal_deviation();
    if degrees > options.max_normal_angle_degrees {
        return Err(Error::OrientationMismatch { vertex, degrees });
    }
    Ok(ls)
}

/// First exterior point along the vertex normal where the field can be
/// evaluated, with its value of u.
fn lift_off<F: HarmonicField + ?Sized>(field: &F, mesh: &SurfaceMesh, vertex: usize) -> Result<(Vec3, f64)> {
    let v = mesh.vertices()[vertex];
    let nu = mesh.normals()[vertex];
    let size = mesh
        .triangles()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.contains(&vertex))
        .map(|(k, _)| mesh.triangle_diameter(k))
        .fold(0.0, f64::max);
    let mut delta = 0.15 * size;
    for _ in 0..8 {
        let x = v + nu * delta;
        match field.sample(&x) {
            Ok(s) if s.u < 1.0 => return Ok((x, s.u)),
            Ok(_) | Err(Error::NearSurface { .. }) | Err(Error::InsideDomain { .. }) => delta *= 2.0,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InvalidMesh(format!("cannot leave the surface at vertex {vertex}")))
}

/// Level sets for increasing τ ≥ 1, each carried from the previous one;
/// τ = 1 is the boundary itself.
pub fn level_family<F: HarmonicField + ?Sized>(
    field: &F,
    mesh: &SurfaceMesh,
    taus: &[f64],
) -> Result<Vec<LevelSetMesh>> {
    check_grid(taus)?;
    let mut out: Vec<LevelSetMesh> = Vec::with_capacity(taus.len());
    for &tau in taus {
        let ls = if tau == 1.0 {
            LevelSetMesh::boundary(field, mesh)
        } else {
            let start = match out.last() {
                Some(prev) if prev.level < 1.0 => LevelStart::Level(prev),
                _ => LevelStart::Surface(mesh),
            };
            transport_to_level(field, start, 1.0 / tau)
        };
        out.push(ls.map_err(|e| Error::Transport {
            tau,
            source: Box::new(e),
        })?);
    }
    Ok(out)
}

pub(crate) fn check_grid(taus: &[f64]) -> Result<()> {
    if taus.is_empty() {
        return Err(Error::InvalidArgument("empty τ grid".into()));
    }
    if taus.iter().any(|t| !(t.is_finite() && *t >= 1.0)) {
        return Err(Error::InvalidArgument("τ values must be finite and ≥ 1".into()));
    }
    if taus.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("τ grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `count` geometrically spaced values from `first` to `last` inclusive.
pub fn geometric_grid(first: f64, last: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![first];
    }
    let ratio = (last / first).ln() / (count - 1) as f64;
    (0..count)
        .map(|i| match i {
            0 => first,
            i if i == count - 1 => last,
            i => first * (ratio * i as f64).exp(),
        })
        .collect()
}
