use std::f64::consts::PI;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::operator::{gmres, SingleLayerOperator};
use super::panel::{
    band, closest_point, field_integral, field_integral_curved, panels_of, Feature, KernelSum, Panel, QuadraticDensity,
    FIELD_FAR_RATIO, FIELD_SPLIT_RATIO,
};
use crate::error::{Error, Result};
use crate::field::{FieldSample, HarmonicField};
use crate::geometry::{make_surface, MeshSource, SurfaceMesh, Vec3};

/// Iterative solver settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub restart: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            restart: 60,
            tolerance: 1e-11,
            max_iterations: 3000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub panels: usize,
    pub iterations: usize,
    /// ‖1 − Aφ‖ / ‖1‖ of the collocation system.
    pub relative_residual: f64,
    /// Extreme singular-value ratio of the first Krylov cycle.
    pub condition_estimate: f64,
    pub min_density: f64,
    pub max_density: f64,
}

/// Default exclusion shell, in units of the nearest panel's diameter, for
/// parametric surfaces (whose near field is integrated on the exact surface).
pub const DEFAULT_EXCLUSION: f64 = 0.05;
/// Default exclusion shell for imported meshes.
pub const FLAT_EXCLUSION: f64 = 1.0;

fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

/// Single-layer density of the conductor and the exterior field it induces.
#[derive(Debug, Clone)]
pub struct PotentialSolution {
    mesh: SurfaceMesh,
    panels: Vec<Panel>,
    density: Vec<f64>,
    capacity: f64,
    diagnostics: SolverDiagnostics,
    exclusion: f64,
    center: Vec3,
    bounding_radius: f64,
    diameter: f64,
    cx: Vec<f64>,
    cy: Vec<f64>,
    cz: Vec<f64>,
    charge: Vec<f64>,
    far_sq: Vec<f64>,
    area_normals: Vec<Vec3>,
    vertex_pseudo_normals: Vec<Vec3>,
    edge_pseudo_normals: Vec<[Vec3; 3]>,
    vertex_grad: Vec<f64>,
    vertex_grad_tangential: Vec<Vec3>,
}

/// Solves ∫ φ(y)/|x − y| dσ(y) = 1 at the panel centroids.
pub fn solve_exterior_potential(mesh: &SurfaceMesh) -> Result<PotentialSolution> {
    PotentialSolution::solve(mesh, &SolverOptions::default())
}

impl PotentialSolution {
    pub fn solve(mesh: &SurfaceMesh, options: &SolverOptions) -> Result<Self> {
        let panels = panels_of(mesh);
        let op = SingleLayerOperator::assemble(&panels);
        let rhs = vec![1.0; op.len()];
        let out = gmres(&op, &rhs, options.restart, options.tolerance, options.max_iterations);
        if !out.converged || !out.relative_residual.is_finite() {
            return Err(Error::Solver {
                reason: format!("no convergence after {} iterations", out.iterations),
                residual: out.relative_residual,
                condition: out.condition_estimate,
            });
        }
        let (mn, mx) = out
            .solution
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &p| (a.min(p), b.max(p)));
        if !(mn > 0.0) {
            return Err(Error::Solver {
                reason: format!("nonpositive density {mn:e} on a panel"),
                residual: out.relative_residual,
                condition: out.condition_estimate,
            });
        }
        let diagnostics = SolverDiagnostics {
            panels: panels.len(),
            iterations: out.iterations,
            relative_residual: out.relative_residual,
            condition_estimate: out.condition_estimate,
            min_density: mn,
            max_density: mx,
        };
        Ok(Self::from_parts(mesh.clone(), panels, out.solution, diagnostics))
    }

    fn from_parts(
        mesh: SurfaceMesh,
        panels: Vec<Panel>,
        density: Vec<f64>,
        diagnostics: SolverDiagnostics,
    ) -> Self {
        let capacity = panels.iter().zip(&density).map(|(p, d)| p.area * d).sum();
        let center = mesh.centroid();
        let bounding_radius = mesh
            .vertices()
            .iter()
            .map(|v| (v - center).norm())
            .fold(0.0, f64::max);
        let diameter = mesh.diameter();
        let (vertex_grad, vertex_grad_tangential) = vertex_gradient_data(&mesh, &density);
        let mesh_is_parametric = mesh.shape().is_some();
        let area_normals = (0..mesh.triangle_count())
            .map(|t| mesh.triangle_normal(t) * mesh.areas()[t])
            .collect();
        let (vertex_pseudo_normals, edge_pseudo_normals) = pseudo_normals(&mesh);
        PotentialSolution {
            area_normals,
            vertex_pseudo_normals,
            edge_pseudo_normals,
            cx: panels.iter().map(|p| p.centroid.x).collect(),
            cy: panels.iter().map(|p| p.centroid.y).collect(),
            cz: panels.iter().map(|p| p.centroid.z).collect(),
            charge: panels.iter().zip(&density).map(|(p, d)| p.area * d).collect(),
            far_sq: panels
                .iter()
                .map(|p| (FIELD_FAR_RATIO * p.diameter).powi(2))
                .collect(),
            mesh,
            panels,
            density,
            capacity,
            diagnostics,
            exclusion: if mesh_is_parametric { DEFAULT_EXCLUSION } else { FLAT_EXCLUSION },
            center,
            bounding_radius,
            diameter,
            vertex_grad,
            vertex_grad_tangential,
        }
    }

    /// Copy with a different exclusion shell (in nearest-panel diameters).
    pub fn with_exclusion(mut self, factor: f64) -> Self {
        self.exclusion = factor.max(0.0);
        self
    }

    pub fn exclusion(&self) -> f64 {
        self.exclusion
    }

    pub fn mesh(&self) -> &SurfaceMesh {
        &self.mesh
    }

    /// Charge per unit area on each panel.
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn diagnostics(&self) -> &SolverDiagnostics {
        &self.diagnostics
    }

    /// |Du| = 4πφ on each panel.
    pub fn boundary_gradient_norm(&self) -> Vec<f64> {
        self.density.iter().map(|d| 4.0 * PI * d).collect()
    }

    /// Area-weighted vertex averages of the panel values of |Du|.
    pub fn vertex_gradient_norm(&self) -> &[f64] {
        &self.vertex_grad
    }

    /// (total charge, (1/4π)∫|Du| dσ with vertex samples).
    pub fn capacity_pair(&self) -> (f64, f64) {
        let flux = self
            .mesh
            .integrate(&self.vertex_grad)
            .expect("vertex data matches the mesh");
        (self.capacity, flux / (4.0 * PI))
    }

    /// Distance from x to the surface, diameter of the nearest panel, and
    /// whether x lies on the inner side (by the angle-weighted pseudo-normal
    /// of the closest feature).
    fn nearest(&self, x: &Vec3, near: &[usize]) -> (f64, f64, bool) {
        let mut best = (f64::INFINITY, 0, Vec3::zeros(), Feature::Face);
        for &j in near {
            let (y, feature) = closest_point(x, &self.panels[j]);
            let d = (x - y).norm();
            if d < best.0 {
                best = (d, j, y, feature);
            }
        }
        let (d, j, y, feature) = best;
        let normal = match feature {
            Feature::Face => self.area_normals[j],
            Feature::Edge(k) => self.edge_pseudo_normals[j][k],
            Feature::Vertex(k) => self.vertex_pseudo_normals[self.mesh.triangles()[j][k]],
        };
        (d, self.panels[j].diameter, (x - y).dot(&normal) < 0.0)
    }

    /// u, Du and (optionally) D²u at an exterior point outside the exclusion shell.
    ///
    /// Panels far from x enter as point charges. Panels close enough to be
    /// subdivided are integrated either flat with their constant density or,
    /// for parametric surfaces, on curved quadratic patches through the
    /// exact surface with a quadratic density built from the vertex
    /// averages; the second is used
    /// within half a panel diameter of the surface, the first beyond one
    /// and a half, with a smooth blend in between.
    pub fn eval(&self, x: &Vec3, with_hessian: bool) -> Result<FieldSample> {
        let check_inside = (x - self.center).norm() <= self.bounding_radius * 1.000_001;
        let mut acc = KernelSum::default();
        let mut near = Vec::new();
        let mut far_angle = 0.0;
        for j in 0..self.charge.len() {
            let d = Vec3::new(x.x - self.cx[j], x.y - self.cy[j], x.z - self.cz[j]);
            let r2 = d.norm_squared();
            if r2 >= self.far_sq[j] {
                acc.add(&d, self.charge[j], with_hessian);
                if check_inside {
                    far_angle -= self.area_normals[j].dot(&d) / (r2 * r2.sqrt());
                }
            } else {
                near.push(j);
            }
        }
        if near.is_empty() {
            // Far from every panel: the dipole sum approximates the solid angle.
            if check_inside && far_angle > 2.0 * PI {
                return Err(Error::InsideDomain { point: (*x).into() });
            }
            return Ok(self.finish(x, &acc, with_hessian));
        }
        let (distance, diameter, inside) = self.nearest(x, &near);
        if inside {
            return Err(Error::InsideDomain { point: (*x).into() });
        }
        let clearance = self.exclusion * diameter;
        if distance <= clearance {
            return Err(Error::NearSurface {
                point: (*x).into(),
                distance,
                clearance,
            });
        }
        let shape = self.mesh.shape();
        let curved = match shape {
            Some(_) => smoothstep(1.5 - distance / diameter),
            None => 0.0,
        };
        for &j in &near {
            let panel = &self.panels[j];
            let rho = (x - panel.centroid).norm() / panel.diameter;
            // Exact-surface share of this panel: full up to two diameters,
            // none from three on.
            let c = curved * (1.0 - band(rho, FIELD_SPLIT_RATIO, 0.5));
            if c < 1.0 {
                let mut local = KernelSum::default();
                field_integral(x, panel, with_hessian, &mut local);
                acc.scaled_add(&local, (1.0 - c) * self.density[j]);
            }
            if c > 0.0 {
                field_integral_curved(x, panel, self.panel_density(j, c), shape, with_hessian, &mut acc);
            }
        }
        Ok(self.finish(x, &acc, with_hessian))
    }

    /// Quadratic density on panel j, scaled by `share`: vertex averages at
    /// the corners and Hermite values from the vertex gradients at the edge
    /// midpoints.
    fn panel_density(&self, j: usize, share: f64) -> QuadraticDensity {
        let tri = self.mesh.triangles()[j];
        let verts = self.mesh.vertices();
        let value = |v: usize| self.vertex_grad[v];
        let mid = |i: usize, k: usize| {
            let e = verts[k] - verts[i];
            0.5 * (value(i) + value(k)) + (self.vertex_grad_tangential[i] - self.vertex_grad_tangential[k]).dot(&e) / 8.0
        };
        let d = [
            value(tri[0]),
            value(tri[1]),
            value(tri[2]),
            mid(tri[0], tri[1]),
            mid(tri[1], tri[2]),
            mid(tri[2], tri[0]),
        ];
        d.map(|v| share * v / (4.0 * PI))
    }

    fn finish(&self, x: &Vec3, acc: &KernelSum, with_hessian: bool) -> FieldSample {
        FieldSample {
            point: *x,
            u: acc.value,
            grad: acc.grad,
            hessian: if with_hessian { acc.hessian() } else { Matrix3::zeros() },
        }
    }

    /// Field data at a boundary vertex, rebuilt from the boundary traces:
    /// Du = −|Du|ν and D²u = |Du|(Hννᵀ − S) − (ν tᵀ + t νᵀ), where S is the
    /// shape operator and t the tangential gradient of |Du|.
    pub fn boundary_sample(&self, vertex: usize) -> Result<FieldSample> {
        let shapes = self.mesh.shape_operators().ok_or_else(|| {
            Error::Unsupported("boundary Hessians need a mesh with exact shape operators".into())
        })?;
        let nu = self.mesh.normals()[vertex];
        let g = self.vertex_grad[vertex];
        let h = self.mesh.mean_curvature()[vertex];
        let t = self.vertex_grad_tangential[vertex];
        let hess = (nu * nu.transpose() * h - shapes[vertex]) * g - (nu * t.transpose() + t * nu.transpose());
        Ok(FieldSample {
            point: self.mesh.vertices()[vertex],
            u: 1.0,
            grad: -nu * g,
            hessian: hess,
        })
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn bounding_radius(&self) -> f64 {
        self.bounding_radius
    }

    pub fn to_json(&self) -> Result<String> {
        let dump = SolutionDump {
            format: DUMP_FORMAT.into(),
            source: self.mesh.source().clone(),
            refinement: self.mesh.refinement(),
            vertices: self.mesh.vertices().iter().map(|v| [v.x, v.y, v.z]).collect(),
            triangles: self.mesh.triangles().to_vec(),
            density: self.density.clone(),
            capacity: self.capacity,
            exclusion: self.exclusion,
            diagnostics: self.diagnostics.clone(),
        };
        Ok(serde_json::to_string_pretty(&dump)?)
    }

    /// Restores a dumped solution without re-solving.
    pub fn from_json(text: &str) -> Result<Self> {
        let dump: SolutionDump = serde_json::from_str(text)?;
        if dump.format != DUMP_FORMAT {
            return Err(Error::Parse(format!("unknown solution format {:?}", dump.format)));
        }
        let vertices: Vec<Vec3> = dump.vertices.iter().map(|v| Vec3::new(v[0], v[1], v[2])).collect();
        let mesh = match &dump.source {
            MeshSource::Parametric { shape } => {
                let mesh = make_surface(shape, dump.refinement)?;
                let same = mesh.triangles() == dump.triangles.as_slice()
                    && mesh
                        .vertices()
                        .iter()
                        .zip(&vertices)
                        .all(|(a, b)| (a - b).norm() <= 1e-12 * (1.0 + a.norm()));
                if !same || mesh.vertex_count() != vertices.len() {
                    return Err(Error::Parse("dumped mesh does not match its parametric source".into()));
                }
                mesh
            }
            MeshSource::Imported => SurfaceMesh::from_triangles(vertices, dump.triangles.clone())?,
        };
        if dump.density.len() != mesh.triangle_count() {
            return Err(Error::SampleCount {
                expected: mesh.triangle_count(),
                got: dump.density.len(),
            });
        }
        let panels = panels_of(&mesh);
        Ok(Self::from_parts(mesh, panels, dump.density, dump.diagnostics).with_exclusion(dump.exclusion))
    }
}

const DUMP_FORMAT: &str = "willmore-potential-1";

#[derive(Debug, Serialize, Deserialize)]
struct SolutionDump {
    format: String,
    #[serde(flatten)]
    source: MeshSource,
    refinement: u32,
    vertices: Vec<[f64; 3]>,
    triangles: Vec<[usize; 3]>,
    density: Vec<f64>,
    capacity: f64,
    exclusion: f64,
    diagnostics: SolverDiagnostics,
}

/// Angle-weighted vertex normals and, per triangle, the normal sums across
/// each edge.
fn pseudo_normals(mesh: &SurfaceMesh) -> (Vec<Vec3>, Vec<[Vec3; 3]>) {
    let tri = mesh.triangles();
    let mut vertex = vec![Vec3::zeros(); mesh.vertex_count()];
    let mut edges: std::collections::HashMap<(usize, usize), Vec<usize>> = std::collections::HashMap::new();
    for (t, ids) in tri.iter().enumerate() {
        let n = mesh.triangle_normal(t);
        let c = mesh.corners(t);
        for k in 0..3 {
            let (e1, e2) = (c[(k + 1) % 3] - c[k], c[(k + 2) % 3] - c[k]);
            vertex[ids[k]] += n * e1.angle(&e2);
            let (i, j) = (ids[k], ids[(k + 1) % 3]);
            edges.entry((i.min(j), i.max(j))).or_default().push(t);
        }
    }
    let edge = (0..tri.len())
        .map(|t| {
            let ids = tri[t];
            std::array::from_fn(|k| {
                let (i, j) = (ids[k], ids[(k + 1) % 3]);
                edges[&(i.min(j), i.max(j))]
                    .iter()
                    .map(|&s| mesh.triangle_normal(s))
                    .sum::<Vec3>()
            })
        })
        .collect();
    (vertex, edge)
}

/// Vertex averages of 4πφ and the tangential gradient of their linear
/// interpolant, averaged over adjacent triangles.
fn vertex_gradient_data(mesh: &SurfaceMesh, density: &[f64]) -> (Vec<f64>, Vec<Vec3>) {
    let nv = mesh.vertex_count();
    let mut sum = vec![0.0; nv];
    let mut weight = vec![0.0; nv];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let a = mesh.areas()[t];
        for &i in tri {
            sum[i] += a * 4.0 * PI * density[t];
            weight[i] += a;
        }
    }
    let values: Vec<f64> = sum.iter().zip(&weight).map(|(s, w)| s / w).collect();
    let mut grads = vec![Vec3::zeros(); nv];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let [p0, p1, p2] = mesh.corners(t);
        let n = (p1 - p0).cross(&(p2 - p0));
        let n2 = n.norm_squared();
        // Gradient of the linear interpolant on the triangle.
        let g = (n.cross(&(p2 - p1)) * values[tri[0]]
            + n.cross(&(p0 - p2)) * values[tri[1]]
            + n.cross(&(p1 - p0)) * values[tri[2]])
            / n2;
        let a = mesh.areas()[t];
        for &i in tri {
            grads[i] += g * a;
        }
    }
    let tangential = grads
        .iter()
        .zip(&weight)
        .zip(mesh.normals())
        .map(|((g, w), nu)| {
            let g = g / *w;
            g - nu * nu.dot(&g)
        })
        .collect();
    (values, tangential)
}

impl HarmonicField for PotentialSolution {
    fn sample(&self, x: &Vec3) -> Result<FieldSample> {
        self.eval(x, true)
    }

    fn sample_gradient(&self, x: &Vec3) -> Result<FieldSample> {
        self.eval(x, false)
    }

    fn boundary_sample(&self, mesh: &SurfaceMesh, vertex: usize) -> Result<FieldSample> {
        if mesh.vertex_count() != self.mesh.vertex_count() || mesh.triangles() != self.mesh.triangles() {
            return Err(Error::InvalidArgument("mesh is not the solution's boundary mesh".into()));
        }
        PotentialSolution::boundary_sample(self, vertex)
    }

    fn capacity(&self) -> f64 {
        self.capacity
    }

    fn diameter(&self) -> f64 {
        self.diameter
    }
}

/// The field at an exterior point (value, gradient, Hessian).
pub fn eval_field(sol: &PotentialSolution, x: &Vec3) -> Result<FieldSample> {
    sol.eval(x, true)
}

/// Per-panel |Du| on the boundary.
pub fn boundary_gradient_norm(sol: &PotentialSolution) -> Vec<f64> {
    sol.boundary_gradient_norm()
}

/// (capacity from the total charge, capacity from the boundary flux).
pub fn capacity(sol: &PotentialSolution) -> (f64, f64) {
    sol.capacity_pair()
}
