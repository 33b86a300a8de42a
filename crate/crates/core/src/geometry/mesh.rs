use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::shape::{ParametricShape, Vec3};
use crate::error::{Error, Result};

/// Where a mesh came from; parametric meshes carry exact curvature data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum MeshSource {
    Parametric { shape: ParametricShape },
    Imported,
}

/// Closed, outward-oriented triangulated surface.
///
/// Immutable after construction. Triangles are oriented so that
/// `(b - a) × (c - a)` points away from the enclosed domain.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    areas: Vec<f64>,
    normals: Vec<Vec3>,
    mean_curvature: Vec<f64>,
    shape_operators: Option<Vec<Matrix3<f64>>>,
    source: MeshSource,
    refinement: u32,
}

impl SurfaceMesh {
    /// Builds a mesh with discrete normals and curvature from raw connectivity.
    pub fn from_triangles(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        check_topology(vertices.len(), &triangles)?;
        let areas = triangle_areas(&vertices, &triangles);
        let scale = bounding_extent(&vertices);
        for (i, a) in areas.iter().enumerate() {
            if !(*a > 1e-14 * scale * scale) {
                return Err(Error::DegenerateTriangle { index: i, area: *a });
            }
        }
        let normals = area_weighted_normals(&vertices, &triangles);
        let mut mesh = SurfaceMesh {
            vertices,
            triangles,
            areas,
            normals,
            mean_curvature: Vec::new(),
            shape_operators: None,
            source: MeshSource::Imported,
            refinement: 0,
        };
        mesh.mean_curvature = discrete_mean_curvature(&mesh)?;
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Flat triangle areas, the quadrature weights of [`SurfaceMesh::integrate`].
    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn mean_curvature(&self) -> &[f64] {
        &self.mean_curvature
    }

    pub fn shape_operators(&self) -> Option<&[Matrix3<f64>]> {
        self.shape_operators.as_deref()
    }

    pub fn source(&self) -> &MeshSource {
        &self.source
    }

    pub fn shape(&self) -> Option<&ParametricShape> {
        match &self.source {
            MeshSource::Parametric { shape } => Some(shape),
            MeshSource::Imported => None,
        }
    }

    pub fn refinement(&self) -> u32 {
        self.refinement
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        let edges = self.triangles.len() * 3 / 2;
        self.vertices.len() as i64 - edges as i64 + self.triangles.len() as i64
    }

    pub fn centroid(&self) -> Vec3 {
        let mut c = Vec3::zeros();
        let mut w = 0.0;
        for (t, a) in self.triangles.iter().zip(&self.areas) {
            c += triangle_centroid(&self.vertices, t) * *a;
            w += a;
        }
        c / w
    }

    pub fn triangle_centroid(&self, t: usize) -> Vec3 {
        triangle_centroid(&self.vertices, &self.triangles[t])
    }

    pub fn triangle_normal(&self, t: usize) -> Vec3 {
        let [a, b, c] = self.corners(t);
        (b - a).cross(&(c - a)).normalize()
    }

    pub fn corners(&self, t: usize) -> [Vec3; 3] {
        self.triangles[t].map(|i| self.vertices[i])
    }

    /// Longest edge of triangle `t`.
    pub fn triangle_diameter(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        (b - a).norm().max((c - b).norm()).max((a - c).norm())
    }

    /// Largest distance between two vertices (bounded from above by twice the
    /// largest distance from the centroid).
    pub fn diameter(&self) -> f64 {
        let c = self.centroid();
        let far = self
            .vertices
            .iter()
            .map(|v| (v - c).norm())
            .fold(0.0, f64::max);
        let mut best: f64 = 0.0;
        // Exact maximum over vertices farthest from the centroid.
        let mut idx: Vec<usize> = (0..self.vertices.len()).collect();
        idx.sort_by(|&i, &j| {
            (self.vertices[j] - c)
                .norm()
                .total_cmp(&(self.vertices[i] - c).norm())
        });
        let top = &idx[..idx.len().min(64)];
        for &i in top {
            for v in &self.vertices {
                best = best.max((self.vertices[i] - v).norm());
            }
        }
        best.min(2.0 * far)
    }

    /// Area-weighted quadrature of per-vertex samples: Σ_t A_t · mean(f at corners).
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        integrate_vertex_samples(&self.triangles, &self.areas, values)
    }

    /// Copy with every length multiplied by `lambda` (about the origin).
    pub fn scaled(&self, lambda: f64) -> SurfaceMesh {
        let source = match &self.source {
            MeshSource::Parametric { shape } => MeshSource::Parametric {
                shape: scale_shape(shape, lambda),
            },
            MeshSource::Imported => MeshSource::Imported,
        };
        SurfaceMesh {
            vertices: self.vertices.iter().map(|v| v * lambda).collect(),
            triangles: self.triangles.clone(),
            areas: self.areas.iter().map(|a| a * lambda * lambda).collect(),
            normals: self.normals.clone(),
            mean_curvature: self.mean_curvature.iter().map(|h| h / lambda).collect(),
            shape_operators: self
                .shape_operators
                .as_ref()
                .map(|s| s.iter().map(|m| m / lambda).collect()),
            source,
            refinement: self.refinement,
        }
    }

    /// Copy translated by `offset`. The parametric tag is dropped unless the
    /// shape is a sphere, whose center can absorb the translation.
    pub fn translated(&self, offset: &Vec3) -> SurfaceMesh {
        let source = match &self.source {
            MeshSource::Parametric {
                shape: ParametricShape::Sphere { radius, center },
            } => MeshSource::Parametric {
                shape: ParametricShape::Sphere {
                    radius: *radius,
                    center: (Vec3::from(*center) + offset).into(),
                },
            },
            _ => MeshSource::Imported,
        };
        SurfaceMesh {
            vertices: self.vertices.iter().map(|v| v + offset).collect(),
            source,
            ..self.clone()
        }
    }
}

fn scale_shape(shape: &ParametricShape, l: f64) -> ParametricShape {
    match shape {
        ParametricShape::Sphere { radius, center } => ParametricShape::Sphere {
            radius: radius * l,
            center: center.map(|c| c * l),
        },
        ParametricShape::Ellipsoid { a, b, c } => ParametricShape::Ellipsoid {
            a: a * l,
            b: b * l,
            c: c * l,
        },
        ParametricShape::PerturbedSphere { radius, modes } => ParametricShape::PerturbedSphere {
            radius: radius * l,
            modes: modes
                .iter()
                .map(|m| super::shape::HarmonicMode {
                    amplitude: m.amplitude * l,
                    ..*m
                })
                .collect(),
        },
        ParametricShape::Torus { major, minor } => ParametricShape::Torus {
            major: major * l,
            minor: minor * l,
        },
    }
}

pub(crate) fn integrate_vertex_samples(
    triangles: &[[usize; 3]],
    areas: &[f64],
    values: &[f64],
) -> Result<f64> {
    let n = triangles.iter().flatten().copied().max().map_or(0, |m| m + 1);
    if values.len() != n {
        return Err(Error::SampleCount {
            expected: n,
            got: values.len(),
        });
    }
    Ok(triangles
        .iter()
        .zip(areas)
        .map(|(t, a)| a * (values[t[0]] + values[t[1]] + values[t[2]]) / 3.0)
        .sum())
}

pub(crate) fn triangle_centroid(vertices: &[Vec3], t: &[usize; 3]) -> Vec3 {
    (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) / 3.0
}

pub(crate) fn triangle_areas(vertices: &[Vec3], triangles: &[[usize; 3]]) -> Vec<f64> {
    triangles
        .iter()
        .map(|t| {
            let (a, b, c) = (vertices[t[0]], vertices[t[1]], vertices[t[2]]);
            0.5 * (b - a).cross(&(c - a)).norm()
        })
        .collect()
}

pub(crate) fn area_weighted_normals(vertices: &[Vec3], triangles: &[[usize; 3]]) -> Vec<Vec3> {
    let mut normals = vec![Vec3::zeros(); vertices.len()];
    for t in triangles {
        let (a, b, c) = (vertices[t[0]], vertices[t[1]], vertices[t[2]]);
        let n = (b - a).cross(&(c - a));
        for &i in t {
            normals[i] += n;
        }
    }
    normals.iter().map(|n| n.normalize()).collect()
}

fn bounding_extent(vertices: &[Vec3]) -> f64 {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for v in vertices {
        lo = lo.inf(v);
        hi = hi.sup(v);
    }
    (hi - lo).norm()
}

/// Every edge must be used exactly twice, once in each direction.
fn check_topology(n_vertices: usize, triangles: &[[usize; 3]]) -> Result<()> {
    if triangles.is_empty() {
        return Err(Error::InvalidMesh("mesh has no triangles".into()));
    }
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for (ti, t) in triangles.iter().enumerate() {
        if t.iter().any(|&i| i >= n_vertices) {
            return Err(Error::InvalidMesh(format!("triangle {ti} references a missing vertex")));
        }
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return Err(Error::InvalidMesh(format!("triangle {ti} repeats a vertex")));
        }
        for k in 0..3 {
            let e = (t[k], t[(k + 1) % 3]);
            if directed.insert(e, ti).is_some() {
                return Err(Error::InvalidMesh(format!(
                    "edge {:?} used twice with the same orientation",
                    e
                )));
            }
        }
    }
    for &(a, b) in directed.keys() {
        if !directed.contains_key(&(b, a)) {
            return Err(Error::InvalidMesh(format!(
                "edge ({a}, {b}) has no oppositely oriented partner: surface is not closed"
            )));
        }
    }
    let mut used = vec![false; n_vertices];
    triangles.iter().flatten().for_each(|&i| used[i] = true);
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(Error::InvalidMesh(format!("vertex {i} is not used by any triangle")));
    }
    Ok(())
}

/// Discrete mean curvature from the cotangent Laplacian of the position,
/// with the convention that spheres are positive: H = -(Δx)·ν.
pub fn discrete_mean_curvature(mesh: &SurfaceMesh) -> Result<Vec<f64>> {
    let v = &mesh.vertices;
    let scale = bounding_extent(v);
    let mut lap = vec![Vec3::zeros(); v.len()];
    let mut mass = vec![0.0; v.len()];
    for (ti, t) in mesh.triangles.iter().enumerate() {
        let area = mesh.areas[ti];
        if !(area > 1e-14 * scale * scale) {
            return Err(Error::DegenerateTriangle { index: ti, area });
        }
        let mut cots = [0.0; 3];
        for k in 0..3 {
            let (i, j, o) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
            let (e1, e2) = (v[i] - v[o], v[j] - v[o]);
            cots[k] = e1.dot(&e2) / e1.cross(&e2).norm();
            lap[i] += (v[j] - v[i]) * cots[k];
            lap[j] += (v[i] - v[j]) * cots[k];
        }
        // Mixed Voronoi areas.
        let obtuse = (0..3).find(|&k| {
            let (a, b, c) = (v[t[k]], v[t[(k + 1) % 3]], v[t[(k + 2) % 3]]);
            (b - a).dot(&(c - a)) < 0.0
        });
        match obtuse {
            Some(k) => {
                mass[t[k]] += area / 2.0;
                mass[t[(k + 1) % 3]] += area / 4.0;
                mass[t[(k + 2) % 3]] += area / 4.0;
            }
            None => {
                for k in 0..3 {
                    let (i, j) = (t[k], t[(k + 1) % 3]);
                    let w = (v[j] - v[i]).norm_squared() * cots[k] / 8.0;
                    mass[i] += w;
                    mass[j] += w;
                }
            }
        }
    }
    Ok(lap
        .iter()
        .zip(&mass)
        .zip(&mesh.normals)
        .map(|((l, m), n)| -(l / (2.0 * m)).dot(n))
        .collect())
}

/// Samples a parametric shape with an icosahedral (genus zero) or structured
/// angular (torus) grid; vertex count grows four-fold per refinement step.
pub fn make_surface(shape: &ParametricShape, refinement: u32) -> Result<SurfaceMesh> {
    shape.validate()?;
    if refinement > 8 {
        return Err(Error::InvalidArgument(format!(
            "refinement {refinement} is beyond the supported range 0..=8"
        )));
    }
    let (vertices, triangles) = match shape {
        ParametricShape::Torus { major, minor } => torus_grid(*major, *minor, refinement),
        _ => {
            let (sphere, tris) = icosphere(refinement);
            let verts = sphere.iter().map(|s| shape.map_from_sphere(s)).collect();
            (verts, tris)
        }
    };
    check_topology(vertices.len(), &triangles)?;
    let areas = triangle_areas(&vertices, &triangles);
    let geometry: Vec<_> = vertices.iter().map(|x| shape.geometry_at(x)).collect();
    let mesh = SurfaceMesh {
        normals: geometry.iter().map(|g| g.normal).collect(),
        mean_curvature: geometry.iter().map(|g| g.mean_curvature).collect(),
        shape_operators: Some(geometry.iter().map(|g| g.shape_operator).collect()),
        vertices,
        triangles,
        areas,
        source: MeshSource::Parametric {
            shape: shape.clone(),
        },
        refinement,
    };
    Ok(mesh)
}

/// Unit icosphere by repeated midpoint subdivision with projection.
pub fn icosphere(refinement: u32) -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vec3> = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalize())
    .collect();
    let mut triangles: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for tri in triangles.iter_mut() {
        let (a, b, c) = (vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
        if (b - a).cross(&(c - a)).dot(&(a + b + c)) < 0.0 {
            tri.swap(1, 2);
        }
    }
    for _ in 0..refinement {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(triangles.len() * 4);
        let mut mid = |i: usize, j: usize, verts: &mut Vec<Vec3>| -> usize {
            let key = (i.min(j), i.max(j));
            *midpoints.entry(key).or_insert_with(|| {
                verts.push((verts[i] + verts[j]).normalize());
                verts.len() - 1
            })
        };
        for &[a, b, c] in &triangles {
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        triangles = next;
    }
    (vertices, triangles)
}

fn torus_grid(major: f64, minor: f64, refinement: u32) -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let nu = 16usize << refinement;
    let nv = 8usize << refinement;
    let mut vertices = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let u = 2.0 * PI * i as f64 / nu as f64;
            let v = 2.0 * PI * j as f64 / nv as f64;
            vertices.push(ParametricShape::torus_point(major, minor, u, v));
        }
    }
    let idx = |i: usize, j: usize| (i % nu) * nv + (j % nv);
    let mut triangles = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let (p00, p10, p11, p01) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            triangles.push([p00, p10, p11]);
            triangles.push([p00, p11, p01]);
        }
    }
    (vertices, triangles)
}
