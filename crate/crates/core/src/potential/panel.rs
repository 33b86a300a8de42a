//! Integrals of the kernel 1/|x − y| and its x-derivatives over flat
//! triangles.

use nalgebra::Matrix3;

use crate::geometry::{ParametricShape, SurfaceMesh, Vec3};
use crate::quadrature::{TriangleRule, CENTROID, DEGREE5};

const DEGREE2: TriangleRule = TriangleRule {
    points: &[
        [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
        [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
        [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
    ],
    weights: &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
};

/// Geometry of one boundary panel.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel {
    pub corners: [Vec3; 3],
    pub centroid: Vec3,
    pub diameter: f64,
    pub area: f64,
}

impl Panel {
    pub fn new(corners: [Vec3; 3]) -> Self {
        let [a, b, c] = corners;
        Panel {
            corners,
            centroid: (a + b + c) / 3.0,
            diameter: (b - a).norm().max((c - b).norm()).max((a - c).norm()),
            area: 0.5 * (b - a).cross(&(c - a)).norm(),
        }
    }

    fn children(&self) -> [Panel; 4] {
        let [a, b, c] = self.corners;
        let (ab, bc, ca) = ((a + b) * 0.5, (b + c) * 0.5, (c + a) * 0.5);
        [
            Panel::new([a, ab, ca]),
            Panel::new([ab, b, bc]),
            Panel::new([ca, bc, c]),
            Panel::new([ab, bc, ca]),
        ]
    }

    fn rule_points(&self, rule: &TriangleRule) -> impl Iterator<Item = (Vec3, f64)> + '_ {
        let [a, b, c] = self.corners;
        let area = self.area;
        rule.points
            .iter()
            .zip(rule.weights)
            .map(move |(l, w)| (a * l[0] + b * l[1] + c * l[2], w * area))
    }
}

pub(crate) fn panels_of(mesh: &SurfaceMesh) -> Vec<Panel> {
    (0..mesh.triangle_count()).map(|t| Panel::new(mesh.corners(t))).collect()
}

/// ∫_T dσ(y)/|x − y| for x in the plane of T and strictly inside it.
///
/// Splits T at x into three triangles with apex x; each contributes
/// h·(asinh(t₂/h) − asinh(t₁/h)) with h the distance from x to the edge line
/// and t₁, t₂ the edge endpoints measured from the foot of the perpendicular.
pub(crate) fn self_potential(x: &Vec3, p: &Panel) -> f64 {
    let mut total = 0.0;
    for k in 0..3 {
        let (p1, p2) = (p.corners[k], p.corners[(k + 1) % 3]);
        let e = (p2 - p1).normalize();
        let t1 = (p1 - x).dot(&e);
        let t2 = (p2 - x).dot(&e);
        let h = ((p1 - x) - e * t1).norm();
        total += h * ((t2 / h).asinh() - (t1 / h).asinh());
    }
    total
}

/// Nearness ratio |x − centroid| / diameter below which panels are split.
const SPLIT_RATIO: f64 = 1.5;
const MAX_DEPTH: u32 = 12;

/// ∫_T dσ(y)/|x − y| for x off the panel, by rules chosen on the nearness
/// ratio and recursive 4-way splitting close by.
pub(crate) fn potential_integral(x: &Vec3, p: &Panel) -> f64 {
    potential_rec(x, p, 0)
}

fn potential_rec(x: &Vec3, p: &Panel, depth: u32) -> f64 {
    let rho = (x - p.centroid).norm() / p.diameter;
    if rho < SPLIT_RATIO && depth < MAX_DEPTH {
        return p.children().iter().map(|c| potential_rec(x, c, depth + 1)).sum();
    }
    let rule = if rho >= 8.0 {
        &CENTROID
    } else if rho >= 4.0 {
        &DEGREE2
    } else {
        &DEGREE5
    };
    p.rule_points(rule).map(|(y, w)| w / (x - y).norm()).sum()
}

/// Value, gradient and Hessian (in x) of a weighted kernel sum.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KernelSum {
    pub value: f64,
    pub grad: Vec3,
    pub hess: [f64; 6],
}

impl Default for KernelSum {
    fn default() -> Self {
        KernelSum {
            value: 0.0,
            grad: Vec3::zeros(),
            hess: [0.0; 6],
        }
    }
}

impl KernelSum {
    /// Adds w/|x − y| and its derivatives; `d` = x − y.
    #[inline]
    pub fn add(&mut self, d: &Vec3, w: f64, with_hessian: bool) {
        let r2 = d.norm_squared();
        let ir = 1.0 / r2.sqrt();
        let ir2 = ir * ir;
        let wir3 = w * ir * ir2;
        self.value += w * ir;
        self.grad -= d * wir3;
        if with_hessian {
            let s = 3.0 * wir3 * ir2;
            self.hess[0] += s * d.x * d.x - wir3;
            self.hess[1] += s * d.y * d.y - wir3;
            self.hess[2] += s * d.z * d.z - wir3;
            self.hess[3] += s * d.x * d.y;
            self.hess[4] += s * d.x * d.z;
            self.hess[5] += s * d.y * d.z;
        }
    }

    pub fn scaled_add(&mut self, other: &KernelSum, s: f64) {
        self.value += s * other.value;
        self.grad += other.grad * s;
        for k in 0..6 {
            self.hess[k] += s * other.hess[k];
        }
    }

    pub fn hessian(&self) -> Matrix3<f64> {
        let h = &self.hess;
        Matrix3::new(h[0], h[3], h[4], h[3], h[1], h[5], h[4], h[5], h[2])
    }
}

/// Nearness ratio below which flat field integrals are split.
pub(crate) const FIELD_SPLIT_RATIO: f64 = 2.5;
/// Split ratio inside curved patches.
const CURVED_SPLIT_RATIO: f64 = 1.5;
/// Nearness ratio from which the one-point rule alone is used for fields.
pub(crate) const FIELD_FAR_RATIO: f64 = 6.0;

/// 0 below the band [at − half, at + half], 1 above it, smooth in between.
pub(crate) fn band(rho: f64, at: f64, half: f64) -> f64 {
    let t = ((rho - at + half) / (2.0 * half)).clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

/// Rules for an unsplit panel at nearness ratio rho, with weights summing
/// to one. Neighbouring rules are blended across each threshold so that
/// field values stay continuous in x.
fn field_rules(rho: f64) -> [(&'static TriangleRule, f64); 2] {
    if rho >= FIELD_FAR_RATIO - 2.0 {
        let w = band(rho, FIELD_FAR_RATIO - 1.0, 1.0);
        [(&CENTROID, w), (&DEGREE2, 1.0 - w)]
    } else if rho >= 2.5 {
        let w = band(rho, 3.0, 0.5);
        [(&DEGREE2, w), (&DEGREE5, 1.0 - w)]
    } else {
        [(&DEGREE5, 1.0), (&DEGREE5, 0.0)]
    }
}

/// Kernel integrals over one flat panel of unit density for a point off
/// the surface.
pub(crate) fn field_integral(x: &Vec3, p: &Panel, with_hessian: bool, acc: &mut KernelSum) {
    patch_rec(x, p, [1.0; 6], None, FIELD_SPLIT_RATIO, with_hessian, 0, 1.0, acc)
}

/// Density values of a quadratic on a triangle: corners a, b, c then edge
/// midpoints ab, bc, ca.
pub(crate) type QuadraticDensity = [f64; 6];

/// The quadratic at barycentric coordinates l.
fn quadratic_at(d: &QuadraticDensity, l: [f64; 3]) -> f64 {
    d[0] * l[0] * (2.0 * l[0] - 1.0)
        + d[1] * l[1] * (2.0 * l[1] - 1.0)
        + d[2] * l[2] * (2.0 * l[2] - 1.0)
        + 4.0 * (d[3] * l[0] * l[1] + d[4] * l[1] * l[2] + d[5] * l[2] * l[0])
}

/// Point of the quadratic patch with nodes a, b, c, ab, bc, ca at
/// barycentric coordinates l, and the area scale there (the area the patch
/// would have if its Jacobian were constant).
fn quadratic_point(g: &[Vec3; 6], l: [f64; 3]) -> (Vec3, f64) {
    let [l0, l1, l2] = l;
    let y = g[0] * (l0 * (2.0 * l0 - 1.0))
        + g[1] * (l1 * (2.0 * l1 - 1.0))
        + g[2] * (l2 * (2.0 * l2 - 1.0))
        + (g[3] * (l0 * l1) + g[4] * (l1 * l2) + g[5] * (l2 * l0)) * 4.0;
    // Derivatives along l1 and l2 with l0 = 1 − l1 − l2.
    let ds = g[0] * (1.0 - 4.0 * l0) + g[1] * (4.0 * l1 - 1.0) + (g[3] * (l0 - l1) + g[4] * l2 - g[5] * l2) * 4.0;
    let dt = g[0] * (1.0 - 4.0 * l0) + g[2] * (4.0 * l2 - 1.0) + (-g[3] * l1 + g[4] * l1 + g[5] * (l0 - l2)) * 4.0;
    (y, 0.5 * ds.cross(&dt).norm())
}

/// Restriction of the quadratic to the sub-triangle with the given
/// barycentric corners.
fn restrict(d: &QuadraticDensity, corners: [[f64; 3]; 3]) -> QuadraticDensity {
    let mid = |i: usize, j: usize| std::array::from_fn(|k| 0.5 * (corners[i][k] + corners[j][k]));
    [
        quadratic_at(d, corners[0]),
        quadratic_at(d, corners[1]),
        quadratic_at(d, corners[2]),
        quadratic_at(d, mid(0, 1)),
        quadratic_at(d, mid(1, 2)),
        quadratic_at(d, mid(2, 0)),
    ]
}

/// Kernel integrals over the patch of the exact surface spanned by a panel,
/// carrying a quadratic density.
/// Subdivision midpoints are moved onto the surface; without a shape the
/// panel stays flat.
pub(crate) fn field_integral_curved(
    x: &Vec3,
    p: &Panel,
    dens: QuadraticDensity,
    shape: Option<&ParametricShape>,
    with_hessian: bool,
    acc: &mut KernelSum,
) {
    patch_rec(x, p, dens, shape, CURVED_SPLIT_RATIO, with_hessian, 0, 1.0, acc)
}

#[allow(clippy::too_many_arguments)]
fn patch_rec(
    x: &Vec3,
    p: &Panel,
    dens: QuadraticDensity,
    shape: Option<&ParametricShape>,
    split_at: f64,
    with_hessian: bool,
    depth: u32,
    weight: f64,
    acc: &mut KernelSum,
) {
    let rho = (x - p.centroid).norm() / p.diameter;
    let split = if depth < MAX_DEPTH {
        1.0 - band(rho, split_at, 0.1 * split_at)
    } else {
        0.0
    };
    if split > 0.0 {
        let [a, b, c] = p.corners;
        let mid = |u: Vec3, v: Vec3| {
            let m = (u + v) * 0.5;
            shape.map_or(m, |s| s.snap(&m))
        };
        let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
        const A: [f64; 3] = [1.0, 0.0, 0.0];
        const B: [f64; 3] = [0.0, 1.0, 0.0];
        const C: [f64; 3] = [0.0, 0.0, 1.0];
        const AB: [f64; 3] = [0.5, 0.5, 0.0];
        const BC: [f64; 3] = [0.0, 0.5, 0.5];
        const CA: [f64; 3] = [0.5, 0.0, 0.5];
        let children = [
            (Panel::new([a, ab, ca]), restrict(&dens, [A, AB, CA])),
            (Panel::new([ab, b, bc]), restrict(&dens, [AB, B, BC])),
            (Panel::new([ca, bc, c]), restrict(&dens, [CA, BC, C])),
            (Panel::new([ab, bc, ca]), restrict(&dens, [AB, BC, CA])),
        ];
        for (child, d) in &children {
            patch_rec(x, child, *d, shape, split_at, with_hessian, depth + 1, weight * split, acc);
        }
    }
    if split < 1.0 {
        let [a, b, c] = p.corners;
        // On a curved surface the leaf is the quadratic patch through its
        // corners and surface edge midpoints; a flat leaf would leave an
        // O(1) relative error in D²u that builds up over the levels of
        // subdivision.
        let geometry = shape.map(|s| [a, b, c, s.snap(&((a + b) * 0.5)), s.snap(&((b + c) * 0.5)), s.snap(&((c + a) * 0.5))]);
        for (rule, w_rule) in field_rules(rho) {
            if w_rule == 0.0 {
                continue;
            }
            let scale = weight * (1.0 - split) * w_rule;
            for (l, w) in rule.points.iter().zip(rule.weights) {
                let (y, area) = match &geometry {
                    Some(g) => quadratic_point(g, *l),
                    None => (a * l[0] + b * l[1] + c * l[2], p.area),
                };
                let density = quadratic_at(&dens, *l);
                acc.add(&(x - y), scale * area * w * density, with_hessian);
            }
        }
    }
}

/// Part of a triangle that holds the closest point to a query point.
/// Edge k joins corners k and k+1 (mod 3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Feature {
    Vertex(usize),
    Edge(usize),
    Face,
}

/// Closest point of the closed triangle to x and the feature it lies on.
pub(crate) fn closest_point(x: &Vec3, p: &Panel) -> (Vec3, Feature) {
    let [a, b, c] = p.corners;
    let (ab, ac, ap) = (b - a, c - a, x - a);
    let (d1, d2) = (ab.dot(&ap), ac.dot(&ap));
    if d1 <= 0.0 && d2 <= 0.0 {
        return (a, Feature::Vertex(0));
    }
    let bp = x - b;
    let (d3, d4) = (ab.dot(&bp), ac.dot(&bp));
    if d3 >= 0.0 && d4 <= d3 {
        return (b, Feature::Vertex(1));
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return (a + ab * v, Feature::Edge(0));
    }
    let cp = x - c;
    let (d5, d6) = (ab.dot(&cp), ac.dot(&cp));
    if d6 >= 0.0 && d5 <= d6 {
        return (c, Feature::Vertex(2));
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return (a + ac * w, Feature::Edge(2));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (b + (c - b) * w, Feature::Edge(1));
    }
    let denom = 1.0 / (va + vb + vc);
    let (v, w) = (vb * denom, vc * denom);
    (a + ab * v + ac * w, Feature::Face)
}

/// Euclidean distance from x to the closed triangle.
#[cfg(test)]
pub(crate) fn point_triangle_distance(x: &Vec3, p: &Panel) -> f64 {
    (x - closest_point(x, p).0).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Panel {
        Panel::new([
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.2, 0.9, 0.0),
        ])
    }

    /// Brute-force reference: deep uniform splitting with the seven-point rule,
    /// removing the singular child analytically is not needed off-panel.
    fn brute(x: &Vec3, p: &Panel, depth: u32) -> f64 {
        if depth == 0 {
            return p.rule_points(&DEGREE5).map(|(y, w)| w / (x - y).norm()).sum();
        }
        p.children().iter().map(|c| brute(x, c, depth - 1)).sum()
    }

    #[test]
    fn self_potential_matches_polar_integration() {
        // Polar integration about x: ∫_0^{2π} ρ_max(θ) dθ.
        let p = tri();
        let x = p.centroid;
        let n = 200_000;
        let mut total = 0.0;
        for i in 0..n {
            let th = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
            let dir = Vec3::new(th.cos(), th.sin(), 0.0);
            // Distance to the boundary along dir.
            let mut best = f64::INFINITY;
            for k in 0..3 {
                let (a, b) = (p.corners[k], p.corners[(k + 1) % 3]);
                let e = b - a;
                let m = nalgebra::Matrix2::new(dir.x, -e.x, dir.y, -e.y);
                if let Some(inv) = m.try_inverse() {
                    let s = inv * nalgebra::Vector2::new(a.x - x.x, a.y - x.y);
                    if s[0] > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&s[1]) {
                        best = best.min(s[0]);
                    }
                }
            }
            total += best;
        }
        total *= 2.0 * std::f64::consts::PI / n as f64;
        assert!((self_potential(&x, &p) - total).abs() < 1e-6, "{} {}", self_potential(&x, &p), total);
    }

    #[test]
    fn adaptive_potential_near_and_far() {
        let p = tri();
        // The three-point rule used from four diameters on is good to ~1e-5.
        for (x, tol) in [
            (Vec3::new(0.5, 0.3, 0.05), 1e-6),
            (Vec3::new(1.2, 0.1, 0.0), 1e-6),
            (Vec3::new(0.3, 0.3, 1.0), 1e-6),
            (Vec3::new(5.0, -3.0, 2.0), 3e-5),
        ] {
            let reference = brute(&x, &p, 7);
            let got = potential_integral(&x, &p);
            assert!((got - reference).abs() < tol * reference, "{x:?}: {got} vs {reference}");
        }
    }

    #[test]
    fn field_hessian_is_trace_free() {
        let p = tri();
        let mut acc = KernelSum::default();
        field_integral(&Vec3::new(0.4, 0.2, 0.1), &p, true, &mut acc);
        let h = acc.hessian();
        assert!(h.trace().abs() < 1e-12 * h.norm());
    }

    #[test]
    fn closest_points_and_distance() {
        let p = tri();
        assert_eq!(closest_point(&Vec3::new(0.4, 0.3, 0.7), &p).1, Feature::Face);
        assert_eq!(closest_point(&Vec3::new(-1.0, -1.0, 0.2), &p).1, Feature::Vertex(0));
        assert!((point_triangle_distance(&Vec3::new(0.4, 0.3, 0.7), &p) - 0.7).abs() < 1e-15);
        assert!((point_triangle_distance(&Vec3::new(-1.0, 0.0, 0.0), &p) - 1.0).abs() < 1e-15);
        assert!((point_triangle_distance(&Vec3::new(0.5, -2.0, 0.0), &p) - 2.0).abs() < 1e-15);
    }
}
