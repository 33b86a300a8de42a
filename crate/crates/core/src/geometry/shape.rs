//! Closed parametric surfaces and their exact differential geometry.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;

pub type Vec3 = Vector3<f64>;

/// Highest spherical-harmonic degree accepted for sphere perturbations.
pub const MAX_MODE_DEGREE: u32 = 8;

/// One real spherical-harmonic perturbation mode.
///
/// The angular factor is Schmidt semi-normalised, so it is bounded by one in
/// absolute value and `amplitude` is the largest radial displacement the mode
/// can contribute. Negative `order` selects the sine branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicMode {
    pub degree: u32,
    pub order: i32,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ParametricShape {
    Sphere {
        radius: f64,
        #[serde(default)]
        center: [f64; 3],
    },
    Ellipsoid { a: f64, b: f64, c: f64 },
    PerturbedSphere { radius: f64, modes: Vec<HarmonicMode> },
    Torus { major: f64, minor: f64 },
}

/// Unit normal, mean curvature and shape operator at a surface point.
///
/// The shape operator is the second fundamental form with respect to the
/// outward normal, written as a symmetric 3×3 matrix acting on the tangent
/// plane (and annihilating the normal). Its trace is the mean curvature.
#[derive(Debug, Clone, Copy)]
pub struct PointGeometry {
    pub normal: Vec3,
    pub mean_curvature: f64,
    pub shape_operator: Matrix3<f64>,
}

impl ParametricShape {
    pub fn unit_sphere() -> Self {
        ParametricShape::Sphere {
            radius: 1.0,
            center: [0.0; 3],
        }
    }

    pub fn sphere(radius: f64) -> Self {
        ParametricShape::Sphere {
            radius,
            center: [0.0; 3],
        }
    }

    /// Prolate spheroid with semi-axis `a` along x and `b` in the yz-plane.
    pub fn spheroid(a: f64, b: f64) -> Self {
        ParametricShape::Ellipsoid { a, b, c: b }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ParametricShape::Sphere { .. } => "sphere",
            ParametricShape::Ellipsoid { .. } => "ellipsoid",
            ParametricShape::PerturbedSphere { .. } => "perturbed_sphere",
            ParametricShape::Torus { .. } => "torus",
        }
    }

    pub fn is_genus_zero(&self) -> bool {
        !matches!(self, ParametricShape::Torus { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidShape(format!("{name} must be a positive length, got {v}")))
            }
        };
        match self {
            ParametricShape::Sphere { radius, center } => {
                positive("radius", *radius)?;
                if center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidShape("sphere center must be finite".into()));
                }
            }
            ParametricShape::Ellipsoid { a, b, c } => {
                positive("a", *a)?;
                positive("b", *b)?;
                positive("c", *c)?;
            }
            ParametricShape::PerturbedSphere { radius, modes } => {
                positive("radius", *radius)?;
                let mut total = 0.0;
                for m in modes {
                    if m.degree > MAX_MODE_DEGREE {
                        return Err(Error::InvalidShape(format!(
                            "mode degree {} exceeds {MAX_MODE_DEGREE}",
                            m.degree
                        )));
                    }
                    if m.order.unsigned_abs() > m.degree {
                        return Err(Error::InvalidShape(format!(
                            "mode order {} out of range for degree {}",
                            m.order, m.degree
                        )));
                    }
                    if !m.amplitude.is_finite() {
                        return Err(Error::InvalidShape("mode amplitude must be finite".into()));
                    }
                    total += m.amplitude.abs();
                }
                if total >= *radius {
                    return Err(Error::InvalidShape(format!(
                        "total perturbation amplitude {total} must stay below the radius {radius} \
                         for the surface to remain embedded"
                    )));
                }
            }
            ParametricShape::Torus { major, minor } => {
                positive("major radius", *major)?;
                positive("minor radius", *minor)?;
                if minor >= major {
                    return Err(Error::InvalidShape(format!(
                        "minor radius {minor} must be smaller than major radius {major}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Maps a point of the unit sphere onto a genus-zero surface.
    pub(crate) fn map_from_sphere(&self, s: &Vec3) -> Vec3 {
        match self {
            ParametricShape::Sphere { radius, center } => Vec3::from(*center) + s * *radius,
            ParametricShape::Ellipsoid { a, b, c } => Vec3::new(a * s.x, b * s.y, c * s.z),
            ParametricShape::PerturbedSphere { radius, modes } => {
                let r = radius + perturbation(modes, s);
                s * r
            }
            ParametricShape::Torus { .. } => unreachable!("torus is not mapped from the sphere"),
        }
    }

    /// Surface point with the same parameter as the (nearby) point x.
    pub(crate) fn snap(&self, x: &Vec3) -> Vec3 {
        match self {
            ParametricShape::Sphere { radius, center } => {
                let c = Vec3::from(*center);
                c + (x - c).normalize() * *radius
            }
            ParametricShape::Ellipsoid { a, b, c } => {
                self.map_from_sphere(&Vec3::new(x.x / a, x.y / b, x.z / c).normalize())
            }
            ParametricShape::PerturbedSphere { .. } => self.map_from_sphere(&x.normalize()),
            ParametricShape::Torus { major, minor } => {
                let u = x.y.atan2(x.x);
                let v = x.z.atan2(x.x.hypot(x.y) - major);
                Self::torus_point(*major, *minor, u, v)
            }
        }
    }

    /// Point of the torus at angles (`u` around the axis, `v` around the tube).
    pub(crate) fn torus_point(major: f64, minor: f64, u: f64, v: f64) -> Vec3 {
        let rho = major + minor * v.cos();
        Vec3::new(rho * u.cos(), rho * u.sin(), minor * v.sin())
    }

    /// Exact normal, mean curvature and shape operator at a point on the surface.
    pub fn geometry_at(&self, x: &Vec3) -> PointGeometry {
        let (grad, hess) = match self {
            ParametricShape::Sphere { center, .. } => {
                let d = x - Vec3::from(*center);
                let r = d.norm();
                let n = d / r;
                (n, (Matrix3::identity() - n * n.transpose()) / r)
            }
            ParametricShape::Ellipsoid { a, b, c } => {
                let inv = Vec3::new(1.0 / (a * a), 1.0 / (b * b), 1.0 / (c * c));
                (2.0 * x.component_mul(&inv), Matrix3::from_diagonal(&(2.0 * inv)))
            }
            ParametricShape::PerturbedSphere { radius, modes } => {
                let [px, py, pz] = Jet::coordinates(x);
                let r = (px * px + py * py + pz * pz).sqrt();
                let g = r - *radius - perturbation_jet(modes, px / r, py / r, pz / r);
                (g.grad, g.hess)
            }
            ParametricShape::Torus { major, minor } => {
                let [px, py, pz] = Jet::coordinates(x);
                let rho = (px * px + py * py).sqrt();
                let t = rho - *major;
                let g = (t * t + pz * pz).sqrt() - *minor;
                (g.grad, g.hess)
            }
        };
        implicit_geometry(&grad, &hess)
    }

    /// Closed-form surface area where one exists.
    pub fn analytic_area(&self) -> Option<f64> {
        use std::f64::consts::PI;
        match self {
            ParametricShape::Sphere { radius, .. } => Some(4.0 * PI * radius * radius),
            ParametricShape::Ellipsoid { a, b, c } if (b - c).abs() <= 1e-15 * b => {
                Some(spheroid_area(*a, *b))
            }
            ParametricShape::Torus { major, minor } => Some(4.0 * PI * PI * major * minor),
            _ => None,
        }
    }

    /// Radius of a ball about the origin (or sphere center) containing the surface.
    pub fn bounding_radius(&self) -> f64 {
        match self {
            ParametricShape::Sphere { radius, .. } => *radius,
            ParametricShape::Ellipsoid { a, b, c } => a.max(*b).max(*c),
            ParametricShape::PerturbedSphere { radius, modes } => {
                radius + modes.iter().map(|m| m.amplitude.abs()).sum::<f64>()
            }
            ParametricShape::Torus { major, minor } => major + minor,
        }
    }
}

/// Area of the spheroid with semi-axis `a` along the symmetry axis and `b` across it.
pub fn spheroid_area(a: f64, b: f64) -> f64 {
    use std::f64::consts::PI;
    if (a - b).abs() < 1e-12 * b {
        return 4.0 * PI * b * b;
    }
    if a > b {
        let e = (1.0 - b * b / (a * a)).sqrt();
        2.0 * PI * b * b * (1.0 + a / (b * e) * e.asin())
    } else {
        let e = (1.0 - a * a / (b * b)).sqrt();
        2.0 * PI * b * b * (1.0 + (1.0 - e * e) / e * e.atanh())
    }
}

/// Normal, mean curvature and shape operator of the level set of a function
/// with gradient `grad` and Hessian `hess`, oriented along the gradient.
pub(crate) fn implicit_geometry(grad: &Vec3, hess: &Matrix3<f64>) -> PointGeometry {
    let g = grad.norm();
    let normal = grad / g;
    let proj = Matrix3::identity() - normal * normal.transpose();
    let shape_operator = proj * hess * proj / g;
    let shape_operator = (shape_operator + shape_operator.transpose()) * 0.5;
    PointGeometry {
        normal,
        mean_curvature: shape_operator.trace(),
        shape_operator,
    }
}

/// Coefficients (ascending powers) of d^m/dt^m P_l(t).
fn legendre_derivative_coeffs(l: u32, m: u32) -> Vec<f64> {
    let l = l as usize;
    let mut p_prev = vec![1.0];
    let mut p = vec![0.0, 1.0];
    let mut coeffs = if l == 0 { p_prev.clone() } else { p.clone() };
    for k in 2..=l {
        let kf = k as f64;
        let mut next = vec![0.0; k + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += (2.0 * kf - 1.0) * c / kf;
        }
        for (i, c) in p_prev.iter().enumerate() {
            next[i] -= (kf - 1.0) * c / kf;
        }
        p_prev = p;
        p = next;
        coeffs = p.clone();
    }
    for _ in 0..m {
        coeffs = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i as f64)
            .collect();
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
    }
    coeffs
}

fn schmidt_factor(l: u32, m: u32) -> f64 {
    if m == 0 {
        return 1.0;
    }
    // sqrt(2 (l-m)! / (l+m)!)
    let ratio: f64 = ((l - m + 1)..=(l + m)).map(f64::from).product();
    (2.0 / ratio).sqrt()
}

/// Real Schmidt semi-normalised spherical harmonic evaluated on Jets of a unit vector.
fn harmonic_jet(mode: &HarmonicMode, x: Jet, y: Jet, z: Jet) -> Jet {
    let m = mode.order.unsigned_abs();
    let coeffs = legendre_derivative_coeffs(mode.degree, m);
    let mut poly = Jet::constant(0.0);
    for c in coeffs.iter().rev() {
        poly = poly * z + *c;
    }
    // (x + i y)^m
    let (mut re, mut im) = (Jet::constant(1.0), Jet::constant(0.0));
    for _ in 0..m {
        let nre = re * x - im * y;
        let nim = re * y + im * x;
        re = nre;
        im = nim;
    }
    let angular = if mode.order >= 0 { re } else { im };
    (poly * angular).scale(schmidt_factor(mode.degree, m))
}

fn perturbation_jet(modes: &[HarmonicMode], x: Jet, y: Jet, z: Jet) -> Jet {
    modes.iter().fold(Jet::constant(0.0), |acc, m| {
        acc + harmonic_jet(m, x, y, z).scale(m.amplitude)
    })
}

/// Radial displacement of a perturbed sphere in unit direction `s`.
pub fn perturbation(modes: &[HarmonicMode], s: &Vec3) -> f64 {
    let [x, y, z] = [s.x, s.y, s.z].map(Jet::constant);
    perturbation_jet(modes, x, y, z).value
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn schmidt_harmonics_match_closed_forms() {
        let s = Vec3::new(0.3, -0.5, 0.2).normalize();
        let (x, y, z) = (s.x, s.y, s.z);
        let one = |d, o| perturbation(&[HarmonicMode { degree: d, order: o, amplitude: 1.0 }], &s);
        assert!((one(0, 0) - 1.0).abs() < 1e-15);
        assert!((one(1, 0) - z).abs() < 1e-15);
        assert!((one(2, 0) - 0.5 * (3.0 * z * z - 1.0)).abs() < 1e-14);
        // Schmidt: P_2^1 -> sqrt(1/3) * 3 z sinθ, P_2^2 -> sqrt(1/12) * 3 sin²θ
        assert!((one(2, 1) - 3f64.sqrt() * z * x).abs() < 1e-14);
        assert!((one(2, -2) - 3f64.sqrt() * x * y).abs() < 1e-14);
        assert!((one(2, 2) - 0.5 * 3f64.sqrt() * (x * x - y * y)).abs() < 1e-14);
    }

    #[test]
    fn schmidt_harmonics_are_bounded_by_one() {
        let n = 60;
        for d in 0..=MAX_MODE_DEGREE {
            for o in -(d as i32)..=(d as i32) {
                let mode = [HarmonicMode { degree: d, order: o, amplitude: 1.0 }];
                for i in 0..=n {
                    for j in 0..2 * n {
                        let th = PI * i as f64 / n as f64;
                        let ph = PI * j as f64 / n as f64;
                        let s = Vec3::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos());
                        assert!(perturbation(&mode, &s).abs() <= 1.0 + 1e-12, "Y_{d}^{o}");
                    }
                }
            }
        }
    }

    #[test]
    fn sphere_and_spheroid_curvatures() {
        let g = ParametricShape::sphere(2.0).geometry_at(&Vec3::new(0.0, 2.0, 0.0));
        assert!((g.mean_curvature - 1.0).abs() < 1e-15);
        let sp = ParametricShape::spheroid(2.0, 1.0);
        // Tip: both principal curvatures a/b² ; equator: 1/b and b/a².
        let tip = sp.geometry_at(&Vec3::new(2.0, 0.0, 0.0));
        assert!((tip.mean_curvature - 4.0).abs() < 1e-14);
        let eq = sp.geometry_at(&Vec3::new(0.0, 0.0, 1.0));
        assert!((eq.mean_curvature - 1.25).abs() < 1e-14);
        let eig = eq.shape_operator.symmetric_eigenvalues();
        let mut ev: Vec<f64> = eig.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!(ev[0].abs() < 1e-14 && (ev[1] - 0.25).abs() < 1e-14 && (ev[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn torus_curvature_matches_closed_form() {
        let (big, small) = (2.0f64.sqrt(), 1.0);
        let shape = ParametricShape::Torus { major: big, minor: small };
        for v in [0.0, 0.7, 2.0, PI] {
            let p = ParametricShape::torus_point(big, small, 0.4, v);
            let h = shape.geometry_at(&p).mean_curvature;
            let exact = 1.0 / small + v.cos() / (big + small * v.cos());
            assert!((h - exact).abs() < 1e-12, "v={v}: {h} vs {exact}");
        }
    }

    #[test]
    fn perturbed_sphere_without_modes_is_round() {
        let shape = ParametricShape::PerturbedSphere { radius: 1.5, modes: vec![] };
        let g = shape.geometry_at(&Vec3::new(0.0, 0.9, 1.2));
        assert!((g.mean_curvature - 2.0 / 1.5).abs() < 1e-13);
    }

    #[test]
    fn validation_rejects_bad_shapes() {
        assert!(ParametricShape::sphere(-1.0).validate().is_err());
        assert!(ParametricShape::Torus { major: 1.0, minor: 1.0 }.validate().is_err());
        let big = ParametricShape::PerturbedSphere {
            radius: 1.0,
            modes: vec![
                HarmonicMode { degree: 2, order: 0, amplitude: 0.6 },
                HarmonicMode { degree: 3, order: 1, amplitude: -0.5 },
            ],
        };
        assert!(matches!(big.validate(), Err(Error::InvalidShape(_))));
        let high = ParametricShape::PerturbedSphere {
            radius: 1.0,
            modes: vec![HarmonicMode { degree: 9, order: 0, amplitude: 0.01 }],
        };
        assert!(high.validate().is_err());
    }

    #[test]
    fn prolate_area_formula() {
        // a = b limit and a numerically integrated prolate case.
        assert!((spheroid_area(1.0, 1.0) - 4.0 * PI).abs() < 1e-12);
        let (a, b) = (2.0, 1.0);
        let n = 20000;
        let area: f64 = (0..n)
            .map(|i| {
                let t = PI * (i as f64 + 0.5) / n as f64;
                // x = a cos t, radius b sin t; dσ = 2π b sin t sqrt(a² sin² t + b² cos² t) dt
                2.0 * PI * b * t.sin() * (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt()
                    * PI
                    / n as f64
            })
            .sum();
        assert!((spheroid_area(a, b) - area).abs() < 1e-6);
    }
}
