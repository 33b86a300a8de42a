use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{ParametricShape, Vec3};
use crate::quadrature::gauss_legendre;

/// Position and first/second partial derivatives of a parametrization.
struct Chart {
    x: Vec3,
    xu: Vec3,
    xv: Vec3,
    xuu: Vec3,
    xuv: Vec3,
    xvv: Vec3,
    /// A point the outward normal must point away from.
    inside: Vec3,
}

/// Mean curvature (sphere positive) and area element from the fundamental forms.
fn curvature_and_area(c: &Chart) -> (f64, f64) {
    let cross = c.xu.cross(&c.xv);
    let jac = cross.norm();
    let mut nrm = cross / jac;
    if nrm.dot(&(c.x - c.inside)) < 0.0 {
        nrm = -nrm;
    }
    let (e, f, g) = (c.xu.dot(&c.xu), c.xu.dot(&c.xv), c.xv.dot(&c.xv));
    let (l, m, n) = (c.xuu.dot(&nrm), c.xuv.dot(&nrm), c.xvv.dot(&nrm));
    let h = -(e * n - 2.0 * f * m + g * l) / (e * g - f * f);
    (h, jac)
}

fn ellipsoid_chart(a: f64, b: f64, c: f64, center: Vec3, t: f64, p: f64) -> Chart {
    let (st, ct, sp, cp) = (t.sin(), t.cos(), p.sin(), p.cos());
    Chart {
        x: center + Vec3::new(a * ct, b * st * cp, c * st * sp),
        xu: Vec3::new(-a * st, b * ct * cp, c * ct * sp),
        xv: Vec3::new(0.0, -b * st * sp, c * st * cp),
        xuu: Vec3::new(-a * ct, -b * st * cp, -c * st * sp),
        xuv: Vec3::new(0.0, -b * ct * sp, c * ct * cp),
        xvv: Vec3::new(0.0, -b * st * cp, -c * st * sp),
        inside: center,
    }
}

fn torus_chart(big: f64, r: f64, u: f64, v: f64) -> Chart {
    let (su, cu, sv, cv) = (u.sin(), u.cos(), v.sin(), v.cos());
    let rho = big + r * cv;
    Chart {
        x: Vec3::new(rho * cu, rho * su, r * sv),
        xu: Vec3::new(-rho * su, rho * cu, 0.0),
        xv: Vec3::new(-r * sv * cu, -r * sv * su, r * cv),
        xuu: Vec3::new(-rho * cu, -rho * su, 0.0),
        xuv: Vec3::new(r * sv * su, -r * sv * cu, 0.0),
        xvv: Vec3::new(-r * cv * cu, -r * cv * su, -r * sv),
        inside: Vec3::new(big * cu, big * su, 0.0),
    }
}

/// ∫ (|H|/2)^p dσ by tensor-product quadrature in parameter space, with
/// `nodes` points per parameter direction.
pub fn willmore_energy_quadrature_with(shape: &ParametricShape, p_exp: f64, nodes: usize) -> Result<f64> {
    shape.validate()?;
    let integrand = |h: f64| (h.abs() / 2.0).powf(p_exp);
    match shape {
        ParametricShape::Sphere { .. } | ParametricShape::Ellipsoid { .. } => {
            let (a, b, c, center) = match shape {
                ParametricShape::Sphere { radius, center } => {
                    (*radius, *radius, *radius, Vec3::from(*center))
                }
                ParametricShape::Ellipsoid { a, b, c } => (*a, *b, *c, Vec3::zeros()),
                _ => unreachable!(),
            };
            let (gx, gw) = gauss_legendre(nodes);
            let np = 2 * nodes;
            let mut total = 0.0;
            for (x, w) in gx.iter().zip(&gw) {
                let t = 0.5 * PI * (x + 1.0);
                let mut ring = 0.0;
                for j in 0..np {
                    let p = 2.0 * PI * j as f64 / np as f64;
                    let (h, jac) = curvature_and_area(&ellipsoid_chart(a, b, c, center, t, p));
                    ring += integrand(h) * jac;
                }
                total += w * 0.5 * PI * ring * 2.0 * PI / np as f64;
            }
            Ok(total)
        }
        ParametricShape::Torus { major, minor } => {
            let (nu, nv) = (2 * nodes, 2 * nodes);
            let mut total = 0.0;
            for i in 0..nu {
                let u = 2.0 * PI * i as f64 / nu as f64;
                for j in 0..nv {
                    let v = 2.0 * PI * j as f64 / nv as f64;
                    let (h, jac) = curvature_and_area(&torus_chart(*major, *minor, u, v));
                    total += integrand(h) * jac;
                }
            }
            Ok(total * (2.0 * PI / nu as f64) * (2.0 * PI / nv as f64))
        }
        ParametricShape::PerturbedSphere { .. } => Err(Error::Unsupported(
            "parameter-space Willmore quadrature covers spheres, ellipsoids and tori".into(),
        )),
    }
}

/// ∫ (|H|/2)^p dσ without a mesh.
pub fn willmore_energy_quadrature(shape: &ParametricShape, p_exp: f64) -> Result<f64> {
    willmore_energy_quadrature_with(shape, p_exp, 96)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_is_four_pi_at_any_radius() {
        for r in [0.5, 1.0, 3.0] {
            let w = willmore_energy_quadrature(&ParametricShape::sphere(r), 2.0).unwrap();
            assert!((w - 4.0 * PI).abs() < 1e-11, "{w}");
        }
    }

    #[test]
    fn clifford_torus() {
        let shape = ParametricShape::Torus {
            major: 2f64.sqrt(),
            minor: 1.0,
        };
        let w = willmore_energy_quadrature(&shape, 2.0).unwrap();
        assert!((w - 2.0 * PI * PI).abs() < 1e-10, "{w}");
    }

    #[test]
    fn area_from_exponent_zero() {
        let shape = ParametricShape::spheroid(2.0, 1.0);
        let area = willmore_energy_quadrature(&shape, 0.0).unwrap();
        assert!((area - crate::geometry::spheroid_area(2.0, 1.0)).abs() < 1e-10);
    }

    #[test]
    fn perturbed_sphere_is_unsupported() {
        let shape = ParametricShape::PerturbedSphere {
            radius: 1.0,
            modes: vec![],
        };
        assert!(matches!(
            willmore_energy_quadrature(&shape, 2.0),
            Err(Error::Unsupported(_))
        ));
    }
}
