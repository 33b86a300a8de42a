//! Reference values, frozen from independent high-precision quadrature.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use willmore_core::field::HarmonicField;
use willmore_core::functionals::ParamSet;
use willmore_core::geometry::{ParametricShape, Vec3};
use willmore_core::inequalities::InequalityKind;
use willmore_core::oracles::{
    ball_reference_values, radial_field, spheroid_capacity, unit_sphere_area, willmore_energy_quadrature,
    RadialField, SpheroidField,
};

/// ∫ (H/2)² dσ on the spheroid with semi-axes 2, 1, 1 (30-digit quadrature).
const SPHEROID_WILLMORE: f64 = 15.451_606_644_326_56;
/// ∫ (|H|/2)^{3/2} dσ on the same spheroid.
const SPHEROID_WILLMORE_3_2: f64 = 16.138_467_892_651_85;
const SPHEROID_CAPACITY: f64 = 1.315_190_722_204_050_6;

#[test]
fn spheroid_willmore_energy() {
    let shape = ParametricShape::spheroid(2.0, 1.0);
    let w = willmore_energy_quadrature(&shape, 2.0).unwrap();
    assert_relative_eq!(w, SPHEROID_WILLMORE, max_relative = 1e-8);
    assert!(w > 4.0 * PI);
    let w = willmore_energy_quadrature(&shape, 1.5).unwrap();
    assert_relative_eq!(w, SPHEROID_WILLMORE_3_2, max_relative = 1e-8);
}

#[test]
fn clifford_torus_energy_is_two_pi_squared() {
    let torus = ParametricShape::Torus {
        major: 2f64.sqrt(),
        minor: 1.0,
    };
    let w = willmore_energy_quadrature(&torus, 2.0).unwrap();
    assert_relative_eq!(w, 2.0 * PI * PI, max_relative = 1e-10);
    assert!(w > 4.0 * PI);
}

#[test]
fn sphere_energy_is_four_pi() {
    let w = willmore_energy_quadrature(&ParametricShape::sphere(3.0), 2.0).unwrap();
    assert_relative_eq!(w, 4.0 * PI, max_relative = 1e-12);
}

#[test]
fn spheroid_capacity_values() {
    assert_relative_eq!(spheroid_capacity(2.0, 1.0), SPHEROID_CAPACITY, max_relative = 1e-14);
    assert_eq!(spheroid_capacity(1.0, 1.0), 1.0);
    assert!((spheroid_capacity(1.0001, 1.0) - 1.0).abs() < 1e-4);
    // Continuous across the switch to the series.
    let (below, above) = (spheroid_capacity(1.0 + 4e-7, 1.0), spheroid_capacity(1.0 + 6e-7, 1.0));
    assert!((above - below).abs() < 1e-6);
    let field = SpheroidField::new(2.0, 1.0).unwrap();
    assert_relative_eq!(field.capacity(), SPHEROID_CAPACITY, max_relative = 1e-12);
}

#[test]
fn radial_examples() {
    let s = radial_field(&RadialField::new(1.0, vec![0.0; 3]).unwrap(), &[2.0, 0.0, 0.0]).unwrap();
    assert_relative_eq!(s.u, 0.5);
    let b = RadialField::ball3(1.0).sample(&Vec3::new(0.0, 2.0, 0.0)).unwrap();
    assert_relative_eq!(b.grad_norm(), 0.25, max_relative = 1e-14);
    assert_relative_eq!(b.level_mean_curvature(), 1.0, max_relative = 1e-14);
    let five = radial_field(&RadialField::new(1.0, vec![0.0; 5]).unwrap(), &[2.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    assert_relative_eq!(five.u, 0.125);
    assert!(radial_field(&RadialField::new(1.0, vec![0.0; 3]).unwrap(), &[0.5, 0.0, 0.0]).is_err());
}

#[test]
fn sphere_areas() {
    assert_relative_eq!(unit_sphere_area(3), 4.0 * PI);
    assert_relative_eq!(unit_sphere_area(4), 2.0 * PI * PI);
    assert_relative_eq!(unit_sphere_area(5), 8.0 * PI * PI / 3.0);
}

#[test]
fn ball_reference_record() {
    let r = ball_reference_values(1.0, 3, &ParamSet::new(2.0, -1.0, 1.0)).unwrap();
    assert_eq!((r.capacity, r.boundary_grad_norm, r.boundary_mean_curvature), (1.0, 1.0, 2.0));
    assert_relative_eq!(r.f_beta, 4.0 * PI, max_relative = 1e-14);
    assert_relative_eq!(r.h_cd, 4.0 * PI, max_relative = 1e-14);
    for tau in [1.0, 7.0, 50.0] {
        assert_relative_eq!(r.f_beta_at(tau), r.f_beta, max_relative = 1e-12);
        assert_relative_eq!(r.h_cd_at(tau).unwrap(), r.h_cd, max_relative = 1e-12);
    }
    for id in InequalityKind::ALL {
        let s = r.sides(id).unwrap();
        assert!((s.lhs - s.rhs).abs() <= 1e-12 * (s.lhs.abs() + s.rhs.abs() + 1.0), "{s:?}");
    }
    // β = n − 2: the right side of the first geometric inequality is 4π.
    let r = ball_reference_values(1.0, 3, &ParamSet::new(1.0, 1.0, 0.0)).unwrap();
    assert_relative_eq!(r.sides(InequalityKind::GeomA).unwrap().rhs, 4.0 * PI, max_relative = 1e-14);
    assert!(ball_reference_values(1.0, 3, &ParamSet::new(1.0, -2.0, 1.0)).is_err());
}

#[test]
fn higher_dimensional_ball_is_saturated() {
    let p = ParamSet::new(1.0, 0.5, 0.5);
    let r = ball_reference_values(1.5, 5, &p).unwrap();
    assert_relative_eq!(r.capacity, 1.5f64.powi(3), max_relative = 1e-14);
    assert_relative_eq!(r.h_cd, 0.5 * r.f_beta, max_relative = 1e-12);
}
