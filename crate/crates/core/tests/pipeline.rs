//! Solve, transport and functionals end to end on coarse meshes.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use willmore_core::field::HarmonicField;
use willmore_core::functionals::{scan_levels, ParamSet};
use willmore_core::geometry::{make_surface, ParametricShape, Vec3};
use willmore_core::inequalities::{check_all, BoundaryData, InequalitySweep};
use willmore_core::levelset::{geometric_grid, level_family};
use willmore_core::oracles::{finite_difference_validate, spheroid_capacity, SpheroidField};
use willmore_core::potential::{solve_exterior_potential, PotentialSolution};
use willmore_core::Error;

fn spheroid(k: u32) -> PotentialSolution {
    solve_exterior_potential(&make_surface(&ParametricShape::spheroid(2.0, 1.0), k).unwrap()).unwrap()
}

#[test]
fn ball_capacity_and_trace() {
    let sol = solve_exterior_potential(&make_surface(&ParametricShape::sphere(2.0), 3).unwrap()).unwrap();
    assert!((sol.capacity() / 2.0 - 1.0).abs() < 0.005);
    let (charge, flux) = sol.capacity_pair();
    assert!((charge - flux).abs() < 1e-3 * charge);
    for g in sol.boundary_gradient_norm() {
        assert!((g - 0.5).abs() < 0.01 * 0.5);
    }
    let far = sol.sample(&Vec3::new(0.0, 0.0, 20.0)).unwrap();
    assert!((far.u - 0.1).abs() < 1e-3);
}

#[test]
fn spheroid_capacity_converges() {
    let exact = spheroid_capacity(2.0, 1.0);
    let errors: Vec<f64> = (1..=3).map(|k| (spheroid(k).capacity() - exact).abs() / exact).collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    assert!(errors[2] < 5e-3);
}

#[test]
fn near_field_tracks_the_exact_spheroid_potential() {
    let sol = spheroid(3);
    let exact = SpheroidField::new(2.0, 1.0).unwrap();
    for x in [Vec3::new(2.3, 0.0, 0.0), Vec3::new(0.0, 1.2, 0.3), Vec3::new(1.0, 1.5, -1.0)] {
        let a = sol.sample(&x).unwrap();
        let b = exact.sample(&x).unwrap();
        assert!((a.u - b.u).abs() < 1e-2 * b.u);
        assert!((a.grad - b.grad).norm() < 2e-2 * b.grad.norm());
    }
}

#[test]
fn solution_round_trips_through_json() {
    let sol = spheroid(2);
    let text = sol.to_json().unwrap();
    let back = PotentialSolution::from_json(&text).unwrap();
    assert_eq!(back.capacity(), sol.capacity());
    let x = Vec3::new(0.5, 2.0, 0.0);
    assert_eq!(back.sample(&x).unwrap().u, sol.sample(&x).unwrap().u);
    assert!(PotentialSolution::from_json("{}").is_err());
}

#[test]
fn interior_points_are_refused() {
    let sol = spheroid(2);
    assert!(matches!(sol.sample(&Vec3::zeros()), Err(Error::InsideDomain { .. })));
}

/// Beyond the near-field blend the derivatives are those of u itself and
/// central differences converge at second order.
#[test]
fn finite_differences_confirm_the_derivatives() {
    let sol = spheroid(3);
    let points = [Vec3::new(5.0, 1.0, 0.0), Vec3::new(0.0, 4.0, 2.0), Vec3::new(-4.0, -2.0, 1.5)];
    let report = finite_difference_validate(&sol, &points, &[0.04, 0.02, 0.01]).unwrap();
    assert!(report.consistent, "{report:?}");

    let ball = solve_exterior_potential(&make_surface(&ParametricShape::unit_sphere(), 3).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let points: Vec<Vec3> = (0..10)
        .map(|_| {
            let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            v.normalize() * rng.random_range(2.0..4.0)
        })
        .collect();
    let report = finite_difference_validate(&ball, &points, &[0.04, 0.02, 0.01, 0.005]).unwrap();
    assert!(report.consistent, "{report:?}");
    assert!(report.grad_orders.iter().all(|p| (p - 2.0).abs() < 0.2), "{report:?}");
}

#[test]
fn spheroid_inequalities_hold_strictly() {
    let sol = spheroid(3);
    let data = BoundaryData::new(sol.mesh(), sol.boundary_gradient_norm(), sol.capacity()).unwrap();
    for r in check_all(&data, &InequalitySweep::default()).unwrap() {
        assert!(r.holds() && r.relative_slack > 1e-3, "{r:?}");
    }
}

#[test]
fn spheroid_functionals_are_monotone() {
    let coarse = spheroid(2);
    let fine = spheroid(3);
    let taus = geometric_grid(1.0, 20.0, 12);
    let levels = level_family(&fine, fine.mesh(), &taus).unwrap();
    let coarse_levels = level_family(&coarse, coarse.mesh(), &taus).unwrap();
    let params = [ParamSet::new(1.0, 1.0, 0.0), ParamSet::new(2.0, -1.0, 1.0), ParamSet::new(0.5, 0.0, 1.0)];
    let curves = scan_levels(&levels, &params, Some(&coarse_levels)).unwrap();
    for c in &curves {
        assert!(c.is_monotone(), "{:?}", c.violations);
        assert!(c.h_cd[c.len() - 1] < c.h_cd[0]);
    }
    // F_β tends to 4π Cap^{1−β}.
    let f = &curves[1].f_beta;
    let limit = 4.0 * PI / fine.capacity();
    assert!((f[f.len() - 1] / limit - 1.0).abs() < 0.03);
}
