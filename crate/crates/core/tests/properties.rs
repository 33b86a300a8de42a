use proptest::prelude::*;
use willmore_core::field::HarmonicField;
use willmore_core::functionals::{z_div_from_sample, ParamSet};
use willmore_core::geometry::{make_surface, ParametricShape, Vec3};
use willmore_core::oracles::{RadialField, SpheroidField};

fn direction() -> impl Strategy<Value = Vec3> {
    (-1.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(z, phi)| {
        let rho = (1.0 - z * z).sqrt();
        Vec3::new(rho * phi.cos(), rho * phi.sin(), z)
    })
}

/// Point of the 2:1 spheroid above a unit direction.
fn on_spheroid(dir: &Vec3) -> Vec3 {
    Vec3::new(2.0 * dir.x, dir.y, dir.z)
}

fn admissible() -> impl Strategy<Value = ParamSet> {
    (0.5f64..4.0, 0.0f64..3.0, -1.0f64..1.0).prop_map(|(beta, d, t)| {
        // c ranges over [−d, d + 1] so that c + d ≥ 0.
        let c = -d + (t + 1.0) / 2.0 * (2.0 * d + 1.0);
        ParamSet::new(beta, c, d)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn admissibility_matches_the_region(beta in -1.0f64..4.0, c in -3.0f64..3.0, d in -3.0f64..3.0) {
        let expected = c + d >= 0.0 && d >= 0.0 && beta >= 0.5;
        prop_assert_eq!(ParamSet::new(beta, c, d).validate().is_ok(), expected);
    }

    #[test]
    fn div_z_vanishes_outside_a_ball(dir in direction(), r in 1.05f64..30.0, p in admissible()) {
        let s = RadialField::ball3(1.0).sample(&(dir * r)).unwrap();
        prop_assert!(s.relative_trace() < 1e-12);
        let z = z_div_from_sample(&s, &p).unwrap();
        prop_assert!(z.div.abs() <= 1e-11 * z.scale, "{:?}", z);
        prop_assert!(z.kato_slack.abs() <= 1e-11 * s.hessian.norm_squared());
    }

    #[test]
    fn div_z_is_nonnegative_outside_a_spheroid(dir in direction(), r in 1.02f64..20.0, p in admissible()) {
        let x = on_spheroid(&dir) * r;
        let s = SpheroidField::new(2.0, 1.0).unwrap().sample(&x).unwrap();
        let z = z_div_from_sample(&s, &p).unwrap();
        prop_assert!(z.div >= -1e-12 * z.scale, "{:?}", z);
        prop_assert!(z.kato_slack >= -1e-12 * s.hessian.norm_squared());
    }

    #[test]
    fn spheroid_potential_is_between_zero_and_one(dir in direction(), r in 1.001f64..100.0) {
        let s = SpheroidField::new(2.0, 1.0).unwrap().sample(&(on_spheroid(&dir) * r)).unwrap();
        prop_assert!(s.u > 0.0 && s.u < 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ellipsoid_meshes_are_closed_spheres(a in 0.5f64..3.0, b in 0.5f64..3.0, c in 0.5f64..3.0, k in 0u32..3) {
        let mesh = make_surface(&ParametricShape::Ellipsoid { a, b, c }, k).unwrap();
        prop_assert_eq!(mesh.euler_characteristic(), 2);
        prop_assert_eq!(mesh.triangle_count(), 20 * 4usize.pow(k));
        prop_assert!(mesh.areas().iter().all(|x| *x > 0.0));
    }
}
