use proptest::prelude::*;
use variastar_core::dynamics::{analytic_state, integrate_rk4, resultant_velocity_toward, total_energy};
use variastar_core::variational::{
    arc_length, arc_length_gradient, discrete_action, discrete_action_gradient, minimize_arclength, perturbed_chord,
};
use variastar_core::{DiscretePath, KinematicState, MechanicsParams, MinimizeOptions, Vec3};

fn vec3(range: f64) -> impl Strategy<Value = Vec3> {
    (-range..range, -range..range, -range..range).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

/// Rotation by `angle` about `axis` (Rodrigues).
fn rotate(p: Vec3, axis: Vec3, angle: f64) -> Vec3 {
    let k = axis.normalized().unwrap();
    let (s, c) = angle.sin_cos();
    p * c + k.cross(p) * s + k * (k.dot(p) * (1.0 - c))
}

fn axis() -> impl Strategy<Value = Vec3> {
    vec3(1.0).prop_filter("usable axis", |a| a.norm() > 0.1)
}

/// Central difference of `f` along coordinate `c` of point `i`.
fn numeric_partial(points: &[Vec3], i: usize, c: usize, f: &dyn Fn(&[Vec3]) -> f64) -> f64 {
    let h = 1e-6;
    let shifted = |delta: f64| {
        let mut p = points.to_vec();
        let mut arr = p[i].to_array();
        arr[c] += delta;
        p[i] = Vec3::new(arr[0], arr[1], arr[2]);
        f(&p)
    };
    (shifted(h) - shifted(-h)) / (2.0 * h)
}

fn assert_gradient(points: &[Vec3], analytic: &[Vec3], f: &dyn Fn(&[Vec3]) -> f64) -> Result<(), TestCaseError> {
    let scale = analytic.iter().map(|g| g.max_abs()).fold(1.0, f64::max);
    let interior = analytic.iter().enumerate().take(points.len() - 1).skip(1);
    for (i, grad) in interior {
        for (c, g) in grad.to_array().into_iter().enumerate() {
            let numeric = numeric_partial(points, i, c, f);
            prop_assert!((numeric - g).abs() <= 1e-6 * scale, "point {i} axis {c}: {numeric} vs {g}");
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resultant_velocity_is_rotation_invariant(
        pos in vec3(10.0),
        vel in vec3(10.0),
        goal in vec3(10.0),
        ax in axis(),
        angle in -3.0f64..3.0,
    ) {
        prop_assume!(pos.distance(goal) > 1e-3);
        let before = resultant_velocity_toward(&KinematicState::new(pos, vel, 0.0), goal).unwrap();
        let rotated = KinematicState::new(rotate(pos, ax, angle), rotate(vel, ax, angle), 0.0);
        let after = resultant_velocity_toward(&rotated, rotate(goal, ax, angle)).unwrap();
        prop_assert!((before - after).abs() <= 1e-9 * vel.norm().max(1.0));
    }

    #[test]
    fn rk4_follows_closed_form(pos in vec3(5.0), vel in vec3(20.0), mass in 0.1f64..10.0) {
        let params = MechanicsParams::new(mass, 9.81).unwrap();
        let initial = KinematicState::new(pos, vel, 0.0);
        let traj = integrate_rk4(&initial, 1e-2, 3.0, &params).unwrap();
        let e0 = total_energy(&initial, &params);
        let scale = traj.samples().iter().map(|s| total_energy(s, &params).abs()).fold(mass, f64::max);
        for s in traj.samples() {
            let exact = analytic_state(&initial, s.time, &params);
            prop_assert!(s.position.distance(exact.position) <= 1e-9);
            prop_assert!((total_energy(s, &params) - e0).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn arc_length_gradient_matches_finite_differences(points in prop::collection::vec(vec3(3.0), 3..9)) {
        let segments_ok = points.windows(2).all(|w| w[0].distance(w[1]) > 1e-2);
        prop_assume!(segments_ok);
        let f = |p: &[Vec3]| arc_length(&DiscretePath::new(p.to_vec()).unwrap());
        assert_gradient(&points, &arc_length_gradient(&points), &f)?;
    }

    #[test]
    fn action_gradient_matches_finite_differences(
        points in prop::collection::vec(vec3(3.0), 3..9),
        dt in 0.05f64..0.5,
        mass in 0.1f64..5.0,
    ) {
        let params = MechanicsParams::new(mass, 9.81).unwrap();
        let f = |p: &[Vec3]| discrete_action(p, dt, &params);
        assert_gradient(&points, &discrete_action_gradient(&points, dt, &params), &f)?;
    }

    #[test]
    fn arc_length_is_at_least_the_chord(points in prop::collection::vec(vec3(5.0), 3..12)) {
        let path = DiscretePath::new(points).unwrap();
        prop_assert!(arc_length(&path) >= path.first().distance(path.last()) - 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn geodesic_is_rotation_equivariant(
        a in vec3(2.0),
        b in vec3(2.0),
        ax in axis(),
        angle in -3.0f64..3.0,
    ) {
        prop_assume!(a.distance(b) > 0.5);
        let opts = MinimizeOptions::default();
        let init = perturbed_chord(a, b, 9, 0.3).unwrap();
        let rotated_init =
            DiscretePath::new(init.points().iter().map(|&p| rotate(p, ax, angle)).collect()).unwrap();
        let plain = minimize_arclength(a, b, 9, Some(&init), &opts).unwrap();
        let turned = minimize_arclength(
            rotated_init.first(),
            rotated_init.last(),
            9,
            Some(&rotated_init),
            &opts,
        )
        .unwrap();
        for (p, q) in plain.result.points().iter().zip(turned.result.points()) {
            prop_assert!(rotate(*p, ax, angle).distance(*q) <= 1e-6);
        }
    }
}
