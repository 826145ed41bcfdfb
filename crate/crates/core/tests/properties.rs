//! Property-based invariants for state handling and propagation.

use proptest::prelude::*;
use qdwell::dynamics::{evolve_rk4, uniform_grid};
use qdwell::qstate::{from_bloch, make_initial_state, purity, to_bloch};
use qdwell::{BlochVector, ChannelSpec, ModelSpec, PureStateAngles};

fn bloch_in_ball() -> impl Strategy<Value = BlochVector> {
    // Uniform in the cube, filtered to the physical ball |S| <= 1.
    (-1.0f64..=1.0, -1.0f64..=1.0, -1.0f64..=1.0)
        .prop_filter("inside Bloch ball", |(x, y, z)| x * x + y * y + z * z <= 1.0)
        .prop_map(|(x, y, z)| BlochVector::new(x, y, z))
}

fn angles() -> impl Strategy<Value = PureStateAngles> {
    (0.0f64..=std::f64::consts::PI, 0.0f64..std::f64::consts::TAU)
        .prop_map(|(t, p)| PureStateAngles::new(t, p).unwrap())
}

proptest! {
    #[test]
    fn bloch_round_trip_is_identity(s in bloch_in_ball()) {
        let rho = from_bloch(&s).unwrap();
        let back = to_bloch(&rho);
        prop_assert!((back.sx - s.sx).abs() <= 1e-14);
        prop_assert!((back.sy - s.sy).abs() <= 1e-14);
        prop_assert!((back.sz - s.sz).abs() <= 1e-14);
    }

    #[test]
    fn purity_equals_bloch_norm(s in bloch_in_ball()) {
        let rho = from_bloch(&s).unwrap();
        prop_assert!((purity(&rho) - s.norm_sq()).abs() <= 1e-14);
    }

    #[test]
    fn initial_states_are_pure(a in angles()) {
        let rho = make_initial_state(a);
        prop_assert!((purity(&rho) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn unphysical_bloch_rejected(
        s in (-1.0f64..=1.0, -1.0f64..=1.0, -1.0f64..=1.0)
            .prop_filter("outside ball", |(x, y, z)| x * x + y * y + z * z > 1.0 + 1e-9)
            .prop_map(|(x, y, z)| BlochVector::new(x, y, z)),
    ) {
        prop_assert!(from_bloch(&s).is_err());
    }

    #[test]
    fn rk4_preserves_physicality(
        a in angles(),
        omega in 0.0f64..15.0,
        k1 in 0.0f64..1.5,
        k2 in 0.0f64..1.5,
    ) {
        // Every emitted sample is re-validated inside evolve_rk4; the run
        // succeeding is the trace/Hermiticity/positivity invariant.
        let model = ModelSpec::new(
            omega,
            vec![
                ChannelSpec::dephasing(k1).unwrap(),
                ChannelSpec::spin_flip(k2).unwrap(),
            ],
        )
        .unwrap();
        let rho0 = make_initial_state(a);
        let series = evolve_rk4(&rho0, &model, &uniform_grid(1.0, 6), model.default_step())
            .unwrap();
        for b in &series.states {
            prop_assert!(b.norm_sq() <= 1.0 + 1e-12);
        }
    }
}
