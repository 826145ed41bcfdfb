//! Cross-validation of the three back ends against one another and against
//! an independent Bloch-equation integrator written directly in this file
//! (no shared code with the library's propagators).

use qdwell::analytic;
use qdwell::dynamics::{evolve_exact, uniform_grid};
use qdwell::qstate::to_bloch;
use qdwell::trajectories::{run_trajectories, JumpConfig};
use qdwell::{ChannelSpec, ModelSpec, PureStateAngles};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy)]
enum Channel {
    Dephasing,
    SpinFlip,
}

/// Bloch-vector right-hand side for a single decay channel, derived by hand
/// from the master equation (independent of the library's Liouvillian).
fn bloch_rhs(ch: Channel, k: f64, omega: f64, s: [f64; 3]) -> [f64; 3] {
    match ch {
        // sigma_z dephasing: coherences damp at 2 k1, populations frozen.
        Channel::Dephasing => [
            -2.0 * k * s[0] + omega * s[1],
            -omega * s[0] - 2.0 * k * s[1],
            0.0,
        ],
        // sigma_x flips: Sx undamped by the channel, Sy and Sz damp at 2 k2.
        Channel::SpinFlip => [
            omega * s[1],
            -omega * s[0] - 2.0 * k * s[1],
            -2.0 * k * s[2],
        ],
    }
}

/// Classical RK4 on the 3-component Bloch equations.
fn integrate_bloch(ch: Channel, k: f64, omega: f64, s0: [f64; 3], t_end: f64, h: f64) -> [f64; 3] {
    let n = (t_end / h).ceil() as usize;
    let h = if n == 0 { h } else { t_end / n as f64 };
    let mut s = s0;
    let axpy = |s: [f64; 3], a: f64, d: [f64; 3]| {
        [s[0] + a * d[0], s[1] + a * d[1], s[2] + a * d[2]]
    };
    for _ in 0..n {
        let k1 = bloch_rhs(ch, k, omega, s);
        let k2 = bloch_rhs(ch, k, omega, axpy(s, 0.5 * h, k1));
        let k3 = bloch_rhs(ch, k, omega, axpy(s, 0.5 * h, k2));
        let k4 = bloch_rhs(ch, k, omega, axpy(s, h, k3));
        for i in 0..3 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    s
}

fn draw_params(rng: &mut ChaCha8Rng) -> (PureStateAngles, f64, f64) {
    let theta = rng.gen_range(0.0..=std::f64::consts::PI);
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let k = rng.gen_range(0.0..3.0);
    let omega = rng.gen_range(0.0..20.0);
    (PureStateAngles::new(theta, phi).unwrap(), k, omega)
}

fn check_channel_against_exact(ch: Channel) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0a11ce);
    let t_grid: Vec<f64> = (0..=40).map(|j| 0.05 * j as f64).collect();
    for draw in 0..50 {
        let (angles, k, omega) = draw_params(&mut rng);
        let spec = match ch {
            Channel::Dephasing => ChannelSpec::dephasing(k).unwrap(),
            Channel::SpinFlip => ChannelSpec::spin_flip(k).unwrap(),
        };
        let model = ModelSpec::new(omega, vec![spec]).unwrap();
        let rho0 = qdwell::qstate::make_initial_state(angles);
        let exact = evolve_exact(&rho0, &model, &t_grid).unwrap();
        for (i, &t) in t_grid.iter().enumerate() {
            let rho = match ch {
                Channel::Dephasing => analytic::dephasing_solution(&angles, k, omega, t),
                Channel::SpinFlip => analytic::spinflip_solution(&angles, k, omega, t),
            }
            .unwrap();
            let b = to_bloch(&rho);
            let e = &exact.states[i];
            let dev = (b.sx - e.sx)
                .abs()
                .max((b.sy - e.sy).abs())
                .max((b.sz - e.sz).abs());
            assert!(
                dev <= 1e-9,
                "draw {draw}: analytic vs exact deviates by {dev:.3e} at t={t} \
                 (k={k}, omega={omega})"
            );
        }
    }
}

#[test]
fn analytic_matches_exact_dephasing_50_draws() {
    check_channel_against_exact(Channel::Dephasing);
}

#[test]
fn analytic_matches_exact_spinflip_50_draws() {
    check_channel_against_exact(Channel::SpinFlip);
}

#[test]
fn analytic_matches_independent_ode() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for ch in [Channel::Dephasing, Channel::SpinFlip] {
        for _ in 0..8 {
            let (angles, k, omega) = draw_params(&mut rng);
            let (st, ct) = (angles.theta().sin(), angles.theta().cos());
            let s0 = [st * angles.phi().cos(), -st * angles.phi().sin(), ct];
            for t in [0.3, 1.1, 2.0] {
                let s = integrate_bloch(ch, k, omega, s0, t, 1e-4);
                let rho = match ch {
                    Channel::Dephasing => analytic::dephasing_solution(&angles, k, omega, t),
                    Channel::SpinFlip => analytic::spinflip_solution(&angles, k, omega, t),
                }
                .unwrap();
                let b = to_bloch(&rho);
                for (a, o) in [(b.sx, s[0]), (b.sy, s[1]), (b.sz, s[2])] {
                    assert!(
                        (a - o).abs() <= 1e-8,
                        "analytic {a} vs independent ODE {o} (k={k}, omega={omega}, t={t})"
                    );
                }
            }
        }
    }
}

#[test]
fn exact_propagation_stays_physical_on_random_models() {
    // evolve_exact re-validates every emitted state (trace, Hermiticity,
    // positivity); surviving the run is the invariant. Purity must also
    // never exceed 1.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..40 {
        let (angles, _, omega) = draw_params(&mut rng);
        let k1 = rng.gen_range(0.0..2.0);
        let k2 = rng.gen_range(0.0..2.0);
        let model = ModelSpec::new(
            omega,
            vec![
                ChannelSpec::dephasing(k1).unwrap(),
                ChannelSpec::spin_flip(k2).unwrap(),
            ],
        )
        .unwrap();
        let rho0 = qdwell::qstate::make_initial_state(angles);
        let series = evolve_exact(&rho0, &model, &uniform_grid(3.0, 31)).unwrap();
        for b in &series.states {
            assert!(b.norm_sq() <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn trajectories_track_exact_solution() {
    let angles = PureStateAngles::new(std::f64::consts::FRAC_PI_2, 0.0).unwrap();
    let model = ModelSpec::new(10.0, vec![ChannelSpec::dephasing(0.1).unwrap()]).unwrap();
    let t_grid = uniform_grid(1.0, 11);
    let rho0 = qdwell::qstate::make_initial_state(angles);
    let exact = evolve_exact(&rho0, &model, &t_grid).unwrap();
    let config = JumpConfig::new(4000, 2e-4, 11).unwrap();
    let ens = run_trajectories(&angles, &model, &t_grid, &config).unwrap();
    for i in 0..t_grid.len() {
        let dev = (ens.mean[i].sx - exact.states[i].sx).abs();
        let bound = 5e-3 + 4.0 * ens.stderr[i][0];
        assert!(
            dev <= bound,
            "mean Sx off by {dev:.3e} > {bound:.3e} at t={}",
            t_grid[i]
        );
    }
}

#[test]
fn trajectories_consistent_under_dt_halving() {
    // The ensemble mean must be stable (within combined statistical error
    // plus the discretization allowance) when the step is halved.
    let angles = PureStateAngles::new(std::f64::consts::FRAC_PI_2, 0.0).unwrap();
    let model = ModelSpec::new(10.0, vec![ChannelSpec::spin_flip(0.5).unwrap()]).unwrap();
    let t_grid = uniform_grid(0.5, 6);
    let run = |dt: f64| {
        let config = JumpConfig::new(20_000, dt, 2024).unwrap();
        run_trajectories(&angles, &model, &t_grid, &config).unwrap()
    };
    let coarse = run(2e-3);
    let fine = run(1e-3);
    for i in 0..t_grid.len() {
        for c in 0..3 {
            let a = [coarse.mean[i].sx, coarse.mean[i].sy, coarse.mean[i].sz][c];
            let b = [fine.mean[i].sx, fine.mean[i].sy, fine.mean[i].sz][c];
            let sigma = (coarse.stderr[i][c].powi(2) + fine.stderr[i][c].powi(2)).sqrt();
            assert!(
                (a - b).abs() <= 2e-3 + 4.0 * sigma,
                "component {c} at t={} moved {:.3e} under dt halving",
                t_grid[i],
                (a - b).abs()
            );
        }
    }
}
