//! Quantum-jump Monte Carlo unraveling of the master equation.
//!
//! First-order jump scheme: in each step of width dt a jump k fires with
//! probability dt <G_k^+ G_k>, applying G_k|psi>/norm; otherwise the state
//! drifts under exp(-i dt H_eff) with H_eff = H - (i/2) sum_k G_k^+ G_k and
//! is renormalized. Trajectory streams are derived only from (seed, index),
//! and the ensemble reduction runs in trajectory-index order, so results are
//! independent of scheduling.

use crate::error::{Error, Result};
use crate::linalg::{C64, I, Mat2, sigma_z};
use crate::dynamics::ModelSpec;
use crate::qstate::{BlochVector, PureStateAngles};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const MAX_STEP_JUMP_PROB: f64 = 0.05;
const BLOCK: usize = 64;

#[derive(Debug, Clone, Copy)]
pub struct JumpConfig {
    pub n_trajectories: usize,
    pub dt: f64,
    pub seed: u64,
}

impl JumpConfig {
    pub fn new(n_trajectories: usize, dt: f64, seed: u64) -> Result<Self> {
        if n_trajectories == 0 {
            return Err(Error::Config("n_trajectories must be positive".into()));
        }
        if !(dt > 0.0) {
            return Err(Error::Config(format!("dt must be > 0, got {dt}")));
        }
        Ok(JumpConfig { n_trajectories, dt, seed })
    }
}

/// Ensemble mean Bloch vector with per-component standard errors.
#[derive(Debug, Clone)]
pub struct EnsembleSeries {
    pub times: Vec<f64>,
    pub mean: Vec<BlochVector>,
    pub stderr: Vec<[f64; 3]>,
}

/// Independent reproducible random stream for one trajectory.
pub fn trajectory_rng(seed: u64, trajectory_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trajectory_index);
    rng
}

struct Step {
    drift: Mat2,
    width: f64,
    sample: bool,
}

fn build_schedule(t_grid: &[f64], dt: f64, h_eff: &Mat2) -> Vec<Step> {
    let mut drift_cache: Vec<(f64, Mat2)> = Vec::new();
    let mut drift_for = |h: f64| -> Mat2 {
        if let Some((_, m)) = drift_cache.iter().find(|(w, _)| *w == h) {
            return *m;
        }
        let m = h_eff.scale(-I * C64::new(h, 0.0)).expm();
        drift_cache.push((h, m));
        m
    };
    let mut steps = Vec::new();
    let mut t = 0.0f64;
    let eps = dt * 1e-9;
    for &target in t_grid {
        if target <= t + eps {
            // sampling the initial point (or a duplicate-width roundoff)
            steps.push(Step { drift: Mat2::zero(), width: 0.0, sample: true });
            continue;
        }
        while t + dt <= target + eps {
            steps.push(Step { drift: drift_for(dt), width: dt, sample: false });
            t += dt;
        }
        let rem = target - t;
        if rem > eps {
            steps.push(Step { drift: drift_for(rem), width: rem, sample: false });
            t = target;
        }
        if let Some(last) = steps.last_mut() {
            last.sample = true;
        }
    }
    steps
}

fn bloch_of(psi: &[C64; 2]) -> [f64; 3] {
    let coh = psi[0] * psi[1].conj();
    [2.0 * coh.re, 2.0 * coh.im, psi[0].norm_sqr() - psi[1].norm_sqr()]
}

fn normalize(psi: &mut [C64; 2]) {
    let n = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
    psi[0] /= n;
    psi[1] /= n;
}

/// Run the jump unraveling and return the ensemble mean and standard error
/// per Bloch component on `t_grid`.
pub fn run_trajectories(
    angles: &PureStateAngles,
    model: &ModelSpec,
    t_grid: &[f64],
    config: &JumpConfig,
) -> Result<EnsembleSeries> {
    if t_grid.is_empty() {
        return Err(Error::Config("empty time grid".into()));
    }
    for w in t_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Config("time grid must be strictly increasing".into()));
        }
    }

    let jumps: Vec<(Mat2, Mat2)> = model
        .channels()
        .iter()
        .filter(|c| c.rate() > 0.0)
        .map(|c| {
            let g = c.jump_operator();
            let gdg = g.adjoint().mul(&g);
            (g, gdg)
        })
        .collect();

    // per-step worst-case jump probability must stay in the first-order regime
    let worst: f64 = jumps
        .iter()
        .map(|(_, gdg)| gdg.hermitian_eigenvalues()[1])
        .sum::<f64>()
        * config.dt;
    if worst >= MAX_STEP_JUMP_PROB {
        return Err(Error::Config(format!(
            "per-step jump probability {worst:.3} exceeds {MAX_STEP_JUMP_PROB}; reduce dt"
        )));
    }

    // H_eff = (omega/2) sigma_z - (i/2) sum G^+G (commutator sign convention
    // of the master equation)
    let mut h_eff = sigma_z().scale(C64::new(0.5 * model.omega(), 0.0));
    for (_, gdg) in &jumps {
        h_eff = h_eff.add(&gdg.scale(-I * C64::new(0.5, 0.0)));
    }
    let schedule = build_schedule(t_grid, config.dt, &h_eff);
    let n_samples = t_grid.len();

    let half = 0.5 * angles.theta();
    let psi0 = [
        C64::new(half.cos(), 0.0),
        C64::from_polar(half.sin(), angles.phi()),
    ];

    let n = config.n_trajectories;
    let n_blocks = (n + BLOCK - 1) / BLOCK;
    let blocks: Vec<(Vec<[f64; 3]>, Vec<[f64; 3]>)> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut sum = vec![[0.0f64; 3]; n_samples];
            let mut sumsq = vec![[0.0f64; 3]; n_samples];
            for idx in (b * BLOCK)..((b + 1) * BLOCK).min(n) {
                let mut rng = trajectory_rng(config.seed, idx as u64);
                let mut psi = psi0;
                let mut cursor = 0usize;
                for step in &schedule {
                    if step.width > 0.0 {
                        let u: f64 = rng.gen();
                        let mut acc = 0.0;
                        let mut jumped = false;
                        for (g, gdg) in &jumps {
                            let v = gdg.apply(psi);
                            let expect =
                                (psi[0].conj() * v[0] + psi[1].conj() * v[1]).re;
                            acc += step.width * expect;
                            if u < acc {
                                psi = g.apply(psi);
                                normalize(&mut psi);
                                jumped = true;
                                break;
                            }
                        }
                        if !jumped {
                            psi = step.drift.apply(psi);
                            normalize(&mut psi);
                        }
                    }
                    if step.sample {
                        let s = bloch_of(&psi);
                        for c in 0..3 {
                            sum[cursor][c] += s[c];
                            sumsq[cursor][c] += s[c] * s[c];
                        }
                        cursor += 1;
                    }
                }
                debug_assert_eq!(cursor, n_samples);
            }
            (sum, sumsq)
        })
        .collect();

    // deterministic fold in block order
    let mut sum = vec![[0.0f64; 3]; n_samples];
    let mut sumsq = vec![[0.0f64; 3]; n_samples];
    for (bs, bq) in &blocks {
        for i in 0..n_samples {
            for c in 0..3 {
                sum[i][c] += bs[i][c];
                sumsq[i][c] += bq[i][c];
            }
        }
    }

    let nf = n as f64;
    let mut mean = Vec::with_capacity(n_samples);
    let mut stderr = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let m = [sum[i][0] / nf, sum[i][1] / nf, sum[i][2] / nf];
        mean.push(BlochVector::new(m[0], m[1], m[2]));
        let mut se = [0.0f64; 3];
        if n > 1 {
            for c in 0..3 {
                let var = ((sumsq[i][c] - sum[i][c] * sum[i][c] / nf) / (nf - 1.0)).max(0.0);
                se[c] = (var / nf).sqrt();
            }
        }
        stderr.push(se);
    }

    Ok(EnsembleSeries { times: t_grid.to_vec(), mean, stderr })
}
