//! Backend orchestration shared by the run, compare, sweep and
//! trajectories subcommands.

use qdwell::analytic;
use qdwell::dynamics::{evolve_exact, evolve_rk4, Backend, TimeSeries};
use qdwell::qstate::{make_initial_state, to_bloch};
use qdwell::trajectories::{run_trajectories, EnsembleSeries, JumpConfig};
use qdwell::{BlochVector, ChannelKind};

use crate::config::{BackendName, ResolvedScenario};
use crate::errors::{CliError, CliResult};

/// A propagated backend: the Bloch series, plus the per-component standard
/// errors when the backend is stochastic.
pub struct BackendRun {
    pub backend: BackendName,
    pub series: TimeSeries,
    pub stderr: Option<Vec<[f64; 3]>>,
    pub seed: Option<u64>,
}

fn analytic_series(sc: &ResolvedScenario) -> CliResult<TimeSeries> {
    let ch = &sc.model.channels()[0];
    let (k, omega) = (ch.rate(), sc.model.omega());
    let mut states = Vec::with_capacity(sc.t_grid.len());
    for &t in &sc.t_grid {
        let rho = match ch.kind() {
            ChannelKind::Dephasing => analytic::dephasing_solution(&sc.angles, k, omega, t)?,
            ChannelKind::SpinFlip => analytic::spinflip_solution(&sc.angles, k, omega, t)?,
            ChannelKind::Custom => {
                return Err(CliError::Usage(
                    "backend 'analytic' supports only dephasing and spin_flip channels".into(),
                ))
            }
        };
        states.push(to_bloch(&rho));
    }
    Ok(TimeSeries { times: sc.t_grid.clone(), states, provenance: Backend::Analytic })
}

fn ensemble(sc: &ResolvedScenario, seed_override: Option<u64>) -> CliResult<(EnsembleSeries, u64)> {
    let j = sc
        .config
        .jump
        .as_ref()
        .ok_or_else(|| CliError::Usage("trajectories backend needs 'jump' settings".into()))?;
    let seed = seed_override.unwrap_or(j.seed);
    let config = JumpConfig::new(j.n_trajectories, j.dt, seed)?;
    Ok((run_trajectories(&sc.angles, &sc.model, &sc.t_grid, &config)?, seed))
}

/// Propagate one backend on the scenario grid.
pub fn run_backend(
    sc: &ResolvedScenario,
    backend: BackendName,
    step_override: Option<f64>,
    seed_override: Option<u64>,
) -> CliResult<BackendRun> {
    let rho0 = make_initial_state(sc.angles);
    match backend {
        BackendName::Analytic => Ok(BackendRun {
            backend,
            series: analytic_series(sc)?,
            stderr: None,
            seed: None,
        }),
        BackendName::Rk4 => {
            let step = step_override.unwrap_or_else(|| sc.model.default_step());
            let series = evolve_rk4(&rho0, &sc.model, &sc.t_grid, step)?;
            Ok(BackendRun { backend, series, stderr: None, seed: None })
        }
        BackendName::Exact => {
            let series = evolve_exact(&rho0, &sc.model, &sc.t_grid)?;
            Ok(BackendRun { backend, series, stderr: None, seed: None })
        }
        BackendName::Trajectories => {
            let (ens, seed) = ensemble(sc, seed_override)?;
            let series = TimeSeries {
                times: ens.times.clone(),
                states: ens.mean.clone(),
                provenance: Backend::Trajectories,
            };
            Ok(BackendRun { backend, series, stderr: Some(ens.stderr), seed: Some(seed) })
        }
    }
}

/// Standard CSV rows: t, sx, sy, sz, p_left, purity.
pub const SERIES_HEADER: [&str; 6] = ["t", "sx", "sy", "sz", "p_left", "purity"];

pub fn series_rows(series: &TimeSeries) -> Vec<Vec<f64>> {
    series
        .times
        .iter()
        .zip(&series.states)
        .map(|(t, b)| vec![*t, b.sx, b.sy, b.sz, 0.5 * (1.0 + b.sx), b.norm_sq()])
        .collect()
}

/// Largest absolute per-component difference between two Bloch vectors.
pub fn bloch_deviation(a: &BlochVector, b: &BlochVector) -> f64 {
    (a.sx - b.sx).abs().max((a.sy - b.sy).abs()).max((a.sz - b.sz).abs())
}
