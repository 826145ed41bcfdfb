//! `qdwell sweep`: vary exactly one parameter axis, run each point with the
//! exact propagator, and tabulate summary scalars. Points may execute in
//! parallel; the table is merged by point index and then ordered by axis
//! value, so the output is independent of scheduling.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{self, BackendName, ChannelConfig, ChannelName, ModelConfig, ScenarioConfig};
use crate::errors::{CliError, CliResult};
use crate::output::{render_csv, FileRecord, OutputSet};
use crate::scenario::run_backend;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Axis {
    Omega,
    K1,
    K2,
    Theta,
    V0,
}

impl Axis {
    pub fn label(&self) -> &'static str {
        match self {
            Axis::Omega => "omega",
            Axis::K1 => "k1",
            Axis::K2 => "k2",
            Axis::Theta => "theta",
            Axis::V0 => "v0",
        }
    }
}

/// How close P_l must stay to 1/2 to count as mixed.
const MIXING_BAND: f64 = 0.005;

/// First grid time after which |P_l - 1/2| stays within the band for the
/// rest of the run; NaN when the run never settles.
fn time_to_mixing(times: &[f64], p_left: &[f64]) -> f64 {
    let mut first = f64::NAN;
    for i in (0..times.len()).rev() {
        if (p_left[i] - 0.5).abs() <= MIXING_BAND {
            first = times[i];
        } else {
            break;
        }
    }
    first
}

fn apply_axis(base: &ScenarioConfig, axis: Axis, value: f64) -> CliResult<ScenarioConfig> {
    let mut c = base.clone();
    match axis {
        Axis::Omega => match &mut c.model {
            ModelConfig::Omega { omega } => *omega = value,
            ModelConfig::Potential { .. } => {
                return Err(CliError::Usage(
                    "sweeping omega needs a direct-omega model; this config derives it \
                     from a potential (sweep v0 instead)"
                        .into(),
                ))
            }
        },
        Axis::V0 => match &mut c.model {
            ModelConfig::Potential { potential } => potential.v0 = value,
            ModelConfig::Omega { .. } => {
                return Err(CliError::Usage(
                    "sweeping v0 needs a potential-sourced model".into(),
                ))
            }
        },
        Axis::Theta => c.initial.theta = value,
        Axis::K1 | Axis::K2 => {
            let kind = if axis == Axis::K1 { ChannelName::Dephasing } else { ChannelName::SpinFlip };
            match c.channels.iter_mut().find(|ch| ch.kind == kind) {
                Some(ch) => ch.rate = value,
                None => c.channels.push(ChannelConfig { kind, rate: value }),
            }
        }
    }
    Ok(c)
}

#[derive(Serialize)]
struct SweepManifest {
    version: &'static str,
    axis: String,
    values: Vec<f64>,
    files: Vec<FileRecord>,
}

pub fn execute(
    base: ScenarioConfig,
    out_dir: &Path,
    axis: Axis,
    values: &[f64],
) -> CliResult<()> {
    if values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one --values entry".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Usage("sweep values must be finite".into()));
    }

    // Summaries come from the exact propagator regardless of the backends
    // listed for single runs; one point = one deterministic solve.
    let results: Vec<CliResult<Vec<f64>>> = values
        .par_iter()
        .map(|&value| {
            let config = apply_axis(&base, axis, value)?;
            let sc = config::resolve(config)?;
            let run = run_backend(&sc, BackendName::Exact, None, None)?;
            let p_left: Vec<f64> =
                run.series.states.iter().map(|b| 0.5 * (1.0 + b.sx)).collect();
            let final_purity = run.series.states.last().unwrap().norm_sq();
            let mixing = time_to_mixing(&run.series.times, &p_left);
            let mut row = vec![value, final_purity, mixing];
            if axis == Axis::V0 {
                let doublet = sc.doublet.expect("v0 sweep is potential-sourced");
                row.push(doublet.omega);
                row.push(doublet.validity_ratio);
            }
            Ok(row)
        })
        .collect();

    let mut rows = Vec::with_capacity(values.len());
    for r in results {
        rows.push(r?);
    }
    rows.sort_by(|a, b| a[0].partial_cmp(&b[0]).expect("finite axis values"));

    let mut header = vec![axis.label(), "final_purity", "time_to_mixing"];
    if axis == Axis::V0 {
        header.push("omega");
        header.push("validity_ratio");
    }
    let csv = render_csv(&header, &rows);

    let mut outputs = OutputSet::new(out_dir);
    outputs.add("sweep.csv", csv.into_bytes());
    let manifest = SweepManifest {
        version: env!("CARGO_PKG_VERSION"),
        axis: axis.label().to_string(),
        values: values.to_vec(),
        files: outputs.records(),
    };
    let written = outputs.commit("sweep_manifest.json", &manifest)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
