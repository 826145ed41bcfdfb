//! `qdwell trajectories`: run only the stochastic backend, exporting the
//! ensemble mean with per-component standard errors.

use std::path::Path;

use serde::Serialize;

use crate::config::{self, BackendName, FormatName, ScenarioConfig};
use crate::errors::CliResult;
use crate::output::{render_csv, render_svg, FileRecord, OutputSet};
use crate::scenario::run_backend;

use super::run::{trajectory_rows, TRAJECTORY_HEADER};

#[derive(Serialize)]
struct Manifest {
    version: &'static str,
    config: ScenarioConfig,
    seed: u64,
    files: Vec<FileRecord>,
}

pub fn execute(
    mut config: ScenarioConfig,
    out_dir: &Path,
    seed_override: Option<u64>,
    formats_override: Option<Vec<FormatName>>,
) -> CliResult<()> {
    // This subcommand is the stochastic backend regardless of what the
    // config lists for `run`.
    config.backends = vec![BackendName::Trajectories];
    let sc = config::resolve(config)?;
    let formats = formats_override.unwrap_or_else(|| sc.config.output.formats.clone());

    let run = run_backend(&sc, BackendName::Trajectories, None, seed_override)?;
    let seed = run.seed.expect("stochastic backend reports its seed");
    let rows = trajectory_rows(&run);

    let mut outputs = OutputSet::new(out_dir);
    if formats.contains(&FormatName::Csv) {
        let csv = render_csv(&TRAJECTORY_HEADER, &rows);
        outputs.add("trajectories.csv", csv.into_bytes());
    }
    if formats.contains(&FormatName::Svg) {
        let p_left: Vec<f64> = rows.iter().map(|r| r[4]).collect();
        let purity: Vec<f64> = rows.iter().map(|r| r[5]).collect();
        let svg = render_svg(
            "trajectories backend",
            &sc.t_grid,
            &[("p_left", &p_left), ("purity", &purity)],
        );
        outputs.add("trajectories.svg", svg.into_bytes());
    }
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        config: sc.config.clone(),
        seed,
        files: outputs.records(),
    };
    let written = outputs.commit("trajectories_manifest.json", &manifest)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
