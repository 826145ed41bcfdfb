//! `qdwell run`: propagate every requested backend and emit one CSV per
//! backend plus a manifest (and optional SVG overlays).

use std::path::Path;

use serde::Serialize;

use crate::config::{self, FormatName, ScenarioConfig};
use crate::errors::CliResult;
use crate::output::{render_csv, render_svg, FileRecord, OutputSet};
use crate::scenario::{run_backend, series_rows, BackendRun, SERIES_HEADER};

#[derive(Serialize)]
struct RunManifest {
    tool: &'static str,
    version: &'static str,
    config: ScenarioConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    derived_omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    validity_ratio: Option<f64>,
    files: Vec<FileRecord>,
}

pub fn trajectory_rows(run: &BackendRun) -> Vec<Vec<f64>> {
    let stderr = run.stderr.as_ref().expect("stochastic backend carries errors");
    run.series
        .times
        .iter()
        .zip(&run.series.states)
        .zip(stderr)
        .map(|((t, b), e)| {
            vec![*t, b.sx, b.sy, b.sz, 0.5 * (1.0 + b.sx), b.norm_sq(), e[0], e[1], e[2]]
        })
        .collect()
}

pub const TRAJECTORY_HEADER: [&str; 9] =
    ["t", "sx", "sy", "sz", "p_left", "purity", "stderr_sx", "stderr_sy", "stderr_sz"];

pub fn execute(
    config: ScenarioConfig,
    out_dir: &Path,
    seed_override: Option<u64>,
    step_override: Option<f64>,
    formats_override: Option<Vec<FormatName>>,
) -> CliResult<()> {
    let sc = config::resolve(config)?;
    let formats = formats_override.unwrap_or_else(|| sc.config.output.formats.clone());

    let mut outputs = OutputSet::new(out_dir);
    let mut seed_used = None;
    for backend in sc.config.backends.clone() {
        let run = run_backend(&sc, backend, step_override, seed_override)?;
        if let Some(s) = run.seed {
            seed_used = Some(s);
        }
        let (header, rows): (Vec<&str>, Vec<Vec<f64>>) = if run.stderr.is_some() {
            (TRAJECTORY_HEADER.to_vec(), trajectory_rows(&run))
        } else {
            (SERIES_HEADER.to_vec(), series_rows(&run.series))
        };
        if formats.contains(&FormatName::Csv) {
            let csv = render_csv(&header, &rows);
            outputs.add(&format!("{}.csv", backend.label()), csv.into_bytes());
        }
        if formats.contains(&FormatName::Svg) {
            let p_left: Vec<f64> = rows.iter().map(|r| r[4]).collect();
            let purity: Vec<f64> = rows.iter().map(|r| r[5]).collect();
            let svg = render_svg(
                &format!("{} backend", backend.label()),
                &sc.t_grid,
                &[("p_left", &p_left), ("purity", &purity)],
            );
            outputs.add(&format!("{}.svg", backend.label()), svg.into_bytes());
        }
    }

    let manifest = RunManifest {
        tool: "qdwell",
        version: env!("CARGO_PKG_VERSION"),
        config: sc.config.clone(),
        seed: seed_used,
        derived_omega: sc.doublet.as_ref().map(|d| d.omega),
        validity_ratio: sc.doublet.as_ref().map(|d| d.validity_ratio),
        files: Vec::new(),
    };
    let manifest = RunManifest { files: outputs.records(), ..manifest };
    let written = outputs.commit("run_manifest.json", &manifest)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
