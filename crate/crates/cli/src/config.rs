//! JSON scenario configuration: schema types, parsing with field
//! diagnostics, and resolution into the core model types.

use std::path::Path;

use serde::{Deserialize, Serialize};

use qdwell::doublewell::{extract_doublet, solve_spectrum, BarrierShape, DoubletMap, PotentialSpec};
use qdwell::{ChannelSpec, ModelSpec, PureStateAngles};

use crate::errors::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub channels: Vec<ChannelConfig>,
    pub initial: InitialConfig,
    pub grid: GridConfig,
    pub backends: Vec<BackendName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump: Option<JumpSettings>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Either a direct tunnelling frequency or a double-well potential from
/// which the frequency is derived via the lowest doublet splitting.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelConfig {
    Omega { omega: f64 },
    Potential { potential: PotentialConfig },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub x_max: f64,
    pub v0: f64,
    pub barrier_half_width: f64,
    pub shape: ShapeName,
    #[serde(default = "default_n_grid")]
    pub n_grid: usize,
    /// Accept the two-level reduction even when the doublet diagnostics
    /// flag it as suspect (splitting/gap > 0.05).
    #[serde(default)]
    pub allow_suspect: bool,
}

fn default_n_grid() -> usize {
    2000
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeName {
    Rectangular,
    Gaussian,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub kind: ChannelName,
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelName {
    Dephasing,
    SpinFlip,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_end: f64,
    pub n_samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendName {
    Analytic,
    Rk4,
    Exact,
    Trajectories,
}

impl BackendName {
    pub fn label(&self) -> &'static str {
        match self {
            BackendName::Analytic => "analytic",
            BackendName::Rk4 => "rk4",
            BackendName::Exact => "exact",
            BackendName::Trajectories => "trajectories",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpSettings {
    pub n_trajectories: usize,
    pub dt: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_formats")]
    pub formats: Vec<FormatName>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { formats: default_formats() }
    }
}

fn default_formats() -> Vec<FormatName> {
    vec![FormatName::Csv, FormatName::Json]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormatName {
    Csv,
    Json,
    Svg,
}

/// Everything needed to actually propagate: core model types plus the
/// doublet diagnostics when the frequency came from a potential.
pub struct ResolvedScenario {
    pub config: ScenarioConfig,
    pub model: ModelSpec,
    pub angles: PureStateAngles,
    pub t_grid: Vec<f64>,
    pub doublet: Option<DoubletMap>,
}

pub fn load_config(path: &Path) -> CliResult<ScenarioConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Usage(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

pub fn build_potential(p: &PotentialConfig) -> CliResult<PotentialSpec> {
    let shape = match p.shape {
        ShapeName::Rectangular => BarrierShape::Rectangular,
        ShapeName::Gaussian => BarrierShape::Gaussian,
    };
    Ok(PotentialSpec::new(p.x_max, p.v0, p.barrier_half_width, shape)?)
}

/// Derive the tunnelling frequency from the lowest doublet of the potential.
pub fn derive_doublet(p: &PotentialConfig) -> CliResult<DoubletMap> {
    let potential = build_potential(p)?;
    let spectrum = solve_spectrum(&potential, p.n_grid, 3)?;
    Ok(extract_doublet(&spectrum, 1.0)?)
}

pub fn resolve(config: ScenarioConfig) -> CliResult<ResolvedScenario> {
    if !(config.grid.t_end > 0.0) {
        return Err(CliError::Usage(format!(
            "grid.t_end must be > 0, got {}",
            config.grid.t_end
        )));
    }
    if config.grid.n_samples < 2 {
        return Err(CliError::Usage(format!(
            "grid.n_samples must be >= 2, got {}",
            config.grid.n_samples
        )));
    }
    if config.backends.is_empty() {
        return Err(CliError::Usage("backends must be non-empty".into()));
    }
    for (i, b) in config.backends.iter().enumerate() {
        if config.backends[..i].contains(b) {
            return Err(CliError::Usage(format!("duplicate backend '{}'", b.label())));
        }
    }
    if config.backends.contains(&BackendName::Analytic) && config.channels.len() != 1 {
        return Err(CliError::Usage(format!(
            "backend 'analytic' needs exactly one channel, got {}",
            config.channels.len()
        )));
    }
    if config.backends.contains(&BackendName::Trajectories) && config.jump.is_none() {
        return Err(CliError::Usage(
            "backend 'trajectories' needs the 'jump' settings block".into(),
        ));
    }
    if let Some(j) = &config.jump {
        // surface bad values at config time with field names
        qdwell::trajectories::JumpConfig::new(j.n_trajectories, j.dt, j.seed)
            .map_err(|e| CliError::Usage(format!("jump: {e}")))?;
    }

    let (omega, doublet) = match &config.model {
        ModelConfig::Omega { omega } => (*omega, None),
        ModelConfig::Potential { potential } => {
            let doublet = derive_doublet(potential)?;
            if doublet.suspect && !potential.allow_suspect {
                return Err(CliError::Usage(format!(
                    "two-level reduction is suspect (splitting/gap = {:.3e} > 0.05); \
                     set potential.allow_suspect to proceed anyway",
                    doublet.validity_ratio
                )));
            }
            (doublet.omega, Some(doublet))
        }
    };

    let mut channels = Vec::new();
    for (i, c) in config.channels.iter().enumerate() {
        let built = match c.kind {
            ChannelName::Dephasing => ChannelSpec::dephasing(c.rate),
            ChannelName::SpinFlip => ChannelSpec::spin_flip(c.rate),
        };
        channels.push(built.map_err(|e| CliError::Usage(format!("channels[{i}]: {e}")))?);
    }

    let model = ModelSpec::new(omega, channels).map_err(|e| CliError::Usage(e.to_string()))?;
    let angles = PureStateAngles::new(config.initial.theta, config.initial.phi)
        .map_err(|e| CliError::Usage(format!("initial: {e}")))?;
    let t_grid = qdwell::dynamics::uniform_grid(config.grid.t_end, config.grid.n_samples);

    Ok(ResolvedScenario { config, model, angles, t_grid, doublet })
}
