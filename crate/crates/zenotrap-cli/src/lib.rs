//! Scenario layer of the `zenotrap` binary: TOML configuration files,
//! built-in presets, and artifact generation. Exposed as a library so the
//! integration and acceptance tests can drive the exact code paths the
//! binary uses, in process.

pub mod config;
pub mod presets;
pub mod run;

use std::path::{Path, PathBuf};

use config::{load_config, ConfigError, ScenarioConfig};

/// Loads a scenario by preset name or, failing that, as a TOML config path.
/// Returns the config plus the directory that relative paths inside it
/// (custom weight files) are resolved against.
pub fn load_scenario(name_or_path: &str) -> Result<(ScenarioConfig, PathBuf), ConfigError> {
    if let Some(preset) = presets::preset(name_or_path) {
        return Ok((preset, PathBuf::from(".")));
    }
    load_config(Path::new(name_or_path))
}

/// Command-line adjustments folded into the scenario before it is resolved,
/// so the written manifest already reflects them and reproduces the run when
/// ingested again.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub epsilon: Option<f64>,
    pub points: Option<usize>,
    pub kappa_ratio: Option<f64>,
    pub coherence_frame: Option<String>,
}

pub fn apply_overrides(cfg: &mut ScenarioConfig, overrides: &Overrides) {
    if let Some(epsilon) = overrides.epsilon {
        cfg.distribution.epsilon = Some(epsilon);
    }
    if let Some(points) = overrides.points {
        cfg.grid.n_points = points;
    }
    if let Some(ratio) = overrides.kappa_ratio {
        cfg.params.kappa_ratio = Some(ratio);
        cfg.params.kappa_per_s = None;
    }
    if let Some(frame) = &overrides.coherence_frame {
        cfg.coherence_frame = Some(frame.clone());
    }
}
