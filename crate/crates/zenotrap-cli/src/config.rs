//! Scenario configuration: the TOML schema, its validation, and its
//! resolution into library types.
//!
//! A config stores what the user chose, not what it implies: the drive
//! strength may be given as a bare `omega0_hz` or back-solved from a target
//! sideband coupling `rabi_ref_hz`, and the measurement as an absolute
//! `kappa_per_s` or as `kappa_ratio` times the critical coupling of the
//! reference manifold. Written manifests echo the resolved numbers under
//! `[derived]`, which is ignored when a manifest is ingested again, so a
//! manifest re-run resolves bit-identically.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

use zenotrap::distribution::{
    coherent_distribution, custom_distribution, fock_distribution, thermal_distribution,
    DistributionError, VibrationalDistribution,
};
use zenotrap::grid::{GridError, TimeGrid};
use zenotrap::manifold::CoherenceFrame;
use zenotrap::params::{validate_params, ParamsError, SystemParams};
use zenotrap::rabi::{critical_coupling, geometry_factor, rabi_frequency, RabiError};
use zenotrap::units::{angular_to_cyclic, cyclic_to_angular};

/// Truncation tolerance used when a config does not set one.
pub const DEFAULT_EPSILON: f64 = 1e-10;
/// Highest manifold in threshold maps when neither config nor flag sets one.
pub const DEFAULT_THRESHOLD_N_MAX: u32 = 25;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("could not read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("could not parse config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("scenario name {0:?} must be non-empty and free of path separators")]
    BadName(String),
    #[error("params needs exactly one of omega0_hz or rabi_ref_hz")]
    AmbiguousDriveStrength,
    #[error("params accepts at most one of kappa_per_s or kappa_ratio")]
    AmbiguousKappa,
    #[error("unknown coherence frame {0:?}; expected \"paper\" or \"lab\"")]
    UnknownFrame(String),
    #[error("unknown distribution kind {0:?}; expected coherent, thermal, fock, or custom")]
    UnknownDistribution(String),
    #[error("distribution kind {kind:?} requires the field {field:?}")]
    MissingDistributionField {
        kind: &'static str,
        field: &'static str,
    },
    #[error("sideband coupling at n_ref = {n_ref} vanishes; cannot back-solve omega0")]
    VanishingReference { n_ref: u32 },
    #[error("could not read weights file {path}: {source}")]
    WeightsFile {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("bad weight entry {token:?} in {path}")]
    WeightsParse { path: PathBuf, token: String },
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Rabi(#[from] RabiError),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// One simulation scenario as written in TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Artifact base name: `<name>_trace.csv`, `<name>_manifest.toml`, ...
    pub name: String,
    /// Frame of reported coherences: `"paper"` (default) keeps the sideband
    /// interaction frame, `"lab"` restores the full drive phase. Populations
    /// are frame-invariant, so traces do not depend on it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coherence_frame: Option<String>,
    pub params: ParamsSection,
    pub distribution: DistributionSection,
    pub grid: GridSection,
    #[serde(default)]
    pub output: OutputSection,
    /// Resolved quantities echoed into manifests, informational only;
    /// ignored when a manifest is ingested as a config.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived: Option<toml::Value>,
}

/// Physical parameters in experiment units: cyclic frequencies in Hz,
/// rates in 1/s, `phi` in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub omega_hz: f64,
    pub omega21_hz: f64,
    /// Bare carrier Rabi frequency. Exactly one of this and `rabi_ref_hz`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0_hz: Option<f64>,
    /// Target |sideband coupling|/2pi at manifold `n_ref`; the carrier
    /// strength is back-solved so the coupling comes out at this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi_ref_hz: Option<f64>,
    /// Reference manifold for `rabi_ref_hz` and `kappa_ratio`. Default 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_ref: Option<u32>,
    pub eta: f64,
    pub phi: f64,
    pub sideband_k: i32,
    /// Absolute measurement coupling. At most one of this and `kappa_ratio`;
    /// neither means unmeasured (`kappa = 0`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_per_s: Option<f64>,
    /// Measurement coupling as a fraction of the critical coupling
    /// `4 |Omega_{n_ref,k}|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionSection {
    /// `"coherent"`, `"thermal"`, `"fock"`, or `"custom"`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_bar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Weights file for `custom`: one nonnegative weight per line, `#`
    /// comments allowed; normalized on load. Relative paths are taken
    /// relative to the config file's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default)]
    pub t_start_s: f64,
    pub t_end_s: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Write `<name>_trace.csv`. Default true.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<bool>,
    /// Add the closed-form collapse envelope column (coherent ensembles on
    /// first sidebands only). Default false.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<bool>,
    /// Add per-manifold contribution columns `m0,m1,...`. Default false.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_manifold: Option<bool>,
    /// Write `<name>_threshold.csv` with the critical-coupling map.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_map: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_n_max: Option<u32>,
    /// Write `<name>.gp`, a gnuplot script over the run's CSV artifacts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot_script: Option<bool>,
}

impl OutputSection {
    pub fn trace_enabled(&self) -> bool {
        self.trace.unwrap_or(true)
    }
    pub fn envelope_enabled(&self) -> bool {
        self.envelope.unwrap_or(false)
    }
    pub fn per_manifold_enabled(&self) -> bool {
        self.per_manifold.unwrap_or(false)
    }
    pub fn threshold_map_enabled(&self) -> bool {
        self.threshold_map.unwrap_or(false)
    }
    pub fn plot_script_enabled(&self) -> bool {
        self.plot_script.unwrap_or(false)
    }
}

/// A config resolved into library types, ready to run.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub params: SystemParams,
    pub frame: CoherenceFrame,
    pub distribution: VibrationalDistribution,
    pub grid: TimeGrid,
    /// Critical coupling `4 |Omega_{n_ref,k}|` of the reference manifold.
    pub kappa_crit_ref: f64,
    pub n_ref: u32,
    pub warnings: Vec<String>,
}

pub fn load_config(path: &Path) -> Result<(ScenarioConfig, PathBuf), ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let cfg: ScenarioConfig = toml::from_str(&text)?;
    let base = path.parent().filter(|p| !p.as_os_str().is_empty());
    Ok((cfg, base.unwrap_or_else(|| Path::new(".")).to_path_buf()))
}

pub fn parse_frame(token: Option<&str>) -> Result<CoherenceFrame, ConfigError> {
    match token {
        None | Some("paper") => Ok(CoherenceFrame::Sideband),
        Some("lab") => Ok(CoherenceFrame::Lab),
        Some(other) => Err(ConfigError::UnknownFrame(other.to_string())),
    }
}

fn check_name(name: &str) -> Result<(), ConfigError> {
    let clean = !name.is_empty()
        && !name.contains(['/', '\\'])
        && !name.contains("..")
        && name != "."
        && !name.chars().any(char::is_whitespace);
    if clean {
        Ok(())
    } else {
        Err(ConfigError::BadName(name.to_string()))
    }
}

fn resolve_omega0(section: &ParamsSection) -> Result<f64, ConfigError> {
    let n_ref = section.n_ref.unwrap_or(0);
    match (section.omega0_hz, section.rabi_ref_hz) {
        (Some(f_hz), None) => Ok(cyclic_to_angular(f_hz)),
        (None, Some(ref_hz)) => {
            // Unit-strength probe: the coupling is linear in omega0, so the
            // back-solved strength is target / |coupling at omega0 = 1|.
            let probe = SystemParams {
                omega: cyclic_to_angular(section.omega_hz),
                omega21: cyclic_to_angular(section.omega21_hz),
                omega0: 1.0,
                eta: section.eta,
                phi: section.phi,
                sideband_k: section.sideband_k,
                kappa: 0.0,
            };
            let unit = rabi_frequency(&probe, n_ref)?.omega_nk.abs();
            let node = geometry_factor(section.phi, section.sideband_k).abs() <= 1e-9;
            if node || unit == 0.0 {
                return Err(ConfigError::VanishingReference { n_ref });
            }
            Ok(cyclic_to_angular(ref_hz) / unit)
        }
        _ => Err(ConfigError::AmbiguousDriveStrength),
    }
}

fn resolve_distribution(
    section: &DistributionSection,
    base_dir: &Path,
) -> Result<VibrationalDistribution, ConfigError> {
    let epsilon = section.epsilon.unwrap_or(DEFAULT_EPSILON);
    let need = |field: &'static str, kind: &'static str| ConfigError::MissingDistributionField {
        kind,
        field,
    };
    match section.kind.as_str() {
        "coherent" => {
            let n_bar = section.n_bar.ok_or_else(|| need("n_bar", "coherent"))?;
            Ok(coherent_distribution(n_bar, epsilon)?)
        }
        "thermal" => {
            let n_bar = section.n_bar.ok_or_else(|| need("n_bar", "thermal"))?;
            Ok(thermal_distribution(n_bar, epsilon)?)
        }
        "fock" => {
            let n = section.n.ok_or_else(|| need("n", "fock"))?;
            Ok(fock_distribution(n))
        }
        "custom" => {
            let raw = section.path.as_ref().ok_or_else(|| need("path", "custom"))?;
            let path = base_dir.join(raw);
            let text = std::fs::read_to_string(&path).map_err(|source| {
                ConfigError::WeightsFile {
                    path: path.clone(),
                    source,
                }
            })?;
            let mut weights = Vec::new();
            for token in text
                .lines()
                .map(|l| l.split('#').next().unwrap_or(""))
                .flat_map(str::split_whitespace)
            {
                let value: f64 = token.parse().map_err(|_| ConfigError::WeightsParse {
                    path: path.clone(),
                    token: token.to_string(),
                })?;
                weights.push(value);
            }
            Ok(custom_distribution(&weights, raw)?)
        }
        other => Err(ConfigError::UnknownDistribution(other.to_string())),
    }
}

/// Resolves a config into library types. `base_dir` anchors relative custom
/// weight paths (use the config file's directory).
pub fn resolve(cfg: &ScenarioConfig, base_dir: &Path) -> Result<ResolvedScenario, ConfigError> {
    check_name(&cfg.name)?;
    let frame = parse_frame(cfg.coherence_frame.as_deref())?;
    let section = &cfg.params;
    let n_ref = section.n_ref.unwrap_or(0);
    let omega0 = resolve_omega0(section)?;

    let mut params = SystemParams {
        omega: cyclic_to_angular(section.omega_hz),
        omega21: cyclic_to_angular(section.omega21_hz),
        omega0,
        eta: section.eta,
        phi: section.phi,
        sideband_k: section.sideband_k,
        kappa: 0.0,
    };
    let kappa_crit_ref = critical_coupling(&params, n_ref)?;
    params.kappa = match (section.kappa_per_s, section.kappa_ratio) {
        (None, None) => 0.0,
        (Some(kappa), None) => kappa,
        (None, Some(ratio)) => ratio * kappa_crit_ref,
        _ => return Err(ConfigError::AmbiguousKappa),
    };

    let report = validate_params(&params)?;
    let mut warnings = Vec::new();
    if report.low_excitation_warning {
        warnings.push(format!(
            "omega0 = {:.3e} rad/s is not small against the trap frequency \
             {:.3e} rad/s; doublet decomposition is strained",
            params.omega0, params.omega
        ));
    }

    let distribution = resolve_distribution(&cfg.distribution, base_dir)?;
    let grid = TimeGrid::new(cfg.grid.t_start_s, cfg.grid.t_end_s, cfg.grid.n_points)?;

    Ok(ResolvedScenario {
        params,
        frame,
        distribution,
        grid,
        kappa_crit_ref,
        n_ref,
        warnings,
    })
}

/// Serializes the config with a refreshed `[derived]` echo. The manifest is
/// a complete, re-runnable config: ingesting it resolves to bit-identical
/// library inputs because only the original fields participate.
pub fn to_manifest(cfg: &ScenarioConfig, resolved: &ResolvedScenario) -> String {
    let mut derived = toml::value::Table::new();
    derived.insert(
        "note".into(),
        toml::Value::String(
            "informational echo of resolved values; ignored when this manifest is re-run".into(),
        ),
    );
    derived.insert(
        "omega0_hz".into(),
        toml::Value::Float(angular_to_cyclic(resolved.params.omega0)),
    );
    derived.insert(
        "kappa_per_s".into(),
        toml::Value::Float(resolved.params.kappa),
    );
    derived.insert(
        "kappa_crit_ref_per_s".into(),
        toml::Value::Float(resolved.kappa_crit_ref),
    );
    derived.insert(
        "coherence_frame".into(),
        toml::Value::String(
            match resolved.frame {
                CoherenceFrame::Sideband => "paper",
                CoherenceFrame::Lab => "lab",
            }
            .into(),
        ),
    );
    derived.insert(
        "distribution_terms".into(),
        toml::Value::Integer(resolved.distribution.weights().len() as i64),
    );
    derived.insert(
        "truncation_residual".into(),
        toml::Value::Float(resolved.distribution.truncation_residual()),
    );

    let mut echo = cfg.clone();
    echo.derived = Some(toml::Value::Table(derived));
    toml::to_string_pretty(&echo).expect("scenario configs serialize to TOML")
}
