//! System parameters shared by every physics routine.

use thiserror::Error;

/// Physical parameters of the driven, measured ion. All frequencies angular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Trap (vibrational) frequency, rad/s. Must be positive.
    pub omega: f64,
    /// Internal transition frequency, rad/s. Must be positive.
    pub omega21: f64,
    /// Bare (carrier) Rabi frequency of the drive, rad/s. Must be positive.
    pub omega0: f64,
    /// Lamb-Dicke parameter, dimensionless, nonnegative.
    pub eta: f64,
    /// Standing-wave phase at the ion equilibrium position, radians.
    /// `phi = pi/2` places the ion at a node (odd sidebands maximal),
    /// `phi = 0` at an antinode (even sidebands maximal).
    pub phi: f64,
    /// Sideband order k: the drive is tuned to `omega21 + k * omega`.
    pub sideband_k: i32,
    /// Measurement coupling of the ground-level occupancy monitor, 1/s,
    /// nonnegative. Zero means unmeasured unitary dynamics.
    pub kappa: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositiveFrequency { name: &'static str, value: f64 },
    #[error("Lamb-Dicke parameter must be nonnegative and finite, got {0}")]
    NegativeEta(f64),
    #[error("measurement coupling must be nonnegative and finite, got {0}")]
    NegativeKappa(f64),
}

/// Non-fatal observations from [`validate_params`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ValidationReport {
    /// Set when `omega0 >= omega / 10`. The doublet decomposition assumes a
    /// drive much slower than the trap frequency; outside that regime the
    /// model still runs but off-resonant doublets start to overlap.
    pub low_excitation_warning: bool,
}

/// Checks the parameter set, returning warnings for regimes where the model
/// is formally applicable but physically strained.
pub fn validate_params(p: &SystemParams) -> Result<ValidationReport, ParamsError> {
    let freq_checks = [
        ("omega", p.omega),
        ("omega21", p.omega21),
        ("omega0", p.omega0),
    ];
    for (name, value) in freq_checks {
        if !(value > 0.0) || !value.is_finite() {
            return Err(ParamsError::NonPositiveFrequency { name, value });
        }
    }
    if !(p.eta >= 0.0) || !p.eta.is_finite() {
        return Err(ParamsError::NegativeEta(p.eta));
    }
    if !(p.kappa >= 0.0) || !p.kappa.is_finite() {
        return Err(ParamsError::NegativeKappa(p.kappa));
    }
    if !p.phi.is_finite() {
        return Err(ParamsError::NonPositiveFrequency {
            name: "phi",
            value: p.phi,
        });
    }
    Ok(ValidationReport {
        low_excitation_warning: p.omega0 >= p.omega / 10.0,
    })
}
