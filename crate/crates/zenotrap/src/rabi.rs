//! Composite sideband Rabi frequencies.
//!
//! The drive couples |down, n> to |up, n+k> with a strength proportional to
//! the matrix element of `cos(eta (a + a^dag) + phi)` between the two
//! vibrational levels. For a given trap geometry this reduces to an analytic
//! product: a standing-wave factor, the Lamb-Dicke power `eta^|k|`, a
//! factorial normalization, a Gaussian `exp(-eta^2/2)`, and an associated
//! Laguerre polynomial evaluated at `eta^2`. The sign of the result is
//! physical (it sets the phase of the population exchange against other
//! manifolds) and is kept.

use crate::params::SystemParams;
use crate::special::{laguerre_assoc, sqrt_factorial_ratio, SpecialFnError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RabiError {
    #[error("manifold (n={n}, k={k}) does not exist: upper level index is negative")]
    InvalidManifold { n: u32, k: i32 },
    #[error("operation defined only for first sidebands k = +1 or -1, got k = {k}")]
    UnsupportedSideband { k: i32 },
    #[error(transparent)]
    Special(#[from] SpecialFnError),
}

/// Coupling data for one doublet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiCoupling {
    /// Lower-level vibrational index.
    pub n: u32,
    /// Sideband order.
    pub k: i32,
    /// Signed composite Rabi frequency, rad/s.
    pub omega_nk: f64,
    /// Measurement coupling at the Zeno threshold for this doublet,
    /// exactly `4 * |omega_nk|`.
    pub kappa_crit: f64,
}

/// Standing-wave geometry factor for sideband order `k` at phase `phi`.
///
/// Even sidebands ride the cosine quadrature of the standing wave and odd
/// sidebands the sine quadrature, with an alternating sign from the `i^|k|`
/// in the mode expansion. At a node (`phi = pi/2`) every even-order coupling
/// vanishes; at an antinode (`phi = 0`) every odd-order one does.
pub fn geometry_factor(phi: f64, k: i32) -> f64 {
    let q = k.unsigned_abs();
    if q % 2 == 0 {
        let sign = if (q / 2) % 2 == 0 { 1.0 } else { -1.0 };
        sign * phi.cos()
    } else {
        let sign = if ((q + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        sign * phi.sin()
    }
}

/// Signed composite Rabi frequency for the doublet {|down, n>, |up, n+k>}
/// with `k = params.sideband_k`.
///
/// For red detunings (`k < 0`) the matrix element is evaluated by symmetry
/// at the lower of the two vibrational indices, so `(n, k)` and
/// `(n+k, -k)` describe the same physical coupling strength.
pub fn rabi_frequency(params: &SystemParams, n: u32) -> Result<RabiCoupling, RabiError> {
    let k = params.sideband_k;
    let upper = i64::from(n) + i64::from(k);
    if upper < 0 {
        return Err(RabiError::InvalidManifold { n, k });
    }
    // Reduce to the lower index and a nonnegative quantum jump q = |k|.
    let (n_lower, q) = if k >= 0 { (n, k as u32) } else { (upper as u32, k.unsigned_abs()) };

    let x = params.eta * params.eta;
    let laguerre = laguerre_assoc(n_lower, q, x)?;
    let omega_nk = params.omega0
        * geometry_factor(params.phi, k)
        * params.eta.powi(q as i32)
        * sqrt_factorial_ratio(n_lower, q)
        * (-0.5 * x).exp()
        * laguerre;
    Ok(RabiCoupling { n, k, omega_nk, kappa_crit: 4.0 * omega_nk.abs() })
}

/// Leading-order first-sideband coupling `eta * omega0 * sqrt(n_lower + 1)`,
/// the `eta -> 0` limit of `|rabi_frequency|` for `k = +1` or `k = -1`.
pub fn lamb_dicke_limit(params: &SystemParams, n: u32) -> Result<f64, RabiError> {
    let k = params.sideband_k;
    if k != 1 && k != -1 {
        return Err(RabiError::UnsupportedSideband { k });
    }
    let upper = i64::from(n) + i64::from(k);
    if upper < 0 {
        return Err(RabiError::InvalidManifold { n, k });
    }
    let n_lower = if k == 1 { n } else { upper as u32 };
    Ok(params.eta * params.omega0 * (f64::from(n_lower) + 1.0).sqrt())
}

/// Zeno threshold `kappa_crit = 4 |omega_nk|` for the doublet at `n`.
pub fn critical_coupling(params: &SystemParams, n: u32) -> Result<f64, RabiError> {
    Ok(rabi_frequency(params, n)?.kappa_crit)
}
