//! Ensemble-averaged populations and their export.
//!
//! The measured observable is the total ground-level occupancy
//! `P_down(t) = sum_n w_n p_down^{(n)}(t)`: every doublet evolves
//! independently (each is a closed two-state system), so the ensemble trace
//! is a weighted sum of closed-form doublet solutions plus the frozen
//! spectator mass from levels with no coupling partner. Interference between
//! the incommensurate doublet frequencies produces the collapse of the Rabi
//! oscillation; their rephasing produces revivals; measurement damps both.

use crate::distribution::VibrationalDistribution;
use crate::grid::TimeGrid;
use crate::manifold::damped_kernels;
use crate::params::SystemParams;
use crate::rabi::{geometry_factor, rabi_frequency, RabiError};
use std::io;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PopulationError {
    #[error(transparent)]
    Rabi(#[from] RabiError),
    #[error("mean occupancy must be nonnegative and finite, got {0}")]
    InvalidMeanOccupancy(f64),
}

/// Ensemble ground- and excited-level occupancies over a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationTrace {
    pub grid: TimeGrid,
    /// Total |down> occupancy per sample, spectator mass included.
    pub p_down: Vec<f64>,
    /// Total |up> occupancy per sample.
    pub p_up: Vec<f64>,
    /// Probability mass lost to the distribution truncation; the exact
    /// populations differ from the reported ones by at most this much.
    pub residual_bound: f64,
    /// Weight-scaled |down> occupancy of each manifold, ascending in `n`,
    /// populated by [`p_down_series_per_manifold`].
    pub per_manifold: Option<Vec<(u32, Vec<f64>)>>,
}

fn series_impl(
    params: &SystemParams,
    dist: &VibrationalDistribution,
    grid: &TimeGrid,
    keep_manifolds: bool,
) -> Result<PopulationTrace, PopulationError> {
    let k = params.sideband_k;
    let gamma = 0.25 * params.kappa;
    let times: Vec<f64> = grid.times().collect();

    // Levels with n + k < 0 cannot exchange population; their weight sits in
    // p_down forever.
    let spectator_mass: f64 = dist
        .weights()
        .iter()
        .enumerate()
        .filter(|(n, _)| (*n as i64) + i64::from(k) < 0)
        .map(|(_, w)| w)
        .sum();

    let mut p_down = vec![spectator_mass; times.len()];
    let mut p_up = vec![0.0; times.len()];
    let mut per_manifold: Vec<(u32, Vec<f64>)> = Vec::new();

    for (n_idx, &w) in dist.weights().iter().enumerate() {
        let n = n_idx as u32;
        let coupled = (n_idx as i64) + i64::from(k) >= 0;
        if !coupled {
            if keep_manifolds {
                per_manifold.push((n, vec![w; times.len()]));
            }
            continue;
        }
        if w == 0.0 {
            if keep_manifolds {
                per_manifold.push((n, vec![0.0; times.len()]));
            }
            continue;
        }
        let omega_nk = rabi_frequency(params, n)?.omega_nk;
        let mut detail = if keep_manifolds {
            Vec::with_capacity(times.len())
        } else {
            Vec::new()
        };
        for (j, &t) in times.iter().enumerate() {
            let kernels = damped_kernels(omega_nk, params.kappa, t);
            let bracket = kernels.kc + gamma * kernels.ks;
            let down = w * 0.5 * (1.0 + bracket);
            p_down[j] += down;
            p_up[j] += w * 0.5 * (1.0 - bracket);
            if keep_manifolds {
                detail.push(down);
            }
        }
        if keep_manifolds {
            per_manifold.push((n, detail));
        }
    }

    Ok(PopulationTrace {
        grid: *grid,
        p_down,
        p_up,
        residual_bound: dist.truncation_residual(),
        per_manifold: if keep_manifolds { Some(per_manifold) } else { None },
    })
}

/// Ensemble populations starting from |down> spread over `dist`, prepared at
/// `t = 0`. The grid may start later than zero; samples are taken at the
/// absolute times of the grid.
pub fn p_down_series(
    params: &SystemParams,
    dist: &VibrationalDistribution,
    grid: &TimeGrid,
) -> Result<PopulationTrace, PopulationError> {
    series_impl(params, dist, grid, false)
}

/// Same as [`p_down_series`] but additionally retains each manifold's
/// weight-scaled contribution for inspection or per-manifold CSV columns.
pub fn p_down_series_per_manifold(
    params: &SystemParams,
    dist: &VibrationalDistribution,
    grid: &TimeGrid,
) -> Result<PopulationTrace, PopulationError> {
    series_impl(params, dist, grid, true)
}

/// Closed-form collapse envelope approximation for a coherent ensemble on a
/// first sideband:
///
/// ```text
/// P_down(t) ~ 1/2 { 1 + cos(r sqrt(n_bar+1) t)
///                   * exp(-kappa t / 4 - (r^2/8)(n_bar/(n_bar+1)) t^2) }
/// ```
///
/// with `r = eta * omega0 * |geometry|`, the standing-wave projection of the
/// linear-limit coupling. Valid for small `eta` and early times (through the
/// first collapse); it carries no revival structure.
pub fn p_down_envelope_approx(
    params: &SystemParams,
    n_bar: f64,
    grid: &TimeGrid,
) -> Result<Vec<f64>, PopulationError> {
    let k = params.sideband_k;
    if k != 1 && k != -1 {
        return Err(RabiError::UnsupportedSideband { k }.into());
    }
    if !(n_bar >= 0.0) || !n_bar.is_finite() {
        return Err(PopulationError::InvalidMeanOccupancy(n_bar));
    }
    let rate = params.eta * params.omega0 * geometry_factor(params.phi, k).abs();
    let mean_freq = rate * (n_bar + 1.0).sqrt();
    let gauss_coeff = rate * rate / 8.0 * (n_bar / (n_bar + 1.0));
    Ok(grid
        .times()
        .map(|t| {
            let damping = (-0.25 * params.kappa * t - gauss_coeff * t * t).exp();
            0.5 * (1.0 + (mean_freq * t).cos() * damping)
        })
        .collect())
}

/// Reduced internal-state populations `(sigma_down, sigma_up)` per sample.
/// `sigma_up` is `1 - p_down` by definition of the two-level trace; it is
/// returned explicitly for API symmetry.
pub fn reduced_atomic_populations(trace: &PopulationTrace) -> Vec<(f64, f64)> {
    trace.p_down.iter().map(|&pd| (pd, 1.0 - pd)).collect()
}

/// Writes a trace as CSV: header `t_seconds,p_down,p_up`, then an `envelope`
/// column when one is supplied, then per-manifold columns `m0,m1,...` when
/// the trace retained them. Times in seconds, values in full f64 precision
/// (shortest round-trip formatting), LF line endings.
pub fn write_population_csv<W: io::Write>(
    trace: &PopulationTrace,
    envelope: Option<&[f64]>,
    mut out: W,
) -> io::Result<()> {
    let n = trace.grid.n_points();
    if trace.p_down.len() != n || trace.p_up.len() != n {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "trace length does not match its grid",
        ));
    }
    if let Some(env) = envelope {
        if env.len() != n {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                "envelope length does not match the grid",
            ));
        }
    }
    let mut header = String::from("t_seconds,p_down,p_up");
    if envelope.is_some() {
        header.push_str(",envelope");
    }
    if let Some(detail) = &trace.per_manifold {
        for (n, _) in detail {
            header.push_str(&format!(",m{n}"));
        }
    }
    writeln!(out, "{header}")?;
    for (j, t) in trace.grid.times().enumerate() {
        write!(out, "{},{},{}", t, trace.p_down[j], trace.p_up[j])?;
        if let Some(env) = envelope {
            write!(out, ",{}", env[j])?;
        }
        if let Some(detail) = &trace.per_manifold {
            for (_, column) in detail {
                write!(out, ",{}", column[j])?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}
