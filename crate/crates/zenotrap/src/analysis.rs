//! Decoherence bookkeeping, Zeno threshold maps, and collapse/revival
//! timescales.

use crate::distribution::{coherent_distribution, DistributionError};
use crate::params::SystemParams;
use crate::rabi::{geometry_factor, rabi_frequency, RabiError};
use std::io;
use thiserror::Error;

/// Truncation used by the internal collapse/revival scans.
pub const SCAN_EPSILON: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("technical heating rate must be positive and finite, got {0}")]
    NonPositiveRate(f64),
    #[error("measurement decay time requires kappa > 0, got {0}")]
    ZeroKappa(f64),
    #[error("occupancy must be nonnegative and finite, got {0}")]
    InvalidOccupancy(f64),
    #[error("collapse/revival analysis is defined for first sidebands, got k = {k}")]
    UnsupportedSideband { k: i32 },
    #[error(transparent)]
    Rabi(#[from] RabiError),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

/// Competing decoherence channels of a stored-ion experiment, as rates and
/// their reciprocal timescales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceBudget {
    /// Single-quantum technical dephasing rate, 1/s.
    pub gamma0: f64,
    /// Technical rate scaled to occupancy `n`: `gamma0 (n+1)^0.7`.
    pub gamma_n: f64,
    /// `1 / gamma_n`.
    pub tau_technical: f64,
    /// Population relaxation time of the measurement channel, `4 / kappa`.
    pub tau_measurement: f64,
}

/// Empirical occupancy scaling of technical dephasing in a trap:
/// `gamma_n = gamma0 (n+1)^0.7`. Accepts fractional mean occupancies.
pub fn technical_linewidth(gamma0: f64, n_occupancy: f64) -> Result<f64, AnalysisError> {
    if !(gamma0 > 0.0) || !gamma0.is_finite() {
        return Err(AnalysisError::NonPositiveRate(gamma0));
    }
    if !(n_occupancy >= 0.0) || !n_occupancy.is_finite() {
        return Err(AnalysisError::InvalidOccupancy(n_occupancy));
    }
    Ok(gamma0 * (n_occupancy + 1.0).powf(0.7))
}

/// Relaxation time of the population difference under measurement alone:
/// the populations approach 1/2 at rate `kappa/4`, so `tau = 4 / kappa`.
pub fn measurement_decay_time(kappa: f64) -> Result<f64, AnalysisError> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(AnalysisError::ZeroKappa(kappa));
    }
    Ok(4.0 / kappa)
}

/// Assembles the full budget for one operating point.
pub fn decoherence_budget(
    gamma0: f64,
    n_occupancy: f64,
    kappa: f64,
) -> Result<DecoherenceBudget, AnalysisError> {
    let gamma_n = technical_linewidth(gamma0, n_occupancy)?;
    Ok(DecoherenceBudget {
        gamma0,
        gamma_n,
        tau_technical: 1.0 / gamma_n,
        tau_measurement: measurement_decay_time(kappa)?,
    })
}

/// One row of a Zeno threshold map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdPoint {
    pub n: u32,
    /// `4 |omega_nk|` for this manifold.
    pub kappa_crit: f64,
    /// Set when the coupling is numerically dead (standing-wave node or a
    /// Laguerre root): no finite measurement can be "above threshold" in a
    /// meaningful way for this manifold.
    pub vanishing: bool,
}

/// Zeno thresholds for every coupled manifold up to `n_max`, ascending in n.
/// Entries start at `n = max(0, -k)`, the lowest index with a partner level.
pub fn zeno_threshold_map(
    params: &SystemParams,
    n_max: u32,
) -> Result<Vec<ThresholdPoint>, AnalysisError> {
    let n_min = if params.sideband_k < 0 {
        params.sideband_k.unsigned_abs()
    } else {
        0
    };
    let mut points = Vec::new();
    for n in n_min..=n_max.max(n_min) {
        let kappa_crit = rabi_frequency(params, n)?.kappa_crit;
        points.push(ThresholdPoint { n, kappa_crit, vanishing: false });
    }
    let map_max = points.iter().map(|p| p.kappa_crit).fold(0.0_f64, f64::max);
    let absolute_floor = 4.0 * params.omega0 * 1e-12;
    for p in &mut points {
        p.vanishing = p.kappa_crit <= absolute_floor
            || (map_max > 0.0 && p.kappa_crit <= 1e-9 * map_max)
            || map_max == 0.0;
    }
    Ok(points)
}

/// Writes a threshold map as CSV with header `n,kappa_crit`.
pub fn write_threshold_csv<W: io::Write>(
    points: &[ThresholdPoint],
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "n,kappa_crit")?;
    for p in points {
        writeln!(out, "{},{}", p.n, p.kappa_crit)?;
    }
    Ok(())
}

/// Collapse and revival timescales of a coherent ensemble on a first
/// sideband: closed-form estimates next to numerical refinements from the
/// unmeasured series itself, so the two routes stay independently checkable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseRevival {
    /// Gaussian-envelope estimate `sqrt(8 (n_bar+1) / n_bar) / r` with
    /// `r = eta omega0 |geometry|`.
    pub t_collapse_estimate: f64,
    /// First time the peak envelope of the scanned series falls to 1/e, or
    /// `None` when it never does: shallow ensembles (mean occupancy below
    /// about one) rephase before they dephase that far, so no collapse time
    /// exists for them.
    pub t_collapse_refined: Option<f64>,
    /// First-order rephasing estimate `2 pi sqrt(n_bar) / r`.
    pub t_revival_estimate: f64,
    /// Position of the tallest |signal| peak in a wide window around and
    /// beyond the estimate, from a dense scan of the series.
    pub t_revival_refined: f64,
}

/// Computes [`CollapseRevival`] for a coherent ensemble with mean occupancy
/// `n_bar`. The scans evolve the unmeasured (`kappa = 0`) series: collapse
/// and revival are coherent-interference timescales, while measurement
/// enters only as the multiplicative damping `exp(-kappa t / 4)` of the
/// revival amplitude.
pub fn collapse_revival_times(
    params: &SystemParams,
    n_bar: f64,
) -> Result<CollapseRevival, AnalysisError> {
    let k = params.sideband_k;
    if k != 1 && k != -1 {
        return Err(AnalysisError::UnsupportedSideband { k });
    }
    if !(n_bar > 0.0) || !n_bar.is_finite() {
        return Err(AnalysisError::InvalidOccupancy(n_bar));
    }
    let rate = params.eta * params.omega0 * geometry_factor(params.phi, k).abs();
    if !(rate > 0.0) {
        return Err(AnalysisError::UnsupportedSideband { k });
    }
    let t_collapse_estimate = (8.0 * (n_bar + 1.0) / n_bar).sqrt() / rate;
    let t_revival_estimate = std::f64::consts::TAU * n_bar.sqrt() / rate;

    // Weighted cosine series of the coupled manifolds, normalized to unit
    // amplitude at t = 0.
    let dist = coherent_distribution(n_bar, SCAN_EPSILON)?;
    let mut terms: Vec<(f64, f64)> = Vec::new();
    for (n_idx, &w) in dist.weights().iter().enumerate() {
        if (n_idx as i64) + i64::from(k) < 0 || w == 0.0 {
            continue;
        }
        let omega = rabi_frequency(params, n_idx as u32)?.omega_nk;
        terms.push((w, omega));
    }
    let mass: f64 = terms.iter().map(|(w, _)| w).sum();
    let max_omega = terms.iter().map(|(_, o)| o.abs()).fold(0.0_f64, f64::max);
    let signal = |t: f64| terms.iter().map(|(w, o)| w * (o * t).cos()).sum::<f64>() / mass;

    // Collapse: the envelope is the curve through successive local maxima of
    // |s| (t = 0 counts as one); its first interpolated dip below 1/e is the
    // refined collapse time.
    let target = (-1.0_f64).exp();
    let dt_collapse = std::f64::consts::TAU / max_omega / 40.0;
    let steps = (3.0 * t_collapse_estimate / dt_collapse).ceil() as usize;
    let mut t_collapse_refined = None;
    let mut last_peak = (0.0, signal(0.0).abs());
    let mut window = [last_peak.1, signal(dt_collapse).abs()];
    for i in 2..=steps {
        let value = signal(i as f64 * dt_collapse).abs();
        if window[1] >= window[0] && window[1] >= value {
            let peak = ((i - 1) as f64 * dt_collapse, window[1]);
            if peak.1 < target && last_peak.1 >= target {
                let frac = (last_peak.1 - target) / (last_peak.1 - peak.1);
                t_collapse_refined = Some(last_peak.0 + frac * (peak.0 - last_peak.0));
                break;
            }
            last_peak = peak;
        }
        window = [window[1], value];
    }

    // Revival: tallest rephasing peak of |s| in a window that starts past
    // the collapse and extends well beyond the first-order estimate, with
    // automatic extension if the maximum presses against the far edge.
    let dt_revival = std::f64::consts::TAU / max_omega / 30.0;
    let lo = (2.0 * t_collapse_estimate).max(0.25 * t_revival_estimate);
    let mut hi = 5.0 * t_revival_estimate;
    let mut t_revival_refined = lo;
    for _ in 0..4 {
        let steps = ((hi - lo) / dt_revival).ceil() as usize;
        let mut best = (lo, signal(lo).abs());
        let mut values = Vec::with_capacity(steps + 1);
        for i in 0..=steps {
            let ti = lo + i as f64 * dt_revival;
            let v = signal(ti).abs();
            values.push(v);
            if v > best.1 {
                best = (ti, v);
            }
        }
        let i_best = ((best.0 - lo) / dt_revival).round() as usize;
        t_revival_refined = if i_best > 0 && i_best + 1 < values.len() {
            // Three-point parabolic sharpening around the grid maximum.
            let (a, b, c) = (values[i_best - 1], values[i_best], values[i_best + 1]);
            let denominator = a - 2.0 * b + c;
            if denominator.abs() > 0.0 {
                best.0 + 0.5 * dt_revival * (a - c) / denominator
            } else {
                best.0
            }
        } else {
            best.0
        };
        if i_best + 2 < values.len() {
            break;
        }
        hi *= 1.5;
    }

    Ok(CollapseRevival {
        t_collapse_estimate,
        t_collapse_refined,
        t_revival_estimate,
        t_revival_refined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn budget_identities() {
        let kappa = 4.9e4;
        let b = decoherence_budget(2.0 * std::f64::consts::PI * 1900.0, 3.1, kappa).unwrap();
        assert_eq!(b.tau_measurement, 4.0 / kappa);
        assert_eq!(b.tau_measurement * kappa, 4.0);
        assert!((b.gamma_n * b.tau_technical - 1.0).abs() < 1e-15);
        assert!(b.gamma_n > b.gamma0);
    }

    #[test]
    fn rate_guards() {
        assert_eq!(
            technical_linewidth(0.0, 1.0),
            Err(AnalysisError::NonPositiveRate(0.0))
        );
        assert_eq!(
            technical_linewidth(-3.0, 1.0),
            Err(AnalysisError::NonPositiveRate(-3.0))
        );
        assert_eq!(
            technical_linewidth(1.0, -0.5),
            Err(AnalysisError::InvalidOccupancy(-0.5))
        );
        assert_eq!(measurement_decay_time(0.0), Err(AnalysisError::ZeroKappa(0.0)));
        assert_eq!(measurement_decay_time(-1.0), Err(AnalysisError::ZeroKappa(-1.0)));
    }

    fn params(eta: f64, phi: f64, k: i32) -> SystemParams {
        SystemParams {
            omega: 6.2831853e7,
            omega21: 2.6e15,
            omega0: std::f64::consts::TAU * 475023.75059375993,
            eta,
            phi,
            sideband_k: k,
            kappa: 0.0,
        }
    }

    #[test]
    fn threshold_map_matches_rabi_couplings() {
        let p = params(0.202, FRAC_PI_2, 1);
        let map = zeno_threshold_map(&p, 12).unwrap();
        assert_eq!(map.len(), 13);
        for (i, point) in map.iter().enumerate() {
            assert_eq!(point.n, i as u32);
            let expected = 4.0 * rabi_frequency(&p, point.n).unwrap().omega_nk.abs();
            assert_eq!(point.kappa_crit, expected);
            assert!(!point.vanishing);
        }
    }

    #[test]
    fn red_sideband_map_starts_at_first_coupled_level() {
        let p = params(0.1, FRAC_PI_2, -1);
        let map = zeno_threshold_map(&p, 5).unwrap();
        assert_eq!(map.first().unwrap().n, 1);
        assert_eq!(map.len(), 5);
    }

    #[test]
    fn node_flags_even_sidebands_as_vanishing() {
        let p = params(0.202, FRAC_PI_2, 2);
        let map = zeno_threshold_map(&p, 6).unwrap();
        assert!(map.iter().all(|point| point.vanishing));
    }

    #[test]
    fn threshold_csv_shape() {
        let p = params(0.01, FRAC_PI_2, 1);
        let map = zeno_threshold_map(&p, 3).unwrap();
        let mut buf = Vec::new();
        write_threshold_csv(&map, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,kappa_crit");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,"));
    }

    #[test]
    fn estimates_match_frozen_values() {
        // eta Omega0 with |geometry| = 1 gives r/2pi = 4750.2375... Hz;
        // the estimates below were cross-computed from the definitions.
        let p = params(0.01, FRAC_PI_2, 1);
        let cr = collapse_revival_times(&p, 3.1).unwrap();
        assert!((cr.t_collapse_estimate - 1.089835328968827e-4).abs() < 1e-12);
        assert!((cr.t_revival_estimate - 3.7065129563840166e-4).abs() < 1e-12);
    }

    #[test]
    fn guards_on_sideband_and_occupancy() {
        let p = params(0.01, FRAC_PI_2, 2);
        assert!(matches!(
            collapse_revival_times(&p, 3.1),
            Err(AnalysisError::UnsupportedSideband { k: 2 })
        ));
        let p = params(0.01, FRAC_PI_2, 1);
        assert!(matches!(
            collapse_revival_times(&p, 0.0),
            Err(AnalysisError::InvalidOccupancy(_))
        ));
        // A node for odd k has zero linear-limit rate: no timescales exist.
        let p = params(0.01, 0.0, 1);
        assert!(collapse_revival_times(&p, 3.1).is_err());
    }
}
