//! Initial vibrational occupancy distributions.
//!
//! A run starts with the ion internally in |down> and its motion spread over
//! number states with weights `w_n`. Coherent and thermal weights are built
//! by ratio recurrences (no factorials, no overflow) and truncated at the
//! smallest index whose cumulative mass reaches `1 - epsilon`. The clipped
//! tail is carried explicitly as `truncation_residual`, never silently
//! renormalized away, so every downstream population comes with a rigorous
//! error bound.

use thiserror::Error;

/// Hard cap on the number of retained weights, guarding against epsilon
/// values that would demand astronomically long tails.
pub const MAX_DISTRIBUTION_TERMS: usize = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum DistributionError {
    #[error("epsilon must satisfy 0 < epsilon < 1, got {0}")]
    InvalidEpsilon(f64),
    #[error("mean occupancy must be nonnegative and finite, got {0}")]
    NegativeMeanOccupancy(f64),
    #[error("truncation at epsilon = {epsilon} needs more than {max} terms")]
    TruncationTooLong { epsilon: f64, max: usize },
    #[error("custom distribution has no entries")]
    EmptyCustom,
    #[error("custom weight at n = {n} is negative or not finite: {value}")]
    BadWeight { n: usize, value: f64 },
    #[error("custom weights sum to zero")]
    ZeroMass,
}

/// A truncated vibrational occupancy distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct VibrationalDistribution {
    weights: Vec<f64>,
    truncation_residual: f64,
    label: String,
}

impl VibrationalDistribution {
    /// Weight of level `n` (zero beyond the truncation index).
    pub fn weight(&self, n: u32) -> f64 {
        self.weights.get(n as usize).copied().unwrap_or(0.0)
    }

    /// All retained weights, indexed by `n`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Largest retained index.
    pub fn n_trunc(&self) -> u32 {
        (self.weights.len() - 1) as u32
    }

    /// Probability mass dropped by the truncation.
    pub fn truncation_residual(&self) -> f64 {
        self.truncation_residual
    }

    /// Sum of the retained weights, `1 - truncation_residual` up to roundoff.
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn from_ratio_recurrence(
        w0: f64,
        ratio: impl Fn(u32, f64) -> f64,
        epsilon: f64,
        label: String,
    ) -> Result<Self, DistributionError> {
        let mut weights = vec![w0];
        let mut cumulative = w0;
        // The exit test is the same expression as the reported residual, so
        // `truncation_residual <= epsilon` holds exactly, not merely up to
        // the rounding of `1 - epsilon`.
        while 1.0 - cumulative > epsilon {
            if weights.len() >= MAX_DISTRIBUTION_TERMS {
                return Err(DistributionError::TruncationTooLong {
                    epsilon,
                    max: MAX_DISTRIBUTION_TERMS,
                });
            }
            let n = (weights.len() - 1) as u32;
            let next = weights[weights.len() - 1] * ratio(n, cumulative);
            weights.push(next);
            cumulative += next;
        }
        Ok(VibrationalDistribution {
            weights,
            truncation_residual: (1.0 - cumulative).max(0.0),
            label,
        })
    }
}

fn check_epsilon(epsilon: f64) -> Result<(), DistributionError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(DistributionError::InvalidEpsilon(epsilon));
    }
    Ok(())
}

fn check_n_bar(n_bar: f64) -> Result<(), DistributionError> {
    if !(n_bar >= 0.0) || !n_bar.is_finite() {
        return Err(DistributionError::NegativeMeanOccupancy(n_bar));
    }
    Ok(())
}

/// Poisson weights `w_n = e^{-n_bar} n_bar^n / n!` of a coherent motional
/// state with mean occupancy `n_bar`, truncated at cumulative mass
/// `>= 1 - epsilon`.
pub fn coherent_distribution(
    n_bar: f64,
    epsilon: f64,
) -> Result<VibrationalDistribution, DistributionError> {
    check_epsilon(epsilon)?;
    check_n_bar(n_bar)?;
    VibrationalDistribution::from_ratio_recurrence(
        (-n_bar).exp(),
        |n, _| n_bar / f64::from(n + 1),
        epsilon,
        format!("coherent(n_bar={n_bar})"),
    )
}

/// Geometric weights `w_n = n_bar^n / (n_bar+1)^{n+1}` of a thermal motional
/// state, truncated like [`coherent_distribution`].
pub fn thermal_distribution(
    n_bar: f64,
    epsilon: f64,
) -> Result<VibrationalDistribution, DistributionError> {
    check_epsilon(epsilon)?;
    check_n_bar(n_bar)?;
    VibrationalDistribution::from_ratio_recurrence(
        1.0 / (n_bar + 1.0),
        |_, _| n_bar / (n_bar + 1.0),
        epsilon,
        format!("thermal(n_bar={n_bar})"),
    )
}

/// A single number state |n>: weight one at `n`, zero elsewhere, no residual.
pub fn fock_distribution(n: u32) -> VibrationalDistribution {
    let mut weights = vec![0.0; n as usize + 1];
    weights[n as usize] = 1.0;
    VibrationalDistribution {
        weights,
        truncation_residual: 0.0,
        label: format!("fock(n={n})"),
    }
}

/// A user-supplied weight list, normalized to unit mass. The input is taken
/// as exhaustive, so the residual is zero by construction.
pub fn custom_distribution(
    weights: &[f64],
    label: &str,
) -> Result<VibrationalDistribution, DistributionError> {
    if weights.is_empty() {
        return Err(DistributionError::EmptyCustom);
    }
    for (n, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w < 0.0 {
            return Err(DistributionError::BadWeight { n, value: w });
        }
    }
    let mass: f64 = weights.iter().sum();
    if mass <= 0.0 {
        return Err(DistributionError::ZeroMass);
    }
    let mut normalized: Vec<f64> = weights.iter().map(|w| w / mass).collect();
    while normalized.len() > 1 && *normalized.last().unwrap() == 0.0 {
        normalized.pop();
    }
    Ok(VibrationalDistribution {
        weights: normalized,
        truncation_residual: 0.0,
        label: label.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coherent_mass_and_residual_balance() {
        for &n_bar in &[0.3, 1.0, 3.1, 12.0] {
            for &eps in &[1e-6, 1e-10, 1e-13] {
                let d = coherent_distribution(n_bar, eps).unwrap();
                let balance = d.total_mass() + d.truncation_residual();
                assert!((balance - 1.0).abs() <= 1e-12, "n_bar={n_bar} eps={eps}");
                assert!(d.truncation_residual() <= eps);
            }
        }
    }

    #[test]
    fn coherent_ratio_recurrence_holds() {
        let n_bar = 3.1;
        let d = coherent_distribution(n_bar, 1e-10).unwrap();
        let w = d.weights();
        for n in 0..w.len() - 1 {
            let expected = n_bar / (n as f64 + 1.0);
            let got = w[n + 1] / w[n];
            assert!((got - expected).abs() <= 1e-13 * expected.max(1.0), "n={n}");
        }
    }

    #[test]
    fn frozen_truncation_index() {
        // Poisson(3.1) reaches 1 - 1e-10 cumulative mass at n = 20.
        let d = coherent_distribution(3.1, 1e-10).unwrap();
        assert_eq!(d.n_trunc(), 20);
        assert!(d.truncation_residual() > 0.0 && d.truncation_residual() < 1e-10);
        // First weight is e^{-3.1}.
        assert!((d.weight(0) - 0.0450492023935578).abs() < 1e-16);
    }

    #[test]
    fn tighter_epsilon_never_shortens_the_tail() {
        let mut previous = 0;
        for &eps in &[1e-4, 1e-6, 1e-8, 1e-10, 1e-12] {
            let d = coherent_distribution(3.1, eps).unwrap();
            assert!(d.n_trunc() >= previous, "eps={eps}");
            previous = d.n_trunc();
        }
    }

    #[test]
    fn thermal_matches_geometric_form() {
        let n_bar = 2.5;
        let d = thermal_distribution(n_bar, 1e-12).unwrap();
        for n in 0..=d.n_trunc() {
            let expected = n_bar.powi(n as i32) / (n_bar + 1.0).powi(n as i32 + 1);
            assert!((d.weight(n) - expected).abs() <= 1e-13 * expected.max(1e-30));
        }
        let balance = d.total_mass() + d.truncation_residual();
        assert!((balance - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn zero_occupancy_degenerates_to_ground() {
        let c = coherent_distribution(0.0, 1e-10).unwrap();
        assert_eq!(c.weights(), &[1.0]);
        assert_eq!(c.truncation_residual(), 0.0);
        let t = thermal_distribution(0.0, 1e-10).unwrap();
        assert_eq!(t.weights(), &[1.0]);
    }

    #[test]
    fn fock_is_a_delta() {
        let d = fock_distribution(4);
        assert_eq!(d.n_trunc(), 4);
        assert_eq!(d.weight(4), 1.0);
        assert_eq!(d.weight(3), 0.0);
        assert_eq!(d.weight(5), 0.0);
        assert_eq!(d.total_mass(), 1.0);
        assert_eq!(d.truncation_residual(), 0.0);
    }

    #[test]
    fn custom_is_normalized() {
        let d = custom_distribution(&[1.0, 3.0, 0.0, 4.0], "weights.txt").unwrap();
        assert_eq!(d.n_trunc(), 3);
        assert!((d.total_mass() - 1.0).abs() < 1e-15);
        assert!((d.weight(1) - 0.375).abs() < 1e-15);
        assert_eq!(d.truncation_residual(), 0.0);

        let trimmed = custom_distribution(&[0.5, 0.5, 0.0, 0.0], "x").unwrap();
        assert_eq!(trimmed.n_trunc(), 1);
    }

    #[test]
    fn input_guards() {
        assert_eq!(
            coherent_distribution(3.1, 0.0),
            Err(DistributionError::InvalidEpsilon(0.0))
        );
        assert_eq!(
            coherent_distribution(3.1, 1.0),
            Err(DistributionError::InvalidEpsilon(1.0))
        );
        assert!(matches!(
            coherent_distribution(3.1, f64::NAN),
            Err(DistributionError::InvalidEpsilon(_))
        ));
        assert_eq!(
            thermal_distribution(-0.1, 1e-10),
            Err(DistributionError::NegativeMeanOccupancy(-0.1))
        );
        assert_eq!(custom_distribution(&[], "x"), Err(DistributionError::EmptyCustom));
        assert_eq!(
            custom_distribution(&[0.1, -0.2], "x"),
            Err(DistributionError::BadWeight { n: 1, value: -0.2 })
        );
        assert_eq!(
            custom_distribution(&[0.0, 0.0], "x"),
            Err(DistributionError::ZeroMass)
        );
    }
}
