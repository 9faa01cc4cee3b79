//! Property tests for the truncated occupancy distributions.

use proptest::prelude::*;
use zenotrap::distribution::{coherent_distribution, thermal_distribution};

proptest! {
    #[test]
    fn mass_and_residual_always_balance(
        n_bar in 0.0f64..40.0,
        log_eps in -13.0f64..-2.0,
    ) {
        let eps = 10f64.powf(log_eps);
        for d in [coherent_distribution(n_bar, eps).unwrap(),
                  thermal_distribution(n_bar, eps).unwrap()] {
            let balance = d.total_mass() + d.truncation_residual();
            prop_assert!((balance - 1.0).abs() <= 1e-12);
            prop_assert!(d.truncation_residual() >= 0.0);
            prop_assert!(d.truncation_residual() <= eps);
            prop_assert!(d.weights().iter().all(|w| *w >= 0.0 && w.is_finite()));
        }
    }

    #[test]
    fn truncation_is_monotone_in_epsilon(
        n_bar in 0.01f64..40.0,
        log_eps in -12.0f64..-3.0,
    ) {
        let loose = 10f64.powf(log_eps);
        let tight = loose * 1e-2;
        let d_loose = coherent_distribution(n_bar, loose).unwrap();
        let d_tight = coherent_distribution(n_bar, tight).unwrap();
        prop_assert!(d_tight.n_trunc() >= d_loose.n_trunc());
        // The shared prefix of weights is identical: truncation never
        // changes retained values, only how many there are.
        for n in 0..=d_loose.n_trunc() {
            prop_assert_eq!(d_loose.weight(n), d_tight.weight(n));
        }
    }

    #[test]
    fn coherent_mean_is_recovered(n_bar in 0.0f64..30.0) {
        let d = coherent_distribution(n_bar, 1e-12).unwrap();
        let mean: f64 = d
            .weights()
            .iter()
            .enumerate()
            .map(|(n, w)| n as f64 * w)
            .sum();
        prop_assert!((mean - n_bar).abs() <= 1e-9 * n_bar.max(1.0));
    }

    #[test]
    fn thermal_mean_is_recovered(n_bar in 0.0f64..20.0) {
        let d = thermal_distribution(n_bar, 1e-13).unwrap();
        let mean: f64 = d
            .weights()
            .iter()
            .enumerate()
            .map(|(n, w)| n as f64 * w)
            .sum();
        // The clipped geometric tail carries mean mass ~ eps * (n_trunc + n_bar).
        let tail_allowance = 1e-13 * (d.n_trunc() as f64 + n_bar) + 1e-12;
        prop_assert!((mean - n_bar).abs() <= tail_allowance + 1e-9 * n_bar.max(1.0));
    }
}
