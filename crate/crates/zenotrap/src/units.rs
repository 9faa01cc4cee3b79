//! Frequency unit conversions.
//!
//! The crate convention: every frequency stored in a struct or passed to a
//! physics routine is angular (rad/s). Laboratory inputs (trap frequency,
//! carrier Rabi frequency, captions like "4.75 kHz") are cyclic (Hz) and
//! must pass through [`cyclic_to_angular`] exactly once, at the boundary.

/// Converts a cyclic frequency in Hz to an angular frequency in rad/s.
///
/// ```
/// assert_eq!(zenotrap::units::cyclic_to_angular(5000.0), 31415.926535897932);
/// ```
pub fn cyclic_to_angular(f_hz: f64) -> f64 {
    std::f64::consts::TAU * f_hz
}

/// Inverse of [`cyclic_to_angular`], for display at the output boundary.
pub fn angular_to_cyclic(omega: f64) -> f64 {
    omega / std::f64::consts::TAU
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_is_linear() {
        let a = cyclic_to_angular(3.0);
        let b = cyclic_to_angular(4.0);
        assert_eq!(cyclic_to_angular(7.0), a + b);
        assert_eq!(cyclic_to_angular(6.0), 2.0 * a);
        assert_eq!(cyclic_to_angular(0.0), 0.0);
    }

    #[test]
    fn round_trip_is_close() {
        for f in [1.0, 475.0e3, 1.0e7, 4.11e14] {
            let back = angular_to_cyclic(cyclic_to_angular(f));
            assert!((back - f).abs() <= 2.0 * f64::EPSILON * f);
        }
    }
}
