//! Doublet and spectator states.

use num_complex::Complex64;
use thiserror::Error;

/// Roundoff slack accepted on the probability and coherence inequalities.
/// Exact analytic evolution can undershoot zero or overshoot the coherence
/// bound by a few ulps; anything beyond this is a genuine violation.
pub const STATE_SLACK: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("manifold (n={n}, k={k}) does not exist: the upper level index n+k is negative")]
    InvalidManifold { n: u32, k: i32 },
    #[error("manifold (n={n}, k={k}) is coupled (n+k >= 0), not a spectator")]
    NotASpectator { n: u32, k: i32 },
    #[error("{which} = {value} is negative")]
    NegativeProbability { which: &'static str, value: f64 },
    #[error("p_down + p_up = {sum} exceeds 1")]
    ProbabilitySumExceedsOne { sum: f64 },
    #[error("|coh|^2 = {coh_sq} exceeds the population bound p_down*p_up = {bound}")]
    CoherenceExceedsPopulations { coh_sq: f64, bound: f64 },
    #[error("{which} = {value} is not finite")]
    NotFinite { which: &'static str, value: f64 },
}

/// State of one coupled doublet {|down, n>, |up, n+k>}.
///
/// `p_down` and `p_up` are the occupancies of the two doublet levels and
/// `coh` is the slow envelope of the cross coherence (the fast optical and
/// vibrational phases are factored out; see
/// [`crate::manifold::apply_coherence_frame`] to restore them). Population
/// in other manifolds is not represented here: a full ensemble is a weighted
/// collection of these doublets plus [`UncoupledState`] spectators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldState {
    /// Vibrational index of the lower (internal ground) level.
    pub n: u32,
    /// Sideband order; the upper level sits at vibrational index `n + k`.
    pub k: i32,
    pub p_down: f64,
    pub p_up: f64,
    pub coh: Complex64,
}

impl ManifoldState {
    /// Builds a state and checks every physicality invariant.
    pub fn new(n: u32, k: i32, p_down: f64, p_up: f64, coh: Complex64) -> Result<Self, StateError> {
        let state = ManifoldState { n, k, p_down, p_up, coh };
        state.check()?;
        Ok(state)
    }

    /// Doublet entirely in the lower level with occupancy `weight`.
    pub fn ground(n: u32, k: i32, weight: f64) -> Result<Self, StateError> {
        Self::new(n, k, weight, 0.0, Complex64::new(0.0, 0.0))
    }

    /// Verifies all invariants, tolerating [`STATE_SLACK`] of roundoff.
    pub fn check(&self) -> Result<(), StateError> {
        if i64::from(self.n) + i64::from(self.k) < 0 {
            return Err(StateError::InvalidManifold { n: self.n, k: self.k });
        }
        for (which, value) in [
            ("p_down", self.p_down),
            ("p_up", self.p_up),
            ("Re coh", self.coh.re),
            ("Im coh", self.coh.im),
        ] {
            if !value.is_finite() {
                return Err(StateError::NotFinite { which, value });
            }
        }
        if self.p_down < -STATE_SLACK {
            return Err(StateError::NegativeProbability {
                which: "p_down",
                value: self.p_down,
            });
        }
        if self.p_up < -STATE_SLACK {
            return Err(StateError::NegativeProbability {
                which: "p_up",
                value: self.p_up,
            });
        }
        let sum = self.p_down + self.p_up;
        if sum > 1.0 + STATE_SLACK {
            return Err(StateError::ProbabilitySumExceedsOne { sum });
        }
        let bound = self.p_down.max(0.0) * self.p_up.max(0.0);
        let coh_sq = self.coh.norm_sqr();
        if coh_sq > bound + STATE_SLACK {
            return Err(StateError::CoherenceExceedsPopulations { coh_sq, bound });
        }
        Ok(())
    }

    /// Total doublet occupancy, conserved by the dynamics.
    pub fn trace(&self) -> f64 {
        self.p_down + self.p_up
    }

    pub(crate) fn from_parts_unchecked(
        n: u32,
        k: i32,
        p_down: f64,
        p_up: f64,
        coh: Complex64,
    ) -> Self {
        ManifoldState { n, k, p_down, p_up, coh }
    }
}

/// A spectator level |down, n> with n + k < 0: the drive has no partner
/// state to couple it to, so its occupancy never moves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncoupledState {
    pub n: u32,
    pub k: i32,
    pub p_down: f64,
}

impl UncoupledState {
    pub fn new(n: u32, k: i32, p_down: f64) -> Result<Self, StateError> {
        if i64::from(n) + i64::from(k) >= 0 {
            return Err(StateError::NotASpectator { n, k });
        }
        if !p_down.is_finite() {
            return Err(StateError::NotFinite { which: "p_down", value: p_down });
        }
        if p_down < -STATE_SLACK {
            return Err(StateError::NegativeProbability { which: "p_down", value: p_down });
        }
        if p_down > 1.0 + STATE_SLACK {
            return Err(StateError::ProbabilitySumExceedsOne { sum: p_down });
        }
        Ok(UncoupledState { n, k, p_down })
    }
}
