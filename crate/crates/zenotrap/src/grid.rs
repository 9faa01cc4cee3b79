//! Uniform sampling grids for time traces.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("t_start = {0} must be nonnegative and finite")]
    NegativeStart(f64),
    #[error("time span is empty or inverted: t_start = {t_start}, t_end = {t_end}")]
    EmptySpan { t_start: f64, t_end: f64 },
    #[error("a grid needs at least 2 points, got {0}")]
    TooFewPoints(usize),
}

/// A uniform time grid on `[t_start, t_end]` with `n_points` samples,
/// endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_points: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_points: usize) -> Result<Self, GridError> {
        if !(t_start >= 0.0) || !t_start.is_finite() {
            return Err(GridError::NegativeStart(t_start));
        }
        if !(t_end > t_start) || !t_end.is_finite() {
            return Err(GridError::EmptySpan { t_start, t_end });
        }
        if n_points < 2 {
            return Err(GridError::TooFewPoints(n_points));
        }
        Ok(TimeGrid { t_start, t_end, n_points })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Spacing between consecutive samples.
    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_points - 1) as f64
    }

    /// The i-th sample. The final sample is exactly `t_end`.
    pub fn time_at(&self, i: usize) -> f64 {
        debug_assert!(i < self.n_points);
        if i == self.n_points - 1 {
            self.t_end
        } else {
            self.t_start + i as f64 * self.dt()
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.time_at(i))
    }
}
