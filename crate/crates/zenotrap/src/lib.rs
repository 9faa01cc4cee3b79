//! Damped sideband Rabi dynamics for a trapped ion whose ground-level
//! vibrational occupancy is monitored continuously.
//!
//! The model is a two-level ion in a harmonic trap, driven on the k-th
//! vibrational sideband inside a standing-wave light field. Each pair
//! {|down, n>, |up, n+k>} forms a closed doublet whose population exchange
//! runs at a signed composite Rabi frequency set by the Lamb-Dicke parameter,
//! the standing-wave phase at the ion, and an associated Laguerre polynomial.
//! Continuous measurement of the ground-level occupancy enters as a
//! double-commutator dissipator with strength `kappa`, which damps the
//! doublet coherence at `kappa/2` and drags populations toward 1/2 at
//! effective rate `kappa/4`. Strong measurement freezes the exchange
//! (quantum Zeno regime); the threshold sits at `kappa_crit = 4|Omega|`
//! per doublet.
//!
//! Everything internal is in angular frequency units (rad/s). Conversions
//! from cyclic laboratory units live in [`units`].
//!
//! ```
//! use zenotrap::params::SystemParams;
//! use zenotrap::state::ManifoldState;
//! use zenotrap::manifold::evolve_closed_form;
//! use zenotrap::rabi::rabi_frequency;
//! use zenotrap::units::cyclic_to_angular;
//!
//! let params = SystemParams {
//!     omega: cyclic_to_angular(10.0e6),
//!     omega21: cyclic_to_angular(4.11e14),
//!     omega0: cyclic_to_angular(475.0e3),
//!     eta: 0.01,
//!     phi: std::f64::consts::FRAC_PI_2,
//!     sideband_k: 1,
//!     kappa: 0.0,
//! };
//! let coupling = rabi_frequency(&params, 0).unwrap();
//! let start = ManifoldState::ground(0, 1, 1.0).unwrap();
//! let half_flop = std::f64::consts::PI / coupling.omega_nk.abs();
//! let later = evolve_closed_form(&start, coupling.omega_nk, params.kappa, half_flop).unwrap();
//! assert!(later.p_up > 0.999999);
//! ```

pub mod analysis;
pub mod distribution;
pub mod grid;
pub mod manifold;
pub mod params;
pub mod population;
pub mod rabi;
pub mod special;
pub mod state;
pub mod units;

pub use distribution::VibrationalDistribution;
pub use grid::TimeGrid;
pub use manifold::{CoherenceFrame, DampingRegime};
pub use params::SystemParams;
pub use population::PopulationTrace;
pub use rabi::RabiCoupling;
pub use state::{ManifoldState, UncoupledState};

// [`ManifoldState`] carries its coherence as a `Complex64`, so the crate
// that defines the type is part of this crate's public signature.
pub use num_complex;
