//! Steady states and photon statistics of N two-level emitters chirally
//! coupled to a one-dimensional waveguide, together with the closed-form
//! results and the classical coupled-mode baseline they are checked against.
//!
//! The crate is organized bottom-up:
//! - [`hilbert`]: dense complex matrices and multi-qubit operator placement;
//! - [`model`]: emitters, couplings, phases, drive; K, Γ, and H builders;
//! - [`dynamics`]: the master-equation superoperator, steady-state solver,
//!   and an independent RK4 integrator;
//! - [`observables`]: output-field operators and every reported statistic;
//! - [`oracles`]: closed-form expressions used as ground truth;
//! - [`tcmt`]: the classical temporal coupled-mode baseline;
//! - [`cli`]: config files, sweeps, figure data, validation.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod model;
pub mod observables;
pub mod oracles;
pub mod tcmt;

pub use error::{Error, Result};
