//! Gaussian-formalism simulation of driven quantum walks on a cycle.
//!
//! A walk iterates a coin operation and a coin-conditioned cyclic shift. The
//! coin can be a beam splitter (purely linear) or a pumped two-mode squeezer,
//! which mixes annihilation and creation operators and thereby generates
//! entanglement, squeezing, and photon-number correlations out of classical
//! coherent input light. Every map is a [Bogoliubov
//! transform](transform::BogoliubovTransform) acting on the mode operators;
//! states never appear explicitly, so walks with hundreds of modes stay
//! cheap.
//!
//! The crate is organized along the pipeline:
//!
//! - [`walk`] builds shift, coin, and composite-coin transforms;
//! - [`propagator`] raises the single step to t steps, either by dense
//!   composition or in closed form through the DFT-diagonalized spectral
//!   representation (real t selects the continuous evolution);
//! - [`observables`] evaluates squeezing, entanglement, photon statistics,
//!   noise, amplification, and position distributions;
//! - [`oracle`] provides Fock-space and amplitude-recursion reference
//!   implementations that bypass the Gaussian formalism;
//! - [`verify`] cross-checks all routes against each other.
//!
//! With the default `parallel` feature, batch evaluation over a time grid
//! runs on rayon; disabling it falls back to the identical sequential code
//! path.

pub mod error;
pub mod layout;
pub mod linalg;
pub mod observables;
pub mod oracle;
pub mod propagator;
pub mod transform;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};
pub use layout::{CoherentInput, CoinValue, ModeLayout};
pub use observables::{IntensityKind, ObservableReport};
pub use transform::{BogoliubovTransform, DEFAULT_VALIDATION_TOL};
pub use walk::{CoinSpec, WalkSpec};
