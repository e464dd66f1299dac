//! Two-level system coupled to a banded spin environment whose energy is
//! measured periodically.
//!
//! Two engines describe the same physics:
//!
//! * [`dynamics`] evolves the joint TLS ⊗ environment state exactly
//!   (dense Hermitian eigendecomposition) and applies projective band
//!   measurements, either sampled trajectory by trajectory or averaged
//!   exactly.
//! * [`analytics`] implements the second-order maps: conditional updates,
//!   outcome probabilities, the ensemble recursion, its attractor and the
//!   coherence dynamics.
//!
//! [`experiments`] runs the reference scenarios and compares the two
//! engines; [`cli`] wraps them for the command line.

pub mod analytics;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod model;

pub use error::{Error, Result};

/// Version string embedded in every output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
