//! Physical model: parameters, TLS state, banded environments and the
//! total Hamiltonian.

mod degeneracy;
mod environment;
mod hamiltonian;
mod params;
mod qubit;

pub use degeneracy::{
    beta_working_point, binomial_degeneracy, digamma, effective_beta, ln_binomial, BetaMethod,
    MAX_EXACT_SPINS,
};
pub use environment::{
    build_band_environment, build_spin_environment, build_spin_environment_windowed,
    default_band_range, Band, BandedEnvironment, CouplingModel, EnvSpec, DEFAULT_WINDOW,
    MAX_ENV_DIM,
};
pub use hamiltonian::{build_total_hamiltonian, hermiticity_residual, joint_index, tls_energies};
pub use params::ModelParams;
pub use qubit::QubitState;
