//! Exact joint evolution with periodic projective band measurements.
//!
//! The joint TLS ⊗ environment state is propagated with the exact
//! unitary of one measurement interval. Two choices select the engine:
//!
//! * [`Engine`]: `sampled` draws measurement records trajectory by
//!   trajectory; `nonselective` averages over all records exactly.
//! * [`ResetMode`]: `exact` keeps the full post-measurement state;
//!   `coarse` replaces it by ρS ⊗ P_k/N_k after every measurement.
//!
//! Reported coherences ρ10 are taken in the frame co-rotating with the
//! free TLS precession, so they are constant at zero coupling.

mod blocks;
mod propagator;
mod series;
mod simulator;
mod state;

use serde::{Deserialize, Serialize};

pub use propagator::{identity_residual, make_propagator, Propagator, UNITARITY_TOL};
pub use series::{write_series_csv, EnsemblePoint, EnsembleSeries, SeriesRow, Trajectory, TrajectoryStep};
pub use simulator::{run_ensemble, run_trajectory, trajectory_seed, Simulator, MAX_JOINT_DIM};
pub use state::{
    band_projector, band_weights, coarse_reset, cojump_norm, environment_marginal,
    measure_band_nonselective, measure_band_selective, reduced_qubit_state, SelectiveOutcome,
    TotalState, MIN_TOTAL_WEIGHT, POSITIVITY_TOL,
};

/// Post-measurement treatment of the environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ResetMode {
    Exact,
    #[default]
    Coarse,
}

/// How measurement records are averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Sampled,
    #[default]
    Nonselective,
}

impl ResetMode {
    pub fn name(self) -> &'static str {
        match self {
            ResetMode::Exact => "exact",
            ResetMode::Coarse => "coarse",
        }
    }
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Sampled => "sampled",
            Engine::Nonselective => "nonselective",
        }
    }
}
