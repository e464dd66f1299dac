//! Joint TLS ⊗ environment states in the TLS-major basis
//! (index = tls·D + env) and the measurement operations acting on them.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{BandedEnvironment, QubitState};

/// Smallest total Born weight accepted before a measurement is declared
/// numerically impossible.
pub const MIN_TOTAL_WEIGHT: f64 = 1e-15;

/// Eigenvalues above this are treated as non-negative.
pub const POSITIVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum TotalState {
    Pure(DVector<C64>),
    Density(DMatrix<C64>),
}

impl TotalState {
    pub fn dim(&self) -> usize {
        match self {
            TotalState::Pure(psi) => psi.len(),
            TotalState::Density(rho) => rho.nrows(),
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            TotalState::Pure(psi) => psi.norm_squared(),
            TotalState::Density(rho) => rho.trace().re,
        }
    }

    pub fn to_density(&self) -> DMatrix<C64> {
        match self {
            TotalState::Pure(psi) => psi * psi.adjoint(),
            TotalState::Density(rho) => rho.clone(),
        }
    }

    pub fn purity(&self) -> f64 {
        match self {
            TotalState::Pure(psi) => psi.norm_squared().powi(2),
            TotalState::Density(rho) => rho.iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    /// ρS ⊗ ρB for density-matrix factors.
    pub fn product(rho_s: &QubitState, rho_b: &DMatrix<C64>) -> TotalState {
        TotalState::Density(rho_s.to_matrix().kronecker(rho_b))
    }

    /// Smallest eigenvalue of the density matrix (0 for pure states).
    pub fn min_eigenvalue(&self) -> f64 {
        match self {
            TotalState::Pure(_) => 0.0,
            TotalState::Density(rho) => {
                let h = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
                h.symmetric_eigenvalues().min()
            }
        }
    }

    /// Checks trace, Hermiticity and positivity within `tol`.
    pub fn check_physical(&self, tol: f64) -> Result<()> {
        let trace = self.trace();
        if (trace - 1.0).abs() > tol {
            return Err(Error::LostNormalization { total: trace });
        }
        if let TotalState::Density(rho) = self {
            let residual = crate::model::hermiticity_residual(rho);
            if residual > tol {
                return Err(Error::NotHermitian { residual });
            }
            let min = self.min_eigenvalue();
            if min < -POSITIVITY_TOL {
                return Err(crate::error::invalid(
                    "state",
                    format!("negative eigenvalue {min:.3e}"),
                ));
            }
        }
        Ok(())
    }
}

fn check_dim(state: &TotalState, env: &BandedEnvironment) -> Result<()> {
    if state.dim() != env.joint_dim() {
        return Err(Error::DimensionMismatch(format!(
            "state has dimension {}, environment joint dimension {}",
            state.dim(),
            env.joint_dim()
        )));
    }
    Ok(())
}

/// Joint indices spanned by TLS ⊗ band `k`.
pub(crate) fn band_indices(env: &BandedEnvironment, k: usize) -> Result<Vec<usize>> {
    let band = env.band(k)?;
    let d = env.dim();
    Ok((0..2)
        .flat_map(|a| band.levels().map(move |e| a * d + e))
        .collect())
}

/// 1_S ⊗ P_k on the joint space.
pub fn band_projector(env: &BandedEnvironment, k: usize) -> Result<DMatrix<C64>> {
    let mut p = DMatrix::zeros(env.joint_dim(), env.joint_dim());
    for i in band_indices(env, k)? {
        p[(i, i)] = C64::new(1.0, 0.0);
    }
    Ok(p)
}

/// Born weights Tr(P_k ρ) for every band in range, in band order.
pub fn band_weights(state: &TotalState, env: &BandedEnvironment) -> Result<Vec<f64>> {
    check_dim(state, env)?;
    env.bands()
        .iter()
        .map(|b| {
            let idx = band_indices(env, b.k)?;
            Ok(match state {
                TotalState::Pure(psi) => idx.iter().map(|&i| psi[i].norm_sqr()).sum(),
                TotalState::Density(rho) => idx.iter().map(|&i| rho[(i, i)].re).sum(),
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SelectiveOutcome {
    pub band: usize,
    pub state: TotalState,
    pub probability: f64,
}

/// Samples a band outcome from the Born weights and returns the collapsed,
/// renormalized state.
pub fn measure_band_selective<R: Rng + ?Sized>(
    state: &TotalState,
    env: &BandedEnvironment,
    rng: &mut R,
) -> Result<SelectiveOutcome> {
    let weights = band_weights(state, env)?;
    let total: f64 = weights.iter().sum();
    if !(total > MIN_TOTAL_WEIGHT) {
        return Err(Error::LostNormalization { total });
    }
    let pick = sample_index(&weights, total, rng);
    let k = env.bands()[pick].k;
    let probability = weights[pick] / total;
    let idx = band_indices(env, k)?;
    let collapsed = match state {
        TotalState::Pure(psi) => {
            let mut out = DVector::zeros(psi.len());
            for &i in &idx {
                out[i] = psi[i];
            }
            out /= C64::new(weights[pick].sqrt(), 0.0);
            TotalState::Pure(out)
        }
        TotalState::Density(rho) => {
            let mut out = DMatrix::zeros(rho.nrows(), rho.ncols());
            for &i in &idx {
                for &j in &idx {
                    out[(i, j)] = rho[(i, j)];
                }
            }
            out /= C64::new(weights[pick], 0.0);
            TotalState::Density(out)
        }
    };
    Ok(SelectiveOutcome {
        band: k,
        state: collapsed,
        probability,
    })
}

/// Index drawn with probability weights[i]/total.
pub(crate) fn sample_index<R: Rng + ?Sized>(weights: &[f64], total: f64, rng: &mut R) -> usize {
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Σ_k P_k ρ P_k: removes every coherence between different bands.
pub fn measure_band_nonselective(rho: &DMatrix<C64>, env: &BandedEnvironment) -> Result<DMatrix<C64>> {
    if rho.nrows() != env.joint_dim() || !rho.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "density matrix is {}x{}, environment joint dimension {}",
            rho.nrows(),
            rho.ncols(),
            env.joint_dim()
        )));
    }
    let level_band = env.level_bands();
    let d = env.dim();
    Ok(DMatrix::from_fn(rho.nrows(), rho.ncols(), |i, j| {
        if level_band[i % d] == level_band[j % d] {
            rho[(i, j)]
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// ρS ⊗ P_k/N_k.
pub fn coarse_reset(rho_s: &QubitState, env: &BandedEnvironment, k: usize) -> Result<TotalState> {
    rho_s.validate()?;
    let band = env.band(k)?;
    let mut rho_b = DMatrix::zeros(env.dim(), env.dim());
    let w = C64::new(1.0 / band.degeneracy as f64, 0.0);
    for e in band.levels() {
        rho_b[(e, e)] = w;
    }
    Ok(TotalState::product(rho_s, &rho_b))
}

/// Tr_B of a joint state.
pub fn reduced_qubit_state(state: &TotalState) -> QubitState {
    let d = state.dim() / 2;
    let mut m = Matrix2::<C64>::zeros();
    match state {
        TotalState::Pure(psi) => {
            for a in 0..2 {
                for b in 0..2 {
                    m[(a, b)] = (0..d).map(|e| psi[a * d + e] * psi[b * d + e].conj()).sum();
                }
            }
        }
        TotalState::Density(rho) => {
            for a in 0..2 {
                for b in 0..2 {
                    m[(a, b)] = (0..d).map(|e| rho[(a * d + e, b * d + e)]).sum();
                }
            }
        }
    }
    QubitState::from_matrix(&m)
}

/// Tr_S of a joint state.
pub fn environment_marginal(state: &TotalState) -> DMatrix<C64> {
    let d = state.dim() / 2;
    let rho = state.to_density();
    DMatrix::from_fn(d, d, |e, f| rho[(e, f)] + rho[(d + e, d + f)])
}

/// Frobenius norm of ρ − ρS ⊗ ρB.
pub fn cojump_norm(state: &TotalState) -> f64 {
    let rho = state.to_density();
    let product = reduced_qubit_state(state).to_matrix().kronecker(&environment_marginal(state));
    (rho - product).norm()
}
