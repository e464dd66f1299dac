use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::state::TotalState;
use crate::error::{invalid, Error, Result};
use crate::model::hermiticity_residual;

/// Residual allowed in U†U − 1 and V†V − 1.
pub const UNITARITY_TOL: f64 = 1e-9;

/// U = exp(−iHΔt) together with the eigendecomposition of H, so that the
/// same Hamiltonian can be propagated over other intervals cheaply.
#[derive(Debug, Clone)]
pub struct Propagator {
    energies: DVector<f64>,
    vectors: DMatrix<C64>,
    dt: f64,
    unitary: DMatrix<C64>,
}

/// Diagonalizes `h` and builds the propagator for one interval `dt`.
pub fn make_propagator(h: &DMatrix<C64>, dt: f64) -> Result<Propagator> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian is {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    if !dt.is_finite() {
        return Err(invalid("dt", "must be finite"));
    }
    if h.iter().any(|z| !z.is_finite()) {
        return Err(invalid("hamiltonian", "non-finite entry"));
    }
    let scale = h.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let residual = hermiticity_residual(h);
    if residual > 1e-10 * scale {
        return Err(Error::NotHermitian { residual });
    }
    let eig = h
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::NotHermitian { residual })?;
    let vectors = eig.eigenvectors;
    let drift = identity_residual(&(vectors.adjoint() * &vectors));
    if drift > UNITARITY_TOL {
        return Err(invalid(
            "hamiltonian",
            format!("eigenvector matrix not unitary (residual {drift:.3e})"),
        ));
    }
    let mut p = Propagator {
        energies: eig.eigenvalues,
        vectors,
        dt,
        unitary: DMatrix::zeros(0, 0),
    };
    p.unitary = p.at(dt);
    Ok(p)
}

/// max |A − 1| over all entries.
pub fn identity_residual(a: &DMatrix<C64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

impl Propagator {
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn unitary(&self) -> &DMatrix<C64> {
        &self.unitary
    }

    /// Eigenvalues of H in ascending order.
    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.vectors
    }

    /// exp(−iHt) = V·exp(−iEt)·V† for an arbitrary interval.
    pub fn at(&self, t: f64) -> DMatrix<C64> {
        let mut scaled = self.vectors.clone();
        for (mut col, e) in scaled.column_iter_mut().zip(self.energies.iter()) {
            col *= C64::from_polar(1.0, -e * t);
        }
        scaled * self.vectors.adjoint()
    }

    /// Same Hamiltonian, different interval; no re-diagonalization.
    pub fn with_dt(&self, dt: f64) -> Propagator {
        Propagator {
            energies: self.energies.clone(),
            vectors: self.vectors.clone(),
            dt,
            unitary: self.at(dt),
        }
    }

    /// max |U†U − 1|.
    pub fn unitarity_residual(&self) -> f64 {
        identity_residual(&(self.unitary.adjoint() * &self.unitary))
    }

    /// One interval of Schrödinger evolution.
    pub fn evolve(&self, state: &TotalState) -> Result<TotalState> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has dimension {}, propagator {}",
                state.dim(),
                self.dim()
            )));
        }
        Ok(match state {
            TotalState::Pure(psi) => TotalState::Pure(&self.unitary * psi),
            TotalState::Density(rho) => TotalState::Density(&self.unitary * rho * self.unitary.adjoint()),
        })
    }
}
