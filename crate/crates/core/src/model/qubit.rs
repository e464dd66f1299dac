use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Reduced density matrix of the two-level system.
///
/// Level 0 is the ground state, level 1 the excited state. Only `rho10`
/// is stored; `rho01` is its conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    pub rho00: f64,
    pub rho11: f64,
    pub rho10: C64,
}

impl QubitState {
    pub const TRACE_TOL: f64 = 1e-9;

    pub fn ground() -> Self {
        Self {
            rho00: 1.0,
            rho11: 0.0,
            rho10: C64::new(0.0, 0.0),
        }
    }

    pub fn excited() -> Self {
        Self {
            rho00: 0.0,
            rho11: 1.0,
            rho10: C64::new(0.0, 0.0),
        }
    }

    /// Builds a state from the ground population and the coherence ⟨1|ρ|0⟩.
    pub fn new(rho00: f64, rho10: C64) -> Result<Self> {
        let s = Self {
            rho00,
            rho11: 1.0 - rho00,
            rho10,
        };
        s.validate()?;
        Ok(s)
    }

    /// Diagonal (thermal) state with the given ground population.
    pub fn diagonal(rho00: f64) -> Result<Self> {
        Self::new(rho00, C64::new(0.0, 0.0))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho00.is_finite() && self.rho11.is_finite() && self.rho10.is_finite()) {
            return Err(invalid("qubit_state", "non-finite entry"));
        }
        if (self.rho00 + self.rho11 - 1.0).abs() > Self::TRACE_TOL {
            return Err(invalid(
                "qubit_state",
                format!("trace {} != 1", self.rho00 + self.rho11),
            ));
        }
        if self.rho00 < -Self::TRACE_TOL || self.rho11 < -Self::TRACE_TOL {
            return Err(invalid("qubit_state", "negative population"));
        }
        if self.rho10.norm_sqr() > self.rho00 * self.rho11 + Self::TRACE_TOL {
            return Err(invalid(
                "qubit_state",
                format!(
                    "|rho01|^2 = {} exceeds rho00*rho11 = {}",
                    self.rho10.norm_sqr(),
                    self.rho00 * self.rho11
                ),
            ));
        }
        Ok(())
    }

    pub fn rho01(&self) -> C64 {
        self.rho10.conj()
    }

    pub fn trace(&self) -> f64 {
        self.rho00 + self.rho11
    }

    pub fn purity(&self) -> f64 {
        self.rho00 * self.rho00 + self.rho11 * self.rho11 + 2.0 * self.rho10.norm_sqr()
    }

    /// Row/column order is (ground, excited).
    pub fn to_matrix(&self) -> Matrix2<C64> {
        Matrix2::new(
            C64::new(self.rho00, 0.0),
            self.rho01(),
            self.rho10,
            C64::new(self.rho11, 0.0),
        )
    }

    /// Reads a 2×2 matrix, hermitizing the coherence.
    pub fn from_matrix(m: &Matrix2<C64>) -> Self {
        Self {
            rho00: m[(0, 0)].re,
            rho11: m[(1, 1)].re,
            rho10: (m[(1, 0)] + m[(0, 1)].conj()) * 0.5,
        }
    }

    /// Rescales to unit trace.
    pub fn normalized(&self) -> Self {
        let t = self.trace();
        Self {
            rho00: self.rho00 / t,
            rho11: self.rho11 / t,
            rho10: self.rho10 / t,
        }
    }

    /// True when the state is a projector to within `tol`.
    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity() - 1.0).abs() < tol
    }

    /// Amplitudes (ground, excited) of a pure state, phase fixed so the
    /// larger amplitude is real and positive.
    pub fn pure_amplitudes(&self) -> Option<[C64; 2]> {
        if !self.is_pure(1e-10) {
            return None;
        }
        if self.rho00 >= self.rho11 {
            let a0 = self.rho00.sqrt();
            Some([C64::new(a0, 0.0), self.rho10 / a0])
        } else {
            let a1 = self.rho11.sqrt();
            Some([self.rho01() / a1, C64::new(a1, 0.0)])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_coherence_beyond_positivity() {
        assert!(QubitState::new(0.5, C64::new(0.5, 0.0)).is_ok());
        assert!(QubitState::new(0.5, C64::new(0.51, 0.0)).is_err());
        assert!(QubitState::new(1.2, C64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn matrix_roundtrip_hermitizes() {
        let s = QubitState::new(0.3, C64::new(0.1, -0.2)).unwrap();
        let m = s.to_matrix();
        assert_eq!(m[(0, 1)], m[(1, 0)].conj());
        assert_eq!(QubitState::from_matrix(&m), s);
    }

    #[test]
    fn pure_amplitudes_reproduce_projector() {
        let s = QubitState::new(0.3, C64::new(0.21_f64.sqrt() * 0.6, 0.21_f64.sqrt() * 0.8))
            .unwrap();
        let [a0, a1] = s.pure_amplitudes().unwrap();
        assert!((a0.norm_sqr() - 0.3).abs() < 1e-12);
        assert!((a1 * a0.conj() - s.rho10).norm() < 1e-12);
        assert!(QubitState::diagonal(0.5).unwrap().pure_amplitudes().is_none());
    }
}
