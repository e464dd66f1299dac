use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Physical scalars shared by the exact and the analytic engine.
///
/// Energies are in an arbitrary unit `u` with ħ = 1, times in `1/u`.
/// `beta` is only read by the analytic layer; the exact engine gets its
/// effective temperature from the environment's degeneracies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// TLS splitting δS.
    pub delta_s: f64,
    /// Detuning Δδ = δB − δS.
    pub detuning: f64,
    /// Coupling strength λ.
    pub lambda: f64,
    /// Time between measurements Δt.
    pub dt: f64,
    /// Environmental inverse temperature β.
    pub beta: f64,
}

impl ModelParams {
    pub fn new(delta_s: f64, detuning: f64, lambda: f64, dt: f64, beta: f64) -> Result<Self> {
        let p = Self {
            delta_s,
            detuning,
            lambda,
            dt,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.delta_s, self.detuning, self.lambda, self.dt, self.beta];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(invalid("params", "all parameters must be finite"));
        }
        if self.delta_s <= 0.0 {
            return Err(invalid("delta_s", format!("must be > 0, got {}", self.delta_s)));
        }
        if self.delta_b() <= 0.0 {
            return Err(invalid(
                "detuning",
                format!("delta_s + detuning must be > 0, got {}", self.delta_b()),
            ));
        }
        if self.lambda < 0.0 {
            return Err(invalid("lambda", format!("must be >= 0, got {}", self.lambda)));
        }
        if self.dt < 0.0 {
            return Err(invalid("dt", format!("must be >= 0, got {}", self.dt)));
        }
        Ok(())
    }

    /// Environment spin splitting δB = δS + Δδ.
    pub fn delta_b(&self) -> f64 {
        self.delta_s + self.detuning
    }

    /// The dimensionless product β·δB that sets the Boltzmann factors.
    pub fn beta_delta_b(&self) -> f64 {
        self.beta * self.delta_b()
    }

    pub fn with_dt(self, dt: f64) -> Self {
        Self { dt, ..self }
    }

    pub fn with_detuning(self, detuning: f64) -> Self {
        Self { detuning, ..self }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        Self { beta, ..self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_environment_splitting() {
        assert!(ModelParams::new(1.0, -1.0, 0.05, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, -0.9, 0.05, 1.0, 0.0).is_ok());
    }

    #[test]
    fn rejects_negative_lambda_and_dt() {
        assert!(ModelParams::new(1.0, 0.0, -0.1, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, 0.1, -1.0, 0.0).is_err());
        assert!(ModelParams::new(0.0, 1.0, 0.1, 1.0, 0.0).is_err());
    }

    #[test]
    fn beta_may_take_any_sign() {
        assert!(ModelParams::new(1.0, 0.0, 0.1, 1.0, -3.0).is_ok());
    }
}
