//! Ensemble dynamics of the TLS coherence ρ̄10.
//!
//! The recursion ρ̄10 ← ρ̄10 + (c1 + i c2) ρ̄10 + (c3 + i c4) ρ̄01 decouples
//! from the populations. Its continuum solution is exp(M j) with
//! M = c1·1 + K and K² = γ²·1, so only cosh(γj) and sinh(γj)/γ are needed;
//! both are even in γ and real whenever γ² is.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{boltzmann_pair, jump_coherence_factor, same_band_shift};
use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffdiagCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// √(−c2² + c3² + c4²), on the non-negative real or imaginary axis.
    pub gamma: C64,
}

impl OffdiagCoeffs {
    pub fn gamma_sq(&self) -> f64 {
        -self.c2 * self.c2 + self.c3 * self.c3 + self.c4 * self.c4
    }
}

pub fn offdiag_coeffs(p: &ModelParams) -> OffdiagCoeffs {
    let (ep, em) = boltzmann_pair(p);
    let pref = p.lambda * p.lambda * (ep + em);
    let shift = same_band_shift(p.detuning, p.dt) + same_band_shift(2.0 * p.delta_s + p.detuning, p.dt);
    let diag = -shift * pref;
    let cross = jump_coherence_factor(p) * pref;
    let (c1, c2, c3, c4) = (diag.re, diag.im, cross.re, cross.im);
    let g2 = -c2 * c2 + c3 * c3 + c4 * c4;
    let gamma = if g2 >= 0.0 {
        C64::new(g2.sqrt(), 0.0)
    } else {
        C64::new(0.0, (-g2).sqrt())
    };
    OffdiagCoeffs {
        c1,
        c2,
        c3,
        c4,
        gamma,
    }
}

/// One step of the ensemble recursion.
pub fn offdiag_map(rho10: C64, p: &ModelParams) -> C64 {
    let c = offdiag_coeffs(p);
    step(rho10, &c)
}

pub(crate) fn step(rho10: C64, c: &OffdiagCoeffs) -> C64 {
    rho10 + C64::new(c.c1, c.c2) * rho10 + C64::new(c.c3, c.c4) * rho10.conj()
}

/// sinh(z)/z.
fn sinhc(z: C64) -> C64 {
    if z.norm() < 1e-3 {
        let z2 = z * z;
        C64::new(1.0, 0.0) + z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sinh() / z
    }
}

/// ρ̄10 after `j` measurements and its modulus.
pub fn offdiag_closed_form(rho10_initial: C64, j: f64, c: &OffdiagCoeffs) -> (C64, f64) {
    let gj = c.gamma * j;
    let ch = gj.cosh().re;
    // sinh(γj)/γ = j·sinhc(γj); finite as γ → 0.
    let sh = (sinhc(gj) * j).re;
    let decay = (c.c1 * j).exp();
    let (x0, y0) = (rho10_initial.re, rho10_initial.im);
    let x = decay * ((ch + c.c3 * sh) * x0 + (c.c4 - c.c2) * sh * y0);
    let y = decay * ((c.c2 + c.c4) * sh * x0 + (ch - c.c3 * sh) * y0);
    let z = C64::new(x, y);
    (z, z.norm())
}
