use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::environment::BandedEnvironment;
use super::params::ModelParams;
use crate::error::{Error, Result};

/// Joint basis index of TLS level `tls` (0 ground, 1 excited) and
/// environment level `env` (TLS-major ordering).
#[inline]
pub fn joint_index(env_dim: usize, tls: usize, env: usize) -> usize {
    tls * env_dim + env
}

/// TLS energies (−δS/2, +δS/2).
pub fn tls_energies(delta_s: f64) -> [f64; 2] {
    [-0.5 * delta_s, 0.5 * delta_s]
}

/// H = (δS/2)σz ⊗ 1 + 1 ⊗ H_B + λ (σ⁺ + σ⁻) ⊗ B.
pub fn build_total_hamiltonian(params: &ModelParams, env: &BandedEnvironment) -> Result<DMatrix<C64>> {
    params.validate()?;
    let tol = 1e-12 * params.delta_b().abs().max(1.0);
    if (params.delta_b() - env.delta_b).abs() > tol {
        return Err(Error::DimensionMismatch(format!(
            "params give delta_b = {}, environment was built with {}",
            params.delta_b(),
            env.delta_b
        )));
    }
    let d = env.dim();
    let mut h = DMatrix::zeros(2 * d, 2 * d);
    let tls = tls_energies(params.delta_s);
    for (e, energy) in env.level_energies().into_iter().enumerate() {
        for (a, ea) in tls.iter().enumerate() {
            let i = joint_index(d, a, e);
            h[(i, i)] = C64::new(ea + energy, 0.0);
        }
    }
    if params.lambda != 0.0 {
        let b = env.coupling_operator() * C64::new(params.lambda, 0.0);
        // σx ⊗ B fills the two off-diagonal TLS blocks.
        h.view_mut((0, d), (d, d)).copy_from(&b);
        h.view_mut((d, 0), (d, d)).copy_from(&b);
    }
    Ok(h)
}

/// max |H − H†| over all entries.
pub fn hermiticity_residual(h: &DMatrix<C64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..h.nrows() {
        for j in i..h.ncols() {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}
