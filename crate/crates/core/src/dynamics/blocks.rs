//! Band-resolved views of the one-interval propagator.
//!
//! Between measurements the joint state is supported on a single band
//! (selective engine) or block diagonal in the bands (non-selective
//! engine), so only the blocks U_{k'k} = (1⊗P_k') U (1⊗P_k) are ever
//! needed. Inside a block the local index is a·N_k + e for TLS level `a`
//! and level `e` of the band.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, Vector4};
use num_complex::Complex64 as C64;

use crate::model::BandedEnvironment;

#[derive(Debug, Clone)]
pub(crate) struct BandBlocks {
    sizes: Vec<usize>,
    blocks: Vec<DMatrix<C64>>,
}

impl BandBlocks {
    pub fn new(u: &DMatrix<C64>, env: &BandedEnvironment) -> Self {
        let d = env.dim();
        let bands = env.bands();
        let global: Vec<Vec<usize>> = bands
            .iter()
            .map(|b| (0..2).flat_map(|a| b.levels().map(move |e| a * d + e)).collect())
            .collect();
        let mut blocks = Vec::with_capacity(bands.len() * bands.len());
        for rows in &global {
            for cols in &global {
                blocks.push(DMatrix::from_fn(rows.len(), cols.len(), |r, c| u[(rows[r], cols[c])]));
            }
        }
        BandBlocks {
            sizes: bands.iter().map(|b| b.degeneracy).collect(),
            blocks,
        }
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn size(&self, i: usize) -> usize {
        self.sizes[i]
    }

    /// U_{to,from} with band positions (not band numbers).
    pub fn block(&self, to: usize, from: usize) -> &DMatrix<C64> {
        &self.blocks[to * self.count() + from]
    }

    /// Coarse-reset transfer maps built from these blocks.
    pub fn transfer_maps(&self) -> TransferMaps {
        let nb = self.count();
        let mut maps = Vec::with_capacity(nb * nb);
        for to in 0..nb {
            for from in 0..nb {
                maps.push(transfer(self.block(to, from), self.size(to), self.size(from)));
            }
        }
        TransferMaps { count: nb, maps }
    }
}

/// vec index of ρ(c,d) in column-major order.
#[inline]
fn vidx(c: usize, d: usize) -> usize {
    c + 2 * d
}

/// Superoperator ρS ↦ Tr_B[P_to U (ρS ⊗ P_from/N_from) U† P_to] acting on
/// column-major vec(ρS).
fn transfer(w: &DMatrix<C64>, n_to: usize, n_from: usize) -> Matrix4<C64> {
    let mut t = Matrix4::zeros();
    let norm = 1.0 / n_from as f64;
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    let mut acc = C64::new(0.0, 0.0);
                    for n in 0..n_from {
                        let (col_a, col_b) = (a * n_from + n, b * n_from + n);
                        for m in 0..n_to {
                            acc += w[(c * n_to + m, col_a)] * w[(d * n_to + m, col_b)].conj();
                        }
                    }
                    t[(vidx(c, d), vidx(a, b))] = acc * norm;
                }
            }
        }
    }
    t
}

/// All band-to-band transfer maps for the coarse-reset engine.
#[derive(Debug, Clone)]
pub(crate) struct TransferMaps {
    count: usize,
    maps: Vec<Matrix4<C64>>,
}

impl TransferMaps {
    pub fn get(&self, to: usize, from: usize) -> &Matrix4<C64> {
        &self.maps[to * self.count + from]
    }

    /// Unnormalized TLS state landing in band `to` from ρS in band `from`.
    pub fn apply(&self, to: usize, from: usize, rho: &Matrix2<C64>) -> Matrix2<C64> {
        let v = Vector4::from_column_slice(rho.as_slice());
        let out = self.get(to, from) * v;
        Matrix2::from_column_slice(out.as_slice())
    }
}

/// Tr_B of a band-local density block.
pub(crate) fn block_reduced(rho: &DMatrix<C64>, n: usize) -> Matrix2<C64> {
    let mut m = Matrix2::zeros();
    for a in 0..2 {
        for b in 0..2 {
            m[(a, b)] = (0..n).map(|e| rho[(a * n + e, b * n + e)]).sum();
        }
    }
    m
}

/// Tr_B of a band-local pure segment.
pub(crate) fn segment_reduced(psi: &DVector<C64>, n: usize) -> Matrix2<C64> {
    let mut m = Matrix2::zeros();
    for a in 0..2 {
        for b in 0..2 {
            m[(a, b)] = (0..n).map(|e| psi[a * n + e] * psi[b * n + e].conj()).sum();
        }
    }
    m
}

/// tr(W·U†) for equally shaped W and U, i.e. Σ W∘conj(U).
pub(crate) fn trace_against(w: &DMatrix<C64>, u: &DMatrix<C64>) -> f64 {
    w.iter().zip(u.iter()).map(|(x, y)| (x * y.conj()).re).sum()
}
