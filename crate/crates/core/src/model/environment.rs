//! Banded spin environments: band bookkeeping, random inter-band couplings
//! and the physical σx⊗σx coupling of a small spin register.

use std::collections::HashMap;
use std::ops::{Range, RangeInclusive};

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::degeneracy::{binomial_degeneracy, MAX_EXACT_SPINS};
use crate::error::{invalid, Error, Result};

/// Upper bound on the number of environment levels kept in dense form.
pub const MAX_ENV_DIM: usize = 4096;

/// Default half-width of the band window used for large environments.
pub const DEFAULT_WINDOW: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingModel {
    /// Independent complex Gaussian blocks between adjacent bands.
    RandomBand,
    /// λ σx ⊗ Σ_i g_i σx⁽ⁱ⁾ with Gaussian weights g_i.
    SigmaX,
}

/// Serializable description of an environment; `build` is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvSpec {
    pub n: usize,
    pub delta_b: f64,
    pub seed: u64,
    #[serde(default)]
    pub band_width: f64,
    /// Inclusive `[lo, hi]`; `None` means every band.
    #[serde(default)]
    pub band_range: Option<[usize; 2]>,
    pub model: CouplingModel,
}

impl EnvSpec {
    pub fn range(&self) -> RangeInclusive<usize> {
        match self.band_range {
            Some([lo, hi]) => lo..=hi,
            None => 0..=self.n,
        }
    }

    pub fn build(&self) -> Result<BandedEnvironment> {
        match self.model {
            CouplingModel::RandomBand => build_band_environment(
                self.n,
                self.delta_b,
                self.seed,
                self.band_width,
                self.range(),
            ),
            CouplingModel::SigmaX => build_spin_environment_windowed(
                self.n,
                self.delta_b,
                self.seed,
                self.band_width,
                self.range(),
            ),
        }
    }
}

/// Full range for small registers, `k0 ± window` (clipped) otherwise.
pub fn default_band_range(n: usize, k0: usize, window: usize) -> RangeInclusive<usize> {
    if n <= 12 {
        0..=n
    } else {
        k0.saturating_sub(window)..=(k0 + window).min(n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub k: usize,
    pub degeneracy: usize,
    /// E_k = k·δB.
    pub energy: f64,
    /// Intra-band level shifts in [−w/2, w/2]; all zero for w = 0.
    pub offsets: Vec<f64>,
    /// Index of the band's first level in the environment basis.
    pub start: usize,
}

impl Band {
    pub fn levels(&self) -> Range<usize> {
        self.start..self.start + self.degeneracy
    }
}

/// An environment truncated to a contiguous window of bands.
///
/// `couplings[i]` holds ⟨band k_i+1 | B | band k_i⟩ (shape N_{k+1} × N_k);
/// the opposite block is always its adjoint, never drawn independently.
#[derive(Debug, Clone)]
pub struct BandedEnvironment {
    pub n: usize,
    pub delta_b: f64,
    pub band_width: f64,
    pub seed: u64,
    pub model: CouplingModel,
    bands: Vec<Band>,
    couplings: Vec<DMatrix<C64>>,
    dim: usize,
}

impl BandedEnvironment {
    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn k_lo(&self) -> usize {
        self.bands[0].k
    }

    pub fn k_hi(&self) -> usize {
        self.bands[self.bands.len() - 1].k
    }

    pub fn contains(&self, k: usize) -> bool {
        (self.k_lo()..=self.k_hi()).contains(&k)
    }

    /// Number of environment levels.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of TLS ⊗ environment.
    pub fn joint_dim(&self) -> usize {
        2 * self.dim
    }

    fn check(&self, k: usize) -> Result<usize> {
        if self.contains(k) {
            Ok(k - self.k_lo())
        } else {
            Err(Error::BandOutOfRange {
                k,
                lo: self.k_lo(),
                hi: self.k_hi(),
            })
        }
    }

    pub fn band(&self, k: usize) -> Result<&Band> {
        Ok(&self.bands[self.check(k)?])
    }

    /// C_{k+1,k}; requires both bands in range.
    pub fn coupling(&self, k: usize) -> Result<&DMatrix<C64>> {
        let i = self.check(k)?;
        self.check(k + 1)?;
        Ok(&self.couplings[i])
    }

    /// C_{k,k+1} = C_{k+1,k}†.
    pub fn coupling_adjoint(&self, k: usize) -> Result<DMatrix<C64>> {
        Ok(self.coupling(k)?.adjoint())
    }

    /// Per-level energies E_k + offset, in basis order.
    pub fn level_energies(&self) -> Vec<f64> {
        self.bands
            .iter()
            .flat_map(|b| b.offsets.iter().map(move |o| b.energy + o))
            .collect()
    }

    /// Band index of every level, in basis order.
    pub fn level_bands(&self) -> Vec<usize> {
        self.bands
            .iter()
            .flat_map(|b| std::iter::repeat(b.k).take(b.degeneracy))
            .collect()
    }

    /// The Hermitian environment coupling operator B as a dense matrix.
    pub fn coupling_operator(&self) -> DMatrix<C64> {
        let mut b = DMatrix::zeros(self.dim, self.dim);
        for (pair, c) in self.bands.windows(2).zip(&self.couplings) {
            let (lower, upper) = (&pair[0], &pair[1]);
            b.view_mut((upper.start, lower.start), (upper.degeneracy, lower.degeneracy))
                .copy_from(c);
            b.view_mut((lower.start, upper.start), (lower.degeneracy, upper.degeneracy))
                .copy_from(&c.adjoint());
        }
        b
    }
}

fn validate_common(
    n: usize,
    delta_b: f64,
    band_width: f64,
    range: &RangeInclusive<usize>,
) -> Result<()> {
    if n == 0 {
        return Err(invalid("n", "need at least one spin"));
    }
    if n as u64 > MAX_EXACT_SPINS {
        return Err(invalid("n", format!("at most {MAX_EXACT_SPINS} spins")));
    }
    if !(delta_b > 0.0 && delta_b.is_finite()) {
        return Err(invalid("delta_b", format!("must be > 0, got {delta_b}")));
    }
    if !(band_width >= 0.0 && band_width.is_finite()) {
        return Err(invalid("band_width", "must be >= 0"));
    }
    if band_width >= delta_b {
        return Err(invalid(
            "band_width",
            format!("width {band_width} must stay below delta_b = {delta_b}"),
        ));
    }
    if range.is_empty() {
        return Err(invalid("band_range", "empty band range"));
    }
    if *range.end() > n {
        return Err(invalid(
            "band_range",
            format!("upper band {} exceeds n = {n}", range.end()),
        ));
    }
    Ok(())
}

fn make_bands(
    n: usize,
    delta_b: f64,
    band_width: f64,
    range: RangeInclusive<usize>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Band>> {
    let mut bands = Vec::new();
    let mut start = 0;
    for k in range {
        let degeneracy = binomial_degeneracy(n as u64, k as u64)? as usize;
        if start + degeneracy > MAX_ENV_DIM {
            return Err(invalid(
                "band_range",
                format!("environment exceeds {MAX_ENV_DIM} levels; narrow the band window"),
            ));
        }
        let offsets = if band_width > 0.0 {
            (0..degeneracy)
                .map(|_| band_width * (rng.random::<f64>() - 0.5))
                .collect()
        } else {
            vec![0.0; degeneracy]
        };
        bands.push(Band {
            k,
            degeneracy,
            energy: k as f64 * delta_b,
            offsets,
            start,
        });
        start += degeneracy;
    }
    Ok(bands)
}

/// Random-band environment: complex Gaussian entries with
/// E|C_{k+1,k}(a,b)|² = (N_{k+1} N_k)^{-1/2}.
pub fn build_band_environment(
    n: usize,
    delta_b: f64,
    seed: u64,
    band_width: f64,
    band_range: RangeInclusive<usize>,
) -> Result<BandedEnvironment> {
    validate_common(n, delta_b, band_width, &band_range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bands = make_bands(n, delta_b, band_width, band_range, &mut rng)?;
    let couplings = bands
        .windows(2)
        .map(|pair| {
            let (lower, upper) = (pair[0].degeneracy, pair[1].degeneracy);
            let variance = 1.0 / ((lower * upper) as f64).sqrt();
            let sigma = (variance / 2.0).sqrt();
            let mut draw = || {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                C64::new(sigma * re, sigma * im)
            };
            DMatrix::from_fn(upper, lower, |_, _| draw())
        })
        .collect();
    let dim = bands.iter().map(|b| b.degeneracy).sum();
    Ok(BandedEnvironment {
        n,
        delta_b,
        band_width,
        seed,
        model: CouplingModel::RandomBand,
        bands,
        couplings,
        dim,
    })
}

/// Physical n-spin register coupled through Σ_i g_i σx⁽ⁱ⁾, full band range.
pub fn build_spin_environment(n: usize, delta_b: f64, seed: u64) -> Result<BandedEnvironment> {
    build_spin_environment_windowed(n, delta_b, seed, 0.0, 0..=n)
}

/// σx model restricted to a band window.
///
/// Levels of band k are the k-subsets of spins in lexicographic order. The
/// weights are rescaled globally so that Σ_k ‖C_{k+1,k}‖²_F over the full
/// register equals Σ_k √(N_{k+1} N_k), the random-band expectation.
pub fn build_spin_environment_windowed(
    n: usize,
    delta_b: f64,
    seed: u64,
    band_width: f64,
    band_range: RangeInclusive<usize>,
) -> Result<BandedEnvironment> {
    validate_common(n, delta_b, band_width, &band_range)?;
    if n > 16 {
        return Err(invalid("n", "sigma-x model enumerates spin states; n <= 16"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let bands = make_bands(n, delta_b, band_width, band_range, &mut rng)?;

    // Every spin is down in binomial(n-1, k) states of band k.
    let sum_g2: f64 = weights.iter().map(|g| g * g).sum();
    let raw: f64 = (0..n)
        .map(|k| binomial_degeneracy(n as u64 - 1, k as u64).unwrap() as f64 * sum_g2)
        .sum();
    let target: f64 = (0..n)
        .map(|k| {
            let lo = binomial_degeneracy(n as u64, k as u64).unwrap() as f64;
            let hi = binomial_degeneracy(n as u64, k as u64 + 1).unwrap() as f64;
            (lo * hi).sqrt()
        })
        .sum();
    let scale = if raw > 0.0 { (target / raw).sqrt() } else { 0.0 };

    let subsets = |k: usize| -> Vec<u64> {
        (0..n)
            .combinations(k)
            .map(|c| c.iter().fold(0u64, |m, &i| m | (1 << i)))
            .collect()
    };
    let couplings = bands
        .windows(2)
        .map(|pair| {
            let lower = subsets(pair[0].k);
            let upper: HashMap<u64, usize> = subsets(pair[1].k)
                .into_iter()
                .enumerate()
                .map(|(i, m)| (m, i))
                .collect();
            let mut c = DMatrix::zeros(upper.len(), lower.len());
            for (col, &mask) in lower.iter().enumerate() {
                for (spin, g) in weights.iter().enumerate() {
                    if mask & (1 << spin) == 0 {
                        let row = upper[&(mask | (1 << spin))];
                        c[(row, col)] = C64::new(scale * g, 0.0);
                    }
                }
            }
            c
        })
        .collect();
    let dim = bands.iter().map(|b| b.degeneracy).sum();
    Ok(BandedEnvironment {
        n,
        delta_b,
        band_width,
        seed,
        model: CouplingModel::SigmaX,
        bands,
        couplings,
        dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_shapes_follow_binomials() {
        let env = build_band_environment(7, 1.0, 42, 0.0, 0..=7).unwrap();
        let shapes: Vec<_> = (0..7)
            .map(|k| env.coupling(k).unwrap().shape())
            .collect();
        assert_eq!(
            shapes,
            vec![(7, 1), (21, 7), (35, 21), (35, 35), (21, 35), (7, 21), (1, 7)]
        );
        assert_eq!(env.dim(), 128);
        assert_eq!(env.joint_dim(), 256);
        assert!(env.coupling(7).is_err());
    }

    #[test]
    fn window_dimension_bookkeeping() {
        let env = build_band_environment(7, 1.0, 1, 0.0, 1..=3).unwrap();
        assert_eq!(env.joint_dim(), 2 * (7 + 21 + 35));
        assert_eq!(env.band(2).unwrap().start, 7);
        assert!(env.band(0).is_err());
        assert!(env.coupling(3).is_err());
    }

    #[test]
    fn construction_errors() {
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 3..=2;
        assert!(build_band_environment(7, 1.0, 1, 0.0, empty).is_err());
        assert!(build_band_environment(7, 1.0, 1, 1.0, 0..=7).is_err());
        assert!(build_band_environment(7, 1.0, 1, 0.0, 0..=8).is_err());
        assert!(build_band_environment(0, 1.0, 1, 0.0, 0..=0).is_err());
        assert!(build_band_environment(20, 1.0, 1, 0.0, 0..=20).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let a = build_band_environment(5, 1.0, 9, 0.1, 0..=5).unwrap();
        let b = build_band_environment(5, 1.0, 9, 0.1, 0..=5).unwrap();
        let c = build_band_environment(5, 1.0, 10, 0.1, 0..=5).unwrap();
        assert_eq!(a.coupling_operator(), b.coupling_operator());
        assert_eq!(a.level_energies(), b.level_energies());
        assert_ne!(a.coupling_operator(), c.coupling_operator());
    }

    #[test]
    fn coupling_operator_is_exactly_hermitian() {
        let env = build_band_environment(6, 1.3, 5, 0.0, 0..=6).unwrap();
        let b = env.coupling_operator();
        assert_eq!(b, b.adjoint());
        let env = build_spin_environment(6, 1.3, 5).unwrap();
        let b = env.coupling_operator();
        assert_eq!(b, b.adjoint());
    }

    #[test]
    fn offsets_stay_within_half_width() {
        let w = 0.2;
        let env = build_band_environment(7, 1.0, 3, w, 0..=7).unwrap();
        for band in env.bands() {
            assert!(band.offsets.iter().all(|o| o.abs() <= w / 2.0));
        }
        let zero = build_band_environment(7, 1.0, 3, 0.0, 0..=7).unwrap();
        assert!(zero.bands().iter().all(|b| b.offsets.iter().all(|&o| o == 0.0)));
    }

    /// Sample-statistics oracle: the pooled mean of |C_{2,1}|² over 100 seeds
    /// must sit within 5 standard errors of (21·7)^{-1/2}.
    #[test]
    fn mean_square_coupling_matches_normalization() {
        let mut values = Vec::new();
        for seed in 0..100 {
            let env = build_band_environment(7, 1.0, seed, 0.0, 0..=7).unwrap();
            values.extend(env.coupling(1).unwrap().iter().map(|c| c.norm_sqr()));
        }
        let m = values.len() as f64;
        let mean = values.iter().sum::<f64>() / m;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
        let stderr = (var / m).sqrt();
        let expected = 1.0 / (21.0f64 * 7.0).sqrt();
        assert!(
            (mean - expected).abs() < 5.0 * stderr,
            "mean {mean} expected {expected} ± {stderr}"
        );
        // Real and imaginary parts share the variance equally.
        let env = build_band_environment(7, 1.0, 0, 0.0, 0..=7).unwrap();
        let c = env.coupling(3).unwrap();
        let re: f64 = c.iter().map(|z| z.re * z.re).sum::<f64>();
        let im: f64 = c.iter().map(|z| z.im * z.im).sum::<f64>();
        assert!((re / im - 1.0).abs() < 0.3);
    }

    #[test]
    fn spin_model_single_spin() {
        let env = build_spin_environment(1, 1.0, 17).unwrap();
        let c = env.coupling(0).unwrap();
        assert_eq!(c.shape(), (1, 1));
        assert!((c[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert_eq!(c[(0, 0)].im, 0.0);
    }

    #[test]
    fn spin_model_couples_only_adjacent_bands_by_single_flips() {
        let env = build_spin_environment(5, 1.0, 3).unwrap();
        let b = env.coupling_operator();
        let bands = env.level_bands();
        for i in 0..env.dim() {
            for j in 0..env.dim() {
                if bands[i].abs_diff(bands[j]) != 1 {
                    assert_eq!(b[(i, j)], C64::new(0.0, 0.0));
                }
            }
        }
        // Each band-k level couples to exactly n − k levels above.
        let c = env.coupling(2).unwrap();
        for col in 0..c.ncols() {
            let nonzero = c.column(col).iter().filter(|z| z.norm() > 0.0).count();
            assert_eq!(nonzero, 3);
        }
    }

    #[test]
    fn spin_model_normalization_and_determinism() {
        let n = 7;
        let env = build_spin_environment(n, 1.0, 11).unwrap();
        let total: f64 = (0..n)
            .map(|k| env.coupling(k).unwrap().norm_squared())
            .sum();
        let target: f64 = (0..n as u64)
            .map(|k| {
                let lo = binomial_degeneracy(7, k).unwrap() as f64;
                let hi = binomial_degeneracy(7, k + 1).unwrap() as f64;
                (lo * hi).sqrt()
            })
            .sum();
        assert!((total - target).abs() < 1e-10 * target);
        let again = build_spin_environment(n, 1.0, 11).unwrap();
        assert_eq!(env.coupling_operator(), again.coupling_operator());
    }

    #[test]
    fn spec_roundtrip_through_json() {
        let spec = EnvSpec {
            n: 7,
            delta_b: 1.0,
            seed: 3,
            band_width: 0.0,
            band_range: Some([1, 3]),
            model: CouplingModel::SigmaX,
        };
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"sigma-x\""));
        let back: EnvSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.build().unwrap().dim(), 63);
        assert!(serde_json::from_str::<EnvSpec>(
            r#"{"n":7,"delta_b":1,"seed":0,"model":"random-band","extra":1}"#
        )
        .is_err());
    }

    #[test]
    fn default_window() {
        assert_eq!(default_band_range(7, 2, 3), 0..=7);
        assert_eq!(default_band_range(40, 10, 3), 7..=13);
        assert_eq!(default_band_range(40, 1, 3), 0..=4);
    }
}
