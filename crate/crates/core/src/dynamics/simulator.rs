use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64 as C64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::blocks::{block_reduced, segment_reduced, trace_against, BandBlocks, TransferMaps};
use super::propagator::{make_propagator, Propagator};
use super::series::{EnsemblePoint, EnsembleSeries, Trajectory, TrajectoryStep};
use super::state::{sample_index, MIN_TOTAL_WEIGHT};
use super::{Engine, ResetMode};
use crate::error::{invalid, Error, Result};
use crate::model::{build_total_hamiltonian, BandedEnvironment, ModelParams, QubitState};

/// Largest TLS ⊗ environment dimension accepted by the exact engine.
pub const MAX_JOINT_DIM: usize = 2048;

/// Trajectories per parallel work unit; fixed so results do not depend on
/// the thread count.
const CHUNK: usize = 16;

/// Seed of trajectory `index` within an ensemble.
pub fn trajectory_seed(master_seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng.next_u64()
}

/// The exact engine for one parameter point: propagator, its band blocks
/// and the coarse-reset transfer maps.
#[derive(Debug, Clone)]
pub struct Simulator {
    params: ModelParams,
    env: BandedEnvironment,
    propagator: Propagator,
    blocks: BandBlocks,
    transfer: TransferMaps,
}

/// Walker state between measurements, supported on one band.
enum Walker {
    Coarse(Matrix2<C64>),
    Pure(DVector<C64>),
    Density(DMatrix<C64>),
}

impl Simulator {
    pub fn new(params: &ModelParams, env: &BandedEnvironment) -> Result<Self> {
        if env.joint_dim() > MAX_JOINT_DIM {
            return Err(invalid(
                "environment",
                format!("joint dimension {} exceeds {MAX_JOINT_DIM}", env.joint_dim()),
            ));
        }
        let h = build_total_hamiltonian(params, env)?;
        let propagator = make_propagator(&h, params.dt)?;
        let blocks = BandBlocks::new(propagator.unitary(), env);
        let transfer = blocks.transfer_maps();
        log::debug!(
            "simulator ready: joint dim {}, bands {}..={}",
            env.joint_dim(),
            env.k_lo(),
            env.k_hi()
        );
        Ok(Simulator {
            params: *params,
            env: env.clone(),
            propagator,
            blocks,
            transfer,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn env(&self) -> &BandedEnvironment {
        &self.env
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    fn position(&self, k: usize) -> Result<usize> {
        self.env.band(k)?;
        Ok(k - self.env.k_lo())
    }

    fn band_of(&self, i: usize) -> usize {
        self.env.k_lo() + i
    }

    /// e^{iδS·jΔt}: undoes the free precession of ρ10.
    fn frame_phase(&self, j: usize) -> C64 {
        let tau = std::f64::consts::TAU;
        let per_step = (self.params.delta_s * self.params.dt).rem_euclid(tau);
        C64::from_polar(1.0, (per_step * j as f64).rem_euclid(tau))
    }

    fn report(&self, j: usize, m: &Matrix2<C64>) -> QubitState {
        let mut q = QubitState::from_matrix(m);
        q.rho10 *= self.frame_phase(j);
        q
    }

    fn check_run(&self, rho0: &QubitState, steps: usize) -> Result<()> {
        rho0.validate()?;
        if steps == 0 {
            return Err(invalid("steps", "must be at least 1"));
        }
        Ok(())
    }

    fn start_walker<R: Rng>(&self, rho0: &QubitState, i0: usize, reset: ResetMode, rng: &mut R) -> Walker {
        if reset == ResetMode::Coarse {
            return Walker::Coarse(rho0.to_matrix());
        }
        let n = self.blocks.size(i0);
        match rho0.pure_amplitudes() {
            Some(amp) => {
                // One level of the maximally mixed band, drawn uniformly.
                let level = rng.random_range(0..n);
                let mut psi = DVector::zeros(2 * n);
                psi[level] = amp[0];
                psi[n + level] = amp[1];
                Walker::Pure(psi)
            }
            None => Walker::Density(product_block(&rho0.to_matrix(), n)),
        }
    }

    fn walker_state(&self, w: &Walker, i: usize) -> Matrix2<C64> {
        match w {
            Walker::Coarse(m) => *m,
            Walker::Pure(psi) => segment_reduced(psi, self.blocks.size(i)),
            Walker::Density(rho) => block_reduced(rho, self.blocks.size(i)),
        }
    }

    /// Evolves, measures with outcomes restricted to the adjacent bands and
    /// returns (new position, Born weight, excluded weight).
    fn step_walker<R: Rng>(&self, w: &mut Walker, i: usize, rng: &mut R) -> Result<(usize, f64, f64)> {
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(self.blocks.count() - 1);
        let targets: Vec<usize> = (lo..=hi).collect();
        let (weights, pick, next) = match w {
            Walker::Coarse(m) => {
                let outs: Vec<Matrix2<C64>> = targets.iter().map(|&to| self.transfer.apply(to, i, m)).collect();
                let weights: Vec<f64> = outs.iter().map(|o| o.trace().re.max(0.0)).collect();
                let pick = pick_outcome(&weights, rng)?;
                let next = Walker::Coarse(outs[pick] / C64::new(weights[pick], 0.0));
                (weights, pick, next)
            }
            Walker::Pure(psi) => {
                let outs: Vec<DVector<C64>> =
                    targets.iter().map(|&to| self.blocks.block(to, i) * &*psi).collect();
                let weights: Vec<f64> = outs.iter().map(|o| o.norm_squared()).collect();
                let pick = pick_outcome(&weights, rng)?;
                let next = Walker::Pure(&outs[pick] / C64::new(weights[pick].sqrt(), 0.0));
                (weights, pick, next)
            }
            Walker::Density(rho) => {
                let half: Vec<DMatrix<C64>> = targets.iter().map(|&to| self.blocks.block(to, i) * &*rho).collect();
                let weights: Vec<f64> = half
                    .iter()
                    .zip(&targets)
                    .map(|(h, &to)| trace_against(h, self.blocks.block(to, i)).max(0.0))
                    .collect();
                let pick = pick_outcome(&weights, rng)?;
                let u = self.blocks.block(targets[pick], i);
                let mut out = &half[pick] * u.adjoint();
                out /= C64::new(weights[pick], 0.0);
                hermitize(&mut out);
                (weights, pick, Walker::Density(out))
            }
        };
        *w = next;
        let kept: f64 = weights.iter().sum();
        Ok((targets[pick], weights[pick], (1.0 - kept).max(0.0)))
    }

    /// One sampled trajectory of `steps` measurements.
    pub fn run_trajectory(
        &self,
        rho0: &QubitState,
        k0: usize,
        steps: usize,
        seed: u64,
        reset: ResetMode,
    ) -> Result<Trajectory> {
        self.check_run(rho0, steps)?;
        let mut i = self.position(k0)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut walker = self.start_walker(rho0, i, reset, &mut rng);
        let mut out = Vec::with_capacity(steps + 1);
        out.push(TrajectoryStep {
            j: 0,
            band: k0,
            rho: self.report(0, &rho0.to_matrix()),
            probability: 1.0,
        });
        let mut dropped = 0.0;
        for j in 1..=steps {
            let (next, p, lost) = self.step_walker(&mut walker, i, &mut rng)?;
            i = next;
            dropped += lost;
            out.push(TrajectoryStep {
                j,
                band: self.band_of(i),
                rho: self.report(j, &self.walker_state(&walker, i)),
                probability: p,
            });
        }
        Ok(Trajectory {
            steps: out,
            seed,
            master_seed: None,
            reset,
            dropped_weight: dropped,
        })
    }

    /// Ensemble-averaged series: `trajectories` sampled runs, or the exact
    /// average over all measurement records for the non-selective engine.
    #[allow(clippy::too_many_arguments)]
    pub fn run_ensemble(
        &self,
        rho0: &QubitState,
        k0: usize,
        steps: usize,
        trajectories: usize,
        master_seed: u64,
        reset: ResetMode,
        engine: Engine,
    ) -> Result<EnsembleSeries> {
        self.check_run(rho0, steps)?;
        let i0 = self.position(k0)?;
        match engine {
            Engine::Nonselective => {
                let points = match reset {
                    ResetMode::Coarse => self.nonselective_coarse(rho0, i0, steps),
                    ResetMode::Exact => self.nonselective_exact(rho0, i0, steps),
                };
                Ok(EnsembleSeries {
                    points,
                    engine,
                    reset,
                    trajectories: None,
                    master_seed,
                    dropped_weight: 0.0,
                })
            }
            Engine::Sampled => {
                if trajectories == 0 {
                    return Err(invalid("trajectories", "must be at least 1 for the sampled engine"));
                }
                self.sampled(rho0, k0, steps, trajectories, master_seed, reset)
            }
        }
    }

    fn nonselective_coarse(&self, rho0: &QubitState, i0: usize, steps: usize) -> Vec<EnsemblePoint> {
        let nb = self.blocks.count();
        let mut cur = vec![Matrix2::<C64>::zeros(); nb];
        cur[i0] = rho0.to_matrix();
        let mut points = Vec::with_capacity(steps + 1);
        points.push(exact_point(0, &self.report(0, &rho0.to_matrix())));
        for j in 1..=steps {
            let mut next = vec![Matrix2::<C64>::zeros(); nb];
            for (from, m) in cur.iter().enumerate() {
                if m.iter().all(|z| *z == C64::new(0.0, 0.0)) {
                    continue;
                }
                for (to, slot) in next.iter_mut().enumerate() {
                    *slot += self.transfer.apply(to, from, m);
                }
            }
            cur = next;
            let total: Matrix2<C64> = cur.iter().sum();
            points.push(exact_point(j, &self.report(j, &total)));
        }
        points
    }

    fn nonselective_exact(&self, rho0: &QubitState, i0: usize, steps: usize) -> Vec<EnsemblePoint> {
        let nb = self.blocks.count();
        let mut cur: Vec<Option<DMatrix<C64>>> = vec![None; nb];
        cur[i0] = Some(product_block(&rho0.to_matrix(), self.blocks.size(i0)));
        let mut points = Vec::with_capacity(steps + 1);
        points.push(exact_point(0, &self.report(0, &rho0.to_matrix())));
        for j in 1..=steps {
            let next: Vec<Option<DMatrix<C64>>> = (0..nb)
                .map(|to| {
                    let mut acc: Option<DMatrix<C64>> = None;
                    for (from, block) in cur.iter().enumerate() {
                        let Some(rho) = block else { continue };
                        let u = self.blocks.block(to, from);
                        let term = u * rho * u.adjoint();
                        acc = Some(match acc {
                            Some(a) => a + term,
                            None => term,
                        });
                    }
                    acc.map(|mut a| {
                        hermitize(&mut a);
                        a
                    })
                })
                .collect();
            cur = next;
            let total: Matrix2<C64> = cur
                .iter()
                .enumerate()
                .filter_map(|(i, b)| b.as_ref().map(|rho| block_reduced(rho, self.blocks.size(i))))
                .sum();
            points.push(exact_point(j, &self.report(j, &total)));
        }
        points
    }

    fn sampled(
        &self,
        rho0: &QubitState,
        k0: usize,
        steps: usize,
        m: usize,
        master_seed: u64,
        reset: ResetMode,
    ) -> Result<EnsembleSeries> {
        let chunks = m.div_ceil(CHUNK);
        let partials: Vec<Accumulator> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = Accumulator::new(steps + 1);
                for idx in c * CHUNK..((c + 1) * CHUNK).min(m) {
                    let t = self.run_trajectory(rho0, k0, steps, trajectory_seed(master_seed, idx as u64), reset)?;
                    acc.add(&t);
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        let mut total = Accumulator::new(steps + 1);
        for p in &partials {
            total.merge(p);
        }
        Ok(EnsembleSeries {
            points: total.points(m),
            engine: Engine::Sampled,
            reset,
            trajectories: Some(m),
            master_seed,
            dropped_weight: total.dropped / m as f64,
        })
    }
}

fn pick_outcome<R: Rng>(weights: &[f64], rng: &mut R) -> Result<usize> {
    let total: f64 = weights.iter().sum();
    if !(total > MIN_TOTAL_WEIGHT) {
        return Err(Error::LostNormalization { total });
    }
    Ok(sample_index(weights, total, rng))
}

/// ρS ⊗ 1/N in band-local ordering.
fn product_block(rho: &Matrix2<C64>, n: usize) -> DMatrix<C64> {
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    let w = 1.0 / n as f64;
    for a in 0..2 {
        for b in 0..2 {
            for e in 0..n {
                out[(a * n + e, b * n + e)] = rho[(a, b)] * w;
            }
        }
    }
    out
}

/// Removes the anti-Hermitian rounding residue accumulated by products.
fn hermitize(m: &mut DMatrix<C64>) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in i + 1..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

fn exact_point(j: usize, q: &QubitState) -> EnsemblePoint {
    EnsemblePoint {
        j,
        rho00: q.rho00,
        rho10: q.rho10,
        rho00_stderr: 0.0,
        rho10_stderr: 0.0,
    }
}

/// Per-step sums over trajectories.
struct Accumulator {
    sum00: Vec<f64>,
    sq00: Vec<f64>,
    sum10: Vec<C64>,
    sq10: Vec<f64>,
    dropped: f64,
}

impl Accumulator {
    fn new(len: usize) -> Self {
        Accumulator {
            sum00: vec![0.0; len],
            sq00: vec![0.0; len],
            sum10: vec![C64::new(0.0, 0.0); len],
            sq10: vec![0.0; len],
            dropped: 0.0,
        }
    }

    fn add(&mut self, t: &Trajectory) {
        for (j, s) in t.steps.iter().enumerate() {
            self.sum00[j] += s.rho.rho00;
            self.sq00[j] += s.rho.rho00 * s.rho.rho00;
            self.sum10[j] += s.rho.rho10;
            self.sq10[j] += s.rho.rho10.norm_sqr();
        }
        self.dropped += t.dropped_weight;
    }

    fn merge(&mut self, other: &Accumulator) {
        for j in 0..self.sum00.len() {
            self.sum00[j] += other.sum00[j];
            self.sq00[j] += other.sq00[j];
            self.sum10[j] += other.sum10[j];
            self.sq10[j] += other.sq10[j];
        }
        self.dropped += other.dropped;
    }

    fn points(&self, m: usize) -> Vec<EnsemblePoint> {
        let mf = m as f64;
        let stderr = |sq: f64, sum_sq: f64| {
            if m < 2 {
                0.0
            } else {
                ((sq - sum_sq / mf) / (mf - 1.0)).max(0.0).sqrt() / mf.sqrt()
            }
        };
        (0..self.sum00.len())
            .map(|j| EnsemblePoint {
                j,
                rho00: self.sum00[j] / mf,
                rho10: self.sum10[j] / mf,
                rho00_stderr: stderr(self.sq00[j], self.sum00[j] * self.sum00[j]),
                rho10_stderr: stderr(self.sq10[j], self.sum10[j].norm_sqr()),
            })
            .collect()
    }
}

/// Builds a [`Simulator`] and runs one trajectory.
pub fn run_trajectory(
    params: &ModelParams,
    env: &BandedEnvironment,
    rho0: &QubitState,
    k0: usize,
    steps: usize,
    seed: u64,
    reset: ResetMode,
) -> Result<Trajectory> {
    Simulator::new(params, env)?.run_trajectory(rho0, k0, steps, seed, reset)
}

/// Builds a [`Simulator`] and runs an ensemble.
#[allow(clippy::too_many_arguments)]
pub fn run_ensemble(
    params: &ModelParams,
    env: &BandedEnvironment,
    rho0: &QubitState,
    k0: usize,
    steps: usize,
    trajectories: usize,
    master_seed: u64,
    reset: ResetMode,
    engine: Engine,
) -> Result<EnsembleSeries> {
    Simulator::new(params, env)?.run_ensemble(rho0, k0, steps, trajectories, master_seed, reset, engine)
}
