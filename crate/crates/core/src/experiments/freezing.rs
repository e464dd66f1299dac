use std::time::Instant;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{all_required_pass, default_env, Check, DEFAULT_TOLERANCE};
use crate::analytics::{is_freezing_point, offdiag_coeffs};
use crate::dynamics::{EnsembleSeries, Engine, ResetMode, Simulator};
use crate::error::{invalid, Error, Result};
use crate::model::{effective_beta, EnvSpec, ModelParams, QubitState};

/// Tolerance on n and m when matching a freezing point.
pub const FREEZING_MATCH_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreezingConfig {
    pub params: ModelParams,
    pub env: EnvSpec,
    pub k0: usize,
    pub rho0: QubitState,
    pub steps: usize,
    pub engine: Engine,
    pub reset: ResetMode,
    pub trajectories: usize,
    pub master_seed: u64,
    /// Bound on the drift of ρ00 and of |ρ10|.
    pub tolerance: f64,
    /// Relative tolerance of the measured phase per step against c2.
    pub phase_tolerance: f64,
}

impl Default for FreezingConfig {
    /// Δt = π, Δδ = 2, δS = 1, λ = 0.05 from ρ00 = 0.3, ρ10 = 0.35.
    fn default() -> Self {
        let (n, k0) = (7, 2);
        let mut params = ModelParams {
            delta_s: 1.0,
            detuning: 2.0,
            lambda: 0.05,
            dt: std::f64::consts::PI,
            beta: 0.0,
        };
        // Both neighbours of k0 take part in the coherence dynamics.
        params.beta = effective_beta(n as u64, k0 as u64 - 1, k0 as u64 + 1, params.delta_b()).expect("valid preset");
        FreezingConfig {
            params,
            env: default_env(n, params.delta_b()),
            k0,
            rho0: QubitState {
                rho00: 0.3,
                rho11: 0.7,
                rho10: C64::new(0.35, 0.0),
            },
            steps: 500,
            engine: Engine::Nonselective,
            reset: ResetMode::Coarse,
            trajectories: 1000,
            master_seed: 2024,
            tolerance: DEFAULT_TOLERANCE,
            phase_tolerance: 0.2,
        }
    }
}

impl FreezingConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.rho0.validate()?;
        if (self.env.delta_b - self.params.delta_b()).abs() > 1e-12 * self.params.delta_b().max(1.0) {
            return Err(invalid("env.delta_b", "must equal delta_s + detuning"));
        }
        if self.steps == 0 {
            return Err(invalid("steps", "must be at least 1"));
        }
        if !(self.tolerance > 0.0 && self.phase_tolerance > 0.0) {
            return Err(invalid("tolerance", "must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreezingReport {
    pub config: FreezingConfig,
    pub version: String,
    pub n: i64,
    pub m: i64,
    /// max_j |ρ̄00(j) − ρ̄00(0)|.
    pub rho00_drift: f64,
    /// max_j ||ρ̄10(j)| − |ρ̄10(0)||.
    pub abs_rho10_drift: f64,
    /// Least-squares slope of arg ρ̄10(j).
    pub phase_per_step: f64,
    pub c2: f64,
    pub checks: Vec<Check>,
    /// Decided by the drift checks; the phase check is informational.
    pub pass: bool,
    pub wall_time_s: f64,
    #[serde(skip)]
    pub series: Option<EnsembleSeries>,
}

/// Runs the exact engine at a freezing point and measures the drifts.
pub fn verify_freezing(cfg: &FreezingConfig) -> Result<FreezingReport> {
    cfg.validate()?;
    let p = &cfg.params;
    let found = is_freezing_point(p.dt, p.detuning, p.delta_s, FREEZING_MATCH_TOL);
    if !found.is_freezing {
        return Err(Error::NotFreezingPoint {
            dt: p.dt,
            detuning: p.detuning,
        });
    }
    let start = Instant::now();
    let series = run(cfg)?;
    let first = series.points[0];
    let rho00_drift = series
        .points
        .iter()
        .map(|q| (q.rho00 - first.rho00).abs())
        .fold(0.0, f64::max);
    let abs_rho10_drift = series
        .points
        .iter()
        .map(|q| (q.rho10.norm() - first.rho10.norm()).abs())
        .fold(0.0, f64::max);
    let phase_per_step = phase_slope(&series.rho10());
    let c2 = offdiag_coeffs(p).c2;
    let phase_error = if c2 != 0.0 {
        ((phase_per_step - c2) / c2).abs()
    } else {
        f64::INFINITY
    };
    let checks = vec![
        Check::at_most("rho00_drift", rho00_drift, cfg.tolerance),
        Check::at_most("abs_rho10_drift", abs_rho10_drift, cfg.tolerance),
        Check::at_most("phase_vs_c2", phase_error, cfg.phase_tolerance).informational(),
    ];
    let pass = all_required_pass(&checks);
    Ok(FreezingReport {
        config: cfg.clone(),
        version: crate::VERSION.to_string(),
        n: found.n,
        m: found.m,
        rho00_drift,
        abs_rho10_drift,
        phase_per_step,
        c2,
        checks,
        pass,
        wall_time_s: start.elapsed().as_secs_f64(),
        series: Some(series),
    })
}

fn run(cfg: &FreezingConfig) -> Result<EnsembleSeries> {
    let env = cfg.env.build()?;
    Simulator::new(&cfg.params, &env)?.run_ensemble(
        &cfg.rho0,
        cfg.k0,
        cfg.steps,
        cfg.trajectories,
        cfg.master_seed,
        cfg.reset,
        cfg.engine,
    )
}

/// Slope of the unwrapped phase of a series, by least squares over j.
pub fn phase_slope(z: &[C64]) -> f64 {
    if z.len() < 2 {
        return 0.0;
    }
    let mut phases = Vec::with_capacity(z.len());
    let mut prev = z[0].arg();
    let mut offset = 0.0;
    for v in z {
        let a = v.arg();
        let d = a - prev;
        if d > std::f64::consts::PI {
            offset -= 2.0 * std::f64::consts::PI;
        } else if d < -std::f64::consts::PI {
            offset += 2.0 * std::f64::consts::PI;
        }
        prev = a;
        phases.push(a + offset);
    }
    let n = phases.len() as f64;
    let mean_j = (n - 1.0) / 2.0;
    let mean_y = phases.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (j, y) in phases.iter().enumerate() {
        let dx = j as f64 - mean_j;
        sxy += dx * (y - mean_y);
        sxx += dx * dx;
    }
    sxy / sxx
}

/// Coherence loss of a run at arbitrary parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceRun {
    pub abs_rho10_initial: f64,
    pub abs_rho10_final: f64,
    /// 1 − |ρ̄10(J)| / |ρ̄10(0)|.
    pub relative_decay: f64,
    pub rho00_drift: f64,
}

/// Same run as [`verify_freezing`] without the freezing precondition, used
/// for neighbouring non-freezing points.
pub fn coherence_run(cfg: &FreezingConfig) -> Result<CoherenceRun> {
    cfg.validate()?;
    let series = run(cfg)?;
    let first = series.points[0];
    let last = series.points[series.points.len() - 1];
    let rho00_drift = series
        .points
        .iter()
        .map(|q| (q.rho00 - first.rho00).abs())
        .fold(0.0, f64::max);
    let a0 = first.rho10.norm();
    Ok(CoherenceRun {
        abs_rho10_initial: a0,
        abs_rho10_final: last.rho10.norm(),
        relative_decay: if a0 > 0.0 { 1.0 - last.rho10.norm() / a0 } else { 0.0 },
        rho00_drift,
    })
}
