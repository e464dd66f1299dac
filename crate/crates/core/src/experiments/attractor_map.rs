use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{attractor, is_freezing_point};
use crate::error::{invalid, Result};
use crate::model::ModelParams;

/// Tolerance on n and m when flagging freezing cells.
const FREEZING_TOL: f64 = 1e-9;

/// Evenly spaced axis. With `open_lo` the lower end is excluded and the
/// points are lo + (hi − lo)·i/n for i = 1..=n; otherwise both ends are
/// included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    #[serde(default)]
    pub open_lo: bool,
}

impl AxisRange {
    /// Δt ∈ (0, 4π/δS], 400 points.
    pub fn default_dt(delta_s: f64) -> Self {
        AxisRange {
            lo: 0.0,
            hi: 4.0 * std::f64::consts::PI / delta_s,
            n: 400,
            open_lo: true,
        }
    }

    /// Δδ ∈ [−0.9·δS, 3·δS], 400 points.
    pub fn default_detuning(delta_s: f64) -> Self {
        AxisRange {
            lo: -0.9 * delta_s,
            hi: 3.0 * delta_s,
            n: 400,
            open_lo: false,
        }
    }

    pub fn validate(&self, name: &'static str) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.hi < self.lo {
            return Err(invalid(name, "need finite lo <= hi"));
        }
        if self.n == 0 {
            return Err(invalid(name, "need at least one point"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let span = self.hi - self.lo;
        if self.open_lo {
            (1..=self.n).map(|i| self.lo + span * i as f64 / self.n as f64).collect()
        } else if self.n == 1 {
            vec![self.lo]
        } else {
            (0..self.n)
                .map(|i| self.lo + span * i as f64 / (self.n - 1) as f64)
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttractorCell {
    pub dt: f64,
    pub detuning: f64,
    /// `None` where no attractor exists (freezing points).
    pub rho00_star: Option<f64>,
    pub is_freezing: bool,
}

/// Row-major grid: one row per detuning, Δt ascending within a row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractorGrid {
    pub dt_axis: Vec<f64>,
    pub detuning_axis: Vec<f64>,
    pub delta_s: f64,
    pub beta: f64,
    pub cells: Vec<AttractorCell>,
}

impl AttractorGrid {
    pub fn cell(&self, row: usize, col: usize) -> &AttractorCell {
        &self.cells[row * self.dt_axis.len() + col]
    }

    pub fn rows(&self) -> std::slice::Chunks<'_, AttractorCell> {
        self.cells.chunks(self.dt_axis.len())
    }
}

/// Attractor ρ00* over a (Δt, Δδ) grid at fixed δS and β.
///
/// Cells where the detuning makes δB ≤ 0 have no physical environment and
/// are reported without a value; freezing cells carry the sentinel
/// `rho00_star = None, is_freezing = true`.
pub fn attractor_map(dt_range: &AxisRange, detuning_range: &AxisRange, delta_s: f64, beta: f64) -> Result<AttractorGrid> {
    dt_range.validate("dt_range")?;
    detuning_range.validate("detuning_range")?;
    if !(delta_s > 0.0) || !beta.is_finite() {
        return Err(invalid("attractor_map", "need delta_s > 0 and finite beta"));
    }
    if dt_range.points().iter().any(|&dt| dt < 0.0) {
        return Err(invalid("dt_range", "intervals must be >= 0"));
    }
    let dts = dt_range.points();
    let dds = detuning_range.points();
    let rows: Vec<Vec<AttractorCell>> = dds
        .par_iter()
        .map(|&detuning| {
            dts.iter()
                .map(|&dt| {
                    let is_freezing = is_freezing_point(dt, detuning, delta_s, FREEZING_TOL).is_freezing;
                    let p = ModelParams {
                        delta_s,
                        detuning,
                        lambda: 0.0,
                        dt,
                        beta,
                    };
                    let rho00_star = if is_freezing || p.validate().is_err() {
                        None
                    } else {
                        attractor(&p).ok().map(|a| a.rho00_star)
                    };
                    AttractorCell {
                        dt,
                        detuning,
                        rho00_star,
                        is_freezing,
                    }
                })
                .collect()
        })
        .collect();
    Ok(AttractorGrid {
        dt_axis: dts,
        detuning_axis: dds,
        delta_s,
        beta,
        cells: rows.into_iter().flatten().collect(),
    })
}
