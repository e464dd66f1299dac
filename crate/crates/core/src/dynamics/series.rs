use std::io::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{Engine, ResetMode};
use crate::error::Result;
use crate::model::QubitState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub j: usize,
    /// Band found by the measurement (the initial band at j = 0).
    pub band: usize,
    /// Reduced TLS state after the measurement, coherence in the frame
    /// co-rotating with the free TLS precession.
    pub rho: QubitState,
    /// Born weight of the recorded outcome (1 at j = 0).
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    pub seed: u64,
    pub master_seed: Option<u64>,
    pub reset: ResetMode,
    /// Total Born weight of non-adjacent band outcomes that were excluded
    /// from sampling, summed over the run.
    pub dropped_weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsemblePoint {
    pub j: usize,
    pub rho00: f64,
    pub rho10: C64,
    pub rho00_stderr: f64,
    pub rho10_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSeries {
    pub points: Vec<EnsemblePoint>,
    pub engine: Engine,
    pub reset: ResetMode,
    /// Number of sampled trajectories; `None` for the exact average.
    pub trajectories: Option<usize>,
    pub master_seed: u64,
    /// Mean excluded non-adjacent weight per trajectory (sampled engine).
    pub dropped_weight: f64,
}

/// One CSV row shared by trajectories and ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub j: usize,
    pub k: Option<usize>,
    pub rho00: f64,
    pub re_rho10: f64,
    pub im_rho10: f64,
    pub stderr: Option<f64>,
}

impl Trajectory {
    pub fn rows(&self) -> Vec<SeriesRow> {
        self.steps
            .iter()
            .map(|s| SeriesRow {
                j: s.j,
                k: Some(s.band),
                rho00: s.rho.rho00,
                re_rho10: s.rho.rho10.re,
                im_rho10: s.rho.rho10.im,
                stderr: None,
            })
            .collect()
    }

    pub fn bands(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.band).collect()
    }

    pub fn rho00(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.rho.rho00).collect()
    }
}

impl EnsembleSeries {
    pub fn rows(&self) -> Vec<SeriesRow> {
        self.points
            .iter()
            .map(|p| SeriesRow {
                j: p.j,
                k: None,
                rho00: p.rho00,
                re_rho10: p.rho10.re,
                im_rho10: p.rho10.im,
                stderr: Some(p.rho00_stderr),
            })
            .collect()
    }

    pub fn rho00(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.rho00).collect()
    }

    pub fn rho10(&self) -> Vec<C64> {
        self.points.iter().map(|p| p.rho10).collect()
    }

    /// Mean ρ̄00 over the final `fraction` of the points.
    pub fn plateau(&self, fraction: f64) -> f64 {
        let n = self.points.len();
        let take = ((n as f64 * fraction).ceil() as usize).clamp(1, n.max(1));
        let tail = &self.points[n - take..];
        tail.iter().map(|p| p.rho00).sum::<f64>() / take as f64
    }
}

/// Writes `# ` comment lines followed by a headed CSV table.
pub fn write_series_csv<W: Write>(mut out: W, preamble: &[String], rows: &[SeriesRow]) -> Result<()> {
    for line in preamble {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let rows = vec![
            SeriesRow { j: 0, k: Some(2), rho00: 1.0, re_rho10: 0.0, im_rho10: 0.0, stderr: None },
            SeriesRow { j: 1, k: None, rho00: 0.5, re_rho10: 0.25, im_rho10: -0.125, stderr: Some(0.01) },
        ];
        let mut buf = Vec::new();
        write_series_csv(&mut buf, &["version 1".into()], &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "# version 1");
        assert_eq!(lines[1], "j,k,rho00,re_rho10,im_rho10,stderr");
        assert_eq!(lines[2], "0,2,1.0,0.0,0.0,");
        assert_eq!(lines[3], "1,,0.5,0.25,-0.125,0.01");
    }
}
