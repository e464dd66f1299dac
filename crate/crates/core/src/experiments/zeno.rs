use serde::{Deserialize, Serialize};

use crate::analytics::{attractor, relaxation_constants};
use crate::dynamics::{Engine, ResetMode, Simulator};
use crate::error::{invalid, Result};
use crate::model::{EnvSpec, ModelParams, QubitState};

/// Settings for the optional exact-engine half-life.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZenoExact {
    pub env: EnvSpec,
    pub k0: usize,
    /// Search horizon in measurements.
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZenoPoint {
    pub dt: f64,
    pub r: f64,
    /// ln 2 / R; `None` when R = 0.
    pub analytic_half_life: Option<f64>,
    /// First measurement at which the exact ρ̄00 has covered half the way
    /// from the ground state to the analytic attractor.
    pub exact_half_life: Option<usize>,
}

/// Relaxation rate R over a list of intervals, ascending.
pub fn zeno_scan(dt_list: &[f64], params: &ModelParams, exact: Option<&ZenoExact>) -> Result<Vec<ZenoPoint>> {
    if dt_list.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(invalid("dt_list", "must be sorted ascending"));
    }
    let mut out = Vec::with_capacity(dt_list.len());
    for &dt in dt_list {
        let p = params.with_dt(dt);
        p.validate()?;
        let r = relaxation_constants(&p).r;
        let analytic_half_life = (r > 0.0).then(|| std::f64::consts::LN_2 / r);
        let exact_half_life = match exact {
            Some(cfg) if r > 0.0 => exact_half_life(&p, cfg)?,
            _ => None,
        };
        out.push(ZenoPoint {
            dt,
            r,
            analytic_half_life,
            exact_half_life,
        });
    }
    Ok(out)
}

fn exact_half_life(p: &ModelParams, cfg: &ZenoExact) -> Result<Option<usize>> {
    let Ok(star) = attractor(p) else {
        return Ok(None);
    };
    let half = 0.5 * (1.0 - star.rho00_star);
    let env = EnvSpec {
        delta_b: p.delta_b(),
        ..cfg.env.clone()
    }
    .build()?;
    let series = Simulator::new(p, &env)?.run_ensemble(
        &QubitState::ground(),
        cfg.k0,
        cfg.max_steps.max(1),
        0,
        0,
        ResetMode::Coarse,
        Engine::Nonselective,
    )?;
    Ok(series
        .points
        .iter()
        .find(|pt| (1.0 - pt.rho00).abs() >= half.abs())
        .map(|pt| pt.j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rate_vanishes_in_zeno_limit() {
        let p = ModelParams::new(1.0, 0.0, 0.05, PI, 0.5).unwrap();
        let pts = zeno_scan(&[0.0, 0.01, 0.1, PI], &p, None).unwrap();
        assert_eq!(pts[0].r, 0.0);
        assert_eq!(pts[0].analytic_half_life, None);
        assert!(pts[1].r < pts[2].r && pts[2].r < pts[3].r);
        assert!(pts[1].r / pts[3].r < 1e-4);
    }

    #[test]
    fn unsorted_list_rejected() {
        let p = ModelParams::new(1.0, 0.0, 0.05, PI, 0.5).unwrap();
        assert!(zeno_scan(&[1.0, 0.5], &p, None).is_err());
    }
}
