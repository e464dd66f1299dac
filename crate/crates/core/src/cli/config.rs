use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Engine, ResetMode};
use crate::error::{Error, Result};
use crate::experiments::{participating_beta, AxisRange, FreezingConfig, ScenarioConfig, Target};
use crate::model::{effective_beta, CouplingModel, EnvSpec, ModelParams, QubitState};

/// User-facing run configuration. Every field is optional; missing fields
/// take the defaults of the selected subcommand and scenario.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Option<String>,
    pub delta_s: Option<f64>,
    pub detuning: Option<f64>,
    pub lambda: Option<f64>,
    pub dt: Option<f64>,
    pub beta: Option<f64>,
    pub n: Option<usize>,
    pub k0: Option<usize>,
    pub env_seed: Option<u64>,
    pub band_width: Option<f64>,
    pub band_range: Option<[usize; 2]>,
    pub coupling: Option<CouplingModel>,
    pub rho00: Option<f64>,
    /// [Re ρ10, Im ρ10].
    pub rho10: Option<[f64; 2]>,
    pub steps: Option<usize>,
    pub engine: Option<Engine>,
    pub reset: Option<ResetMode>,
    pub trajectories: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub phase_tolerance: Option<f64>,
    pub target: Option<f64>,
    pub grid: Option<GridConfig>,
    pub sweep: Option<SweepConfig>,
    pub out: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dt: Option<AxisRange>,
    pub detuning: Option<AxisRange>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    #[serde(default)]
    pub open_lo: bool,
}

impl SweepAxis {
    pub fn range(&self) -> AxisRange {
        AxisRange {
            lo: self.lo,
            hi: self.hi,
            n: self.n,
            open_lo: self.open_lo,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub quantity: Option<String>,
    pub x: Option<SweepAxis>,
    pub y: Option<SweepAxis>,
}

/// Resolved inputs of the attractor map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapConfig {
    pub delta_s: f64,
    pub beta: f64,
    pub dt: AxisRange,
    pub detuning: AxisRange,
}

/// Resolved inputs of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedSweep {
    pub params: ModelParams,
    pub quantity: String,
    pub x: SweepAxis,
    pub y: Option<SweepAxis>,
}

/// Resolved inputs of the environment inspection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InspectConfig {
    pub env: EnvSpec,
    pub k0: usize,
}

impl RunConfig {
    /// Parses a JSON document; the error names the offending key.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Config(format!("{path}: {}", e.into_inner()))
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn rho0(&self, default: QubitState) -> Result<QubitState> {
        if self.rho00.is_none() && self.rho10.is_none() {
            return Ok(default);
        }
        let rho00 = self.rho00.unwrap_or(default.rho00);
        let rho10 = self.rho10.map(|[re, im]| C64::new(re, im)).unwrap_or(default.rho10);
        QubitState::new(rho00, rho10)
    }

    fn params(&self, base: ModelParams) -> ModelParams {
        ModelParams {
            delta_s: self.delta_s.unwrap_or(base.delta_s),
            detuning: self.detuning.unwrap_or(base.detuning),
            lambda: self.lambda.unwrap_or(base.lambda),
            dt: self.dt.unwrap_or(base.dt),
            beta: self.beta.unwrap_or(base.beta),
        }
    }

    fn env(&self, base: &EnvSpec, delta_b: f64) -> EnvSpec {
        EnvSpec {
            n: self.n.unwrap_or(base.n),
            delta_b,
            seed: self.env_seed.unwrap_or(base.seed),
            band_width: self.band_width.unwrap_or(base.band_width),
            band_range: self.band_range.or(base.band_range),
            model: self.coupling.unwrap_or(base.model),
        }
    }

    /// Changes the physical setting so that a preset target no longer applies.
    fn moves_target(&self) -> bool {
        self.delta_s.is_some()
            || self.detuning.is_some()
            || self.dt.is_some()
            || self.n.is_some()
            || self.k0.is_some()
            || self.rho00.is_some()
            || self.rho10.is_some()
    }

    /// Relaxation scenario: preset `fig2` (default), `fig3`, or `custom`.
    pub fn relaxation(&self) -> Result<ScenarioConfig> {
        let name = self.scenario.as_deref().unwrap_or("fig2");
        let (mut cfg, custom) = match name {
            "custom" => (ScenarioConfig::fig2(), true),
            _ => (
                ScenarioConfig::preset(name).ok_or_else(|| {
                    Error::Config(format!("scenario: unknown scenario `{name}` (fig2, fig3, custom)"))
                })?,
                false,
            ),
        };
        cfg.name = name.to_string();
        let keep_target = !custom && !self.moves_target();
        cfg.params = self.params(cfg.params);
        cfg.k0 = self.k0.unwrap_or(cfg.k0);
        cfg.rho0 = self.rho0(cfg.rho0)?;
        cfg.env = self.env(&cfg.env, cfg.params.delta_b());
        if self.beta.is_none() {
            cfg.params.beta = participating_beta(cfg.env.n, cfg.k0, &cfg.params, &cfg.rho0)?;
        }
        cfg.steps = self.steps.or(cfg.steps);
        cfg.engine = self.engine.unwrap_or(cfg.engine);
        cfg.reset = self.reset.unwrap_or(cfg.reset);
        cfg.trajectories = self.trajectories.unwrap_or(cfg.trajectories);
        cfg.master_seed = self.seed.unwrap_or(cfg.master_seed);
        cfg.tolerance = self.tolerance.unwrap_or(cfg.tolerance);
        if let Some(value) = self.target {
            cfg.expect_negative_temperature = value < 0.5;
            cfg.target = Some(Target {
                value,
                source: "configured".into(),
            });
        } else if !keep_target {
            cfg.target = None;
            cfg.expect_negative_temperature = false;
        }
        cfg.validate()?;
        cfg.steps = Some(cfg.resolved_steps()?);
        Ok(cfg)
    }

    pub fn freezing(&self) -> Result<FreezingConfig> {
        let mut cfg = FreezingConfig::default();
        cfg.params = self.params(cfg.params);
        cfg.k0 = self.k0.unwrap_or(cfg.k0);
        cfg.rho0 = self.rho0(cfg.rho0)?;
        cfg.env = self.env(&cfg.env, cfg.params.delta_b());
        if self.beta.is_none() {
            if cfg.k0 == 0 || cfg.k0 >= cfg.env.n {
                return Err(Error::Config("k0: need 0 < k0 < n (or set beta)".into()));
            }
            let (n, k0) = (cfg.env.n as u64, cfg.k0 as u64);
            cfg.params.beta = effective_beta(n, k0 - 1, k0 + 1, cfg.params.delta_b())?;
        }
        cfg.steps = self.steps.unwrap_or(cfg.steps);
        cfg.engine = self.engine.unwrap_or(cfg.engine);
        cfg.reset = self.reset.unwrap_or(cfg.reset);
        cfg.trajectories = self.trajectories.unwrap_or(cfg.trajectories);
        cfg.master_seed = self.seed.unwrap_or(cfg.master_seed);
        cfg.tolerance = self.tolerance.unwrap_or(cfg.tolerance);
        cfg.phase_tolerance = self.phase_tolerance.unwrap_or(cfg.phase_tolerance);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Attractor map; β defaults to 0.75.
    pub fn map(&self) -> Result<MapConfig> {
        let delta_s = self.delta_s.unwrap_or(1.0);
        let grid = self.grid.clone().unwrap_or_default();
        let cfg = MapConfig {
            delta_s,
            beta: self.beta.unwrap_or(0.75),
            dt: grid.dt.unwrap_or_else(|| AxisRange::default_dt(delta_s)),
            detuning: grid.detuning.unwrap_or_else(|| AxisRange::default_detuning(delta_s)),
        };
        cfg.dt.validate("grid.dt")?;
        cfg.detuning.validate("grid.detuning")?;
        Ok(cfg)
    }

    /// Sweep around the first preset's parameters.
    pub fn sweep(&self) -> Result<ResolvedSweep> {
        let sweep = self.sweep.clone().unwrap_or_default();
        let quantity = sweep
            .quantity
            .ok_or_else(|| Error::Config("sweep.quantity: missing".into()))?;
        let x = sweep.x.ok_or_else(|| Error::Config("sweep.x: missing".into()))?;
        let params = self.params(ScenarioConfig::fig2().params);
        params.validate()?;
        let out = ResolvedSweep {
            params,
            quantity,
            x,
            y: sweep.y,
        };
        super::sweep::check(&out)?;
        Ok(out)
    }

    pub fn inspect(&self) -> Result<InspectConfig> {
        let base = ScenarioConfig::fig2();
        let params = self.params(base.params);
        params.validate()?;
        let env = self.env(&base.env, params.delta_b());
        let k0 = self.k0.unwrap_or(base.k0);
        if k0 > env.n {
            return Err(Error::Config(format!("k0: {k0} exceeds n = {}", env.n)));
        }
        Ok(InspectConfig { env, k0 })
    }
}
