//! Sweeps of analytic quantities over one or two parameters.

use crate::analytics::{attractor, offdiag_coeffs, relaxation_constants, sinc_factors, temperature_bounds};
use crate::error::{Error, Result};
use crate::model::ModelParams;

use super::config::ResolvedSweep;

/// Quantities accepted by `sweep`.
pub const QUANTITIES: &[&str] = &[
    "rho00_star",
    "r",
    "d",
    "t_eff",
    "c1",
    "c2",
    "c3",
    "c4",
    "gamma_sq",
    "rho00_max",
    "rho00_min",
    "t_min",
    "t_max",
    "sin_a",
    "sin_b",
];

/// Parameters a sweep axis may vary.
pub const PARAMS: &[&str] = &["delta_s", "detuning", "lambda", "dt", "beta"];

pub(crate) fn check(s: &ResolvedSweep) -> Result<()> {
    if !QUANTITIES.contains(&s.quantity.as_str()) {
        return Err(Error::Config(format!(
            "sweep.quantity: unknown quantity `{}` (one of {})",
            s.quantity,
            QUANTITIES.join(", ")
        )));
    }
    for (key, axis) in std::iter::once(("sweep.x", &s.x)).chain(s.y.as_ref().map(|y| ("sweep.y", y))) {
        if !PARAMS.contains(&axis.param.as_str()) {
            return Err(Error::Config(format!(
                "{key}.param: unknown parameter `{}` (one of {})",
                axis.param,
                PARAMS.join(", ")
            )));
        }
        axis.range().validate(key)?;
    }
    if s.y.as_ref().is_some_and(|y| y.param == s.x.param) {
        return Err(Error::Config("sweep.y.param: must differ from sweep.x.param".into()));
    }
    Ok(())
}

fn set(p: &mut ModelParams, name: &str, value: f64) {
    match name {
        "delta_s" => p.delta_s = value,
        "detuning" => p.detuning = value,
        "lambda" => p.lambda = value,
        "dt" => p.dt = value,
        "beta" => p.beta = value,
        _ => unreachable!("parameter names are checked"),
    }
}

/// Value of a registered quantity; `None` where it is undefined.
pub fn evaluate(quantity: &str, p: &ModelParams) -> Option<f64> {
    p.validate().ok()?;
    let v = match quantity {
        "rho00_star" => attractor(p).ok()?.rho00_star,
        "r" => relaxation_constants(p).r,
        "d" => relaxation_constants(p).d,
        "t_eff" => attractor(p).ok()?.t_eff.value(),
        "c1" => offdiag_coeffs(p).c1,
        "c2" => offdiag_coeffs(p).c2,
        "c3" => offdiag_coeffs(p).c3,
        "c4" => offdiag_coeffs(p).c4,
        "gamma_sq" => offdiag_coeffs(p).gamma_sq(),
        "rho00_max" => temperature_bounds(p).ok()?.rho00_max,
        "rho00_min" => temperature_bounds(p).ok()?.rho00_min,
        "t_min" => temperature_bounds(p).ok()?.t_min,
        "t_max" => temperature_bounds(p).ok()?.t_max?,
        "sin_a" => sinc_factors(p).sin_a,
        "sin_b" => sinc_factors(p).sin_b,
        _ => return None,
    };
    Some(v)
}

/// One sweep row: axis values followed by the quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub y: Option<f64>,
    pub value: Option<f64>,
}

/// Rows in canonical order: y outer, x inner.
pub fn run(s: &ResolvedSweep) -> Result<Vec<SweepRow>> {
    check(s)?;
    let xs = s.x.range().points();
    let ys: Vec<Option<f64>> = match &s.y {
        Some(y) => y.range().points().into_iter().map(Some).collect(),
        None => vec![None],
    };
    let mut rows = Vec::with_capacity(xs.len() * ys.len());
    for y in &ys {
        for &x in &xs {
            let mut p = s.params;
            set(&mut p, &s.x.param, x);
            if let (Some(axis), Some(v)) = (&s.y, y) {
                set(&mut p, &axis.param, *v);
            }
            rows.push(SweepRow {
                x,
                y: *y,
                value: evaluate(&s.quantity, &p),
            });
        }
    }
    Ok(rows)
}
