//! Closed-form second-order layer.
//!
//! Everything here is a pure function of [`ModelParams`] (β included) and
//! a TLS state. Conditional post-measurement maps, outcome probabilities,
//! the ensemble recursion with its exponential solution, the attractor,
//! temperature bounds and freezing points live in this module; the
//! coupled off-diagonal dynamics are in [`offdiag`].

mod offdiag;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, QubitState};

pub use offdiag::{offdiag_closed_form, offdiag_coeffs, offdiag_map, OffdiagCoeffs};

/// Below this |x| the sinc-type helpers switch to their Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-6;

/// sin(x)/x.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// sin²(ω·Δt/2)/ω², continuous through ω = 0.
fn sin_sq_over_sq(omega: f64, dt: f64) -> f64 {
    let s = 0.5 * dt * sinc(0.5 * omega * dt);
    s * s
}

/// The two transition kernels of the second-order expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SincFactors {
    /// sin²(Δδ·Δt/2)/Δδ²: the energy-conserving exchange channel.
    pub sin_a: f64,
    /// sin²((δS+Δδ/2)·Δt)/(2δS+Δδ)²: the counter-rotating channel.
    pub sin_b: f64,
}

pub fn sinc_factors(p: &ModelParams) -> SincFactors {
    SincFactors {
        sin_a: sin_sq_over_sq(p.detuning, p.dt),
        sin_b: sin_sq_over_sq(2.0 * p.delta_s + p.detuning, p.dt),
    }
}

/// e^{+βδB/2}, e^{−βδB/2}.
pub(crate) fn boltzmann_pair(p: &ModelParams) -> (f64, f64) {
    let h = 0.5 * p.beta_delta_b();
    (h.exp(), (-h).exp())
}

/// Measured band relative to the previous measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Same,
    Up,
    Down,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Same => "same",
            Outcome::Up => "up",
            Outcome::Down => "down",
        }
    }
}

/// Coherence transfer factor (e^{i(2δS+Δδ)Δt} − 1)(e^{−iΔδΔt} − 1)/((2δS+Δδ)Δδ),
/// evaluated without the removable singularities.
pub(crate) fn jump_coherence_factor(p: &ModelParams) -> C64 {
    let alpha = 2.0 * p.delta_s + p.detuning;
    let mag = p.dt * p.dt * sinc(0.5 * alpha * p.dt) * sinc(0.5 * p.detuning * p.dt);
    C64::from_polar(1.0, p.delta_s * p.dt) * mag
}

/// (1 − e^{iωΔt} + iωΔt)/ω², continuous through ω = 0.
pub(crate) fn same_band_shift(omega: f64, dt: f64) -> C64 {
    let x = omega * dt;
    let re = 2.0 * sin_sq_over_sq(omega, dt);
    // (x − sin x)/x², odd in x.
    let h = if x.abs() < 0.5 {
        let x2 = x * x;
        let mut term = x / 6.0;
        let mut sum = 0.0;
        for k in 1..=6 {
            sum += term;
            term *= -x2 / ((2 * k + 2) as f64 * (2 * k + 3) as f64);
        }
        sum
    } else {
        (x - x.sin()) / (x * x)
    };
    C64::new(re, dt * dt * h)
}

fn second_order_warning(p: &ModelParams, strength: f64, what: &str) {
    if strength > 0.1 {
        log::warn!(
            "{what}: second-order expansion strained (strength {strength:.3} > 0.1 at lambda = {}, dt = {})",
            p.lambda,
            p.dt
        );
    }
}

/// TLS state after a band measurement with the given outcome.
pub fn conditional_update(rho: &QubitState, outcome: Outcome, p: &ModelParams) -> Result<QubitState> {
    let SincFactors { sin_a, sin_b } = sinc_factors(p);
    let (ep, em) = boltzmann_pair(p);
    let l2 = p.lambda * p.lambda;
    second_order_warning(p, 4.0 * l2 * (sin_a + sin_b) * 0.5 * (ep + em), "conditional_update");
    let (r00, r11) = (rho.rho00, rho.rho11);
    let (rho00, rho10) = match outcome {
        Outcome::Same => {
            let rho00 = r00 * (1.0 - 4.0 * l2 * r11 * (em - ep) * (sin_a - sin_b));
            let shift = same_band_shift(p.detuning, p.dt)
                + same_band_shift(2.0 * p.delta_s + p.detuning, p.dt);
            let factor = C64::new(
                1.0 + l2
                    * (4.0 * (em * r00 + ep * r11) * sin_a + 4.0 * (ep * r00 + em * r11) * sin_b),
                0.0,
            ) - shift * (l2 * (ep + em));
            (rho00, rho.rho10 * factor)
        }
        Outcome::Up | Outcome::Down => {
            let denom = if outcome == Outcome::Up {
                r11 * sin_a + r00 * sin_b
            } else {
                r11 * sin_b + r00 * sin_a
            };
            // Kernels that vanish analytically come out at rounding level.
            if !(denom > 1e-24 * p.dt * p.dt) {
                return Err(Error::ImpossibleOutcome(outcome.name()));
            }
            let numer = if outcome == Outcome::Up {
                r11 * sin_a
            } else {
                r11 * sin_b
            };
            let rho10 = rho.rho01() * jump_coherence_factor(p) / (4.0 * denom);
            (numer / denom, rho10)
        }
    };
    let out = QubitState {
        rho00,
        rho11: 1.0 - rho00,
        rho10,
    };
    Ok(out.normalized())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeProbabilities {
    pub up: f64,
    pub down: f64,
    pub same: f64,
    /// Set when clamping to [0, 1] moved any value by more than 1e-6.
    pub clamped: bool,
}

pub fn outcome_probabilities(rho: &QubitState, p: &ModelParams) -> Result<OutcomeProbabilities> {
    let SincFactors { sin_a, sin_b } = sinc_factors(p);
    let (ep, em) = boltzmann_pair(p);
    let l2 = p.lambda * p.lambda;
    let up = 4.0 * l2 * ep * (rho.rho11 * sin_a + rho.rho00 * sin_b);
    let down = 4.0 * l2 * em * (rho.rho00 * sin_a + rho.rho11 * sin_b);
    let same = 1.0 - up - down;
    if same < -0.01 {
        return Err(Error::SecondOrderViolated { p_same: same });
    }
    let clip = |v: f64| v.clamp(0.0, 1.0);
    let clamped = [up, down, same].iter().any(|&v| (clip(v) - v).abs() > 1e-6);
    Ok(OutcomeProbabilities {
        up: clip(up),
        down: clip(down),
        same: clip(same),
        clamped,
    })
}

/// One step of the ensemble recursion for ρ̄00.
pub fn ensemble_map(rho00: f64, p: &ModelParams) -> f64 {
    let SincFactors { sin_a, sin_b } = sinc_factors(p);
    let (ep, em) = boltzmann_pair(p);
    let rho11 = 1.0 - rho00;
    rho00
        + 4.0
            * p.lambda
            * p.lambda
            * ((ep * rho11 - em * rho00) * sin_a + (em * rho11 - ep * rho00) * sin_b)
}

/// Per-measurement relaxation rate R and drive d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxationPair {
    pub r: f64,
    pub d: f64,
}

pub fn relaxation_constants(p: &ModelParams) -> RelaxationPair {
    let SincFactors { sin_a, sin_b } = sinc_factors(p);
    let (ep, em) = boltzmann_pair(p);
    let l2 = p.lambda * p.lambda;
    let r = 4.0 * l2 * (ep + em) * (sin_a + sin_b);
    second_order_warning(p, r, "relaxation_constants");
    RelaxationPair {
        r,
        d: 4.0 * l2 * (ep * sin_a + em * sin_b),
    }
}

/// ρ̄00 after `j` measurements from the continuum solution of the recursion.
pub fn rho00_closed_form(rho00_initial: f64, j: f64, p: &ModelParams) -> f64 {
    let RelaxationPair { r, d } = relaxation_constants(p);
    if r <= 0.0 {
        return rho00_initial;
    }
    let star = d / r;
    (rho00_initial - star) * (-r * j).exp() + star
}

/// Signed effective temperature of a diagonal TLS state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum EffectiveTemperature {
    Finite(f64),
    /// ρ00 = 1/2.
    Infinite,
    /// ρ00 = 1: approached from positive temperatures.
    ZeroPositive,
    /// ρ00 = 0: approached from negative temperatures.
    ZeroNegative,
}

impl EffectiveTemperature {
    pub fn value(self) -> f64 {
        match self {
            EffectiveTemperature::Finite(t) => t,
            EffectiveTemperature::Infinite => f64::INFINITY,
            EffectiveTemperature::ZeroPositive => 0.0,
            EffectiveTemperature::ZeroNegative => -0.0,
        }
    }

    pub fn is_negative(self) -> bool {
        matches!(self, EffectiveTemperature::ZeroNegative)
            || matches!(self, EffectiveTemperature::Finite(t) if t < 0.0)
    }
}

/// T = δS / ln(ρ00/ρ11); negative for inversion.
pub fn effective_temperature(rho00: f64, delta_s: f64) -> EffectiveTemperature {
    if rho00 >= 1.0 {
        return EffectiveTemperature::ZeroPositive;
    }
    if rho00 <= 0.0 {
        return EffectiveTemperature::ZeroNegative;
    }
    let ln_ratio = (rho00 / (1.0 - rho00)).ln();
    if ln_ratio == 0.0 {
        EffectiveTemperature::Infinite
    } else {
        EffectiveTemperature::Finite(delta_s / ln_ratio)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttractorResult {
    pub rho00_star: f64,
    pub r: f64,
    pub d: f64,
    pub t_eff: EffectiveTemperature,
}

/// Relative size of sinA + sinB below which the parameters count as a
/// freezing point for the attractor.
const FREEZE_REL: f64 = 1e-20;

/// The fixed point d/R of the ensemble recursion.
///
/// The ratio is formed from the sinc weights directly so it stays defined
/// at λ = 0.
pub fn attractor(p: &ModelParams) -> Result<AttractorResult> {
    let SincFactors { sin_a, sin_b } = sinc_factors(p);
    let scale = 0.25 * p.dt * p.dt;
    if p.dt == 0.0 || sin_a + sin_b <= FREEZE_REL * scale {
        return Err(Error::NoAttractor {
            dt: p.dt,
            detuning: p.detuning,
        });
    }
    let (ep, em) = boltzmann_pair(p);
    let w = sin_a / (sin_a + sin_b);
    let rho00_star = (w * ep + (1.0 - w) * em) / (ep + em);
    let RelaxationPair { r, d } = relaxation_constants(p);
    Ok(AttractorResult {
        rho00_star,
        r,
        d,
        t_eff: effective_temperature(rho00_star, p.delta_s),
    })
}

/// Limit Δt → 0 of the attractor (exactly 1/2 whatever the parameters).
pub fn attractor_fast_limit() -> f64 {
    0.5
}

/// Resonant-case attractor (Δδ = 0) written in terms of δS alone.
pub fn attractor_resonant(dt: f64, delta_s: f64, beta: f64) -> f64 {
    let h = 0.5 * beta * delta_s;
    let s2 = (delta_s * dt).sin().powi(2);
    let x2 = (delta_s * dt).powi(2);
    ((-h).exp() * s2 + h.exp() * x2) / (2.0 * h.cosh() * (s2 + x2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemperatureBounds {
    /// Lowest reachable positive temperature.
    pub t_min: f64,
    /// Most negative temperature reachable by inversion; `None` when Δδ = 0.
    pub t_max: Option<f64>,
    pub rho00_max: f64,
    pub rho00_min: f64,
}

pub fn temperature_bounds(p: &ModelParams) -> Result<TemperatureBounds> {
    if p.beta == 0.0 {
        return Err(crate::error::invalid("beta", "temperature bounds need beta != 0"));
    }
    let (ep, em) = boltzmann_pair(p);
    let ratio = p.delta_s / p.delta_b();
    Ok(TemperatureBounds {
        t_min: ratio / p.beta,
        t_max: (p.detuning != 0.0).then(|| -ratio / p.beta),
        rho00_max: ep / (ep + em),
        rho00_min: em / (ep + em),
    })
}

/// Δt = nπ/(δS + Δδ/2): sinB vanishes and the attractor is coldest.
pub fn cooling_interval(p: &ModelParams, n: u32) -> f64 {
    n as f64 * std::f64::consts::PI / (p.delta_s + 0.5 * p.detuning)
}

/// Δt = 2nπ/|Δδ|: sinA vanishes and inversion is maximal.
pub fn inversion_interval(p: &ModelParams, n: u32) -> Option<f64> {
    (p.detuning != 0.0).then(|| 2.0 * n as f64 * std::f64::consts::PI / p.detuning.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreezingMatch {
    pub is_freezing: bool,
    pub n: i64,
    pub m: i64,
}

/// Δt = nπ/δS and Δδ = 2mπ/Δt for positive integers n, m.
pub fn is_freezing_point(dt: f64, detuning: f64, delta_s: f64, tol: f64) -> FreezingMatch {
    let pi = std::f64::consts::PI;
    let nf = dt * delta_s / pi;
    let mf = detuning * dt / (2.0 * pi);
    let (n, m) = (nf.round(), mf.round());
    let is_freezing =
        dt > 0.0 && n >= 1.0 && m >= 1.0 && (nf - n).abs() <= tol && (mf - m).abs() <= tol;
    FreezingMatch {
        is_freezing,
        n: n as i64,
        m: m as i64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn params(delta_s: f64, detuning: f64, lambda: f64, dt: f64, beta: f64) -> ModelParams {
        ModelParams::new(delta_s, detuning, lambda, dt, beta).unwrap()
    }

    #[test]
    fn sinc_factor_limits() {
        for dt in [0.0, 0.3, PI, 7.0] {
            let f = sinc_factors(&params(1.0, 0.0, 0.1, dt, 0.0));
            assert_relative_eq!(f.sin_a, dt * dt / 4.0, max_relative = 1e-15);
        }
        let f = sinc_factors(&params(1.0, 0.0, 0.1, PI, 0.0));
        assert!(f.sin_b < 1e-30);
        let f = sinc_factors(&params(1.0, 0.7, 0.1, 2.0 * PI / 0.7, 0.0));
        assert!(f.sin_a < 1e-30);
        // Series and direct branches agree at the switch.
        let eps = SERIES_THRESHOLD;
        for x in [eps * 0.999, eps * 1.001] {
            let direct = x.sin() / x;
            assert!((sinc(x) - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn sinc_factor_bounds() {
        for dt in [0.1, 1.0, 3.3, 12.0] {
            for det in [-0.9, -0.2, 0.0, 0.4, 2.5] {
                let f = sinc_factors(&params(1.0, det, 0.1, dt, 0.0));
                assert!(f.sin_a >= 0.0 && f.sin_b >= 0.0);
                assert!(f.sin_a <= dt * dt / 4.0 + 1e-15);
                assert!(f.sin_b <= dt * dt / 4.0 + 1e-15);
                if det != 0.0 {
                    assert!(f.sin_a <= 1.0 / (det * det) + 1e-15);
                }
                assert!(f.sin_b <= 1.0 / (2.0 + det).powi(2) + 1e-15);
            }
        }
    }

    /// The stable coherence factor against the literal expression
    /// (1 + e^{2iδSΔt} − 2e^{iδSΔt}cos((δS+Δδ)Δt)) / (2δSΔδ + Δδ²).
    #[test]
    fn coherence_factor_matches_literal_form() {
        for (ds, det, dt) in [(1.0, 0.7, 2.1), (1.0, -0.4, 5.0), (0.8, 2.0, 0.9)] {
            let p = params(ds, det, 0.1, dt, 0.0);
            let lit = (C64::new(1.0, 0.0) + C64::from_polar(1.0, 2.0 * ds * dt)
                - C64::from_polar(2.0 * ((ds + det) * dt).cos(), ds * dt))
                / (2.0 * ds * det + det * det);
            assert!((jump_coherence_factor(&p) - lit).norm() < 1e-12);
        }
        // Removable singularity at Δδ = 0: G/D → Δt² e^{iδSΔt} sinc(δSΔt).
        let p = params(1.0, 0.0, 0.1, 1.3, 0.0);
        let lim = 1.69 * C64::from_polar(1.0, 1.3) * (1.3f64.sin() / 1.3);
        assert!((jump_coherence_factor(&p) - lim).norm() < 1e-14);
    }

    #[test]
    fn same_band_shift_matches_literal_form() {
        for (w, dt) in [(0.7, 2.0), (2.7, 8.9), (-1.3, 0.4), (0.2, 0.3)] {
            let x = w * dt;
            let lit = (C64::new(1.0, x) - C64::from_polar(1.0, x)) / (w * w);
            assert!((same_band_shift(w, dt) - lit).norm() < 1e-12 * lit.norm().max(1.0));
        }
        let s = same_band_shift(0.0, 2.0);
        assert_eq!(s, C64::new(2.0, 0.0));
    }

    #[test]
    fn conditional_update_examples() {
        let p = params(1.0, 0.3, 0.05, 2.0, 0.4);
        let up = conditional_update(&QubitState::excited(), Outcome::Up, &p).unwrap();
        assert_relative_eq!(up.rho00, 1.0, epsilon = 1e-15);
        let down = conditional_update(&QubitState::ground(), Outcome::Down, &p).unwrap();
        assert_relative_eq!(down.rho00, 0.0, epsilon = 1e-15);
        let rho = QubitState::new(0.3, C64::new(0.2, 0.1)).unwrap();
        let same = conditional_update(&rho, Outcome::Same, &p.with_lambda(0.0)).unwrap();
        assert_eq!(same, rho);
    }

    #[test]
    fn impossible_outcomes_are_reported() {
        // Freezing point: both kernels vanish.
        let p = params(1.0, 2.0, 0.05, PI, 0.4);
        let r = conditional_update(&QubitState::ground(), Outcome::Up, &p);
        assert!(matches!(r, Err(Error::ImpossibleOutcome("up"))));
        // Up from the ground state needs the counter-rotating channel.
        let p = params(1.0, 0.0, 0.05, PI, 0.4);
        assert!(conditional_update(&QubitState::ground(), Outcome::Up, &p).is_err());
    }

    #[test]
    fn probability_examples() {
        let p = params(1.0, 0.0, 0.0, PI, 0.7);
        let pr = outcome_probabilities(&QubitState::ground(), &p).unwrap();
        assert_eq!((pr.up, pr.down, pr.same), (0.0, 0.0, 1.0));
        let p = params(1.0, 0.0, 0.05, PI, 3f64.ln());
        let pr = outcome_probabilities(&QubitState::ground(), &p).unwrap();
        assert!(pr.up < 1e-30);
        // 4·λ²·e^{−ln3/2}·π²/4, evaluated independently.
        let expected = 4.0 * 0.0025 * (-(3f64.ln()) / 2.0).exp() * PI * PI / 4.0;
        assert_relative_eq!(pr.down, expected, max_relative = 1e-12);
        assert!((pr.down - 0.01424).abs() < 1e-5);
        assert!(!pr.clamped);
    }

    #[test]
    fn probabilities_fail_outside_second_order() {
        let p = params(1.0, 0.0, 1.0, PI, 0.0);
        assert!(matches!(
            outcome_probabilities(&QubitState::ground(), &p),
            Err(Error::SecondOrderViolated { .. })
        ));
    }

    #[test]
    fn relaxation_examples() {
        let p = params(1.0, 0.0, 0.01, 0.0, 0.75);
        assert_eq!(relaxation_constants(&p).r, 0.0);
        let p = params(1.0, 2.0, 0.01, PI, 0.75);
        assert!(relaxation_constants(&p).r < 1e-12);
        // 8·1e-4·cosh(0.375)·π²/4.
        let p = params(1.0, 0.0, 0.01, PI, 0.75);
        let r = relaxation_constants(&p).r;
        assert_relative_eq!(r, 8e-4 * 0.375f64.cosh() * PI * PI / 4.0, max_relative = 1e-12);
        assert!((r - 2.115e-3).abs() < 1e-6);
    }

    #[test]
    fn ensemble_map_is_affine_with_fixed_point() {
        let p = params(1.0, 0.4, 0.03, 2.2, 0.6);
        let RelaxationPair { r, d } = relaxation_constants(&p);
        for x in [0.0, 0.2, 0.77, 1.0] {
            assert_relative_eq!(ensemble_map(x, &p), (1.0 - r) * x + d, epsilon = 1e-15);
        }
        let star = d / r;
        assert_relative_eq!(ensemble_map(star, &p), star, epsilon = 1e-15);
        assert_eq!(ensemble_map(0.3, &p.with_lambda(0.0)), 0.3);
    }

    #[test]
    fn closed_form_limits() {
        let p = params(1.0, 0.4, 0.03, 2.2, 0.6);
        assert_eq!(rho00_closed_form(0.9, 0.0, &p), 0.9);
        let star = attractor(&p).unwrap().rho00_star;
        assert_relative_eq!(rho00_closed_form(0.9, 1e7, &p), star, epsilon = 1e-12);
        assert_eq!(rho00_closed_form(0.9, 50.0, &p.with_dt(0.0)), 0.9);
    }

    /// Iterate-the-map oracle: 1000 steps stay within R of the continuum
    /// solution.
    #[test]
    fn closed_form_tracks_iterated_map() {
        let p = params(1.0, 0.3, 0.04, 2.5, 0.8);
        let r = relaxation_constants(&p).r;
        let mut x = 1.0;
        for j in 1..=1000 {
            x = ensemble_map(x, &p);
            assert!((x - rho00_closed_form(1.0, j as f64, &p)).abs() < r);
        }
    }

    #[test]
    fn attractor_spot_values() {
        let a = attractor(&params(1.0, 0.0, 0.05, PI, 3f64.ln())).unwrap();
        assert!((a.rho00_star - 0.75).abs() < 1e-12);
        let db = 1.7;
        let a = attractor(&params(1.0, 0.7, 0.05, 2.0 * PI / 0.7, (5.0f64 / 3.0).ln() / db))
            .unwrap();
        assert!((a.rho00_star - 0.375).abs() < 1e-12);
        assert!(a.t_eff.is_negative());
        let a = attractor(&params(1.0, 0.3, 0.05, 1e-5, 0.9)).unwrap();
        assert!((a.rho00_star - 0.5).abs() < 1e-9);
        assert_eq!(attractor_fast_limit(), 0.5);
    }

    #[test]
    fn attractor_undefined_at_freezing_points() {
        for (dt, det) in [(PI, 2.0), (2.0 * PI, 1.0), (3.0 * PI, 2.0 / 3.0)] {
            assert!(matches!(
                attractor(&params(1.0, det, 0.05, dt, 0.4)),
                Err(Error::NoAttractor { .. })
            ));
        }
        assert!(attractor(&params(1.0, 0.0, 0.05, 0.0, 0.4)).is_err());
    }

    #[test]
    fn resonant_branch_agrees_with_general_form() {
        for dt in [0.01, 0.5, 1.0, 2.9, PI, 4.4, 10.0] {
            for beta in [-1.0, 0.0, 0.75, 2.0] {
                let general = attractor(&params(1.0, 0.0, 0.05, dt, beta)).unwrap().rho00_star;
                assert!((general - attractor_resonant(dt, 1.0, beta)).abs() < 1e-12);
            }
        }
        // Fig 1 reference cell, evaluated by hand: 1/(1 + e^{-0.75}).
        assert!((attractor_resonant(PI, 1.0, 0.75) - 0.6791).abs() < 1e-4);
    }

    #[test]
    fn temperature_examples() {
        assert_eq!(
            effective_temperature(0.75, 1.0),
            EffectiveTemperature::Finite(1.0 / 3f64.ln())
        );
        let t = effective_temperature(0.375, 1.0);
        assert_relative_eq!(t.value(), -1.0 / (5.0f64 / 3.0).ln(), max_relative = 1e-14);
        assert!(t.is_negative());
        assert_eq!(effective_temperature(0.5, 1.0), EffectiveTemperature::Infinite);
        assert_eq!(effective_temperature(1.0, 1.0), EffectiveTemperature::ZeroPositive);
        assert_eq!(effective_temperature(0.0, 1.0), EffectiveTemperature::ZeroNegative);
    }

    #[test]
    fn temperature_bound_examples() {
        let db = 1.7;
        let p = params(1.0, 0.7, 0.05, 1.0, (5.0f64 / 3.0).ln() / db);
        let b = temperature_bounds(&p).unwrap();
        assert!((b.rho00_min - 0.375).abs() < 1e-14);
        assert!((b.rho00_max + b.rho00_min - 1.0).abs() < 1e-15);
        assert_relative_eq!(b.t_max.unwrap(), -b.t_min, max_relative = 1e-15);
        let p = params(1.0, 0.0, 0.05, 1.0, 0.75);
        let b = temperature_bounds(&p).unwrap();
        assert_relative_eq!(b.t_min, 1.0 / 0.75, max_relative = 1e-15);
        assert!(b.t_max.is_none());
        assert!(temperature_bounds(&p.with_beta(0.0)).is_err());
        // The bounds are attained at the advertised intervals.
        let p = params(1.0, 0.7, 0.05, 1.0, 0.9);
        let b = temperature_bounds(&p).unwrap();
        let cold = attractor(&p.with_dt(cooling_interval(&p, 2))).unwrap();
        assert!((cold.rho00_star - b.rho00_max).abs() < 1e-12);
        let inv = attractor(&p.with_dt(inversion_interval(&p, 1).unwrap())).unwrap();
        assert!((inv.rho00_star - b.rho00_min).abs() < 1e-12);
        assert_relative_eq!(cold.t_eff.value(), b.t_min, max_relative = 1e-9);
        assert_relative_eq!(inv.t_eff.value(), b.t_max.unwrap(), max_relative = 1e-9);
    }

    #[test]
    fn freezing_point_examples() {
        assert_eq!(
            is_freezing_point(PI, 2.0, 1.0, 1e-9),
            FreezingMatch { is_freezing: true, n: 1, m: 1 }
        );
        assert!(!is_freezing_point(PI, 0.7, 1.0, 1e-9).is_freezing);
        assert_eq!(
            is_freezing_point(2.0 * PI, 1.0, 1.0, 1e-9),
            FreezingMatch { is_freezing: true, n: 2, m: 1 }
        );
        assert!(!is_freezing_point(PI, 0.0, 1.0, 1e-9).is_freezing);
    }
}
