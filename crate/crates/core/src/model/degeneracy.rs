//! Band degeneracies of an n-spin environment and the inverse temperature
//! implied by their local exponential growth.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest spin count for which every binomial(n, k) fits in a `u64`.
pub const MAX_EXACT_SPINS: u64 = 62;

/// Exact degeneracy N_k = binomial(n, k) of band k.
pub fn binomial_degeneracy(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Err(invalid("k", format!("band {k} exceeds spin count {n}")));
    }
    if n > MAX_EXACT_SPINS {
        return Err(Error::BinomialOverflow { n, k });
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::BinomialOverflow { n, k })?
            / (i + 1) as u128;
    }
    u64::try_from(acc).map_err(|_| Error::BinomialOverflow { n, k })
}

/// ln binomial(n, k) in floating point; valid for any n.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n, "ln_binomial: k > n");
    let k = k.min(n - k);
    (1..=k)
        .map(|i| ((n - k + i) as f64).ln() - (i as f64).ln())
        .sum()
}

/// Digamma function ψ(x) = d/dx ln Γ(x).
///
/// Upward recurrence to x ≥ 10 followed by the asymptotic Bernoulli series
/// (truncated after the x^-14 term); negative non-integers go through the
/// reflection formula.
pub fn digamma(x: f64) -> f64 {
    if x.is_nan() || (x <= 0.0 && x == x.floor()) {
        return f64::NAN;
    }
    if x < 0.0 {
        let pi = std::f64::consts::PI;
        return digamma(1.0 - x) - pi / (pi * x).tan();
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Σ B_2k / (2k x^2k), k = 1..7, in Horner form.
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    acc + x.ln() - 0.5 / x - series
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaMethod {
    /// ln(n/k0 − 1)/δB, the large-argument form.
    LogApprox,
    /// (ψ(n−k0+1) − ψ(k0+1))/δB, from matching the first-order Taylor
    /// coefficient of binomial(n, k) around k0.
    Digamma,
}

/// Inverse temperature of an n-spin environment at working point k0.
pub fn beta_working_point(n: u64, k0: u64, delta_b: f64, method: BetaMethod) -> Result<f64> {
    if k0 == 0 || k0 >= n {
        return Err(invalid(
            "k0",
            format!("working point must satisfy 0 < k0 < n, got k0 = {k0}, n = {n}"),
        ));
    }
    if !(delta_b > 0.0) {
        return Err(invalid("delta_b", "must be > 0"));
    }
    let (n, k0) = (n as f64, k0 as f64);
    Ok(match method {
        BetaMethod::LogApprox => (n / k0 - 1.0).ln() / delta_b,
        BetaMethod::Digamma => (digamma(n - k0 + 1.0) - digamma(k0 + 1.0)) / delta_b,
    })
}

/// β_eff = ln(N_high / N_low) / ((k_high − k_low)·δB): the inverse
/// temperature seen by a TLS exchanging energy between two bands only.
pub fn effective_beta(n: u64, k_low: u64, k_high: u64, delta_b: f64) -> Result<f64> {
    if k_low >= k_high || k_high > n {
        return Err(invalid(
            "bands",
            format!("need 0 <= k_low < k_high <= n, got {k_low}, {k_high}, n = {n}"),
        ));
    }
    if !(delta_b > 0.0) {
        return Err(invalid("delta_b", "must be > 0"));
    }
    let ln_ratio = ln_binomial(n, k_high) - ln_binomial(n, k_low);
    Ok(ln_ratio / ((k_high - k_low) as f64 * delta_b))
}
