//! Zeno suppression: the relaxation rate vanishes as the measurement
//! interval shrinks; the exact engine confirms the slowdown.

use measured_bath::experiments::{default_env, zeno_scan, ZenoExact};
use measured_bath::model::ModelParams;

fn main() -> measured_bath::Result<()> {
    let params = ModelParams::new(1.0, 0.0, 0.05, std::f64::consts::PI, 3f64.ln())?;
    let exact = ZenoExact {
        env: default_env(7, params.delta_b()),
        k0: 2,
        max_steps: 4000,
    };
    let dts = [0.0, 0.01, 0.1, 0.3, 1.0, std::f64::consts::PI];
    println!("{:>8} {:>12} {:>14} {:>12}", "dt", "R", "ln2/R", "exact j1/2");
    for p in zeno_scan(&dts, &params, Some(&exact))? {
        let fmt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        println!(
            "{:>8.3} {:>12.3e} {:>14} {:>12}",
            p.dt,
            p.r,
            fmt(p.analytic_half_life.map(|h| format!("{h:.1}"))),
            fmt(p.exact_half_life.map(|j| j.to_string()))
        );
    }
    Ok(())
}
