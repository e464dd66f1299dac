//! Relaxation of a ground-state TLS to the thermal attractor ρ00 = 3/4.

use measured_bath::experiments::{reproduce_fig2, ScenarioConfig};

fn main() -> measured_bath::Result<()> {
    let report = reproduce_fig2(&ScenarioConfig::fig2())?;
    let series = report.series.as_ref().unwrap();
    let stride = (report.steps / 10).max(1);
    println!("{:>5} {:>8} {:>10} {:>12}", "j", "exact", "recursion", "closed form");
    for (j, p) in series.points.iter().enumerate().step_by(stride) {
        println!("{j:>5} {:>8.4} {:>10.4} {:>12.4}", p.rho00, report.analytic[j], report.closed_form[j]);
    }
    println!(
        "plateau {:.4} (target 0.75), max gap {:.4}, T_eff {:.3}, pass = {}",
        report.plateau,
        report.max_gap,
        report.t_eff.value(),
        report.pass
    );
    Ok(())
}
