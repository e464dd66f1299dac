//! State freezing at Δt = π, Δδ = 2 compared with a nearby non-freezing
//! detuning.

use measured_bath::experiments::{coherence_run, verify_freezing, FreezingConfig};

fn main() -> measured_bath::Result<()> {
    let cfg = FreezingConfig::default();
    let report = verify_freezing(&cfg)?;
    println!("freezing point (n, m) = ({}, {})", report.n, report.m);
    println!("  rho00 drift   {:.2e}", report.rho00_drift);
    println!("  |rho10| drift {:.2e}", report.abs_rho10_drift);
    println!("  phase/step {:+.5}, c2 {:+.5}", report.phase_per_step, report.c2);
    for check in &report.checks {
        println!("  {:<16} {:.3e} <= {:.3e}: {}{}", check.name, check.value, check.limit, check.pass, if check.required { "" } else { " (informational)" });
    }

    let mut near = cfg.clone();
    near.params.detuning = 1.9;
    near.env.delta_b = near.params.delta_b();
    let run = coherence_run(&near)?;
    println!(
        "detuning 1.9: |rho10| {:.4} -> {:.4} ({:.1}% lost)",
        run.abs_rho10_initial,
        run.abs_rho10_final,
        100.0 * run.relative_decay
    );
    Ok(())
}
