//! Analytic recursion against the exact engine, and sampled trajectories
//! against the exact outcome average.

use measured_bath::experiments::{compare_engines, compare_sampled, ScenarioConfig, DEFAULT_TOLERANCE};

fn main() -> measured_bath::Result<()> {
    for cfg in [ScenarioConfig::fig2(), ScenarioConfig::fig3()] {
        let c = compare_engines(&cfg, DEFAULT_TOLERANCE)?;
        println!(
            "{}: {} steps, max gap {:.4}, final gap {:.4}, plateaus {:.4} / {:.4}, pass = {}",
            c.scenario, c.steps, c.max_gap, c.final_gap, c.plateau_exact, c.plateau_analytic, c.pass
        );
    }
    let s = compare_sampled(&ScenarioConfig::fig2(), 1000)?;
    println!(
        "sampled M = {}: max deviation {:.4}, max z {:.2} at j = {}",
        s.trajectories, s.max_deviation, s.max_z, s.worst_step
    );
    Ok(())
}
