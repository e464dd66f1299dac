//! One sampled measurement record: the band found after every interval and
//! the TLS population it leaves behind.

use measured_bath::dynamics::{run_trajectory, ResetMode};
use measured_bath::experiments::ScenarioConfig;
use measured_bath::model::QubitState;

fn main() -> measured_bath::Result<()> {
    let cfg = ScenarioConfig::fig2();
    let env = cfg.env.build()?;
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let traj = run_trajectory(&cfg.params, &env, &QubitState::ground(), cfg.k0, 200, seed, ResetMode::Coarse)?;
    let mut last = cfg.k0;
    for step in &traj.steps {
        if step.band != last {
            println!("j = {:>3}  band {last} -> {}  rho00 = {:.4}", step.j, step.band, step.rho.rho00);
            last = step.band;
        }
    }
    println!("final band {last}, rho00 = {:.4}", traj.steps.last().unwrap().rho.rho00);
    Ok(())
}
