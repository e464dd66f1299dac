//! Second-order post-measurement updates of the TLS for each band outcome
//! and their probability-weighted average.

use measured_bath::analytics::{conditional_update, ensemble_map, outcome_probabilities, Outcome};
use measured_bath::model::{ModelParams, QubitState};
use num_complex::Complex64 as C64;

fn main() -> measured_bath::Result<()> {
    let p = ModelParams::new(1.0, 0.3, 0.05, 2.5, 0.8)?;
    let rho = QubitState::new(0.6, C64::new(0.2, -0.1))?;
    let probs = outcome_probabilities(&rho, &p)?;
    let mut mean = 0.0;
    for (outcome, w) in [(Outcome::Same, probs.same), (Outcome::Up, probs.up), (Outcome::Down, probs.down)] {
        let post = conditional_update(&rho, outcome, &p)?;
        mean += w * post.rho00;
        println!("{:<5} p = {w:.5}  rho00 = {:.5}  rho10 = {:.5}", outcome.name(), post.rho00, post.rho10);
    }
    println!("weighted rho00 {mean:.6}, ensemble map {:.6}", ensemble_map(rho.rho00, &p));
    Ok(())
}
