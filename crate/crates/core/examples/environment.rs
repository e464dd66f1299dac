//! Builds the banded environment and the joint Hamiltonian, then checks the
//! propagator of one measurement interval.

use measured_bath::dynamics::make_propagator;
use measured_bath::model::{build_total_hamiltonian, hermiticity_residual, CouplingModel, EnvSpec, ModelParams};

fn main() -> measured_bath::Result<()> {
    let params = ModelParams::new(1.0, 0.0, 0.05, std::f64::consts::PI, 3f64.ln())?;
    for model in [CouplingModel::RandomBand, CouplingModel::SigmaX] {
        let env = EnvSpec {
            n: 7,
            delta_b: params.delta_b(),
            seed: 1,
            band_width: 0.0,
            band_range: None,
            model,
        }
        .build()?;
        let h = build_total_hamiltonian(&params, &env)?;
        let u = make_propagator(&h, params.dt)?;
        println!(
            "{model:?}: env dim {}, joint dim {}, hermiticity {:.1e}, unitarity {:.1e}",
            env.dim(),
            env.joint_dim(),
            hermiticity_residual(&h),
            u.unitarity_residual()
        );
        for band in env.bands() {
            let up = env.coupling(band.k).map(|c| c.norm()).unwrap_or(0.0);
            println!("  k = {}  N_k = {:>2}  E_k = {:.1}  |C_k+1,k| = {up:.4}", band.k, band.degeneracy, band.energy);
        }
    }
    Ok(())
}
