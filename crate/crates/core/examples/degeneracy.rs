//! Band degeneracies of a spin register and the inverse temperature they imply.

use measured_bath::model::{beta_working_point, binomial_degeneracy, effective_beta, BetaMethod};

fn main() -> measured_bath::Result<()> {
    let (n, k0, delta_b) = (1000u64, 100u64, 1.0);
    let log = beta_working_point(n, k0, delta_b, BetaMethod::LogApprox)?;
    let psi = beta_working_point(n, k0, delta_b, BetaMethod::Digamma)?;
    let pair = effective_beta(n, k0, k0 + 1, delta_b)?;
    println!("n = {n}, k0 = {k0}");
    println!("  log approximation  {log:.6}");
    println!("  digamma            {psi:.6}");
    println!("  ln(N_k0+1 / N_k0)  {pair:.6}");

    // A small register: the local slope changes from band to band.
    let n = 7u64;
    for k in 0..=n {
        print!("N_{k} = {:>3}", binomial_degeneracy(n, k)?);
        if k < n {
            print!("   beta(k, k+1) = {:+.4}", effective_beta(n, k, k + 1, 1.0)?);
        }
        println!();
    }
    Ok(())
}
