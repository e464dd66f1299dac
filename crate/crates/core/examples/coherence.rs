//! Ensemble coherence: the iterated map against its closed form.

use measured_bath::analytics::{offdiag_closed_form, offdiag_coeffs, offdiag_map};
use measured_bath::model::ModelParams;
use num_complex::Complex64 as C64;

fn main() -> measured_bath::Result<()> {
    let p = ModelParams::new(1.0, 0.4, 0.05, 2.0, 0.6)?;
    let c = offdiag_coeffs(&p);
    println!("c1 {:+.3e}  c2 {:+.3e}  c3 {:+.3e}  c4 {:+.3e}  gamma {:.3e}", c.c1, c.c2, c.c3, c.c4, c.gamma);
    let start = C64::new(0.3, 0.1);
    let mut z = start;
    for j in 0..=1000 {
        if j % 200 == 0 {
            let (closed, abs) = offdiag_closed_form(start, j as f64, &c);
            println!("j = {j:>4}  map {z:.5}  closed {closed:.5}  |rho10| {abs:.5}");
        }
        z = offdiag_map(z, &p);
    }
    Ok(())
}
