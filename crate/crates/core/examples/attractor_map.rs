//! Attractor ρ00* over measurement interval and detuning, printed as a
//! coarse character map ('#' near the ground state, '.' near inversion).

use measured_bath::experiments::{attractor_map, AxisRange};

fn main() -> measured_bath::Result<()> {
    let dt = AxisRange { n: 72, ..AxisRange::default_dt(1.0) };
    let detuning = AxisRange { n: 24, ..AxisRange::default_detuning(1.0) };
    let grid = attractor_map(&dt, &detuning, 1.0, 0.75)?;
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#'];
    for (row, dd) in grid.rows().zip(&grid.detuning_axis).rev() {
        let line: String = row
            .iter()
            .map(|c| match c.rho00_star {
                Some(v) => {
                    let (lo, hi) = (0.3, 0.7);
                    let t = ((v - lo) / (hi - lo)).clamp(0.0, 0.999);
                    shades[(t * shades.len() as f64) as usize]
                }
                None => 'F',
            })
            .collect();
        println!("{dd:+5.2} |{line}|");
    }
    let values: Vec<f64> = grid.cells.iter().filter_map(|c| c.rho00_star).collect();
    let (min, max) = values.iter().fold((1.0f64, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    println!("dt from {:.3} to {:.3}; rho00* in [{min:.4}, {max:.4}]", grid.dt_axis[0], grid.dt_axis[grid.dt_axis.len() - 1]);
    Ok(())
}
