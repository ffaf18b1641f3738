// Strang split-step solver for the cubic equation: plane waves against
// their closed form, and dt-convergence on a Gaussian.

use std::error::Error;
use std::f64::consts::PI;

use num_complex::Complex64;
use series_mirage::{l2_norm, sample, split_step_nls, sup_error, GaussianPacket, Grid, GridState};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let ring = Grid::new(2.0 * PI, 64)?;
    let wave = sample(&ring, |x| Complex64::new(0.0, x).exp())?;
    for (gamma, rate) in [(2.0, 1.0), (-2.0, -3.0)] {
        let end = split_step_nls(&wave, gamma, 1e-3, 1000)?;
        let exact = sample(&ring, |x| Complex64::new(0.0, x + rate).exp())?;
        let exact = GridState::new(ring, exact.values().to_vec(), end.time())?;
        println!(
            "γ = {gamma}: plane wave error at t = 1 {:.1e}",
            sup_error(&end, &exact)?
        );
    }

    let grid = Grid::new(40.0, 512)?;
    let packet = GaussianPacket::new(20.0, 0.5)?;
    let start = sample(&grid, |x| packet.eval(x))?;
    let reference = split_step_nls(&start, 1.0, 1.0 / 3200.0, 3200)?;
    for steps in [25, 50, 100, 200] {
        let run = split_step_nls(&start, 1.0, 1.0 / steps as f64, steps)?;
        println!(
            "{steps:>4} steps: error {:.2e}, l2 norm {:.15}",
            sup_error(&run, &reference)?,
            l2_norm(&run)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
