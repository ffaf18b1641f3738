// Spectral free propagation of a Gaussian packet on a periodic grid,
// checked against the whole-line closed form.

use std::error::Error;

use series_mirage::{free_propagate_spectral, l2_norm, sample, sup_error, GaussianPacket, Grid};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grid = Grid::new(40.0, 512)?;
    let packet = GaussianPacket::new(20.0, 0.5)?;
    let start = sample(&grid, |x| packet.eval(x))?;
    for t in [0.25, 0.5, 1.0] {
        let evolved = free_propagate_spectral(&start, t);
        let exact = sample(&grid, |x| packet.free_evolved(x, t))?;
        let exact = series_mirage::GridState::new(grid, exact.values().to_vec(), t)?;
        println!(
            "t = {t}: sup error {:.1e}, l2 norm {:.15}",
            sup_error(&evolved, &exact)?,
            l2_norm(&evolved)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
