// Truncated series `Σ (−it)ⁿAⁿu₀/n!` against the eigenfunction expansion
// for the Dirichlet second-difference operator.

use std::error::Error;

use series_mirage::{
    exact_evolve, remainder_closed_form, series_evolve, OperatorSpec, StateVector,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let op = OperatorSpec::laplacian_dirichlet(16, 1.0)?;
    let u0 = StateVector::unit(16, 8);
    let t = 1.0;
    let exact = exact_evolve(&op, &u0, t)?;
    println!("spectral radius {:.6}", op.spectral_radius());
    for order in [5, 10, 15, 20, 25, 30] {
        let err = (&series_evolve(&op, &u0, t, order)? - &exact).norm();
        let bound = remainder_closed_form(op.spectral_radius(), u0.norm(), order, t);
        println!("N = {order:>2}: error {err:.2e}, bound {bound:.2e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
