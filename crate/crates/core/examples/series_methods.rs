// HPM, ADM and the Taylor expansion side by side on `u0 = 1 + 2cosh(2x)`
// for the free Schrödinger equation `u_t + iu_xx = 0`.
//
// ```text
// cargo run --example series_methods
// ```

use std::error::Error;

use num_complex::Complex64;
use series_mirage::{adm_series, hpm_series, taylor_series, Equation, ExpSum};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let c = Complex64::new;
    let u0 = ExpSum::new([
        (c(1., 0.), c(0., 0.)),
        (c(1., 0.), c(2., 0.)),
        (c(1., 0.), c(-2., 0.)),
    ])?;

    let hpm = hpm_series(&u0, Equation::Linear, 6)?;
    let adm = adm_series(&u0, Equation::Linear, 6)?;
    let taylor = taylor_series(&u0, Equation::Linear, 6)?;

    for (n, term) in hpm.terms().iter().enumerate() {
        println!("u_{n} = ({})·t^{n}", term.coeff(n));
    }
    println!("HPM vs Taylor: {:.1e}", hpm.distance(&taylor));
    println!("ADM vs Taylor: {:.1e}", adm.distance(&taylor));

    let (x, t) = (0.5, 0.25);
    let approx = hpm.partial_sum(6)?.eval(x, t)?;
    let exact = c(1., 0.) + 2.0 * (2.0 * x).cosh() * c(0., -4.0 * t).exp();
    println!("S_6({x}, {t}) = {approx:.12}, exact {exact:.12}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
