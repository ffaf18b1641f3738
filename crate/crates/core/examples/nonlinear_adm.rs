// Adomian decomposition of the cubic equation `iu_t + u_xx + γ|u|²u = 0`
// on plane-wave data, compared with the unit-modulus linear reduction.

use std::error::Error;

use num_complex::Complex64;
use series_mirage::{adm_series, adomian_cubic, exact_reduced_nls, Equation, ExpSum};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let u0 = ExpSum::exp(Complex64::new(0.0, 1.0));
    for gamma in [2.0, -2.0] {
        let full = adm_series(&u0, Equation::FullNls { gamma }, 20)?;
        let reduced = adm_series(&u0, Equation::ReducedNls { gamma }, 20)?;
        println!("γ = {gamma}");
        println!("  A_2 = {}", adomian_cubic(&full.terms()[..3])?.coeff(2));
        println!("  u_3 = {}·t^3", full.terms()[3].coeff(3));
        println!("  full vs reduced: {:.1e}", full.distance(&reduced));

        let exact = exact_reduced_nls(1.0, gamma);
        let approx = full.partial_sum(20)?.eval(0.3, 0.5)?;
        println!(
            "  S_20(0.3, 0.5) - exact = {:.1e}",
            (approx - exact.eval(0.3, 0.5)).norm()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
