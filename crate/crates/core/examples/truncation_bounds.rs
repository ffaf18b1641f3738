// Truncation error of the `e^{3ix}` series against the exact solution,
// with the factorial tail bound alongside.

use std::error::Error;
use std::io;

use num_complex::Complex64;
use series_mirage::{exact_linear, hpm_series, truncation_error_table, Equation, ExpSum};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let u0 = ExpSum::exp(Complex64::new(0.0, 3.0));
    let sol = hpm_series(&u0, Equation::Linear, 40)?;
    let exact = exact_linear(&u0);
    let xs: Vec<f64> = (0..=20).map(|i| -1.0 + 0.1 * i as f64).collect();
    let table = truncation_error_table(&sol, &exact, &[10, 20, 30, 40], &[0.25, 0.5, 1.0], &xs)?;
    table.write_csv(io::stdout().lock())?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
