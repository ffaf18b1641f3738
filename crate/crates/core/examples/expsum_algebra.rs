// Exponential-sum algebra: products, conjugates, derivatives and the
// JSON wire format.

use std::error::Error;

use num_complex::Complex64;
use series_mirage::ExpSum;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let c = Complex64::new;
    let u = ExpSum::new([(c(1., 0.), c(0., 1.)), (c(0.5, 0.), c(0., -1.))])?;
    let modulus = u.mul(&u.conj());
    println!("u       = {u}");
    println!("|u|²    = {modulus}");
    println!("u_xx    = {}", u.dx(2));
    println!("u(0.7)  = {:.6}", u.eval(0.7)?);
    println!("json    = {}", serde_json::to_string(&u)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
