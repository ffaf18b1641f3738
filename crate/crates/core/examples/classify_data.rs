// Normalizability of the initial data used across the experiments.

use std::error::Error;

use series_mirage::experiment::classification_table;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for (name, label, data) in classification_table() {
        println!("{name:<14} {label:<30} {}", data.classify().name());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
