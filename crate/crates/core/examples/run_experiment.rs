// Library-level equivalent of `series-mirage example3 --out <dir>`.

use std::error::Error;

use series_mirage::experiment::{parse_config, run, Experiment, Settings};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join("series-mirage-example3");
    let flags = Settings {
        experiment: Some(Experiment::Example3),
        order: Some(12),
        out: Some(dir.clone()),
        ..Settings::default()
    };
    let report = run(&parse_config(None, flags)?)?;
    for (key, value) in &report.manifest.summary {
        println!("{key} = {value:e}");
    }
    println!("wrote {:?} to {}", report.manifest.outputs, dir.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
