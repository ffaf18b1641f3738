//! Command-line driver: one experiment per invocation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use series_mirage::experiment::{parse_and_run, Experiment, MethodChoice, Settings};

/// Reproduce the HPM / ADM / Taylor series experiments and their reference
/// solutions, writing a manifest and CSV tables.
#[derive(Debug, Parser)]
#[command(name = "series-mirage", version)]
struct Cli {
    /// example1 | example2 | example3 | example4 | operator | gaussian-free |
    /// nls-reference | classify (may instead come from --config)
    experiment: Option<Experiment>,
    #[arg(long)]
    method: Option<MethodChoice>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Plane-wave wavenumber (nls-reference)
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,
    #[arg(long = "grid-L")]
    grid_l: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t1: Option<f64>,
    #[arg(long = "t-steps")]
    t_steps: Option<usize>,
    /// Single time: shorthand for --t0 T --t1 T --t-steps 1
    #[arg(long, conflicts_with_all = ["t0", "t1", "t_steps"])]
    t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x1: Option<f64>,
    #[arg(long = "x-steps")]
    x_steps: Option<usize>,
    /// Operator dimension
    #[arg(long)]
    n: Option<usize>,
    /// Operator grid spacing
    #[arg(long)]
    h: Option<f64>,
    /// Split-step time step
    #[arg(long)]
    dt: Option<f64>,
    /// Gaussian width
    #[arg(long)]
    sigma: Option<f64>,
    /// Output directory (default: $SERIES_MIRAGE_OUT or ./series-mirage-out/<experiment>)
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Cli {
    fn into_settings(self) -> (Option<PathBuf>, Settings) {
        let (t0, t1, t_steps) = match self.t {
            Some(t) => (Some(t), Some(t), Some(1)),
            None => (self.t0, self.t1, self.t_steps),
        };
        let settings = Settings {
            experiment: self.experiment,
            method: self.method,
            order: self.order,
            gamma: self.gamma,
            alpha: self.alpha,
            grid_n: self.grid_n,
            grid_l: self.grid_l,
            t0,
            t1,
            t_steps,
            x0: self.x0,
            x1: self.x1,
            x_steps: self.x_steps,
            n: self.n,
            h: self.h,
            dt: self.dt,
            sigma: self.sigma,
            out: self.out,
        };
        (self.config, settings)
    }
}

fn main() -> ExitCode {
    // `series-mirage run example1 ...` is accepted as well
    let args = std::env::args_os()
        .enumerate()
        .filter(|(i, a)| !(*i == 1 && a == "run"))
        .map(|(_, a)| a);
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let (config, settings) = cli.into_settings();
    match parse_and_run(config.as_deref(), settings) {
        Ok(report) => {
            println!("wrote {}", report.out_dir.display());
            for (key, value) in &report.manifest.summary {
                println!("  {key} = {value:e}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("series-mirage: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
