//! Experiment driver behind the `series-mirage` binary.
//!
//! A run is described by an [`ExperimentConfig`], resolved from an optional
//! JSON file, command-line overrides and per-experiment defaults. Each run
//! writes `manifest.json` plus the CSV artifacts that apply to it
//! (`terms.csv`, `errors.csv`, `state.csv`, `classes.csv`).

use std::f64::consts::PI;
use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{truncation_error_table, ErrorRow, ErrorTable, InitialData};
use crate::error::Error;
use crate::exact::{exact_linear, exact_reduced_nls, remainder_closed_form, ExactEvaluator};
use crate::expsum::{ExpSum, MAX_DEGREE};
use crate::format::float;
use crate::grid::{
    free_propagate_spectral, l2_norm, sample, split_step_nls, sup_error, GaussianPacket, Grid,
    GridState,
};
use crate::operator::{exact_evolve, series_evolve, OperatorSpec, StateVector};
use crate::series::{adm_series, hpm_series, taylor_series, Equation, Method, SeriesSolution};

/// Environment variable that replaces the default output directory.
pub const OUT_ENV: &str = "SERIES_MIRAGE_OUT";
const DEFAULT_OUT: &str = "series-mirage-out";

/// Coefficientwise tolerance for the HPM / ADM / Taylor agreement check.
pub const CROSS_CHECK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Example1,
    Example2,
    Example3,
    Example4,
    Operator,
    GaussianFree,
    NlsReference,
    Classify,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Example1,
        Experiment::Example2,
        Experiment::Example3,
        Experiment::Example4,
        Experiment::Operator,
        Experiment::GaussianFree,
        Experiment::NlsReference,
        Experiment::Classify,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Example1 => "example1",
            Experiment::Example2 => "example2",
            Experiment::Example3 => "example3",
            Experiment::Example4 => "example4",
            Experiment::Operator => "operator",
            Experiment::GaussianFree => "gaussian-free",
            Experiment::NlsReference => "nls-reference",
            Experiment::Classify => "classify",
        }
    }

    fn is_series_example(&self) -> bool {
        matches!(
            self,
            Experiment::Example1
                | Experiment::Example2
                | Experiment::Example3
                | Experiment::Example4
        )
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Experiment::ALL.iter().map(Experiment::name).collect();
                format!(
                    "unknown experiment `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Hpm,
    Adm,
    Taylor,
    All,
}

impl MethodChoice {
    fn methods(&self) -> Vec<Method> {
        match self {
            MethodChoice::Hpm => vec![Method::Hpm],
            MethodChoice::Adm => vec![Method::Adm],
            MethodChoice::Taylor => vec![Method::Taylor],
            MethodChoice::All => vec![Method::Hpm, Method::Adm, Method::Taylor],
        }
    }
}

impl FromStr for MethodChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hpm" => Ok(MethodChoice::Hpm),
            "adm" => Ok(MethodChoice::Adm),
            "taylor" => Ok(MethodChoice::Taylor),
            "all" => Ok(MethodChoice::All),
            _ => Err(format!(
                "unknown method `{s}` (expected hpm, adm, taylor or all)"
            )),
        }
    }
}

/// Raw settings as they appear in a config file or on the command line.
/// Every field is optional; unset fields fall back to the experiment's
/// defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub experiment: Option<Experiment>,
    pub method: Option<MethodChoice>,
    pub order: Option<usize>,
    pub gamma: Option<f64>,
    /// Plane-wave wavenumber for `nls-reference`.
    pub alpha: Option<f64>,
    pub grid_n: Option<usize>,
    pub grid_l: Option<f64>,
    pub t0: Option<f64>,
    pub t1: Option<f64>,
    pub t_steps: Option<usize>,
    pub x0: Option<f64>,
    pub x1: Option<f64>,
    pub x_steps: Option<usize>,
    /// Operator dimension.
    pub n: Option<usize>,
    /// Operator grid spacing.
    pub h: Option<f64>,
    /// Split-step time step.
    pub dt: Option<f64>,
    /// Gaussian width.
    pub sigma: Option<f64>,
    pub out: Option<PathBuf>,
}

impl Settings {
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::Config(format!("config file: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, RunError> {
        let text = fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `self` win over those in `base`.
    pub fn overlay(self, base: Settings) -> Settings {
        Settings {
            experiment: self.experiment.or(base.experiment),
            method: self.method.or(base.method),
            order: self.order.or(base.order),
            gamma: self.gamma.or(base.gamma),
            alpha: self.alpha.or(base.alpha),
            grid_n: self.grid_n.or(base.grid_n),
            grid_l: self.grid_l.or(base.grid_l),
            t0: self.t0.or(base.t0),
            t1: self.t1.or(base.t1),
            t_steps: self.t_steps.or(base.t_steps),
            x0: self.x0.or(base.x0),
            x1: self.x1.or(base.x1),
            x_steps: self.x_steps.or(base.x_steps),
            n: self.n.or(base.n),
            h: self.h.or(base.h),
            dt: self.dt.or(base.dt),
            sigma: self.sigma.or(base.sigma),
            out: self.out.or(base.out),
        }
    }

    fn present(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        macro_rules! check {
            ($($field:ident),*) => { $( if self.$field.is_some() { v.push(stringify!($field)); } )* };
        }
        check!(
            method, order, gamma, alpha, grid_n, grid_l, t0, t1, t_steps, x0, x1, x_steps, n, h,
            dt, sigma
        );
        v
    }
}

/// A fully resolved, validated experiment description. Fields that do not
/// apply to the experiment are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    pub out: PathBuf,
    /// Names of the fields that took their default value.
    pub defaults_applied: Vec<String>,
}

/// Per-experiment defaults; a field is applicable iff it has a default.
fn defaults(experiment: Experiment) -> Settings {
    let times = |t0: f64, t1: f64, steps: usize| (Some(t0), Some(t1), Some(steps));
    let mut d = Settings::default();
    let (t0, t1, t_steps) = match experiment {
        Experiment::Example1 | Experiment::Example2 => times(0.0, 1.0, 21),
        Experiment::Example3 | Experiment::Example4 => times(0.0, 2.0, 21),
        Experiment::Operator => times(1.0, 1.0, 1),
        Experiment::GaussianFree | Experiment::NlsReference => times(0.0, 1.0, 11),
        Experiment::Classify => (None, None, None),
    };
    d.t0 = t0;
    d.t1 = t1;
    d.t_steps = t_steps;
    if experiment.is_series_example() {
        d.method = Some(MethodChoice::All);
        d.x0 = Some(-1.0);
        d.x1 = Some(1.0);
        d.x_steps = Some(21);
    }
    match experiment {
        Experiment::Example1 => d.order = Some(20),
        Experiment::Example2 => d.order = Some(25),
        Experiment::Example3 => {
            d.order = Some(20);
            d.gamma = Some(2.0);
        }
        Experiment::Example4 => {
            d.order = Some(20);
            d.gamma = Some(-2.0);
        }
        Experiment::Operator => {
            d.order = Some(40);
            d.n = Some(16);
            d.h = Some(1.0);
        }
        Experiment::GaussianFree => {
            d.grid_n = Some(512);
            d.grid_l = Some(40.0);
            d.sigma = Some(0.5);
        }
        Experiment::NlsReference => {
            d.grid_n = Some(64);
            d.grid_l = Some(2.0 * PI);
            d.gamma = Some(2.0);
            d.alpha = Some(1.0);
            d.dt = Some(1e-3);
        }
        Experiment::Classify => {}
    }
    d
}

impl ExperimentConfig {
    /// Resolves settings (flags already overlaid on the file) against the
    /// experiment defaults and validates the result. `env_out` is the value
    /// of [`OUT_ENV`], if set.
    pub fn resolve(settings: Settings, env_out: Option<PathBuf>) -> Result<Self, RunError> {
        let experiment = settings
            .experiment
            .ok_or_else(|| RunError::Config("no experiment given".into()))?;
        let d = defaults(experiment);
        let applicable = d.present();
        if let Some(field) = settings
            .present()
            .into_iter()
            .find(|f| !applicable.contains(f))
        {
            return Err(RunError::Config(format!(
                "field `{field}` does not apply to experiment {experiment}"
            )));
        }
        let mut defaults_applied: Vec<String> = applicable
            .iter()
            .filter(|f| !settings.present().contains(f))
            .map(|f| f.to_string())
            .collect();
        let out = match (settings.out, env_out) {
            (Some(p), _) => p,
            (None, Some(p)) => p,
            (None, None) => {
                defaults_applied.push("out".into());
                PathBuf::from(DEFAULT_OUT).join(experiment.name())
            }
        };
        let s = Settings {
            experiment: Some(experiment),
            out: None,
            ..settings
        }
        .overlay(d);
        let config = ExperimentConfig {
            experiment,
            method: s.method,
            order: s.order,
            gamma: s.gamma,
            alpha: s.alpha,
            grid_n: s.grid_n,
            grid_l: s.grid_l,
            t0: s.t0,
            t1: s.t1,
            t_steps: s.t_steps,
            x0: s.x0,
            x1: s.x1,
            x_steps: s.x_steps,
            n: s.n,
            h: s.h,
            dt: s.dt,
            sigma: s.sigma,
            out,
            defaults_applied,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), RunError> {
        let bad = |msg: String| Err(RunError::Config(msg));
        if let Some(order) = self.order {
            if order > MAX_DEGREE {
                return bad(format!("order {order} exceeds the cap {MAX_DEGREE}"));
            }
        }
        for (name, value) in [
            ("gamma", self.gamma),
            ("alpha", self.alpha),
            ("t0", self.t0),
            ("t1", self.t1),
            ("x0", self.x0),
            ("x1", self.x1),
        ] {
            if value.is_some_and(|v| !v.is_finite()) {
                return bad(format!("{name} must be finite"));
            }
        }
        for (name, value) in [
            ("grid_l", self.grid_l),
            ("h", self.h),
            ("dt", self.dt),
            ("sigma", self.sigma),
        ] {
            if value.is_some_and(|v| !(v.is_finite() && v > 0.0)) {
                return bad(format!("{name} must be positive"));
            }
        }
        for (name, value) in [("t_steps", self.t_steps), ("x_steps", self.x_steps)] {
            if value == Some(0) {
                return bad(format!("{name} must be at least 1"));
            }
        }
        if let (Some(t0), Some(t1)) = (self.t0, self.t1) {
            if t1 < t0 {
                return bad(format!("t1 = {t1} is before t0 = {t0}"));
            }
        }
        if let Some(n) = self.grid_n {
            if n < 8 || !n.is_power_of_two() {
                return bad(format!("grid_n = {n} must be a power of two ≥ 8"));
            }
        }
        if self.n.is_some_and(|n| n < 2) {
            return bad("operator dimension n must be at least 2".into());
        }
        if self.experiment == Experiment::NlsReference {
            let (alpha, length) = (self.alpha.unwrap_or(1.0), self.grid_l.unwrap_or(1.0));
            let winding = alpha * length / (2.0 * PI);
            if (winding - winding.round()).abs() > 1e-9 {
                return bad(format!(
                    "plane wave alpha = {alpha} is not periodic on L = {length} (alpha·L/2π = {winding})"
                ));
            }
            let dt = self.dt.unwrap_or(1.0);
            for t in self.times() {
                let steps = t / dt;
                if (steps - steps.round()).abs() > 1e-6 || t < 0.0 {
                    return bad(format!(
                        "time {t} is not a nonnegative multiple of dt = {dt}"
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        match (self.t0, self.t1, self.t_steps) {
            (Some(a), Some(b), Some(k)) => linspace(a, b, k),
            _ => Vec::new(),
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        match (self.x0, self.x1, self.x_steps) {
            (Some(a), Some(b), Some(k)) => linspace(a, b, k),
            _ => Vec::new(),
        }
    }
}

/// `k` evenly spaced points from `a` to `b` inclusive (`[a]` when `k == 1`).
pub fn linspace(a: f64, b: f64, k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..k)
            .map(|i| {
                if i == k - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (k - 1) as f64
                }
            })
            .collect(),
    }
}

/// Failure modes of a run, each with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io(_) => 1,
            RunError::CrossCheck(_) => 2,
            RunError::Numerical(_) => 3,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::UnsupportedEquation { .. } | Error::GridMismatch(_) => {
                RunError::Config(e.to_string())
            }
            Error::Overflow(_) | Error::Divergence { .. } => RunError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub methods: Vec<String>,
    pub max_distance: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Contents of `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheck>,
    /// Headline numbers, in a fixed order.
    pub summary: Vec<(String, f64)>,
}

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub manifest: Manifest,
    pub out_dir: PathBuf,
}

impl RunReport {
    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.manifest
            .summary
            .iter()
            .find(|(k, _)| k == key)
            .map(|&(_, v)| v)
    }
}

struct Outputs {
    dir: PathBuf,
    written: Vec<String>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self, RunError> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>,
    ) -> Result<(), RunError> {
        let mut w = BufWriter::new(File::create(self.dir.join(name))?);
        body(&mut w)?;
        w.flush()?;
        self.written.push(name.to_string());
        Ok(())
    }
}

/// Runs one experiment and writes its artifacts into `config.out`.
///
/// A failed cross-check still writes every artifact (and the manifest)
/// before returning [`RunError::CrossCheck`].
pub fn run(config: &ExperimentConfig) -> Result<RunReport, RunError> {
    let mut outputs = Outputs::new(&config.out)?;
    let mut summary = Vec::new();
    let cross_check = match config.experiment {
        Experiment::Example1
        | Experiment::Example2
        | Experiment::Example3
        | Experiment::Example4 => run_series_example(config, &mut outputs, &mut summary)?,
        Experiment::Operator => {
            run_operator(config, &mut outputs, &mut summary)?;
            None
        }
        Experiment::GaussianFree => {
            run_gaussian(config, &mut outputs, &mut summary)?;
            None
        }
        Experiment::NlsReference => {
            run_nls(config, &mut outputs, &mut summary)?;
            None
        }
        Experiment::Classify => {
            run_classify(&mut outputs)?;
            None
        }
    };
    outputs.written.push("manifest.json".into());
    let manifest = Manifest {
        tool: "series-mirage",
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        outputs: outputs.written.clone(),
        cross_check,
        summary,
    };
    let json =
        serde_json::to_string_pretty(&manifest).map_err(|e| RunError::Io(io::Error::other(e)))?;
    fs::write(config.out.join("manifest.json"), json + "\n")?;

    if let Some(check) = manifest.cross_check.as_ref().filter(|c| !c.passed) {
        return Err(RunError::CrossCheck(format!(
            "{} disagree by {} (tolerance {})",
            check.methods.join("/"),
            check.max_distance,
            check.tolerance
        )));
    }
    Ok(RunReport {
        manifest,
        out_dir: config.out.clone(),
    })
}

/// Initial data, per-method equation and exact solution of a series example.
pub type ExampleSetup = (ExpSum, Box<dyn Fn(Method) -> Equation>, ExactEvaluator);

/// Initial data, the equation each method is applied to, and the exact
/// solution for one of the four series examples.
pub fn example_setup(experiment: Experiment, gamma: Option<f64>) -> Option<ExampleSetup> {
    let c = Complex64::new;
    match experiment {
        Experiment::Example1 | Experiment::Example2 => {
            let u0 = if experiment == Experiment::Example1 {
                ExpSum::new([
                    (c(1., 0.), c(0., 0.)),
                    (c(1., 0.), c(2., 0.)),
                    (c(1., 0.), c(-2., 0.)),
                ])
                .expect("finite")
            } else {
                ExpSum::exp(c(0., 3.))
            };
            let exact = exact_linear(&u0);
            Some((u0, Box::new(|_| Equation::Linear), exact))
        }
        Experiment::Example3 | Experiment::Example4 => {
            let gamma = gamma?;
            let u0 = ExpSum::exp(c(0., 1.));
            // ADM takes the full cubic nonlinearity; HPM and Taylor work on
            // the unit-modulus reduction.
            let eq = move |m: Method| match m {
                Method::Adm => Equation::FullNls { gamma },
                Method::Hpm | Method::Taylor => Equation::ReducedNls { gamma },
            };
            Some((u0, Box::new(eq), exact_reduced_nls(1.0, gamma)))
        }
        _ => None,
    }
}

fn run_series_example(
    config: &ExperimentConfig,
    outputs: &mut Outputs,
    summary: &mut Vec<(String, f64)>,
) -> Result<Option<CrossCheck>, RunError> {
    let (u0, equation_for, exact) =
        example_setup(config.experiment, config.gamma).expect("series example");
    let order = config.order.expect("default order");
    let methods = config.method.expect("default method").methods();

    let mut series: Vec<SeriesSolution> = Vec::new();
    for &m in &methods {
        let eq = equation_for(m);
        let sol = match m {
            Method::Hpm => hpm_series(&u0, eq, order)?,
            Method::Adm => adm_series(&u0, eq, order)?,
            Method::Taylor => taylor_series(&u0, eq, order)?,
        };
        series.push(sol);
    }

    outputs.write("terms.csv", |w| write_terms(w, &series))?;

    let primary = series
        .iter()
        .find(|s| s.method() == Method::Adm)
        .unwrap_or(&series[0]);
    let orders: Vec<usize> = (0..=order).collect();
    let table = truncation_error_table(primary, &exact, &orders, &config.times(), &config.xs())?;
    outputs.write("errors.csv", |w| table.write_csv(w))?;

    let last_t = *config.times().last().expect("nonempty time grid");
    if let Some(row) = table.row(order, last_t) {
        summary.push(("final_sup_error".into(), row.sup_error));
        summary.push(("final_bound".into(), row.bound.unwrap_or(f64::NAN)));
    }

    if series.len() < 2 {
        return Ok(None);
    }
    let reference = series.last().expect("nonempty");
    let max_distance = series
        .iter()
        .map(|s| s.distance(reference))
        .fold(0.0, f64::max);
    summary.push(("max_method_distance".into(), max_distance));
    Ok(Some(CrossCheck {
        methods: series
            .iter()
            .map(|s| s.method().name().to_string())
            .collect(),
        max_distance,
        tolerance: CROSS_CHECK_TOL,
        passed: max_distance <= CROSS_CHECK_TOL,
    }))
}

fn write_terms(w: &mut impl Write, series: &[SeriesSolution]) -> io::Result<()> {
    writeln!(w, "method,equation,n,t_power,re_c,im_c,re_a,im_a")?;
    for sol in series {
        for (n, term) in sol.terms().iter().enumerate() {
            for (power, coeff) in term.coeffs().iter().enumerate() {
                for t in coeff.terms() {
                    writeln!(
                        w,
                        "{},{},{n},{power},{},{},{},{}",
                        sol.method(),
                        sol.equation().name(),
                        float(t.coeff.re),
                        float(t.coeff.im),
                        float(t.alpha.re),
                        float(t.alpha.im)
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn run_operator(
    config: &ExperimentConfig,
    outputs: &mut Outputs,
    summary: &mut Vec<(String, f64)>,
) -> Result<(), RunError> {
    let n = config.n.expect("default n");
    let op = OperatorSpec::laplacian_dirichlet(n, config.h.expect("default h"))?;
    let order = config.order.expect("default order");
    let u0 = StateVector::unit(n, n / 2);
    let rho = op.spectral_radius();

    let mut rows = Vec::new();
    let mut last_exact = u0.clone();
    let mut relative_error = 0.0;
    for &t in &config.times() {
        let exact = exact_evolve(&op, &u0, t)?;
        for k in 0..=order {
            let approx = series_evolve(&op, &u0, t, k)?;
            let diff = &approx - &exact;
            rows.push(ErrorRow {
                order: k,
                time: t,
                sup_error: diff.sup_norm(),
                bound: Some(remainder_closed_form(rho, u0.norm(), k, t)),
            });
            if k == order {
                relative_error = diff.norm() / u0.norm();
            }
        }
        last_exact = exact;
    }
    let table = ErrorTable::new(rows);
    outputs.write("errors.csv", |w| table.write_csv(w))?;
    outputs.write("state.csv", |w| last_exact.write_csv(w))?;
    summary.push(("spectral_radius".into(), rho));
    summary.push(("final_relative_error".into(), relative_error));
    Ok(())
}

fn write_grid_table(w: &mut impl Write, rows: &[(f64, f64, f64)]) -> io::Result<()> {
    writeln!(w, "time,sup_error,l2_norm")?;
    for &(t, err, norm) in rows {
        writeln!(w, "{},{},{}", float(t), float(err), float(norm))?;
    }
    Ok(())
}

fn run_gaussian(
    config: &ExperimentConfig,
    outputs: &mut Outputs,
    summary: &mut Vec<(String, f64)>,
) -> Result<(), RunError> {
    let grid = Grid::new(
        config.grid_l.expect("default L"),
        config.grid_n.expect("default n"),
    )?;
    let packet = GaussianPacket::new(grid.length() / 2.0, config.sigma.expect("default sigma"))?;
    let s0 = sample(&grid, |x| packet.eval(x))?;
    let mut rows = Vec::new();
    let mut last = s0.clone();
    for &t in &config.times() {
        let s = free_propagate_spectral(&s0, t);
        let exact = sample(&grid, |x| packet.free_evolved(x, t))?;
        rows.push((t, sup_error(&s, &exact)?, l2_norm(&s)));
        last = s;
    }
    outputs.write("errors.csv", |w| write_grid_table(w, &rows))?;
    outputs.write("state.csv", |w| last.write_csv(w))?;
    summary.push(("initial_l2_norm".into(), l2_norm(&s0)));
    summary.push((
        "max_sup_error".into(),
        rows.iter().map(|r| r.1).fold(0.0, f64::max),
    ));
    Ok(())
}

fn run_nls(
    config: &ExperimentConfig,
    outputs: &mut Outputs,
    summary: &mut Vec<(String, f64)>,
) -> Result<(), RunError> {
    let grid = Grid::new(
        config.grid_l.expect("default L"),
        config.grid_n.expect("default n"),
    )?;
    let (alpha, gamma, dt) = (
        config.alpha.expect("default alpha"),
        config.gamma.expect("default gamma"),
        config.dt.expect("default dt"),
    );
    let exact = exact_reduced_nls(alpha, gamma);
    let mut state: GridState = sample(&grid, |x| exact.eval(x, 0.0))?;
    let mut done = 0usize;
    let mut rows = Vec::new();
    for &t in &config.times() {
        let target = (t / dt).round() as usize;
        if target > done {
            let stepped = split_step_nls(&state, gamma, dt, target - done)?;
            // label with the grid time rather than the accumulated sum of steps
            state = GridState::new(grid, stepped.values().to_vec(), t)?;
            done = target;
        }
        let expected = sample(&grid, |x| exact.eval(x, t))?;
        rows.push((t, sup_error(&state, &expected)?, l2_norm(&state)));
    }
    outputs.write("errors.csv", |w| write_grid_table(w, &rows))?;
    outputs.write("state.csv", |w| state.write_csv(w))?;
    summary.push((
        "max_sup_error".into(),
        rows.iter().map(|r| r.1).fold(0.0, f64::max),
    ));
    summary.push(("final_l2_norm".into(), l2_norm(&state)));
    Ok(())
}

/// The initial data of every experiment with its normalizability class.
pub fn classification_table() -> Vec<(&'static str, &'static str, InitialData)> {
    let c = Complex64::new;
    let ex1 = ExpSum::new([
        (c(1., 0.), c(0., 0.)),
        (c(1., 0.), c(2., 0.)),
        (c(1., 0.), c(-2., 0.)),
    ])
    .expect("finite");
    vec![
        ("example1", "1+2cosh(2x)", InitialData::ExpSum(ex1)),
        (
            "example2",
            "exp(3ix)",
            InitialData::ExpSum(ExpSum::exp(c(0., 3.))),
        ),
        (
            "example3",
            "exp(ix)",
            InitialData::ExpSum(ExpSum::exp(c(0., 1.))),
        ),
        (
            "example4",
            "exp(ix)",
            InitialData::ExpSum(ExpSum::exp(c(0., 1.))),
        ),
        (
            "gaussian-free",
            "gaussian(center=20,sigma=0.5)",
            InitialData::Gaussian(GaussianPacket::new(20.0, 0.5).expect("valid")),
        ),
        ("zero", "0", InitialData::ExpSum(ExpSum::zero())),
    ]
}

fn run_classify(outputs: &mut Outputs) -> Result<(), RunError> {
    let table = classification_table();
    outputs.write("classes.csv", |w| {
        writeln!(w, "name,initial_data,class")?;
        for (name, label, data) in &table {
            writeln!(w, "{name},{label},{}", data.classify().name())?;
        }
        Ok(())
    })
}

/// Resolves a config from an optional file, flag overrides and the
/// environment, then runs it. Errors carry their exit code.
pub fn parse_and_run(file: Option<&Path>, flags: Settings) -> Result<RunReport, RunError> {
    let config = parse_config(file, flags)?;
    run(&config)
}

/// Flags override file values; [`OUT_ENV`] replaces the default output
/// directory.
pub fn parse_config(file: Option<&Path>, flags: Settings) -> Result<ExperimentConfig, RunError> {
    let base = match file {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    let env_out = std::env::var_os(OUT_ENV).map(PathBuf::from);
    ExperimentConfig::resolve(flags.overlay(base), env_out)
}
