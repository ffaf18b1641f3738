//! Normalizability classification, truncation-error tables and modulus
//! checks.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::exact::ExactEvaluator;
use crate::expsum::{ExpSum, ALPHA_TOL};
use crate::format::float;
use crate::grid::GaussianPacket;
use crate::series::{partial_sum_eval, SeriesSolution};

/// Square integrability of initial data on the whole real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormClass {
    SquareIntegrable,
    /// Bounded, but `∫|u|² dx` diverges (plane-wave combinations).
    BoundedNotL2,
    /// Grows exponentially in at least one direction.
    Unbounded,
    Zero,
}

impl NormClass {
    pub fn name(&self) -> &'static str {
        match self {
            NormClass::SquareIntegrable => "SQUARE_INTEGRABLE",
            NormClass::BoundedNotL2 => "BOUNDED_NOT_L2",
            NormClass::Unbounded => "UNBOUNDED",
            NormClass::Zero => "ZERO",
        }
    }
}

/// Classifies an exponential sum symbolically from its exponents.
///
/// No nonzero finite exponential sum is square integrable on the line, so
/// [`NormClass::SquareIntegrable`] never comes out of this function; see
/// [`InitialData::Gaussian`] for data that is.
pub fn classify_normalizability(u0: &ExpSum) -> NormClass {
    if u0.is_zero() {
        NormClass::Zero
    } else if u0.terms().iter().any(|t| t.alpha.re.abs() > ALPHA_TOL) {
        NormClass::Unbounded
    } else {
        NormClass::BoundedNotL2
    }
}

/// Initial data accepted by the experiments.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    ExpSum(ExpSum),
    /// Grid-only data; square integrable by construction.
    Gaussian(GaussianPacket),
}

impl InitialData {
    pub fn classify(&self) -> NormClass {
        match self {
            InitialData::ExpSum(s) => classify_normalizability(s),
            InitialData::Gaussian(_) => NormClass::SquareIntegrable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub order: usize,
    pub time: f64,
    pub sup_error: f64,
    pub bound: Option<f64>,
}

/// Rows sorted by `(order, time)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErrorTable {
    rows: Vec<ErrorRow>,
}

impl ErrorTable {
    pub fn new(mut rows: Vec<ErrorRow>) -> Self {
        rows.sort_by(|a, b| a.order.cmp(&b.order).then(a.time.total_cmp(&b.time)));
        Self { rows }
    }

    pub fn rows(&self) -> &[ErrorRow] {
        &self.rows
    }

    pub fn row(&self, order: usize, time: f64) -> Option<&ErrorRow> {
        self.rows
            .iter()
            .find(|r| r.order == order && r.time == time)
    }

    /// `order,time,sup_error,bound`, with an empty bound cell when undefined.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "order,time,sup_error,bound")?;
        for r in &self.rows {
            let bound = r.bound.map(float).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{}",
                r.order,
                float(r.time),
                float(r.sup_error),
                bound
            )?;
        }
        Ok(())
    }
}

/// For each `(N, t)`: the largest `|S_N(x, t) − u(x, t)|` over `x_samples`,
/// with the factorial tail bound from the exact solution's modes.
pub fn truncation_error_table(
    sol: &SeriesSolution,
    exact: &ExactEvaluator,
    orders: &[usize],
    times: &[f64],
    x_samples: &[f64],
) -> Result<ErrorTable> {
    if x_samples.is_empty() {
        return Err(invalid("no x samples"));
    }
    let mut rows = Vec::with_capacity(orders.len() * times.len());
    for &order in orders {
        for &time in times {
            let mut worst: f64 = 0.0;
            for &x in x_samples {
                let approx = partial_sum_eval(sol, order, x, time).map_err(|e| match e {
                    Error::Overflow(msg) => {
                        Error::Overflow(format!("row (order {order}, t = {time:e}): {msg}"))
                    }
                    other => other,
                })?;
                let err = (approx - exact.eval(x, time)).norm();
                if !err.is_finite() {
                    return Err(Error::Overflow(format!(
                        "row (order {order}, t = {time:e}) at x = {x}"
                    )));
                }
                worst = worst.max(err);
            }
            rows.push(ErrorRow {
                order,
                time,
                sup_error: worst,
                bound: Some(exact.remainder_bound(order, time, x_samples)),
            });
        }
    }
    Ok(ErrorTable::new(rows))
}

/// `max | |u(x, t)| − 1 |` over the samples.
pub fn unit_modulus_deviation<F>(u: F, samples: &[(f64, f64)]) -> Result<f64>
where
    F: Fn(f64, f64) -> Complex64,
{
    if samples.is_empty() {
        return Err(invalid("no samples"));
    }
    Ok(samples
        .iter()
        .map(|&(x, t)| (u(x, t).norm() - 1.0).abs())
        .fold(0.0, f64::max))
}
