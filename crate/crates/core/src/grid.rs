//! Periodic-grid spectral reference solvers.
//!
//! The domain is `[0, L)` with `n` equispaced points, `n` a power of two.
//! Mode `m` carries the signed wavenumber `k = 2πm/L` with `m` folded into
//! `[-n/2, n/2)`.

use std::f64::consts::PI;
use std::io::{self, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error, Result};
use crate::format::float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    length: f64,
    n: usize,
}

impl Grid {
    pub fn new(length: f64, n: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(invalid(format!(
                "grid length {length} must be positive and finite"
            )));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(invalid(format!("grid size {n} must be a power of two ≥ 8")));
        }
        Ok(Self { length, n })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        j as f64 * self.length / self.n as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.point(j))
    }

    /// Signed wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n as i64;
        (0..n)
            .map(|m| {
                let signed = if m < n / 2 { m } else { m - n };
                2.0 * PI * signed as f64 / self.length
            })
            .collect()
    }
}

/// Samples of `u` on a [`Grid`] at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    grid: Grid,
    values: Vec<Complex64>,
    time: f64,
}

impl GridState {
    pub fn new(grid: Grid, values: Vec<Complex64>, time: f64) -> Result<Self> {
        if values.len() != grid.n {
            return Err(invalid(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.n
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("value at grid point {j} is not finite")));
        }
        Ok(Self { grid, values, time })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// CSV with a comment line naming the grid and time, then
    /// `x,re_u,im_u,abs_u`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(
            w,
            "# grid_length={},grid_n={},time={}",
            float(self.grid.length),
            self.grid.n,
            float(self.time)
        )?;
        writeln!(w, "x,re_u,im_u,abs_u")?;
        for (x, u) in self.grid.points().zip(&self.values) {
            writeln!(
                w,
                "{},{},{},{}",
                float(x),
                float(u.re),
                float(u.im),
                float(u.norm())
            )?;
        }
        Ok(())
    }
}

/// Normalized Gaussian packet `(2πσ²)^{-1/4} exp(−(x−x₀)²/(4σ²))`, so that
/// `|u|²` is a unit-mass normal density with variance `σ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub center: f64,
    pub sigma: f64,
}

impl GaussianPacket {
    pub fn new(center: f64, sigma: f64) -> Result<Self> {
        if !(center.is_finite() && sigma.is_finite() && sigma > 0.0) {
            return Err(invalid(format!(
                "bad Gaussian parameters ({center}, {sigma})"
            )));
        }
        Ok(Self { center, sigma })
    }

    fn norm_factor(&self) -> f64 {
        (2.0 * PI * self.sigma * self.sigma).powf(-0.25)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let d = x - self.center;
        Complex64::new(
            self.norm_factor() * (-d * d / (4.0 * self.sigma * self.sigma)).exp(),
            0.0,
        )
    }

    /// Exact evolution on the whole line under `u_t + iu_xx = 0`:
    /// `σ²` becomes `σ² − it` inside the Gaussian.
    pub fn free_evolved(&self, x: f64, t: f64) -> Complex64 {
        let s2 = Complex64::new(self.sigma * self.sigma, -t);
        let d = x - self.center;
        let spread = (Complex64::new(self.sigma * self.sigma, 0.0) / s2).sqrt();
        self.norm_factor() * spread * (-(d * d) / (4.0 * s2)).exp()
    }
}

struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k2: Vec<f64>,
    scale: f64,
}

impl Spectral {
    fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(grid.n),
            inverse: planner.plan_fft_inverse(grid.n),
            k2: grid.wavenumbers().iter().map(|k| k * k).collect(),
            scale: 1.0 / grid.n as f64,
        }
    }

    /// Forward transform, multiply mode m by `multiplier[m]`, inverse.
    fn apply(&self, values: &mut [Complex64], multiplier: &[Complex64]) {
        self.forward.process(values);
        for (v, m) in values.iter_mut().zip(multiplier) {
            *v *= m * self.scale;
        }
        self.inverse.process(values);
    }

    /// `e^{+ik²t}` per mode: the exact flow of `u_t + iu_xx = 0`.
    fn free_phases(&self, t: f64) -> Vec<Complex64> {
        self.k2
            .iter()
            .map(|&k2| Complex64::from_polar(1.0, k2 * t))
            .collect()
    }
}

/// Pointwise samples at time 0.
pub fn sample(grid: &Grid, f: impl Fn(f64) -> Complex64) -> Result<GridState> {
    let mut values = Vec::with_capacity(grid.n);
    for (j, x) in grid.points().enumerate() {
        let v = f(x);
        if !v.is_finite() {
            return Err(invalid(format!(
                "sample at grid point {j} (x = {x}) is not finite"
            )));
        }
        values.push(v);
    }
    Ok(GridState {
        grid: *grid,
        values,
        time: 0.0,
    })
}

/// Spectral second derivative: mode `k` is multiplied by `−k²`.
pub fn spectral_dxx(s: &GridState) -> GridState {
    let spectral = Spectral::new(&s.grid);
    let multiplier: Vec<_> = spectral
        .k2
        .iter()
        .map(|&k2| Complex64::new(-k2, 0.0))
        .collect();
    let mut values = s.values.clone();
    spectral.apply(&mut values, &multiplier);
    GridState {
        grid: s.grid,
        values,
        time: s.time,
    }
}

/// Exact evolution of the semi-discrete `u_t + iu_xx = 0` by time `t`:
/// mode `e^{ikx}` picks up `e^{ik²t}`.
pub fn free_propagate_spectral(s: &GridState, t: f64) -> GridState {
    let spectral = Spectral::new(&s.grid);
    let mut values = s.values.clone();
    spectral.apply(&mut values, &spectral.free_phases(t));
    GridState {
        grid: s.grid,
        values,
        time: s.time + t,
    }
}

/// Strang splitting for `iu_t + u_xx + γ|u|²u = 0`.
///
/// Each step is a half nonlinear phase `u ← u e^{iγ|u|²dt/2}`, an exact
/// linear step, and another half nonlinear phase. The linear part here is
/// `u_t = iu_xx`, i.e. the free flow of [`free_propagate_spectral`] run for
/// time `−dt`.
pub fn split_step_nls(s: &GridState, gamma: f64, dt: f64, steps: usize) -> Result<GridState> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(invalid(format!("time step {dt} must be positive")));
    }
    if steps == 0 {
        return Err(invalid("at least one step is required"));
    }
    if !gamma.is_finite() {
        return Err(invalid(format!("gamma {gamma} is not finite")));
    }
    let spectral = Spectral::new(&s.grid);
    let linear = spectral.free_phases(-dt);
    let half = 0.5 * gamma * dt;
    let nonlinear = |values: &mut [Complex64]| {
        for v in values.iter_mut() {
            *v *= Complex64::from_polar(1.0, half * v.norm_sqr());
        }
    };

    let mut values = s.values.clone();
    for step in 0..steps {
        nonlinear(&mut values);
        spectral.apply(&mut values, &linear);
        nonlinear(&mut values);
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { step });
        }
    }
    Ok(GridState {
        grid: s.grid,
        values,
        time: s.time + dt * steps as f64,
    })
}

/// Periodic trapezoid approximation of `(∫|u|² dx)^{1/2}`.
pub fn l2_norm(s: &GridState) -> f64 {
    (s.values.iter().map(Complex64::norm_sqr).sum::<f64>() * s.grid.spacing()).sqrt()
}

/// `max_j |a_j − b_j|`.
pub fn sup_error(a: &GridState, b: &GridState) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch(format!(
            "({}, {}) vs ({}, {})",
            a.grid.length, a.grid.n, b.grid.length, b.grid.n
        )));
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(u, v)| (u - v).norm())
        .fold(0.0, f64::max))
}
