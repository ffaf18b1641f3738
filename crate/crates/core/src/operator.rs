//! Evolution `u = e^{−itA} u₀` for `u_t + iAu = 0` with a finite-dimensional
//! Hermitian `A` whose eigenpairs are known in closed form.
//!
//! [`series_evolve`] sums the truncated exponential series term by term;
//! [`exact_evolve`] expands `u₀` in eigenvectors and rotates each coefficient
//! by `e^{−ita_k}`.

use std::f64::consts::PI;
use std::io::{self, Write};
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::format::float;

const INVARIANT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    /// Real, unit-norm eigenvector.
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
enum Action {
    /// Tridiagonal second difference with spacing `h` and zero boundary values.
    SecondDifference {
        h: f64,
    },
    Diagonal(Vec<f64>),
}

/// A Hermitian operator together with its full orthonormal eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    action: Action,
    eigenpairs: Vec<Eigenpair>,
}

impl OperatorSpec {
    /// Second-difference matrix (`−2/h²` on the diagonal, `1/h²` beside it)
    /// with eigenvalues `−(2 − 2cos(kπ/(n+1)))/h²` and eigenvectors
    /// `√(2/(n+1)) sin(jkπ/(n+1))`, `k = 1..n`.
    pub fn laplacian_dirichlet(n: usize, h: f64) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("dimension {n} must be at least 2")));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(invalid(format!("spacing {h} must be positive")));
        }
        let m = (n + 1) as f64;
        let norm = (2.0 / m).sqrt();
        let eigenpairs = (1..=n)
            .map(|k| {
                let theta = k as f64 * PI / m;
                Eigenpair {
                    value: -(2.0 - 2.0 * theta.cos()) / (h * h),
                    vector: (1..=n).map(|j| norm * (j as f64 * theta).sin()).collect(),
                }
            })
            .collect();
        let op = Self {
            action: Action::SecondDifference { h },
            eigenpairs,
        };
        op.check()?;
        Ok(op)
    }

    /// Diagonal operator; its eigenvectors are the standard basis.
    pub fn diagonal(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("diagonal operator needs at least one entry"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(invalid(format!("diagonal entry {v} is not finite")));
        }
        let n = values.len();
        let eigenpairs = values
            .iter()
            .enumerate()
            .map(|(k, &value)| {
                let mut vector = vec![0.0; n];
                vector[k] = 1.0;
                Eigenpair { value, vector }
            })
            .collect();
        Ok(Self {
            action: Action::Diagonal(values),
            eigenpairs,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenpairs.len()
    }

    pub fn eigenpairs(&self) -> &[Eigenpair] {
        &self.eigenpairs
    }

    /// Largest `|a_k|`.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenpairs
            .iter()
            .map(|p| p.value.abs())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, u: &StateVector) -> StateVector {
        let v = &u.0;
        let out = match &self.action {
            Action::SecondDifference { h } => {
                let inv = 1.0 / (h * h);
                let n = v.len();
                (0..n)
                    .map(|j| {
                        let left = if j > 0 {
                            v[j - 1]
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        let right = if j + 1 < n {
                            v[j + 1]
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        (left - 2.0 * v[j] + right) * inv
                    })
                    .collect()
            }
            Action::Diagonal(d) => v.iter().zip(d).map(|(x, a)| x * a).collect(),
        };
        StateVector(out)
    }

    /// Verifies `A f_k = a_k f_k` and orthonormality to 1e-10.
    pub fn check(&self) -> Result<()> {
        let n = self.dim();
        for (k, pair) in self.eigenpairs.iter().enumerate() {
            if pair.vector.len() != n {
                return Err(invalid(format!("eigenvector {k} has wrong length")));
            }
            let f = StateVector::from_real(&pair.vector);
            let residual = (&self.apply(&f) - &f.scale(Complex64::new(pair.value, 0.0))).norm();
            if residual > INVARIANT_TOL * pair.value.abs().max(1.0) {
                return Err(invalid(format!("eigenpair {k} residual {residual}")));
            }
            for (l, other) in self.eigenpairs.iter().enumerate().skip(k) {
                let dot: f64 = pair
                    .vector
                    .iter()
                    .zip(&other.vector)
                    .map(|(a, b)| a * b)
                    .sum();
                let expected = if k == l { 1.0 } else { 0.0 };
                if (dot - expected).abs() > INVARIANT_TOL {
                    return Err(invalid(format!("eigenvectors {k} and {l} not orthonormal")));
                }
            }
        }
        Ok(())
    }
}

/// Complex state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<Complex64>);

impl StateVector {
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        if let Some(j) = components.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("component {j} is not finite")));
        }
        Ok(Self(components))
    }

    pub fn from_real(v: &[f64]) -> Self {
        Self(v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// `e_j` in dimension `n`.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[j] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn components(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// `max_j |u_j|`.
    pub fn sup_norm(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(self.0.iter().map(|v| v * c).collect())
    }

    fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// `index,re,im` rows after a header.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "index,re,im")?;
        for (j, v) in self.0.iter().enumerate() {
            writeln!(w, "{j},{},{}", float(v.re), float(v.im))?;
        }
        Ok(())
    }
}

impl Add for &StateVector {
    type Output = StateVector;
    fn add(self, rhs: &StateVector) -> StateVector {
        StateVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &StateVector {
    type Output = StateVector;
    fn sub(self, rhs: &StateVector) -> StateVector {
        StateVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<&StateVector> for Complex64 {
    type Output = StateVector;
    fn mul(self, rhs: &StateVector) -> StateVector {
        rhs.scale(self)
    }
}

fn check_dim(op: &OperatorSpec, u0: &StateVector) -> Result<()> {
    if u0.len() != op.dim() {
        return Err(invalid(format!(
            "state of length {} for an operator of dimension {}",
            u0.len(),
            op.dim()
        )));
    }
    Ok(())
}

/// `Σ_{n≤N} (−it)ⁿ/n! Aⁿ u₀`, building each term from the previous one.
pub fn series_evolve(
    op: &OperatorSpec,
    u0: &StateVector,
    t: f64,
    order: usize,
) -> Result<StateVector> {
    check_dim(op, u0)?;
    if order > crate::expsum::MAX_DEGREE {
        return Err(invalid(format!("order {order} exceeds the cap")));
    }
    let mut term = u0.clone();
    let mut acc = u0.clone();
    for n in 1..=order {
        let factor = Complex64::new(0.0, -t / n as f64);
        term = op.apply(&term).scale(factor);
        acc = &acc + &term;
        if !acc.is_finite() {
            return Err(Error::Overflow(format!("operator series at term {n}")));
        }
    }
    Ok(acc)
}

/// Expansion coefficients `c_k = ⟨f_k, u₀⟩`.
pub fn eigen_project(op: &OperatorSpec, u0: &StateVector) -> Result<Vec<Complex64>> {
    check_dim(op, u0)?;
    Ok(op
        .eigenpairs
        .iter()
        .map(|pair| pair.vector.iter().zip(&u0.0).map(|(f, u)| f * u).sum())
        .collect())
}

/// `Σ_k c_k e^{−ita_k} f_k`.
pub fn exact_evolve(op: &OperatorSpec, u0: &StateVector, t: f64) -> Result<StateVector> {
    let coeffs = eigen_project(op, u0)?;
    let mut out = StateVector::zeros(op.dim());
    for (pair, c) in op.eigenpairs.iter().zip(coeffs) {
        let rotated = c * Complex64::from_polar(1.0, -t * pair.value);
        for (o, f) in out.0.iter_mut().zip(&pair.vector) {
            *o += rotated * f;
        }
    }
    Ok(out)
}
