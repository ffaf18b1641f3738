//! Closed-form reference solutions.

use num_complex::Complex64;

use crate::expsum::ExpSum;

/// One separable piece `coeff · e^{alpha x} · e^{rate t}` of an exact
/// solution. The series for such a piece is the Taylor expansion of
/// `e^{rate t}`, which is what the remainder bounds are built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub coeff: Complex64,
    pub alpha: Complex64,
    pub rate: Complex64,
}

impl Mode {
    fn eval(&self, x: f64, t: f64) -> Complex64 {
        self.coeff * (self.alpha * x + self.rate * t).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `Σ c_j e^{α_j x − iα_j² t}`, solving `u_t + iu_xx = 0`.
    Linear { u0: ExpSum },
    /// `e^{iαx} e^{i(γ−α²)t}`, solving `iu_t + u_xx + γu = 0` and, because
    /// its modulus is one, also the full cubic equation.
    PlaneWaveNls { alpha: f64, gamma: f64 },
}

/// An exact solution that can be evaluated at any `(x, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactEvaluator {
    family: Family,
    modes: Vec<Mode>,
}

impl ExactEvaluator {
    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn eval(&self, x: f64, t: f64) -> Complex64 {
        self.modes.iter().map(|m| m.eval(x, t)).sum()
    }

    /// Whether the solution also satisfies the full cubic NLS.
    pub fn solves_full_nls(&self) -> bool {
        matches!(self.family, Family::PlaneWaveNls { .. })
    }

    /// `u(x, 0)` as an exponential sum.
    pub fn initial(&self) -> ExpSum {
        ExpSum::new(self.modes.iter().map(|m| (m.coeff, m.alpha))).expect("modes are finite")
    }

    /// Upper bound on `|S_N(x, t) − u(x, t)|` for the degree-`N` Taylor
    /// partial sum in `t`, uniform over `xs`: the sum over modes of
    /// [`remainder_closed_form`] with `b = |rate|` and the mode's largest
    /// spatial amplitude on `xs`.
    pub fn remainder_bound(&self, order: usize, t: f64, xs: &[f64]) -> f64 {
        self.modes
            .iter()
            .map(|m| {
                let amplitude = xs
                    .iter()
                    .map(|&x| (m.coeff * (m.alpha * x).exp()).norm())
                    .fold(0.0, f64::max);
                remainder_closed_form(m.rate.norm(), amplitude, order, t)
            })
            .sum()
    }
}

/// Exact solution of `u_t + iu_xx = 0` for exponential-sum data.
pub fn exact_linear(u0: &ExpSum) -> ExactEvaluator {
    let i = Complex64::new(0.0, 1.0);
    let modes = u0
        .terms()
        .iter()
        .map(|term| Mode {
            coeff: term.coeff,
            alpha: term.alpha,
            rate: -i * term.alpha * term.alpha,
        })
        .collect();
    ExactEvaluator {
        family: Family::Linear { u0: u0.clone() },
        modes,
    }
}

/// Unit-modulus plane wave `e^{iαx} e^{i(γ−α²)t}`.
pub fn exact_reduced_nls(alpha: f64, gamma: f64) -> ExactEvaluator {
    let mode = Mode {
        coeff: Complex64::new(1.0, 0.0),
        alpha: Complex64::new(0.0, alpha),
        rate: Complex64::new(0.0, gamma - alpha * alpha),
    };
    ExactEvaluator {
        family: Family::PlaneWaveNls { alpha, gamma },
        modes: vec![mode],
    }
}

/// Tail bound for the degree-`order` Taylor polynomial of `e^{ibt}`:
/// `amplitude · |bt|^{N+1} / (N+1)! · e^{|bt|}`.
pub fn remainder_closed_form(b: f64, amplitude: f64, order: usize, t: f64) -> f64 {
    let z = (b * t).abs();
    if z == 0.0 {
        return 0.0;
    }
    let mut tail = amplitude;
    for k in 1..=order + 1 {
        tail *= z / k as f64;
    }
    tail * z.exp()
}
