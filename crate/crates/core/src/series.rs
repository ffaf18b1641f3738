//! HPM, ADM and Taylor series generators.
//!
//! All three work in the [`TimePoly`] algebra, so every term is produced
//! exactly and can be compared coefficient by coefficient.
//!
//! Equations, written as `∂ₜu = R[u]`:
//!
//! | tag | PDE | right-hand side |
//! |-----|-----|-----------------|
//! | [`Equation::Linear`] | `u_t + i u_xx = 0` | `-i ∂ₓₓu` |
//! | [`Equation::ReducedNls`] | `i u_t + u_xx + γu = 0` | `i(∂ₓₓ + γ)u` |
//! | [`Equation::FullNls`] | `i u_t + u_xx + γ|u|²u = 0` | `i(∂ₓₓu + γ|u|²u)` |

use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::expsum::{cubic_step, CubicSum, ExpSum, SplitPoly, TimePoly, MAX_DEGREE};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which PDE a series solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equation {
    Linear,
    /// Cubic NLS with `|u|²` replaced by 1.
    ReducedNls {
        gamma: f64,
    },
    /// Cubic NLS with the full `γ|u|²u` nonlinearity.
    FullNls {
        gamma: f64,
    },
}

impl Equation {
    pub fn name(&self) -> &'static str {
        match self {
            Equation::Linear => "linear",
            Equation::ReducedNls { .. } => "reduced-nls",
            Equation::FullNls { .. } => "full-nls",
        }
    }

    pub fn gamma(&self) -> Option<f64> {
        match *self {
            Equation::Linear => None,
            Equation::ReducedNls { gamma } | Equation::FullNls { gamma } => Some(gamma),
        }
    }

    fn validate(&self) -> Result<()> {
        match self.gamma() {
            Some(g) if !g.is_finite() => Err(invalid(format!("gamma {g} is not finite"))),
            _ => Ok(()),
        }
    }

    /// The linear part of the right-hand side applied to one spatial
    /// coefficient: `-i u_xx` or `i(u_xx + γu)`.
    fn linear_rhs(&self, u: &ExpSum) -> ExpSum {
        match *self {
            Equation::Linear => u.dx(2).scale(-I),
            Equation::ReducedNls { gamma } | Equation::FullNls { gamma } => {
                ExpSum::combine(&u.dx(2), I, u, I * gamma).expect("gamma validated finite")
            }
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gamma() {
            Some(g) => write!(f, "{}(gamma={g})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Hpm,
    Adm,
    Taylor,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Hpm => "hpm",
            Method::Adm => "adm",
            Method::Taylor => "taylor",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Terms `u_0, …, u_N` of a truncated series, with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSolution {
    terms: Vec<TimePoly>,
    equation: Equation,
    method: Method,
}

impl SeriesSolution {
    pub fn terms(&self) -> &[TimePoly] {
        &self.terms
    }

    pub fn equation(&self) -> Equation {
        self.equation
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Highest available order `N`.
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    /// `u(x, 0)`.
    pub fn initial(&self) -> ExpSum {
        self.terms[0].coeff(0)
    }

    /// Largest coefficient discrepancy over the terms both series share.
    pub fn distance(&self, other: &SeriesSolution) -> f64 {
        self.terms
            .iter()
            .zip(&other.terms)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    /// True when both series have the same length and agree term by term.
    pub fn agrees_with(&self, other: &SeriesSolution, tol: f64) -> bool {
        self.terms.len() == other.terms.len() && self.distance(other) <= tol
    }

    /// Sum of the first `order + 1` terms as a single polynomial.
    pub fn partial_sum(&self, order: usize) -> Result<TimePoly> {
        self.check_order(order)?;
        Ok(self.terms[..=order]
            .iter()
            .fold(TimePoly::zero(), |acc, term| &acc + term))
    }

    fn check_order(&self, order: usize) -> Result<()> {
        if order > self.order() {
            return Err(invalid(format!(
                "order {order} exceeds available order {}",
                self.order()
            )));
        }
        Ok(())
    }
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(invalid(format!(
            "series order {n} exceeds the cap {MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// Homotopy perturbation series.
///
/// The homotopy `(1-p)(∂ₜv - ∂ₜu₀) + p(∂ₜv - R[v]) = 0` with `v = Σ pⁿ vₙ`
/// gives, power by power of `p`, `∂ₜv₀ = ∂ₜu₀` and `∂ₜvₙ₊₁ = R[vₙ]`, so
/// `vₙ₊₁ = ∫₀ᵗ R[vₙ] dt'`. Only linear right-hand sides are supported.
pub fn hpm_series(u0: &ExpSum, eq: Equation, order: usize) -> Result<SeriesSolution> {
    check_order(order)?;
    eq.validate()?;
    if matches!(eq, Equation::FullNls { .. }) {
        return Err(Error::UnsupportedEquation {
            method: "hpm",
            equation: eq.name(),
        });
    }
    let mut terms = Vec::with_capacity(order + 1);
    terms.push(TimePoly::constant(u0.clone()));
    for n in 0..order {
        // p^{n+1}: ∂ₜv_{n+1} = R[v_n]
        let forcing = terms[n].map_spatial(|s| eq.linear_rhs(s));
        terms.push(forcing.integrate_t());
    }
    Ok(SeriesSolution {
        terms,
        equation: eq,
        method: Method::Hpm,
    })
}

/// Adomian decomposition series with `L = ∂ₜ` and `L⁻¹ = ∫₀ᵗ`.
///
/// For the full cubic equation the nonlinearity `|u|²u` is expanded in
/// Adomian polynomials via [`adomian_cubic`].
pub fn adm_series(u0: &ExpSum, eq: Equation, order: usize) -> Result<SeriesSolution> {
    check_order(order)?;
    eq.validate()?;
    let mut terms = Vec::with_capacity(order + 1);
    terms.push(TimePoly::constant(u0.clone()));
    match eq {
        Equation::Linear | Equation::ReducedNls { .. } => {
            for n in 0..order {
                let next = terms[n].map_spatial(|s| eq.linear_rhs(s)).integrate_t();
                terms.push(next);
            }
        }
        Equation::FullNls { gamma } => {
            // terms are carried with their rounding error so that the
            // cancellation inside the Adomian sums does not amplify it
            let mut split = vec![SplitPoly::exact(terms[0].clone())];
            for n in 0..order {
                let mut a_n = CubicSum::default();
                for i in 0..=n {
                    for j in 0..=n - i {
                        a_n.add_split(&split[i], &split[j], &split[n - i - j]);
                    }
                }
                let next = cubic_step(&split[n], &a_n.finish(), gamma);
                terms.push(next.hi.clone());
                split.push(next);
            }
        }
    }
    Ok(SeriesSolution {
        terms,
        equation: eq,
        method: Method::Adm,
    })
}

/// Adomian polynomial `A_n` of `N(u) = u²ū` for the given `u_0, …, u_n`:
/// `A_n = Σ_{i+j+k=n} u_i u_j ū_k`.
pub fn adomian_cubic(terms: &[TimePoly]) -> Result<TimePoly> {
    let n = terms
        .len()
        .checked_sub(1)
        .ok_or_else(|| invalid("adomian_cubic needs at least one term"))?;
    let mut sum = CubicSum::default();
    for i in 0..=n {
        for j in 0..=n - i {
            sum.add(&terms[i], &terms[j], &terms[n - i - j]);
        }
    }
    Ok(sum.finish().hi)
}

/// Direct Taylor expansion `u = Σ tʲ/j! ∂ʲₜu|₀`, with the time derivatives
/// obtained by substituting the PDE: `∂ʲₜu|₀ = Rʲ[u₀]`.
pub fn taylor_series(u0: &ExpSum, eq: Equation, order: usize) -> Result<SeriesSolution> {
    check_order(order)?;
    eq.validate()?;
    if matches!(eq, Equation::FullNls { .. }) {
        return Err(Error::UnsupportedEquation {
            method: "taylor",
            equation: eq.name(),
        });
    }
    let mut terms = Vec::with_capacity(order + 1);
    let mut derivative = u0.clone();
    let mut inv_factorial = 1.0;
    for j in 0..=order {
        if j > 0 {
            derivative = eq.linear_rhs(&derivative);
            inv_factorial /= j as f64;
        }
        terms.push(TimePoly::monomial(
            j,
            derivative.scale(Complex64::new(inv_factorial, 0.0)),
        ));
    }
    Ok(SeriesSolution {
        terms,
        equation: eq,
        method: Method::Taylor,
    })
}

/// `Σ_{n≤order} u_n(x, t)`.
pub fn partial_sum_eval(sol: &SeriesSolution, order: usize, x: f64, t: f64) -> Result<Complex64> {
    sol.check_order(order)?;
    sol.terms[..=order]
        .iter()
        .try_fold(Complex64::new(0.0, 0.0), |acc, term| {
            Ok(acc + term.eval(x, t)?)
        })
}

/// PDE operator applied to the partial sum `S = Σ_{n≤order} u_n`, computed
/// exactly: `∂ₜS + i∂ₓₓS` for the linear equation, `i∂ₜS + ∂ₓₓS + γS` for the
/// reduced NLS. For a correct series only `t`-powers `≥ order` survive.
pub fn series_residual(sol: &SeriesSolution, order: usize) -> Result<TimePoly> {
    if order == 0 {
        return Err(invalid("residual order must be at least 1"));
    }
    let s = sol.partial_sum(order)?;
    match sol.equation {
        Equation::Linear => Ok(TimePoly::combine(
            &s.dt(),
            Complex64::new(1.0, 0.0),
            &s.dx(2),
            I,
        )),
        Equation::ReducedNls { gamma } => {
            let lhs = TimePoly::combine(&s.dt(), I, &s.dx(2), Complex64::new(1.0, 0.0));
            Ok(TimePoly::combine(
                &lhs,
                Complex64::new(1.0, 0.0),
                &s,
                Complex64::new(gamma, 0.0),
            ))
        }
        Equation::FullNls { .. } => Err(Error::UnsupportedEquation {
            method: "series_residual",
            equation: sol.equation.name(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn example1() -> ExpSum {
        ExpSum::new([
            (c(1., 0.), c(0., 0.)),
            (c(1., 0.), c(2., 0.)),
            (c(1., 0.), c(-2., 0.)),
        ])
        .unwrap()
    }

    fn cosh2() -> ExpSum {
        ExpSum::new([(c(1., 0.), c(2., 0.)), (c(1., 0.), c(-2., 0.))]).unwrap()
    }

    fn plane(k: f64) -> ExpSum {
        ExpSum::exp(c(0., k))
    }

    #[test]
    fn hpm_example_one() {
        let sol = hpm_series(&example1(), Equation::Linear, 2).unwrap();
        assert_eq!(sol.method(), Method::Hpm);
        let t = sol.terms();
        assert_eq!(t[0], TimePoly::constant(example1()));
        assert!(t[1].approx_eq(&TimePoly::monomial(1, cosh2().scale(c(0., -4.))), 1e-15));
        // (4it)²/2! = -8t²
        assert!(t[2].approx_eq(&TimePoly::monomial(2, cosh2().scale(c(-8., 0.))), 1e-15));
    }

    #[test]
    fn hpm_example_two() {
        let sol = hpm_series(&plane(3.), Equation::Linear, 1).unwrap();
        assert_eq!(
            sol.terms()[1],
            TimePoly::monomial(1, plane(3.).scale(c(0., 9.)))
        );
    }

    #[test]
    fn order_zero_is_initial_condition() {
        for sol in [
            hpm_series(&example1(), Equation::Linear, 0).unwrap(),
            adm_series(&example1(), Equation::FullNls { gamma: 1.0 }, 0).unwrap(),
            taylor_series(&example1(), Equation::Linear, 0).unwrap(),
        ] {
            assert_eq!(sol.terms(), &[TimePoly::constant(example1())]);
        }
    }

    #[test]
    fn full_nls_rejected_by_hpm_and_taylor() {
        let eq = Equation::FullNls { gamma: 2.0 };
        assert!(matches!(
            hpm_series(&plane(1.), eq, 3),
            Err(Error::UnsupportedEquation { method: "hpm", .. })
        ));
        assert!(matches!(
            taylor_series(&plane(1.), eq, 3),
            Err(Error::UnsupportedEquation {
                method: "taylor",
                ..
            })
        ));
    }

    #[test]
    fn order_cap_and_gamma_checked() {
        assert!(hpm_series(&plane(1.), Equation::Linear, 65).is_err());
        assert!(adm_series(&plane(1.), Equation::Linear, 64).is_ok());
        assert!(adm_series(&plane(1.), Equation::ReducedNls { gamma: f64::NAN }, 2).is_err());
    }

    #[test]
    fn adm_full_nls_examples_three_and_four() {
        let sol = adm_series(&plane(1.), Equation::FullNls { gamma: 2.0 }, 1).unwrap();
        assert!(sol.terms()[1].approx_eq(&TimePoly::monomial(1, plane(1.).scale(c(0., 1.))), 1e-15));
        let sol = adm_series(&plane(1.), Equation::FullNls { gamma: -2.0 }, 1).unwrap();
        assert!(
            sol.terms()[1].approx_eq(&TimePoly::monomial(1, plane(1.).scale(c(0., -3.))), 1e-15)
        );
    }

    #[test]
    fn adm_reduced_nls_example_three() {
        let sol = adm_series(&plane(1.), Equation::ReducedNls { gamma: 2.0 }, 3).unwrap();
        let mut inv_fact = 1.0;
        for (n, term) in sol.terms().iter().enumerate() {
            if n > 0 {
                inv_fact /= n as f64;
            }
            let expected =
                TimePoly::monomial(n, plane(1.).scale(c(0., 1.).powu(n as u32) * inv_fact));
            assert!(term.approx_eq(&expected, 1e-15), "term {n}");
        }
    }

    /// Brute-force trilinear sum over all (i, j, k) with i + j + k = n.
    fn adomian_brute(terms: &[TimePoly]) -> TimePoly {
        let n = terms.len() - 1;
        let mut acc = TimePoly::zero();
        for i in 0..=n {
            for j in 0..=n {
                for k in 0..=n {
                    if i + j + k == n {
                        acc = &acc + &terms[i].mul(&terms[j]).mul(&terms[k].conj());
                    }
                }
            }
        }
        acc
    }

    #[test]
    fn adomian_examples() {
        let u0 = TimePoly::constant(plane(1.));
        assert_eq!(adomian_cubic(std::slice::from_ref(&u0)).unwrap(), u0);

        // A_1 = 2u₀u₁ū₀ + u₀²ū₁ = 2it e^{ix} − it e^{ix} = it e^{ix}
        let u1 = TimePoly::monomial(1, plane(1.).scale(c(0., 1.)));
        let a1 = adomian_cubic(&[u0.clone(), u1.clone()]).unwrap();
        assert!(a1.approx_eq(&u1, 1e-15));
        assert!(a1.approx_eq(&adomian_brute(&[u0, u1]), 1e-15));

        let two = TimePoly::constant(plane(1.).scale(c(2., 0.)));
        let a0 = adomian_cubic(&[two]).unwrap();
        assert_eq!(a0, TimePoly::constant(plane(1.).scale(c(8., 0.))));

        assert!(adomian_cubic(&[]).is_err());
    }

    #[test]
    fn adomian_matches_brute_force_on_mixed_data() {
        let sol = adm_series(&example1(), Equation::FullNls { gamma: 0.7 }, 3).unwrap();
        for n in 0..=3 {
            let fast = adomian_cubic(&sol.terms()[..=n]).unwrap();
            let slow = adomian_brute(&sol.terms()[..=n]);
            assert!(fast.approx_eq(&slow, 1e-13), "A_{n}");
        }
    }

    #[test]
    fn adomian_is_cubically_homogeneous() {
        let sol = adm_series(&example1(), Equation::FullNls { gamma: -1.0 }, 2).unwrap();
        let lambda = 1.7;
        let scaled: Vec<_> = sol.terms().iter().map(|t| t.scale(c(lambda, 0.))).collect();
        let a = adomian_cubic(sol.terms())
            .unwrap()
            .scale(c(lambda.powi(3), 0.));
        let b = adomian_cubic(&scaled).unwrap();
        assert!(a.approx_eq(&b, 1e-12));
    }

    #[test]
    fn taylor_examples() {
        let sol = taylor_series(&plane(3.), Equation::Linear, 2).unwrap();
        assert_eq!(sol.method(), Method::Taylor);
        assert!(sol.terms()[1].approx_eq(&TimePoly::monomial(1, plane(3.).scale(c(0., 9.))), 1e-15));
        // (9it)²/2! = -40.5 t²
        assert!(
            sol.terms()[2].approx_eq(&TimePoly::monomial(2, plane(3.).scale(c(-40.5, 0.))), 1e-15)
        );

        let sol = taylor_series(&plane(1.), Equation::ReducedNls { gamma: 2.0 }, 1).unwrap();
        assert!(sol.terms()[1].approx_eq(&TimePoly::monomial(1, plane(1.).scale(c(0., 1.))), 1e-15));
    }

    #[test]
    fn partial_sum_examples() {
        let sol = hpm_series(&example1(), Equation::Linear, 4).unwrap();
        let v = partial_sum_eval(&sol, 1, 0.0, 0.1).unwrap();
        assert!((v - c(3., -0.8)).norm() < 1e-14);
        assert_eq!(
            partial_sum_eval(&sol, 0, 0.4, 0.0).unwrap(),
            example1().eval(0.4).unwrap()
        );

        let sol = adm_series(&plane(1.), Equation::FullNls { gamma: 2.0 }, 4).unwrap();
        let v = partial_sum_eval(&sol, 2, 0.0, 1.0).unwrap();
        assert!((v - c(0.5, 1.0)).norm() < 1e-14);

        assert!(matches!(
            partial_sum_eval(&sol, 5, 0.0, 1.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn residual_is_telescoped_last_term() {
        let n = 6;
        let sol = taylor_series(&example1(), Equation::Linear, n).unwrap();
        let r = series_residual(&sol, n).unwrap();
        let expected = sol.terms()[n].dx(2).scale(I);
        assert!(r.approx_eq(&expected, 1e-13));
        assert_eq!(r.lowest_power(), Some(n));
    }

    #[test]
    fn residual_magnitude_for_example_two() {
        for n in 1..=8 {
            let sol = hpm_series(&plane(3.), Equation::Linear, n).unwrap();
            let r = series_residual(&sol, n).unwrap();
            assert_eq!(r.degree(), Some(n));
            assert_eq!(r.lowest_power(), Some(n));
            let coeff = r.coeff(n).coeff_of(c(0., 3.)).norm();
            let mut expected = 9f64.powi(n as i32 + 1);
            for k in 1..=n {
                expected /= k as f64;
            }
            assert!((coeff - expected).abs() <= 1e-13 * expected, "n = {n}");
        }
    }

    #[test]
    fn residual_edge_cases() {
        let sol = hpm_series(&ExpSum::zero(), Equation::Linear, 3).unwrap();
        assert!(series_residual(&sol, 3).unwrap().is_zero());
        assert!(series_residual(&sol, 0).is_err());
        assert!(series_residual(&sol, 4).is_err());

        let sol = adm_series(&plane(1.), Equation::ReducedNls { gamma: 2.0 }, 5).unwrap();
        assert_eq!(series_residual(&sol, 5).unwrap().lowest_power(), Some(5));

        let sol = adm_series(&plane(1.), Equation::FullNls { gamma: 2.0 }, 2).unwrap();
        assert!(matches!(
            series_residual(&sol, 2),
            Err(Error::UnsupportedEquation { .. })
        ));
    }

    #[test]
    fn full_cubic_holds_accuracy_at_large_rates() {
        // the Adomian sums cancel by about 3^n here
        for (alpha, gamma) in [(3.0, 2.0), (-2.75, 1.6), (2.5, -2.0)] {
            let sol = adm_series(&plane(alpha), Equation::FullNls { gamma }, 16).unwrap();
            let rate = c(0., gamma - alpha * alpha);
            let mut expected = c(1., 0.);
            for (n, term) in sol.terms().iter().enumerate().skip(1) {
                expected *= rate / n as f64;
                let got = term.coeff(n).coeff_of(c(0., alpha));
                assert!(
                    (got - expected).norm() <= 1e-13 * expected.norm().max(1.0),
                    "n = {n}"
                );
            }
        }
    }
}
