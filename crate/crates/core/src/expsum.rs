//! Exact algebra over finite complex exponential sums `Σ c_j e^{α_j x}` and
//! polynomials in `t` whose coefficients are such sums.
//!
//! The family is closed under linear combination, products, complex
//! conjugation and differentiation in `x`, and the time-polynomial layer adds
//! integration and differentiation in `t`. Together these are enough to carry
//! every HPM, ADM and Taylor recursion exactly (up to floating-point rounding
//! in the coefficients).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Absolute tolerance, per component, under which two exponents are merged.
pub const ALPHA_TOL: f64 = 1e-12;

/// Coefficients smaller than this fraction of the largest one are dropped.
const DROP_REL: f64 = 1e-15;

/// A merged coefficient that is this small relative to the magnitudes of
/// the parts that produced it is rounding residue of an exact cancellation.
const CANCEL_REL: f64 = 64.0 * f64::EPSILON;

/// Largest supported `t` degree and series order.
pub const MAX_DEGREE: usize = 64;

/// One summand `coeff · e^{alpha · x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub alpha: Complex64,
}

impl Term {
    pub fn new(coeff: Complex64, alpha: Complex64) -> Self {
        Self { coeff, alpha }
    }

    fn is_finite(&self) -> bool {
        self.coeff.is_finite() && self.alpha.is_finite()
    }
}

fn same_alpha(a: Complex64, b: Complex64) -> bool {
    (a.re - b.re).abs() <= ALPHA_TOL && (a.im - b.im).abs() <= ALPHA_TOL
}

fn alpha_order(a: &Term, b: &Term) -> Ordering {
    a.alpha
        .re
        .total_cmp(&b.alpha.re)
        .then(a.alpha.im.total_cmp(&b.alpha.im))
}

/// `|a - b|` scaled by `max(1, |a|, |b|)`: absolute for small coefficients,
/// relative for large ones.
pub(crate) fn scaled_diff(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

/// A finite sum `Σ c_j e^{α_j x}` in canonical form.
///
/// Canonical means: no two terms share an exponent (within [`ALPHA_TOL`]),
/// no coefficient is zero, and terms are sorted by `(Re α, Im α)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<TermRecord>", into = "Vec<TermRecord>")]
pub struct ExpSum {
    terms: Vec<Term>,
}

impl ExpSum {
    /// Builds a canonical sum from raw `(coeff, alpha)` pairs, merging equal
    /// exponents and dropping zero coefficients.
    pub fn new<I>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Complex64, Complex64)>,
    {
        let mut terms = Vec::new();
        for (i, (coeff, alpha)) in raw.into_iter().enumerate() {
            let term = Term::new(coeff, alpha);
            if !term.is_finite() {
                return Err(invalid(format!(
                    "term {i} is not finite (coeff {coeff}, alpha {alpha})"
                )));
            }
            terms.push(term);
        }
        Ok(Self::canonical(terms))
    }

    fn canonical(raw: impl IntoIterator<Item = Term>) -> Self {
        // (term, Σ|contributions|)
        let mut merged: Vec<(Term, f64)> = Vec::new();
        for term in raw {
            match merged
                .iter_mut()
                .find(|(m, _)| same_alpha(m.alpha, term.alpha))
            {
                Some((m, parts)) => {
                    m.coeff += term.coeff;
                    *parts += term.coeff.norm();
                }
                None => merged.push((term, term.coeff.norm())),
            }
        }
        merged.retain(|(t, parts)| t.coeff.norm() > CANCEL_REL * parts);
        let largest = merged
            .iter()
            .map(|(t, _)| t.coeff.norm())
            .fold(0.0, f64::max);
        let mut terms: Vec<Term> = merged
            .into_iter()
            .map(|(t, _)| t)
            .filter(|t| t.coeff.norm() >= DROP_REL * largest)
            .collect();
        terms.sort_by(alpha_order);
        Self { terms }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant function `c`.
    pub fn constant(c: impl Into<Complex64>) -> Self {
        Self::canonical([Term::new(c.into(), Complex64::new(0.0, 0.0))])
    }

    /// `e^{alpha x}`.
    pub fn exp(alpha: Complex64) -> Self {
        Self::canonical([Term::new(Complex64::new(1.0, 0.0), alpha)])
    }

    /// `coeff · e^{alpha x}`.
    pub fn term(coeff: Complex64, alpha: Complex64) -> Self {
        Self::canonical([Term::new(coeff, alpha)])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient attached to `alpha`, or zero when absent.
    pub fn coeff_of(&self, alpha: Complex64) -> Complex64 {
        self.terms
            .iter()
            .find(|t| same_alpha(t.alpha, alpha))
            .map_or(Complex64::new(0.0, 0.0), |t| t.coeff)
    }

    /// `ca · a + cb · b`.
    pub fn combine(a: &ExpSum, ca: Complex64, b: &ExpSum, cb: Complex64) -> Result<Self> {
        if !ca.is_finite() || !cb.is_finite() {
            return Err(invalid(format!(
                "non-finite scalar in combination ({ca}, {cb})"
            )));
        }
        Ok(Self::combine_unchecked(a, ca, b, cb))
    }

    fn combine_unchecked(a: &ExpSum, ca: Complex64, b: &ExpSum, cb: Complex64) -> Self {
        let lhs = a.terms.iter().map(|t| Term::new(ca * t.coeff, t.alpha));
        let rhs = b.terms.iter().map(|t| Term::new(cb * t.coeff, t.alpha));
        Self::canonical(lhs.chain(rhs))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::canonical(self.terms.iter().map(|t| Term::new(c * t.coeff, t.alpha)))
    }

    /// Product of two sums; exponents add and coefficients multiply.
    pub fn mul(&self, other: &ExpSum) -> Self {
        let products = self.terms.iter().flat_map(|a| {
            other
                .terms
                .iter()
                .map(move |b| Term::new(a.coeff * b.coeff, a.alpha + b.alpha))
        });
        Self::canonical(products)
    }

    /// Complex conjugate for real `x`: `(c, α) ↦ (c̄, ᾱ)`.
    pub fn conj(&self) -> Self {
        Self::canonical(
            self.terms
                .iter()
                .map(|t| Term::new(t.coeff.conj(), t.alpha.conj())),
        )
    }

    /// `d^order/dx^order`.
    pub fn dx(&self, order: u32) -> Self {
        if order == 0 {
            return self.clone();
        }
        Self::canonical(
            self.terms
                .iter()
                .map(|t| Term::new(t.coeff * t.alpha.powu(order), t.alpha)),
        )
    }

    /// Direct summation at real `x`.
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        if !x.is_finite() {
            return Err(invalid(format!("evaluation point {x} is not finite")));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, t) in self.terms.iter().enumerate() {
            let value = t.coeff * (t.alpha * x).exp();
            if !value.is_finite() {
                return Err(Error::Overflow(format!(
                    "term {j} ({} e^{{({})x}}) at x = {x}",
                    t.coeff, t.alpha
                )));
            }
            acc += value;
        }
        Ok(acc)
    }

    /// Largest coefficient discrepancy after matching exponents, measured
    /// with [`scaled_diff`]. Exponents present in only one sum count against
    /// a zero coefficient.
    pub fn distance(&self, other: &ExpSum) -> f64 {
        let mut worst: f64 = 0.0;
        for t in &self.terms {
            worst = worst.max(scaled_diff(t.coeff, other.coeff_of(t.alpha)));
        }
        for t in &other.terms {
            if !self.terms.iter().any(|s| same_alpha(s.alpha, t.alpha)) {
                worst = worst.max(scaled_diff(t.coeff, Complex64::new(0.0, 0.0)));
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &ExpSum, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

impl Add for &ExpSum {
    type Output = ExpSum;
    fn add(self, rhs: &ExpSum) -> ExpSum {
        ExpSum::canonical(self.terms.iter().chain(rhs.terms.iter()).copied())
    }
}

impl Sub for &ExpSum {
    type Output = ExpSum;
    fn sub(self, rhs: &ExpSum) -> ExpSum {
        ExpSum::combine_unchecked(
            self,
            Complex64::new(1.0, 0.0),
            rhs,
            Complex64::new(-1.0, 0.0),
        )
    }
}

impl Neg for &ExpSum {
    type Output = ExpSum;
    fn neg(self) -> ExpSum {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &ExpSum {
    type Output = ExpSum;
    fn mul(self, rhs: &ExpSum) -> ExpSum {
        ExpSum::mul(self, rhs)
    }
}

impl fmt::Display for ExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (j, t) in self.terms.iter().enumerate() {
            if j > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "(")?;
            complex(f, t.coeff)?;
            write!(f, ")e^{{(")?;
            complex(f, t.alpha)?;
            write!(f, ")x}}")?;
        }
        Ok(())
    }
}

fn complex(f: &mut fmt::Formatter<'_>, z: Complex64) -> fmt::Result {
    // + 0.0 turns -0.0 into 0.0
    let (re, im) = (z.re + 0.0, z.im + 0.0);
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    write!(f, "{re}{sign}{}i", im.abs())
}

/// Wire form of a single term.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct TermRecord {
    re_c: f64,
    im_c: f64,
    re_a: f64,
    im_a: f64,
}

impl TryFrom<Vec<TermRecord>> for ExpSum {
    type Error = Error;

    fn try_from(records: Vec<TermRecord>) -> Result<Self> {
        ExpSum::new(records.into_iter().map(|r| {
            (
                Complex64::new(r.re_c, r.im_c),
                Complex64::new(r.re_a, r.im_a),
            )
        }))
    }
}

impl From<ExpSum> for Vec<TermRecord> {
    fn from(sum: ExpSum) -> Self {
        sum.terms
            .iter()
            .map(|t| TermRecord {
                re_c: t.coeff.re,
                im_c: t.coeff.im,
                re_a: t.alpha.re,
                im_a: t.alpha.im,
            })
            .collect()
    }
}

/// A polynomial in real `t` with [`ExpSum`] coefficients, indexed by power.
/// The trailing coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<ExpSum>", into = "Vec<ExpSum>")]
pub struct TimePoly {
    coeffs: Vec<ExpSum>,
}

impl From<Vec<ExpSum>> for TimePoly {
    fn from(coeffs: Vec<ExpSum>) -> Self {
        Self::from_coeffs(coeffs)
    }
}

impl From<TimePoly> for Vec<ExpSum> {
    fn from(p: TimePoly) -> Self {
        p.coeffs
    }
}

impl TimePoly {
    pub fn from_coeffs(mut coeffs: Vec<ExpSum>) -> Self {
        while coeffs.last().is_some_and(ExpSum::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(s: ExpSum) -> Self {
        Self::from_coeffs(vec![s])
    }

    /// `t^power · s`.
    pub fn monomial(power: usize, s: ExpSum) -> Self {
        let mut coeffs = vec![ExpSum::zero(); power];
        coeffs.push(s);
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[ExpSum] {
        &self.coeffs
    }

    /// Coefficient of `t^power` (zero beyond the degree).
    pub fn coeff(&self, power: usize) -> ExpSum {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Smallest power with a nonzero coefficient.
    pub fn lowest_power(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Applies `f` to every `t`-coefficient.
    pub fn map_spatial(&self, f: impl Fn(&ExpSum) -> ExpSum) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_spatial(|s| s.scale(c))
    }

    pub fn combine(a: &TimePoly, ca: Complex64, b: &TimePoly, cb: Complex64) -> Self {
        let len = a.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..len)
            .map(|k| ExpSum::combine_unchecked(&a.coeff(k), ca, &b.coeff(k), cb))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Cauchy product in `t` with [`ExpSum::mul`] on the coefficients.
    pub fn mul(&self, other: &TimePoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![Vec::new(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j].extend(a.mul(b).terms);
            }
        }
        Self::from_coeffs(coeffs.into_iter().map(ExpSum::canonical).collect())
    }

    /// Conjugate for real `t`: only the spatial coefficients are conjugated.
    pub fn conj(&self) -> Self {
        self.map_spatial(ExpSum::conj)
    }

    pub fn dx(&self, order: u32) -> Self {
        self.map_spatial(|s| s.dx(order))
    }

    /// `∂/∂t`.
    pub fn dt(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, s)| s.scale(Complex64::new(n as f64, 0.0)))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// `∫₀ᵗ p dt'`: the coefficient of `t^n` moves to `t^{n+1}` with a factor
    /// `1/(n+1)`.
    pub fn integrate_t(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ExpSum::zero());
        for (n, s) in self.coeffs.iter().enumerate() {
            coeffs.push(s.scale(Complex64::new(1.0 / (n as f64 + 1.0), 0.0)));
        }
        Self::from_coeffs(coeffs)
    }

    /// Horner evaluation in `t`.
    pub fn eval(&self, x: f64, t: f64) -> Result<Complex64> {
        if !t.is_finite() {
            return Err(invalid(format!("time {t} is not finite")));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for s in self.coeffs.iter().rev() {
            acc = acc * t + s.eval(x)?;
        }
        Ok(acc)
    }

    /// Largest [`ExpSum::distance`] over all powers of `t`.
    pub fn distance(&self, other: &TimePoly) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|k| self.coeff(k).distance(&other.coeff(k)))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &TimePoly, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

impl Add for &TimePoly {
    type Output = TimePoly;
    fn add(self, rhs: &TimePoly) -> TimePoly {
        TimePoly::combine(
            self,
            Complex64::new(1.0, 0.0),
            rhs,
            Complex64::new(1.0, 0.0),
        )
    }
}

impl Sub for &TimePoly {
    type Output = TimePoly;
    fn sub(self, rhs: &TimePoly) -> TimePoly {
        TimePoly::combine(
            self,
            Complex64::new(1.0, 0.0),
            rhs,
            Complex64::new(-1.0, 0.0),
        )
    }
}

/// Real accumulator carrying its rounding error in a second word.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    hi: f64,
    lo: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let s = self.hi + x;
        let v = s - self.hi;
        self.lo += (self.hi - (s - v)) + (x - v);
        self.hi = s;
    }

    /// Adds `x·y·z`, keeping the rounding error of both products.
    fn add_product(&mut self, x: f64, y: f64, z: f64) {
        let p = x * y;
        let e = x.mul_add(y, -p);
        let q = p * z;
        self.add(q);
        self.add(p.mul_add(z, -q));
        self.add(e * z);
    }

    /// Nearest `f64` and the remainder.
    fn split(&self) -> (f64, f64) {
        let h = self.hi + self.lo;
        (h, (self.hi - h) + self.lo)
    }

    fn div(&self, d: f64) -> Self {
        let (h, l) = self.split();
        let q = h / d;
        let r = (-q).mul_add(d, h);
        Self {
            hi: q,
            lo: (r + l) / d,
        }
    }

    fn neg(&self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

/// A time polynomial kept as the unevaluated sum `hi + lo`, where `lo`
/// holds the rounding error of `hi` exponent by exponent.
#[derive(Debug, Clone, Default)]
pub(crate) struct SplitPoly {
    pub(crate) hi: TimePoly,
    pub(crate) lo: TimePoly,
}

impl SplitPoly {
    pub(crate) fn exact(hi: TimePoly) -> Self {
        Self {
            hi,
            lo: TimePoly::zero(),
        }
    }
}

struct Bucket {
    alpha: Complex64,
    re: Compensated,
    im: Compensated,
}

impl Bucket {
    fn add_complex_product(&mut self, x: Complex64, y: Complex64, z: Complex64) {
        self.re.add_product(x.re, y.re, z.re);
        self.re.add_product(-x.re, y.im, z.im);
        self.re.add_product(-x.im, y.re, z.im);
        self.re.add_product(-x.im, y.im, z.re);
        self.im.add_product(x.re, y.re, z.im);
        self.im.add_product(x.re, y.im, z.re);
        self.im.add_product(x.im, y.re, z.re);
        self.im.add_product(-x.im, y.im, z.im);
    }
}

/// Compensated coefficient accumulators keyed by `(t power, exponent)`.
#[derive(Default)]
struct Buckets {
    by_power: Vec<Vec<Bucket>>,
}

impl Buckets {
    fn entry(&mut self, power: usize, alpha: Complex64) -> &mut Bucket {
        if self.by_power.len() <= power {
            self.by_power.resize_with(power + 1, Vec::new);
        }
        let buckets = &mut self.by_power[power];
        match buckets.iter().position(|b| same_alpha(b.alpha, alpha)) {
            Some(i) => &mut buckets[i],
            None => {
                buckets.push(Bucket {
                    alpha,
                    re: Compensated::default(),
                    im: Compensated::default(),
                });
                buckets.last_mut().expect("just pushed")
            }
        }
    }

    fn finish(self) -> SplitPoly {
        let mut hi = Vec::with_capacity(self.by_power.len());
        let mut lo = Vec::with_capacity(self.by_power.len());
        for buckets in self.by_power {
            let mut hi_terms = Vec::with_capacity(buckets.len());
            let mut lo_terms = Vec::with_capacity(buckets.len());
            for b in buckets {
                let (re, re_lo) = b.re.split();
                let (im, im_lo) = b.im.split();
                hi_terms.push(Term::new(Complex64::new(re, im), b.alpha));
                lo_terms.push(Term::new(Complex64::new(re_lo, im_lo), b.alpha));
            }
            hi.push(ExpSum::canonical(hi_terms));
            lo.push(ExpSum::canonical(lo_terms));
        }
        SplitPoly {
            hi: TimePoly::from_coeffs(hi),
            lo: TimePoly::from_coeffs(lo),
        }
    }
}

/// Sum of products `a·b·c̄` of time polynomials, accumulated with
/// compensated arithmetic.
///
/// Cubic sums such as `Σ u_i u_j ū_k` cancel heavily (for a plane wave the
/// parts are about `3ⁿ` times larger than the total), so plain `f64`
/// accumulation loses most of the digits.
#[derive(Default)]
pub(crate) struct CubicSum {
    buckets: Buckets,
}

impl CubicSum {
    pub(crate) fn add(&mut self, a: &TimePoly, b: &TimePoly, c: &TimePoly) {
        for (p, sa) in a.coeffs.iter().enumerate() {
            for (q, sb) in b.coeffs.iter().enumerate() {
                for (r, sc) in c.coeffs.iter().enumerate() {
                    for ta in &sa.terms {
                        for tb in &sb.terms {
                            for tc in &sc.terms {
                                let alpha = ta.alpha + tb.alpha + tc.alpha.conj();
                                self.buckets.entry(p + q + r, alpha).add_complex_product(
                                    ta.coeff,
                                    tb.coeff,
                                    tc.coeff.conj(),
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    /// Adds `a·b·c̄` to first order in the `lo` parts.
    pub(crate) fn add_split(&mut self, a: &SplitPoly, b: &SplitPoly, c: &SplitPoly) {
        self.add(&a.hi, &b.hi, &c.hi);
        self.add(&a.lo, &b.hi, &c.hi);
        self.add(&a.hi, &b.lo, &c.hi);
        self.add(&a.hi, &b.hi, &c.lo);
    }

    pub(crate) fn finish(self) -> SplitPoly {
        self.buckets.finish()
    }
}

/// `∫₀ᵗ i(∂ₓₓu + γa) dt'` in compensated arithmetic: one step of the
/// Adomian recursion for the cubic equation.
pub(crate) fn cubic_step(u: &SplitPoly, a: &SplitPoly, gamma: f64) -> SplitPoly {
    let one = Complex64::new(1.0, 0.0);
    let mut acc = Buckets::default();
    for part in [&u.hi, &u.lo] {
        for (p, s) in part.coeffs.iter().enumerate() {
            for t in &s.terms {
                acc.entry(p, t.alpha)
                    .add_complex_product(t.coeff, t.alpha.powu(2), one);
            }
        }
    }
    for part in [&a.hi, &a.lo] {
        for (p, s) in part.coeffs.iter().enumerate() {
            for t in &s.terms {
                acc.entry(p, t.alpha)
                    .add_complex_product(t.coeff, Complex64::new(gamma, 0.0), one);
            }
        }
    }
    // multiply by i, then integrate: power p becomes p + 1 with factor 1/(p + 1)
    let mut out = Buckets::default();
    for (p, buckets) in acc.by_power.into_iter().enumerate() {
        let d = (p + 1) as f64;
        for b in buckets {
            let target = out.entry(p + 1, b.alpha);
            target.re = b.im.neg().div(d);
            target.im = b.re.div(d);
        }
    }
    out.finish()
}
