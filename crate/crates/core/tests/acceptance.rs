//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test --test acceptance`.

use std::f64::consts::PI;
use std::fs;
use std::process::{Command, ExitCode};

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use series_mirage::{
    adm_series, classify_normalizability, exact_evolve, free_propagate_spectral, hpm_series,
    l2_norm, remainder_closed_form, sample, series_evolve, split_step_nls, sup_error,
    taylor_series, Equation, ExpSum, GaussianPacket, Grid, GridState, InitialData, NormClass,
    OperatorSpec, SeriesSolution, StateVector, TimePoly,
};

const TERM_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn linspace(a: f64, b: f64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| a + (b - a) * i as f64 / (k - 1) as f64)
        .collect()
}

/// `Σ_{n≤N} zⁿ/n!` monomial series `(z t)ⁿ/n! · e^{αx}`, n = 0..=order.
fn geometric_terms(z: Complex64, alpha: Complex64, order: usize) -> Vec<TimePoly> {
    let mut coeff = c(1.0, 0.0);
    (0..=order)
        .map(|n| {
            if n > 0 {
                coeff *= z / n as f64;
            }
            TimePoly::monomial(n, ExpSum::term(coeff, alpha))
        })
        .collect()
}

fn term_distance(sol: &SeriesSolution, expected: &[TimePoly], upto: usize) -> f64 {
    sol.terms()[..=upto]
        .iter()
        .zip(expected)
        .map(|(a, b)| a.distance(b))
        .fold(0.0, f64::max)
}

fn sup_partial_sum_error(
    sol: &SeriesSolution,
    order: usize,
    xs: &[f64],
    ts: &[f64],
    exact: impl Fn(f64, f64) -> Complex64,
) -> f64 {
    let poly = sol.partial_sum(order).unwrap();
    let mut worst: f64 = 0.0;
    for &t in ts {
        for &x in xs {
            worst = worst.max((poly.eval(x, t).unwrap() - exact(x, t)).norm());
        }
    }
    worst
}

fn example1() -> Outcome {
    let u0 = ExpSum::new([
        (c(1.0, 0.0), c(0.0, 0.0)),
        (c(1.0, 0.0), c(2.0, 0.0)),
        (c(1.0, 0.0), c(-2.0, 0.0)),
    ])
    .unwrap();
    let hpm = hpm_series(&u0, Equation::Linear, 20).unwrap();
    let adm = adm_series(&u0, Equation::Linear, 20).unwrap();
    let taylor = taylor_series(&u0, Equation::Linear, 20).unwrap();
    let agree = hpm
        .distance(&taylor)
        .max(adm.distance(&taylor))
        .max(hpm.distance(&adm));
    let exact = |x: f64, t: f64| c(1.0, 0.0) + 2.0 * (2.0 * x).cosh() * c(0.0, -4.0 * t).exp();
    let err = sup_partial_sum_error(
        &adm,
        20,
        &linspace(-1.0, 1.0, 41),
        &linspace(0.0, 1.0, 41),
        exact,
    );
    outcome(
        agree <= TERM_TOL && err <= 1e-12,
        format!("method agreement {agree:.2e} (≤ 1e-12), order-20 sup error {err:.2e} (≤ 1e-12)"),
    )
}

fn example2() -> Outcome {
    let alpha = c(0.0, 3.0);
    let u0 = ExpSum::exp(alpha);
    let expected = geometric_terms(c(0.0, 9.0), alpha, 25);
    let mut term_err: f64 = 0.0;
    let mut sup: f64 = 0.0;
    let exact = |x: f64, t: f64| c(0.0, 3.0 * x + 9.0 * t).exp();
    for sol in [
        hpm_series(&u0, Equation::Linear, 25).unwrap(),
        adm_series(&u0, Equation::Linear, 25).unwrap(),
    ] {
        term_err = term_err.max(term_distance(&sol, &expected, 25));
        sup = sup.max(sup_partial_sum_error(
            &sol,
            25,
            &linspace(-PI, PI, 41),
            &linspace(0.0, 1.0, 41),
            exact,
        ));
    }
    outcome(
        term_err <= TERM_TOL && sup <= 1e-10,
        format!("term error {term_err:.2e} (≤ 1e-12), order-25 sup error {sup:.2e} (≤ 1e-10)"),
    )
}

fn examples3_4() -> Outcome {
    let alpha = c(0.0, 1.0);
    let u0 = ExpSum::exp(alpha);
    let mut pass = true;
    let mut parts = Vec::new();
    for (gamma, rate) in [(2.0, 1.0), (-2.0, -3.0)] {
        let sol = adm_series(&u0, Equation::FullNls { gamma }, 25).unwrap();
        let expected = geometric_terms(c(0.0, rate), alpha, 12);
        let term_err = term_distance(&sol, &expected, 12);
        let exact = |x: f64, t: f64| c(0.0, x + rate * t).exp();
        let sup = sup_partial_sum_error(
            &sol,
            25,
            &linspace(-PI, PI, 41),
            &linspace(0.0, 1.0, 41),
            exact,
        );
        pass &= term_err <= TERM_TOL && sup <= 1e-10;
        parts.push(format!(
            "γ={gamma}: term error {term_err:.2e}, order-25 sup {sup:.2e}"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn reduction() -> Outcome {
    let mut unit_rate: f64 = 0.0;
    let mut worst: f64 = 0.0;
    for alpha in [1.0, -2.0, 0.5, 1.5, 3.0] {
        for gamma in [2.0, -2.0, 1.0, 0.3] {
            let u0 = ExpSum::exp(c(0.0, alpha));
            let full = adm_series(&u0, Equation::FullNls { gamma }, 12).unwrap();
            let reduced = adm_series(&u0, Equation::ReducedNls { gamma }, 12).unwrap();
            let d = full.distance(&reduced);
            worst = worst.max(d);
            if alpha == 1.0 && gamma.abs() == 2.0 {
                unit_rate = unit_rate.max(d);
            }
        }
    }
    outcome(
        worst <= TERM_TOL,
        format!(
            "20 plane waves |α| ≤ 3, max term difference {worst:.2e} (≤ 1e-12); e^{{ix}} with γ = ±2: {unit_rate:.2e}"
        ),
    )
}

fn random_expsum() -> impl Strategy<Value = ExpSum> {
    let term = (-1.0..1.0f64, -1.0..1.0f64, -2.1..2.1f64, -2.1..2.1f64)
        .prop_map(|(cr, ci, ar, ai)| (c(cr, ci), c(ar, ai)));
    prop::collection::vec(term, 1..=4).prop_map(|terms| ExpSum::new(terms).unwrap())
}

fn taylor_oracle() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let cases = 24;
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let u0 = random_expsum().new_tree(&mut runner).unwrap().current();
        let gamma = (-2.0..2.0f64).new_tree(&mut runner).unwrap().current();
        for eq in [Equation::Linear, Equation::ReducedNls { gamma }] {
            let taylor = taylor_series(&u0, eq, 24).unwrap();
            let hpm = hpm_series(&u0, eq, 24).unwrap();
            let adm = adm_series(&u0, eq, 24).unwrap();
            worst = worst.max(hpm.distance(&taylor)).max(adm.distance(&taylor));
        }
    }
    outcome(
        worst <= TERM_TOL,
        format!("{cases} random sums × 2 equations, n ≤ 24, max deviation {worst:.2e} (≤ 1e-12)"),
    )
}

fn operator() -> Outcome {
    let op = OperatorSpec::laplacian_dirichlet(16, 1.0).unwrap();
    let rho = op.spectral_radius();
    let t = 1.0;
    let mut pass = true;
    let mut parts = Vec::new();
    let ramp: Vec<f64> = (0..16)
        .map(|j| ((j * 7 % 5) as f64 - 2.0) * 0.3 + 0.1)
        .collect();
    for (label, u0) in [
        ("unit", StateVector::unit(16, 8)),
        ("mixed", StateVector::from_real(&ramp)),
    ] {
        let exact = exact_evolve(&op, &u0, t).unwrap();
        let norm0 = u0.norm();
        let mut at30 = f64::NAN;
        let mut bound_ok = true;
        for order in 0..=40 {
            let rel = (&series_evolve(&op, &u0, t, order).unwrap() - &exact).norm() / norm0;
            if order == 30 {
                at30 = rel;
            }
            bound_ok &= rel <= remainder_closed_form(rho, 1.0, order, t) + 1e-13;
        }
        pass &= at30 < 1e-10 && bound_ok;
        parts.push(format!(
            "{label}: N=30 relative error {at30:.2e}, bound respected {bound_ok}"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn physicality() -> Outcome {
    let cosh = ExpSum::new([
        (c(1.0, 0.0), c(0.0, 0.0)),
        (c(1.0, 0.0), c(2.0, 0.0)),
        (c(1.0, 0.0), c(-2.0, 0.0)),
    ])
    .unwrap();
    let classes = [
        (classify_normalizability(&cosh), NormClass::Unbounded),
        (
            classify_normalizability(&ExpSum::exp(c(0.0, 3.0))),
            NormClass::BoundedNotL2,
        ),
        (
            classify_normalizability(&ExpSum::exp(c(0.0, 1.0))),
            NormClass::BoundedNotL2,
        ),
        (
            classify_normalizability(&ExpSum::term(c(0.0, 1.0).exp(), c(0.0, 1.0))),
            NormClass::BoundedNotL2,
        ),
    ];
    let classes_ok = classes.iter().all(|(got, want)| got == want);
    let packet = GaussianPacket::new(20.0, 0.5).unwrap();
    let gaussian_class = InitialData::Gaussian(packet).classify();
    let grid = Grid::new(40.0, 512).unwrap();
    let norm = l2_norm(&sample(&grid, |x| packet.eval(x)).unwrap());
    outcome(
        classes_ok && gaussian_class == NormClass::SquareIntegrable && (norm - 1.0).abs() <= 1e-10,
        format!(
            "closed-form data classes {}, Gaussian {} with l2 norm 1 {:+.2e}",
            classes
                .iter()
                .map(|(got, _)| got.name())
                .collect::<Vec<_>>()
                .join("/"),
            gaussian_class.name(),
            norm - 1.0
        ),
    )
}

fn plane_wave_error(gamma: f64, rate: f64) -> f64 {
    let grid = Grid::new(2.0 * PI, 64).unwrap();
    let start = sample(&grid, |x| c(0.0, x).exp()).unwrap();
    let end = split_step_nls(&start, gamma, 1e-3, 1000).unwrap();
    let exact = sample(&grid, |x| c(0.0, x + rate).exp()).unwrap();
    let exact = GridState::new(grid, exact.values().to_vec(), end.time()).unwrap();
    sup_error(&end, &exact).unwrap()
}

fn reference_solver() -> Outcome {
    let grid = Grid::new(40.0, 512).unwrap();
    let packet = GaussianPacket::new(20.0, 0.5).unwrap();
    let start = sample(&grid, |x| packet.eval(x)).unwrap();

    let long = split_step_nls(&start, 1.0, 1e-4, 10_000).unwrap();
    let drift = (l2_norm(&long) - l2_norm(&start)).abs();

    let linear = split_step_nls(&start, 0.0, 1e-3, 1000).unwrap();
    let free = free_propagate_spectral(&start, -1.0);
    let free_err = sup_error(&linear, &free).unwrap();

    let plane = plane_wave_error(2.0, 1.0).max(plane_wave_error(-2.0, -3.0));

    let reference = split_step_nls(&start, 1.0, 1.0 / 6400.0, 6400).unwrap();
    let coarse = sup_error(
        &split_step_nls(&start, 1.0, 1.0 / 25.0, 25).unwrap(),
        &reference,
    )
    .unwrap();
    let fine = sup_error(
        &split_step_nls(&start, 1.0, 1.0 / 100.0, 100).unwrap(),
        &reference,
    )
    .unwrap();
    let ratio = coarse / fine;

    outcome(
        drift <= 1e-10 && free_err <= 1e-10 && plane <= 1e-10 && (12.0..=20.0).contains(&ratio),
        format!(
            "norm drift {drift:.2e} over 10^4 steps, γ=0 vs free {free_err:.2e}, plane waves {plane:.2e}, error ratio dt→dt/4 {ratio:.2}"
        ),
    )
}

fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_series-mirage");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut codes = Vec::new();
    for dir in &dirs {
        let status = Command::new(bin)
            .args(["example3", "--method", "all", "--order", "20", "--out"])
            .arg(dir.path())
            .env_remove("SERIES_MIRAGE_OUT")
            .output()
            .unwrap()
            .status;
        codes.push(status.code().unwrap_or(-1));
    }
    let mut identical = true;
    for name in ["terms.csv", "errors.csv"] {
        let a = fs::read(dirs[0].path().join(name));
        let b = fs::read(dirs[1].path().join(name));
        identical &= matches!((a, b), (Ok(a), Ok(b)) if a == b && !a.is_empty());
    }
    outcome(
        identical && codes == [0, 0],
        format!("exit codes {codes:?}, terms.csv and errors.csv byte-identical {identical}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 9] = [
        ("1 cosh data: methods agree, order-20 sum ≤ 1e-12", example1),
        ("2 e^{3ix} terms and order-25 sum", example2),
        ("3 cubic NLS ADM for γ = ±2", examples3_4),
        ("4 full vs unit-modulus reduced equation", reduction),
        ("5 HPM/ADM equal the Taylor expansion", taylor_oracle),
        ("6 second-difference operator series", operator),
        ("7 normalizability classes", physicality),
        ("8 split-step reference solver", reference_solver),
        ("9 CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let result = check();
        if !result.pass {
            failed += 1;
        }
        println!(
            "{} AC{name}: {}",
            if result.pass { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
