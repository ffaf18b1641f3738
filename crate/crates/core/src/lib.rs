//! Series solutions of the linear and cubic nonlinear Schrödinger equations.
//!
//! The homotopy perturbation method (HPM) and the Adomian decomposition
//! method (ADM) are implemented over a closed algebra of finite complex
//! exponential sums `Σ c_j e^{α_j x}`, where every term of every series is
//! exact. Alongside them sit the direct Taylor expansion in `t`, closed-form
//! exact solutions, periodic spectral reference solvers, an eigenfunction
//! based propagator for `u_t + iAu = 0`, and diagnostics that measure how
//! far the truncated series are from the truth.
//!
//! ```
//! use series_mirage::{adm_series, hpm_series, taylor_series, Equation, ExpSum};
//! use num_complex::Complex64;
//!
//! // u(x, 0) = e^{3ix}
//! let u0 = ExpSum::exp(Complex64::new(0.0, 3.0));
//! let hpm = hpm_series(&u0, Equation::Linear, 6).unwrap();
//! let adm = adm_series(&u0, Equation::Linear, 6).unwrap();
//! let taylor = taylor_series(&u0, Equation::Linear, 6).unwrap();
//! assert!(hpm.agrees_with(&taylor, 1e-12));
//! assert!(adm.agrees_with(&taylor, 1e-12));
//! ```

pub mod diagnostics;
mod error;
pub mod exact;
pub mod experiment;
pub mod expsum;
pub mod format;
pub mod grid;
pub mod operator;
pub mod series;

pub use diagnostics::{
    classify_normalizability, truncation_error_table, unit_modulus_deviation, ErrorRow, ErrorTable,
    InitialData, NormClass,
};
pub use error::{Error, Result};
pub use exact::{exact_linear, exact_reduced_nls, remainder_closed_form, ExactEvaluator, Mode};
pub use expsum::{ExpSum, Term, TimePoly, ALPHA_TOL, MAX_DEGREE};
pub use grid::{
    free_propagate_spectral, l2_norm, sample, spectral_dxx, split_step_nls, sup_error,
    GaussianPacket, Grid, GridState,
};
pub use operator::{
    eigen_project, exact_evolve, series_evolve, Eigenpair, OperatorSpec, StateVector,
};
pub use series::{
    adm_series, adomian_cubic, hpm_series, partial_sum_eval, series_residual, taylor_series,
    Equation, Method, SeriesSolution,
};
