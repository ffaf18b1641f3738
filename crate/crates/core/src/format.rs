//! Deterministic text output for CSV artifacts.

/// Shortest decimal string that round-trips to the same `f64`; switches to
/// exponent notation for very large or very small magnitudes.
pub fn float(x: f64) -> String {
    format!("{x:?}")
}
