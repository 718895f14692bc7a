//! Plain-text float formatting shared by the TSV writers.

/// 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}
