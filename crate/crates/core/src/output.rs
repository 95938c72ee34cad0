//! Deterministic number formatting for CSV and reports.

/// 17 significant digits in scientific notation; infinities print as `inf`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    format!("{x:.16e}")
}
