//! Shared text formatting for CSV output.

/// Float formatted with 17 significant digits, which round-trips `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}
