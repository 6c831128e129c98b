//! Plain-text number formatting shared by the CSV writers.

/// Scientific notation with 17 significant digits, which round-trips every
/// `f64` exactly; `.` is always the decimal separator.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}
