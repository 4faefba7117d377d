//! Deterministic 12-significant-digit number formatting for JSON and CSV output.

use serde::Serializer;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds `x` to twelve significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        // normalizes -0.0 as well
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Formats `x` with at most twelve significant digits.
///
/// Values in `[1e-5, 1e15)` print as plain decimals, everything else in
/// exponent notation. The output depends only on the bits of `x`.
pub fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        return "0".to_string();
    }
    if !r.is_finite() {
        return format!("{r}");
    }
    let a = r.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub fn serialize_sig<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

pub fn serialize_sig_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_f64(round_sig(*v)),
        None => s.serialize_none(),
    }
}
