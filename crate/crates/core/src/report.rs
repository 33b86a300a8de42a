//! Stable text formatting for emitted numbers.

/// Scientific notation with 12 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x == 0.0 {
        // Avoid a signed zero showing up as "-0".
        "0.00000000000e0".into()
    } else {
        format!("{x:.11e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159265359e0");
        assert_eq!(fmt_sig(-0.0), "0.00000000000e0");
        assert_eq!(fmt_sig(-1234.5), "-1.23450000000e3");
        assert_eq!(fmt_sig(f64::NAN), "nan");
    }
}
