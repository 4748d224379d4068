//! Locale-independent number formatting for CSV output.
//!
//! Every float is printed in scientific notation with 12 significant digits,
//! so repeated runs with the same inputs produce byte-identical files.

/// Formats with exactly 12 significant digits, '.' decimal separator.
pub fn sig12(value: f64) -> String {
    if value == 0.0 {
        // Collapse -0.0 so output does not depend on the sign of zero.
        return "0.00000000000e0".to_string();
    }
    format!("{value:.11e}")
}

#[cfg(test)]
mod tests {
    use super::sig12;

    #[test]
    fn stable_formatting() {
        assert_eq!(sig12(0.0), "0.00000000000e0");
        assert_eq!(sig12(-0.0), "0.00000000000e0");
        assert_eq!(sig12(1.0), "1.00000000000e0");
        assert_eq!(sig12(0.18872187554086717), "1.88721875541e-1");
        assert_eq!(sig12(-2.5e-13), "-2.50000000000e-13");
    }
}
