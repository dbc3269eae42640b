//! Plain-text output helpers shared by the CSV writers.

use std::fmt::Write;

/// `x` with `digits` significant digits, trailing zeros trimmed; scientific
/// notation outside `[1e-5, 1e6)`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let digits = digits.max(1);
    let exp = x.abs().log10().floor() as i32;
    if !(-5..6).contains(&exp) {
        let s = format!("{:.*e}", digits - 1, x);
        let (mant, e) = s.split_once('e').unwrap_or((&s, "0"));
        return format!("{}e{}", trim_zeros(mant), e);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Joins already formatted fields into one CSV line.
pub fn csv_line(fields: &[String]) -> String {
    let mut line = String::new();
    for (i, f) in fields.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        let _ = write!(line, "{f}");
    }
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.378125, 6), "0.378125");
        assert_eq!(fmt_sig(0.3781254, 6), "0.378125");
        assert_eq!(fmt_sig(0.5, 6), "0.5");
        assert_eq!(fmt_sig(512.0, 6), "512");
        assert_eq!(fmt_sig(1.2345678e-7, 6), "1.23457e-7");
        assert_eq!(fmt_sig(-0.00123456789, 6), "-0.00123457");
        assert_eq!(fmt_sig(0.0, 6), "0");
    }
}
