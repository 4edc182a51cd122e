//! The `mantissa(exponent)` number style of the reference tables and the
//! last-digit comparison used by `--check`.

use std::fmt;

/// A number as printed in a table: `+1.77219153(-7)`, `5.120(+0)`, or `-`
/// for an undefined cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Printed {
    Value { mantissa: String, exponent: i32 },
    Undefined,
}

impl Printed {
    pub fn parse(text: &str) -> Option<Self> {
        let t = text.trim();
        if t == "-" {
            return Some(Printed::Undefined);
        }
        let open = t.find('(')?;
        let close = t.strip_suffix(')')?;
        let mantissa = &t[..open];
        let exponent: i32 = close[open + 1..].parse().ok()?;
        mantissa.parse::<f64>().ok()?;
        Some(Printed::Value { mantissa: mantissa.to_string(), exponent })
    }

    /// Digits after the decimal point of the mantissa.
    pub fn decimals(&self) -> usize {
        match self {
            Printed::Value { mantissa, .. } => mantissa.split_once('.').map_or(0, |(_, f)| f.len()),
            Printed::Undefined => 0,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Printed::Value { mantissa, exponent } => Some(mantissa.parse::<f64>().ok()? * 10f64.powi(*exponent)),
            Printed::Undefined => None,
        }
    }
}

impl fmt::Display for Printed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Printed::Value { mantissa, exponent } => f.pad(&format!("{mantissa}({exponent:+})")),
            Printed::Undefined => f.pad("-"),
        }
    }
}

/// Formats `v` with `decimals` mantissa decimals; `signed` forces a leading
/// `+` on positive values.
pub fn format_printed(v: Option<f64>, decimals: usize, signed: bool) -> Printed {
    let Some(v) = v else { return Printed::Undefined };
    if v == 0.0 || !v.is_finite() {
        let mantissa = if v.is_nan() { "nan".to_string() } else { format!("{:.*}", decimals, 0.0) };
        return Printed::Value { mantissa, exponent: 0 };
    }
    let s = format!("{:.*e}", decimals, v);
    let (m, e) = s.split_once('e').expect("scientific format");
    let exponent: i32 = e.parse().expect("integer exponent");
    let mantissa = if signed && !m.starts_with('-') { format!("+{m}") } else { m.to_string() };
    Printed::Value { mantissa, exponent }
}

/// Distance between `computed` and the printed value in units of its last
/// printed digit, or `None` when exactly one of them is undefined.
pub fn last_digit_distance(computed: Option<f64>, expected: &Printed) -> Option<f64> {
    match (computed, expected) {
        (None, Printed::Undefined) => Some(0.0),
        (Some(v), Printed::Value { exponent, .. }) => {
            let unit = 10f64.powi(exponent - expected.decimals() as i32);
            let rounded = (v / unit).round();
            let printed = expected.value()? / unit;
            Some((rounded - printed.round()).abs())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p = Printed::parse("+1.77219153(-7)").unwrap();
        assert_eq!(p.decimals(), 8);
        assert_eq!(p.to_string(), "+1.77219153(-7)");
        assert!((p.value().unwrap() - 1.77219153e-7).abs() < 1e-20);
        assert_eq!(Printed::parse("5.120(+0)").unwrap().to_string(), "5.120(+0)");
        assert_eq!(Printed::parse("-").unwrap(), Printed::Undefined);
        assert!(Printed::parse("1.2e-3").is_none());
    }

    #[test]
    fn formatting() {
        assert_eq!(format_printed(Some(1.77219153e-7), 8, true).to_string(), "+1.77219153(-7)");
        assert_eq!(format_printed(Some(-1.30410848e-6), 8, true).to_string(), "-1.30410848(-6)");
        assert_eq!(format_printed(Some(14.34), 3, false).to_string(), "1.434(+1)");
        assert_eq!(format_printed(Some(9.9996), 3, false).to_string(), "1.000(+1)");
        assert_eq!(format_printed(None, 3, false).to_string(), "-");
        assert_eq!(format!("{:>10}", format_printed(Some(14.34), 3, false)), " 1.434(+1)");
    }

    #[test]
    fn distances() {
        let p = Printed::parse("2.274(-4)").unwrap();
        assert_eq!(last_digit_distance(Some(2.2744e-4), &p), Some(0.0));
        assert_eq!(last_digit_distance(Some(2.2751e-4), &p), Some(1.0));
        assert_eq!(last_digit_distance(Some(2.2761e-4), &p), Some(2.0));
        assert_eq!(last_digit_distance(None, &p), None);
        assert_eq!(last_digit_distance(None, &Printed::Undefined), Some(0.0));
    }
}
