//! Number formatting shared by the CSV writers.

/// `%.{digits}g`-style formatting: `digits` significant digits, fixed
/// notation for exponents in [−5, digits), trailing zeros removed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{exp}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// 17 significant digits; parses back to the same double.
pub fn g17(x: f64) -> String {
    format_sig(x, 17)
}

/// 4 significant digits for human-readable summaries.
pub fn g4(x: f64) -> String {
    format_sig(x, 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(g17(0.5), "0.5");
        assert_eq!(g17(0.05), "0.050000000000000003");
        assert_eq!(g4(0.056052), "0.05605");
        assert_eq!(g4(1.0), "1");
        assert_eq!(g4(1e-7), "1e-7");
        assert_eq!(g4(123456.0), "1.235e5");
        assert_eq!(g4(-2.5), "-2.5");
        assert_eq!(g17(f64::INFINITY), "inf");
    }

    #[test]
    fn round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.5e-300, 6.02e23, -7.25, 1e-5, 123456789.123] {
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
    }
}
