//! Fixed-precision float formatting for grid files.

/// Significant digits written for every float in a grid file.
pub const SIG_DIGITS: usize = 12;

/// `x` at [`SIG_DIGITS`] significant digits, `%g` style: plain notation for
/// decimal exponents in `[-5, 12)`, scientific otherwise, trailing zeros
/// removed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // round once in scientific form so the exponent reflects the rounding
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.5), "-0.5");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(2.0 / 3.0 * 1e-7), "6.66666666667e-8");
        assert_eq!(fmt_sig(123456.0), "123456");
        assert_eq!(fmt_sig(1e15), "1e15");
        assert_eq!(fmt_sig(f64::NAN), "NaN");
        assert_eq!(fmt_sig(0.302765035409749), "0.30276503541");
    }

    #[test]
    fn round_trip_precision() {
        for x in [
            std::f64::consts::PI,
            -1.0e-3 / 7.0,
            9.99999999999951,
            42.0e-6,
        ] {
            let back: f64 = fmt_sig(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-11, "{x}");
        }
    }
}
