//! Locale-free numeric formatting with nine significant digits.

const DIGITS: i32 = 9;

/// Formats `x` with nine significant digits. Plain decimal notation is used
/// for magnitudes in `[1e-5, 1e9)`, scientific otherwise. Trailing zeros are
/// dropped and negative zero prints as `0`.
pub fn sig9(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        return format!("{}e{}", trim(mantissa), exp);
    }
    let decimals = (DIGITS - 1 - exp).max(0) as usize;
    trim(&format!("{x:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_range() {
        assert_eq!(sig9(0.048536), "0.048536");
        assert_eq!(sig9(42.13319999), "42.1332");
        assert_eq!(sig9(std::f64::consts::PI), "3.14159265");
        assert_eq!(sig9(-0.5), "-0.5");
        assert_eq!(sig9(123456789.0), "123456789");
        assert_eq!(sig9(0.0220807800123), "0.02208078");
        assert_eq!(sig9(1.5e-5), "0.000015");
    }

    #[test]
    fn scientific_range() {
        assert_eq!(sig9(1.23e-14), "1.23e-14");
        assert_eq!(sig9(-2.0e-7), "-2e-7");
        assert_eq!(sig9(1e20), "1e20");
    }

    #[test]
    fn specials() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(-0.0), "0");
        assert_eq!(sig9(f64::NAN), "NaN");
    }

    #[test]
    fn round_trip_within_one_unit() {
        let mut x = 1.234_567_891_234e-12;
        while x < 1e12 {
            for v in [x, -x, x * 7.77] {
                let back: f64 = sig9(v).parse().unwrap();
                assert!((back - v).abs() <= 1e-8 * v.abs(), "{v} -> {}", sig9(v));
            }
            x *= 3.3;
        }
    }
}
