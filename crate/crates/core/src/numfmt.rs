//! Locale-free number formatting for machine-readable output.

/// Significant digits written by [`fmt`].
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to 12 significant digits, trailing zeros removed.
///
/// Plain decimal notation for magnitudes in `[1e-4, 1e15)`, exponent notation
/// otherwise; infinities are written as `inf` and `-inf`.
pub fn fmt(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    // round first so that the exponent reflects the rounded value
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..15).contains(&exp) {
        let (sign, digits) = match mantissa.strip_prefix('-') {
            Some(m) => ("-", m.replace('.', "")),
            None => ("", mantissa.replace('.', "")),
        };
        let plain = if exp < 0 {
            format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
        } else {
            let point = exp as usize + 1;
            if point >= digits.len() {
                format!("{digits}{}", "0".repeat(point - digits.len()))
            } else {
                format!("{}.{}", &digits[..point], &digits[point..])
            }
        };
        trim(format!("{sign}{plain}"))
    } else {
        format!("{}e{}", trim(mantissa.to_string()), exp)
    }
}

fn trim(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" { "0".into() } else { t.into() }
}
