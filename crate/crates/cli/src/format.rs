//! Fixed-point numeric output with 12 significant digits.

const SIGNIFICANT: i32 = 12;

/// Formats `x` with 12 significant digits in fixed (non-exponent) notation.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return format!("{:.*}", (SIGNIFICANT - 1) as usize, 0.0);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit, e.g. 9.99...9 -> 10.00...0
    let digits = s
        .bytes()
        .filter(u8::is_ascii_digit)
        .skip_while(|b| *b == b'0')
        .count();
    if digits > SIGNIFICANT as usize && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

/// `x` rounded to the value that [`num`] prints.
pub fn round(x: f64) -> f64 {
    if x.is_finite() {
        num(x).parse().expect("formatted number parses")
    } else {
        x
    }
}

pub fn row(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(num).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(1.0), "1.00000000000");
        assert_eq!(num(123.456), "123.456000000");
        assert_eq!(num(-0.00123456789012345), "-0.00123456789012");
        assert_eq!(num(0.0), "0.00000000000");
        assert_eq!(num(9.9999999999999), "10.0000000000");
        assert_eq!(num(1e13), "10000000000000");
    }

    #[test]
    fn round_is_idempotent() {
        for x in [
            std::f64::consts::PI,
            -1234.5678901234567,
            1e-7 / 3.0,
            400.0 * (-1f64).exp(),
        ] {
            let r = round(x);
            assert_eq!(round(r), r);
            assert_eq!(num(r), num(x));
            assert!((r - x).abs() <= 1e-11 * x.abs());
        }
    }
}
