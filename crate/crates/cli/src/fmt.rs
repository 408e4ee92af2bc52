//! Deterministic, locale-free decimal formatting with a fixed number of
//! significant digits (the CSV contract requires byte-identical output).

/// Render `x` with `digits` significant digits, trimming trailing zeros.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let exp = x.abs().log10().floor() as i32;
    if exp >= -4 && exp < digits as i32 {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let mut out = format!("{x:.decimals$}");
        if out.contains('.') {
            while out.ends_with('0') {
                out.pop();
            }
            if out.ends_with('.') {
                out.pop();
            }
        }
        out
    } else {
        let mut out = format!("{:.*e}", digits - 1, x);
        // normalize the exponent separator: "1.5e-3" style, no plus sign
        if let Some(pos) = out.find('e') {
            let (mantissa, exponent) = out.split_at(pos);
            let mut mantissa = mantissa.to_string();
            if mantissa.contains('.') {
                while mantissa.ends_with('0') {
                    mantissa.pop();
                }
                if mantissa.ends_with('.') {
                    mantissa.pop();
                }
            }
            out = format!("{mantissa}{exponent}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_are_stable() {
        assert_eq!(sig(0.0, 12), "0");
        assert_eq!(sig(2.0 / 3.0, 12), "0.666666666667");
        assert_eq!(sig(4.0, 12), "4");
        assert_eq!(sig(-0.5, 12), "-0.5");
        assert_eq!(sig(20.0000001, 12), "20.0000001");
        assert_eq!(sig(1.0 / 3.0e7, 12), "3.33333333333e-8");
        assert_eq!(sig(123456789012.34, 12), "123456789012");
    }
}
