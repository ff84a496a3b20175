//! Human-report number formatting: four significant figures, fixed point
//! for everyday magnitudes and scientific notation outside them.

pub fn sig4(x: f64) -> String {
    if x == 0.0 {
        return "0.000".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-3..4).contains(&mag) {
        let decimals = (3 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.3e}")
    }
}

/// Millimeter dimensions are quoted with three decimals.
pub fn mm(x: f64) -> String {
    format!("{x:.3}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_significant_figures() {
        assert_eq!(sig4(29.768196), "29.77");
        assert_eq!(sig4(112.9433), "112.9");
        assert_eq!(sig4(2.9663e-5), "2.966e-5");
        assert_eq!(sig4(0.0427350), "0.04274");
        assert_eq!(sig4(0.00444444), "0.004444");
        assert_eq!(sig4(-1.5), "-1.500");
        assert_eq!(sig4(0.0), "0.000");
        assert_eq!(sig4(12345.0), "1.234e4");
    }

    #[test]
    fn mm_three_decimals() {
        assert_eq!(mm(29.7681968), "29.768");
        assert_eq!(mm(33.6463568), "33.646");
    }
}
