//! Shannon-rate relations between rate, bandwidth and power spectral density.
//! All logarithms are base 2 (rates in bit/s).

use crate::math::{exp_m1, ln_1p, LN_2};

/// Rate delivered over `w` Hz at PSD `p` on a link with power gain `g`.
#[inline]
pub fn achieved_rate(w: f64, p: f64, g: f64, n0: f64) -> f64 {
    if w <= 0.0 || p <= 0.0 {
        return 0.0;
    }
    w * ln_1p(p * g / n0) / LN_2
}

/// Smallest bandwidth that carries rate `r` when transmitting at `p_max`.
#[inline]
pub fn min_bandwidth(r: f64, g: f64, p_max: f64, n0: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    r * LN_2 / ln_1p(p_max * g / n0)
}

/// PSD needed to carry rate `r` over `w` Hz. Infinite when `w == 0 < r`.
#[inline]
pub fn min_power(r: f64, w: f64, g: f64, n0: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    if w <= 0.0 {
        return f64::INFINITY;
    }
    n0 * exp_m1(r * LN_2 / w) / g
}

/// `d min_power / d r` at fixed bandwidth.
#[inline]
pub fn min_power_rate_slope(r: f64, w: f64, g: f64, n0: f64) -> f64 {
    n0 * crate::math::exp(r * LN_2 / w) * LN_2 / (w * g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bandwidth_examples() {
        // p_max * g / N0 = 3 -> log2(4) = 2
        assert!((min_bandwidth(2e6, 3.0, 1.0, 1.0) - 1e6).abs() < 1e-6);
        assert_eq!(min_bandwidth(0.0, 3.0, 1.0, 1.0), 0.0);
    }

    #[test]
    fn power_examples() {
        assert!((min_power(1e3, 1e3, 1.0, 1.0) - 1.0).abs() < 1e-12);
        assert!((min_power(2e3, 1e3, 1.0, 1.0) - 3.0).abs() < 1e-12);
        assert_eq!(min_power(1.0, 0.0, 1.0, 1.0), f64::INFINITY);
        assert_eq!(min_power(0.0, 0.0, 1.0, 1.0), 0.0);
    }

    #[test]
    fn rate_is_tight_at_min_power() {
        let (r, w, g, n0) = (128e3, 37e3, 2.5e-12, 4e-21);
        let p = min_power(r, w, g, n0);
        assert!((achieved_rate(w, p, g, n0) - r).abs() <= 1e-12 * r);
    }
}
