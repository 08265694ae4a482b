//! Scalar helpers over `libm` so the crate stays `no_std`.

pub use core::f64::consts::{LN_2, PI};

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn log10(x: f64) -> f64 {
    libm::log10(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn exp_m1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// Principal branch of the Lambert W function for `x >= 0`.
///
/// Solves `w * e^w = x` with Halley iterations. Returns `NaN` for negative
/// or non-finite input.
pub fn lambert_w0(x: f64) -> f64 {
    if x.is_nan() || x < 0.0 || x.is_infinite() {
        return f64::NAN;
    }
    if x == 0.0 {
        return 0.0;
    }
    let mut w = if x < 3.0 {
        let l = ln_1p(x);
        l * (1.0 - ln_1p(l) / (2.0 + l))
    } else {
        let l1 = ln(x);
        let l2 = ln(l1);
        l1 - l2 + l2 / l1
    };
    for _ in 0..64 {
        let ew = exp(w);
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let next = w - f / denom;
        if (next - w).abs() <= 1e-15 * next.abs().max(1e-300) {
            return next;
        }
        w = next;
    }
    w
}
