use crate::math::powf;
use crate::{Error, Result};

/// Log-distance path gain `ref_gain * d^-exponent`, with `d` in feet.
///
/// Distances below the 1 ft reference are clamped to it so the gain never
/// exceeds `ref_gain`.
pub fn channel_gain(distance: f64, exponent: f64, ref_gain: f64) -> Result<f64> {
    if distance.is_nan() || distance <= 0.0 || distance.is_infinite() {
        return Err(Error::Domain {
            what: "distance",
            value: distance,
        });
    }
    Ok(ref_gain * powf(distance.max(1.0), -exponent))
}
