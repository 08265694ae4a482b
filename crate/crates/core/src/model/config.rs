use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Physical and economic parameters of one network snapshot.
///
/// Lengths are in feet, bandwidths in Hz, power spectral densities in W/Hz
/// and rates in bit/s. `Default` is the calibrated profile shipped in
/// `profiles/default.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub cell_radius: f64,
    pub n_sbs: usize,
    pub sbs_radius: f64,
    pub n_users: usize,
    pub total_bandwidth: f64,
    pub noise_psd: f64,
    /// Macro-cell PSD cap.
    pub p_max: f64,
    /// Per-user bandwidth cap.
    pub w_max: f64,
    /// Small-cell transmit PSD, common to all SBSs.
    pub p_s: f64,
    pub r_min: f64,
    /// Unit cost of PSD.
    pub c_p: f64,
    /// Unit cost of bandwidth.
    pub c_w: f64,
    /// Bandwidth-cost weight in the allocation objective, in (0, 1].
    pub gamma: f64,
    /// Reward an SBS asks on top of its serving bandwidth, as a fraction of it.
    pub eta: f64,
    pub pathloss_exponent_macro: f64,
    pub pathloss_exponent_small: f64,
    /// Channel power gain at the 1 ft reference distance.
    pub ref_gain: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            cell_radius: 1000.0,
            n_sbs: 8,
            sbs_radius: 300.0,
            n_users: 300,
            total_bandwidth: 38e6,
            noise_psd: 4e-21,
            p_max: 2e-6,
            w_max: 500e3,
            p_s: 5e-8,
            r_min: 128e3,
            c_p: 2.5e7,
            c_w: 1e-3,
            gamma: 0.5,
            eta: 0.5,
            pathloss_exponent_macro: 3.5,
            pathloss_exponent_small: 3.0,
            ref_gain: 6.3e-5,
        }
    }
}

fn check(ok: bool, field: &'static str, reason: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidConfig { field, reason })
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |x: f64| x.is_finite() && x > 0.0;
        let nonneg = |x: f64| x.is_finite() && x >= 0.0;
        check(
            pos(self.cell_radius),
            "cell_radius",
            "must be finite and > 0",
        )?;
        check(pos(self.sbs_radius), "sbs_radius", "must be finite and > 0")?;
        check(
            self.sbs_radius < self.cell_radius,
            "sbs_radius",
            "must be smaller than cell_radius",
        )?;
        check(
            pos(self.total_bandwidth),
            "total_bandwidth",
            "must be finite and > 0",
        )?;
        check(pos(self.noise_psd), "noise_psd", "must be finite and > 0")?;
        check(pos(self.p_max), "p_max", "must be finite and > 0")?;
        check(pos(self.w_max), "w_max", "must be finite and > 0")?;
        check(pos(self.p_s), "p_s", "must be finite and > 0")?;
        check(pos(self.r_min), "r_min", "must be finite and > 0")?;
        check(nonneg(self.c_p), "c_p", "must be finite and >= 0")?;
        check(nonneg(self.c_w), "c_w", "must be finite and >= 0")?;
        check(
            self.gamma > 0.0 && self.gamma <= 1.0,
            "gamma",
            "must lie in (0, 1]",
        )?;
        check(nonneg(self.eta), "eta", "must be finite and >= 0")?;
        check(
            self.pathloss_exponent_macro.is_finite() && self.pathloss_exponent_macro > 2.0,
            "pathloss_exponent_macro",
            "must be finite and > 2",
        )?;
        check(
            self.pathloss_exponent_small.is_finite() && self.pathloss_exponent_small > 2.0,
            "pathloss_exponent_small",
            "must be finite and > 2",
        )?;
        check(pos(self.ref_gain), "ref_gain", "must be finite and > 0")?;
        Ok(())
    }
}
