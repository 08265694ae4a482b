//! Separable convex bandwidth allocation under a shared bandwidth budget.
//!
//! With the rate constraint tight, a CBS-served user's PSD is a convex,
//! decreasing function of its bandwidth, `σ(w) = N0 (2^(r/w) - 1) / g`. Each
//! user then minimises `ν σ(w) + μ w` on `[w_min, w_max]`, where `ν` prices
//! power and `μ = γ c_w + λ` prices bandwidth. The stationarity condition
//! has a closed form through the Lambert W function; the budget multiplier
//! `λ` is found by bisection.

use alloc::vec::Vec;

use crate::math::{exp, lambert_w0, sqrt, LN_2};
use crate::model::{min_bandwidth, min_power};

/// Bisection steps on the budget multiplier; far more than f64 resolution needs.
const MAX_BISECTION_STEPS: usize = 200;

/// One CBS-served user seen by the allocator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServeModel {
    pub rate: f64,
    pub gain: f64,
    /// Bandwidth needed at full PSD.
    pub w_lo: f64,
    pub w_hi: f64,
    pub p_max: f64,
    pub n0: f64,
}

impl ServeModel {
    pub fn new(rate: f64, gain: f64, p_max: f64, w_max: f64, n0: f64) -> Self {
        Self {
            rate,
            gain,
            w_lo: min_bandwidth(rate, gain, p_max, n0),
            w_hi: w_max,
            p_max,
            n0,
        }
    }

    /// The rate fits under the bandwidth cap.
    pub fn is_feasible(&self) -> bool {
        self.w_lo <= self.w_hi
    }

    /// PSD that makes the rate constraint tight at bandwidth `w`.
    pub fn power(&self, w: f64) -> f64 {
        if self.rate == 0.0 {
            0.0
        } else if w <= self.w_lo {
            self.p_max
        } else {
            min_power(self.rate, w, self.gain, self.n0).min(self.p_max)
        }
    }

    /// `-dσ/dw`: PSD saved per extra Hz.
    pub fn power_slope(&self, w: f64) -> f64 {
        if self.rate == 0.0 {
            return 0.0;
        }
        self.n0 * LN_2 * self.rate * exp(self.rate * LN_2 / w) / (self.gain * w * w)
    }

    /// Minimiser of `power_price * σ(w) + bandwidth_price * w` on `[w_lo, w_hi]`.
    pub fn best_bandwidth(&self, power_price: f64, bandwidth_price: f64) -> f64 {
        let (lo, hi) = (self.w_lo, self.w_hi);
        if self.rate == 0.0 || power_price <= 0.0 {
            return lo;
        }
        if bandwidth_price <= 0.0 {
            return hi;
        }
        if power_price * self.power_slope(lo) <= bandwidth_price {
            return lo;
        }
        if power_price * self.power_slope(hi) >= bandwidth_price {
            return hi;
        }
        // u = r / w solves u^2 2^u = C
        let c_sqrt =
            sqrt(bandwidth_price / power_price) * sqrt(self.gain * self.rate / (self.n0 * LN_2));
        let u = 2.0 / LN_2 * lambert_w0(c_sqrt * LN_2 / 2.0);
        if u.is_nan() || u <= 0.0 {
            return hi;
        }
        (self.rate / u).clamp(lo, hi)
    }
}

/// Why a budgeted allocation does not exist.
#[derive(Debug, Clone, PartialEq)]
pub struct Shortfall {
    /// `Σ w_min - budget`, Hz; may be zero or negative when only `stranded`
    /// users block feasibility.
    pub deficit: f64,
    /// Positions (into the model slice) of users whose `w_min` exceeds `w_max`.
    pub stranded: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Budgeted {
    pub w: Vec<f64>,
    /// Budget multiplier λ; zero when the budget is slack.
    pub multiplier: f64,
}

fn bandwidths(models: &[ServeModel], prices: &[f64], bandwidth_price: f64) -> Vec<f64> {
    models
        .iter()
        .zip(prices)
        .map(|(m, &nu)| m.best_bandwidth(nu, bandwidth_price))
        .collect()
}

/// Minimises `Σ (ν_i σ_i(w_i) + bandwidth_price w_i)` subject to
/// `Σ w_i <= budget` and `w_i ∈ [w_lo_i, w_hi_i]`.
pub fn allocate(
    models: &[ServeModel],
    power_prices: &[f64],
    bandwidth_price: f64,
    budget: f64,
) -> Result<Budgeted, Shortfall> {
    debug_assert_eq!(models.len(), power_prices.len());
    let stranded: Vec<usize> = (0..models.len())
        .filter(|&i| !models[i].is_feasible())
        .collect();
    let floor: f64 = models.iter().map(|m| m.w_lo).sum();
    if !stranded.is_empty() || floor > budget {
        return Err(Shortfall {
            deficit: floor - budget,
            stranded,
        });
    }

    let w = bandwidths(models, power_prices, bandwidth_price);
    if w.iter().sum::<f64>() <= budget {
        return Ok(Budgeted { w, multiplier: 0.0 });
    }

    // At this price every user sits at its lower bound.
    let mut hi = models
        .iter()
        .zip(power_prices)
        .map(|(m, &nu)| nu * m.power_slope(m.w_lo))
        .fold(0.0, f64::max);
    if floor == budget {
        return Ok(Budgeted {
            w: models.iter().map(|m| m.w_lo).collect(),
            multiplier: hi,
        });
    }
    let mut lo = 0.0;
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let used: f64 = models
            .iter()
            .zip(power_prices)
            .map(|(m, &nu)| m.best_bandwidth(nu, bandwidth_price + mid))
            .sum();
        if used > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let w = bandwidths(models, power_prices, bandwidth_price + hi);
    if w.iter().sum::<f64>() > budget {
        return Ok(Budgeted {
            w: models.iter().map(|m| m.w_lo).collect(),
            multiplier: hi,
        });
    }
    Ok(Budgeted { w, multiplier: hi })
}

/// Greedy admission: takes users in increasing `w_min` order (ties by
/// index) while the running total of `w_min` stays within `budget`. Users
/// whose `w_min` exceeds their cap are never admitted. Returns the admitted
/// positions in ascending order.
pub fn admit_smallest_first(models: &[ServeModel], budget: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..models.len())
        .filter(|&i| models[i].is_feasible())
        .collect();
    order.sort_by(|&a, &b| models[a].w_lo.total_cmp(&models[b].w_lo).then(a.cmp(&b)));
    let mut used = 0.0;
    let mut admitted = Vec::new();
    for i in order {
        if used + models[i].w_lo > budget {
            break;
        }
        used += models[i].w_lo;
        admitted.push(i);
    }
    admitted.sort_unstable();
    admitted
}
