//! Simplified problem: served users run at `p_max` on `w_min`, so offloading
//! user `i` saves `p_max w_min_i` of power and costs the extra bandwidth
//! `max(Φ_{k*,i} - w_min_i, 0)` out of the spare bandwidth `W - Σ w_min`.
//! That is a 0-1 knapsack.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::math::{ceil, floor};
use crate::model::{min_bandwidth, BidMatrix, Scenario};
use crate::{Error, Result};

/// Default DP step is `ΔW / DEFAULT_RESOLUTION_DIVISOR`.
pub const DEFAULT_RESOLUTION_DIVISOR: f64 = 1e5;

/// Default cap on `items × (capacity + 1)` decision cells.
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq)]
pub struct SimplifiedOraInstance {
    /// Spare CBS bandwidth, Hz. Negative when even `Σ w_min` does not fit.
    pub delta_w: f64,
    /// Extra bandwidth to offload each user, Hz (zero for ineligible users).
    pub delta_phi: Vec<f64>,
    /// Power saved by offloading each user, `p_max w_min`.
    pub value: Vec<f64>,
    /// The user has a covering SBS.
    pub eligible: Vec<bool>,
}

impl SimplifiedOraInstance {
    /// Serving everyone at `w_min` already exceeds the total bandwidth.
    pub fn is_bandwidth_deficient(&self) -> bool {
        self.delta_w < 0.0
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    /// `ΔW / DEFAULT_RESOLUTION_DIVISOR`, or 1 Hz when there is no spare bandwidth.
    pub fn default_resolution(&self) -> f64 {
        if self.delta_w > 0.0 {
            self.delta_w / DEFAULT_RESOLUTION_DIVISOR
        } else {
            1.0
        }
    }
}

pub fn simplify_to_knapsack(scenario: &Scenario, bids: &BidMatrix) -> SimplifiedOraInstance {
    let cfg = &scenario.config;
    let n = scenario.n_users();
    let w_min: Vec<f64> = (0..n)
        .map(|i| {
            min_bandwidth(
                scenario.rate_demand[i],
                scenario.g_cbs[i],
                cfg.p_max,
                cfg.noise_psd,
            )
        })
        .collect();
    let mut delta_phi = Vec::with_capacity(n);
    let mut eligible = Vec::with_capacity(n);
    for (i, &wm) in w_min.iter().enumerate() {
        match bids.best(i) {
            Some((_, phi)) => {
                delta_phi.push((phi - wm).max(0.0));
                eligible.push(true);
            }
            None => {
                delta_phi.push(0.0);
                eligible.push(false);
            }
        }
    }
    SimplifiedOraInstance {
        delta_w: cfg.total_bandwidth - w_min.iter().sum::<f64>(),
        value: w_min.iter().map(|&w| cfg.p_max * w).collect(),
        delta_phi,
        eligible,
    }
}

/// Integer capacity `⌊ΔW / res⌋` (zero when ΔW < 0) and per-user weights
/// `⌈Δφ / res⌉`. Rounding is conservative: any selection that fits the
/// integer capacity fits the real one.
pub fn discretize(instance: &SimplifiedOraInstance, resolution: f64) -> Result<(u64, Vec<u64>)> {
    if resolution.is_nan() || resolution <= 0.0 || resolution.is_infinite() {
        return Err(Error::Domain {
            what: "resolution",
            value: resolution,
        });
    }
    let capacity = if instance.delta_w > 0.0 {
        floor(instance.delta_w / resolution) as u64
    } else {
        0
    };
    let weights = instance
        .delta_phi
        .iter()
        .map(|&d| ceil(d / resolution) as u64)
        .collect();
    Ok((capacity, weights))
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackSelection {
    /// Offloaded users, ascending.
    pub selected: Vec<usize>,
    pub value: f64,
    pub capacity: u64,
    pub weights: Vec<u64>,
}

/// Value first, then item count.
fn rank(a: (f64, u32), b: (f64, u32)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

pub fn knapsack_dp(instance: &SimplifiedOraInstance, resolution: f64) -> Result<KnapsackSelection> {
    knapsack_dp_with_budget(instance, resolution, DEFAULT_TABLE_BUDGET)
}

/// 0-1 knapsack over the eligible users on the discretised instance.
///
/// Among maximum-value selections the one with more items wins, then the
/// lexicographically smallest index list.
pub fn knapsack_dp_with_budget(
    instance: &SimplifiedOraInstance,
    resolution: f64,
    table_budget: u64,
) -> Result<KnapsackSelection> {
    let (capacity, weights) = discretize(instance, resolution)?;
    let items: Vec<usize> = (0..instance.len())
        .filter(|&i| instance.eligible[i] && weights[i] <= capacity)
        .collect();
    let width = capacity as usize + 1;
    let cells = (items.len() as u64).saturating_mul(capacity + 1);
    if cells > table_budget {
        return Err(Error::TableTooLarge {
            cells,
            budget: table_budget,
            suggested_resolution: resolution * cells as f64 / table_budget as f64,
        });
    }

    // Items are folded in from the back, so `take[t]` answers "does the best
    // selection from items t.. take item t"; preferring to take on ties
    // favours earlier indices.
    let mut best = alloc::vec![(0.0f64, 0u32); width];
    let mut take = alloc::vec![0u64; (cells as usize).div_ceil(64)];
    for t in (0..items.len()).rev() {
        let i = items[t];
        let wt = weights[i] as usize;
        for c in (wt..width).rev() {
            let (v, k) = best[c - wt];
            let cand = (v + instance.value[i], k + 1);
            if rank(cand, best[c]) != Ordering::Less {
                best[c] = cand;
                let bit = t * width + c;
                take[bit / 64] |= 1 << (bit % 64);
            }
        }
    }

    let mut selected = Vec::new();
    let mut c = capacity as usize;
    for (t, &i) in items.iter().enumerate() {
        let bit = t * width + c;
        if take[bit / 64] & (1 << (bit % 64)) != 0 {
            selected.push(i);
            c -= weights[i] as usize;
        }
    }
    Ok(KnapsackSelection {
        value: selected.iter().map(|&i| instance.value[i]).sum(),
        selected,
        capacity,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn items(values: &[f64], weights: &[f64], delta_w: f64) -> SimplifiedOraInstance {
        SimplifiedOraInstance {
            delta_w,
            delta_phi: weights.to_vec(),
            value: values.to_vec(),
            eligible: vec![true; values.len()],
        }
    }

    #[test]
    fn textbook_instance() {
        let inst = items(&[6.0, 5.0, 5.0], &[3.0, 2.0, 2.0], 4.0);
        let sel = knapsack_dp(&inst, 1.0).unwrap();
        assert_eq!(sel.value, 10.0);
        assert_eq!(sel.selected, vec![1, 2]);
    }

    #[test]
    fn zero_capacity_selects_nothing() {
        let inst = items(&[1.0, 2.0], &[0.5, 0.25], 0.0);
        let sel = knapsack_dp(&inst, 0.1).unwrap();
        assert!(sel.selected.is_empty());
        assert_eq!(sel.value, 0.0);
    }

    #[test]
    fn zero_weights_are_free() {
        let inst = items(&[1.0, 2.0, 3.0], &[0.0, 0.0, 0.0], 0.0);
        assert_eq!(knapsack_dp(&inst, 1.0).unwrap().selected, vec![0, 1, 2]);
    }

    #[test]
    fn ties_prefer_more_items_then_earlier_indices() {
        let inst = items(&[4.0, 2.0, 2.0], &[2.0, 1.0, 1.0], 2.0);
        assert_eq!(knapsack_dp(&inst, 1.0).unwrap().selected, vec![1, 2]);
        let inst = items(&[3.0, 3.0, 3.0], &[1.0, 1.0, 1.0], 2.0);
        assert_eq!(knapsack_dp(&inst, 1.0).unwrap().selected, vec![0, 1]);
    }

    #[test]
    fn rounding_is_conservative() {
        // 0.35 + 0.35 = 0.7 <= 0.75, but each rounds up to 4 steps of 0.1
        let inst = items(&[1.0, 1.0], &[0.35, 0.35], 0.75);
        let sel = knapsack_dp(&inst, 0.1).unwrap();
        assert_eq!(sel.selected.len(), 1);
    }

    #[test]
    fn ineligible_users_are_skipped() {
        let mut inst = items(&[5.0, 1.0], &[0.0, 0.0], 1.0);
        inst.eligible[0] = false;
        assert_eq!(knapsack_dp(&inst, 1.0).unwrap().selected, vec![1]);
    }

    #[test]
    fn oversized_table_is_refused() {
        let inst = items(&[1.0; 10], &[1.0; 10], 1e6);
        match knapsack_dp_with_budget(&inst, 1.0, 1000) {
            Err(Error::TableTooLarge {
                suggested_resolution,
                ..
            }) => assert!(suggested_resolution > 1.0),
            other => panic!("{other:?}"),
        }
        assert!(knapsack_dp(&inst, 0.0).is_err());
    }
}
