use alloc::vec::Vec;

use super::{min_bandwidth, Scenario};

/// Bandwidth each SBS asks for in exchange for serving each covered user.
///
/// All matrices are indexed `[k][i]` (SBS, user); `None` marks a user
/// outside SBS `k`'s coverage.
#[derive(Debug, Clone, PartialEq)]
pub struct BidMatrix {
    /// Bandwidth the SBS needs to deliver the user's rate at its own PSD.
    pub phi_serve: Vec<Vec<Option<f64>>>,
    /// Extra bandwidth asked as a reward.
    pub phi_reward: Vec<Vec<Option<f64>>>,
    pub phi_total: Vec<Vec<Option<f64>>>,
    /// Cheapest covering SBS per user; ties go to the lowest index.
    pub best_sbs: Vec<Option<usize>>,
}

impl BidMatrix {
    pub fn compute(scenario: &Scenario) -> Self {
        let cfg = &scenario.config;
        let n = scenario.n_users();
        let mut phi_serve = Vec::with_capacity(scenario.n_sbs());
        let mut phi_reward = Vec::with_capacity(scenario.n_sbs());
        let mut phi_total = Vec::with_capacity(scenario.n_sbs());
        for row in &scenario.g_sbs {
            let serve: Vec<Option<f64>> = row
                .iter()
                .zip(&scenario.rate_demand)
                .map(|(g, &r)| g.map(|g| min_bandwidth(r, g, cfg.p_s, cfg.noise_psd)))
                .collect();
            let reward: Vec<Option<f64>> = serve.iter().map(|s| s.map(|s| cfg.eta * s)).collect();
            let total: Vec<Option<f64>> = serve
                .iter()
                .zip(&reward)
                .map(|(s, r)| s.zip(*r).map(|(s, r)| s + r))
                .collect();
            phi_serve.push(serve);
            phi_reward.push(reward);
            phi_total.push(total);
        }
        let best_sbs = (0..n)
            .map(|i| {
                let mut best: Option<(usize, f64)> = None;
                for (k, row) in phi_total.iter().enumerate() {
                    if let Some(phi) = row[i] {
                        if best.is_none_or(|(_, b)| phi < b) {
                            best = Some((k, phi));
                        }
                    }
                }
                best.map(|(k, _)| k)
            })
            .collect();
        Self {
            phi_serve,
            phi_reward,
            phi_total,
            best_sbs,
        }
    }

    pub fn n_users(&self) -> usize {
        self.best_sbs.len()
    }

    /// Total bid of SBS `k` for user `i`, if it covers the user.
    pub fn phi(&self, k: usize, i: usize) -> Option<f64> {
        self.phi_total.get(k)?.get(i).copied().flatten()
    }

    /// `(k*, Φ_{k*,i})` for user `i`, if any SBS covers it.
    pub fn best(&self, i: usize) -> Option<(usize, f64)> {
        let k = self.best_sbs.get(i).copied().flatten()?;
        Some((k, self.phi(k, i)?))
    }
}
