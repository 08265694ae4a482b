use alloc::vec;
use alloc::vec::Vec;

use super::{achieved_rate, evaluate_cost, BidMatrix, Scenario};
use crate::{Error, Result};

/// Relative slack allowed when comparing an achieved rate with its demand.
pub const RATE_TOLERANCE: f64 = 1e-9;

/// Which base station carries each user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Association {
    /// `true` when the CBS serves the user.
    pub mu: Vec<bool>,
    /// Serving SBS for offloaded users; `Some` exactly when `mu` is `false`.
    pub beta: Vec<Option<usize>>,
}

impl Association {
    pub fn all_served(n: usize) -> Self {
        Self {
            mu: vec![true; n],
            beta: vec![None; n],
        }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn offload(&mut self, i: usize, k: usize) {
        self.mu[i] = false;
        self.beta[i] = Some(k);
    }

    pub fn serve(&mut self, i: usize) {
        self.mu[i] = true;
        self.beta[i] = None;
    }

    pub fn offloaded_count(&self) -> usize {
        self.mu.iter().filter(|&&m| !m).count()
    }

    pub fn served_users(&self) -> Vec<usize> {
        (0..self.mu.len()).filter(|&i| self.mu[i]).collect()
    }

    /// Checks complementarity and that every `beta` names a covering SBS.
    pub fn validate(&self, scenario: &Scenario) -> Result<()> {
        if self.mu.len() != scenario.n_users() || self.beta.len() != scenario.n_users() {
            return Err(Error::Inconsistent {
                user: self.mu.len().min(self.beta.len()),
                reason: "association length differs from number of users",
            });
        }
        for (i, (&mu, beta)) in self.mu.iter().zip(&self.beta).enumerate() {
            match (mu, beta) {
                (true, None) => {}
                (false, Some(k)) if scenario.covers(*k, i) => {}
                (false, Some(_)) => {
                    return Err(Error::Inconsistent {
                        user: i,
                        reason: "offloaded to an SBS that does not cover the user",
                    })
                }
                _ => {
                    return Err(Error::Inconsistent {
                        user: i,
                        reason: "user must be either CBS-served or offloaded",
                    })
                }
            }
        }
        Ok(())
    }
}

/// Per-user CBS bandwidth (Hz) and PSD (W/Hz). Zero for offloaded users.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub w: Vec<f64>,
    pub p: Vec<f64>,
}

impl Allocation {
    pub fn zeros(n: usize) -> Self {
        Self {
            w: vec![0.0; n],
            p: vec![0.0; n],
        }
    }

    pub fn total_bandwidth(&self) -> f64 {
        self.w.iter().sum()
    }

    /// Radiated power `p_i * w_i` per user, W.
    pub fn radiated_power(&self) -> Vec<f64> {
        self.w.iter().zip(&self.p).map(|(w, p)| w * p).collect()
    }
}

/// Everything a solver reports for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub association: Association,
    pub allocation: Allocation,
    pub total_cost: f64,
    pub per_user_cost: Vec<f64>,
    /// Fraction of users whose delivered rate meets the demand; 1 for an
    /// empty network.
    pub service_rate: f64,
    pub offloaded_count: usize,
    /// Seconds spent in the solver. Left at zero here; the runner fills it.
    pub wall_clock: f64,
    pub iterations: u64,
    /// `false` when an iterative solver stopped at its iteration limit.
    pub converged: bool,
    /// `true` when the association had to be changed after the fact to make
    /// the allocation feasible.
    pub repaired: bool,
}

impl SolveOutcome {
    /// Costs the pair, measures delivered rates and fills in the summary.
    pub fn assemble(
        scenario: &Scenario,
        bids: &BidMatrix,
        association: Association,
        allocation: Allocation,
    ) -> Result<Self> {
        let cost = evaluate_cost(scenario, &association, &allocation, bids)?;
        let rates = delivered_rates(scenario, bids, &association, &allocation);
        let n = scenario.n_users();
        let satisfied = rates
            .iter()
            .zip(&scenario.rate_demand)
            .filter(|(&got, &want)| got >= want * (1.0 - RATE_TOLERANCE))
            .count();
        let service_rate = if n == 0 {
            1.0
        } else {
            satisfied as f64 / n as f64
        };
        Ok(Self {
            offloaded_count: association.offloaded_count(),
            association,
            allocation,
            total_cost: cost.total,
            per_user_cost: cost.per_user,
            service_rate,
            wall_clock: 0.0,
            iterations: 0,
            converged: true,
            repaired: false,
        })
    }

    pub fn avg_cost_per_user(&self) -> f64 {
        if self.per_user_cost.is_empty() {
            0.0
        } else {
            self.total_cost / self.per_user_cost.len() as f64
        }
    }

    pub fn offload_fraction(&self) -> f64 {
        if self.association.is_empty() {
            0.0
        } else {
            self.offloaded_count as f64 / self.association.len() as f64
        }
    }
}

/// Rate each user actually receives: from the CBS allocation, or from the
/// serving SBS at its own PSD over the serving share of its bid.
pub fn delivered_rates(
    scenario: &Scenario,
    bids: &BidMatrix,
    association: &Association,
    allocation: &Allocation,
) -> Vec<f64> {
    let cfg = &scenario.config;
    (0..scenario.n_users())
        .map(|i| match association.beta[i] {
            None => achieved_rate(
                allocation.w[i],
                allocation.p[i],
                scenario.g_cbs[i],
                cfg.noise_psd,
            ),
            Some(k) => match (bids.phi_serve[k][i], scenario.g_sbs[k][i]) {
                (Some(w), Some(g)) => achieved_rate(w, cfg.p_s, g, cfg.noise_psd),
                _ => 0.0,
            },
        })
        .collect()
}
