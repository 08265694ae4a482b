use alloc::vec::Vec;

use crate::allocation::{allocate, ServeModel};
use crate::model::{serving_cost, Allocation, Association, BidMatrix, Scenario};
use crate::{Error, Result};

/// Power/bandwidth allocation for a fixed set of CBS-served users.
#[derive(Debug, Clone, PartialEq)]
pub struct CraProblem {
    /// Scenario indices of the served users.
    pub served_users: Vec<usize>,
    pub gains: Vec<f64>,
    pub r_min: Vec<f64>,
    /// Bandwidth left for the CBS after the SBS grants, Hz.
    pub remaining_w: f64,
    pub p_max: f64,
    pub w_max: f64,
    pub c_p: f64,
    pub c_w: f64,
    pub gamma: f64,
    pub n0: f64,
}

/// Allocation for the served users, in `served_users` order.
#[derive(Debug, Clone, PartialEq)]
pub struct CraSolution {
    pub w: Vec<f64>,
    pub p: Vec<f64>,
    pub cost: f64,
    /// Multiplier on the bandwidth budget.
    pub multiplier: f64,
}

impl CraProblem {
    pub fn new(scenario: &Scenario, served_users: Vec<usize>, remaining_w: f64) -> Self {
        let cfg = &scenario.config;
        Self {
            gains: served_users.iter().map(|&i| scenario.g_cbs[i]).collect(),
            r_min: served_users
                .iter()
                .map(|&i| scenario.rate_demand[i])
                .collect(),
            served_users,
            remaining_w,
            p_max: cfg.p_max,
            w_max: cfg.w_max,
            c_p: cfg.c_p,
            c_w: cfg.c_w,
            gamma: cfg.gamma,
            n0: cfg.noise_psd,
        }
    }

    /// Serves every `mu = 1` user with what is left after paying each
    /// offloaded user's SBS its bid.
    pub fn from_association(
        scenario: &Scenario,
        bids: &BidMatrix,
        association: &Association,
    ) -> Self {
        let granted: f64 = offload_grant(bids, association);
        Self::new(
            scenario,
            association.served_users(),
            scenario.config.total_bandwidth - granted,
        )
    }

    pub fn len(&self) -> usize {
        self.served_users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.served_users.is_empty()
    }

    pub fn models(&self) -> Vec<ServeModel> {
        self.gains
            .iter()
            .zip(&self.r_min)
            .map(|(&g, &r)| ServeModel::new(r, g, self.p_max, self.w_max, self.n0))
            .collect()
    }

    pub fn cost(&self, w: &[f64], p: &[f64]) -> f64 {
        w.iter()
            .zip(p)
            .map(|(&w, &p)| serving_cost(self.c_p, self.c_w, self.gamma, w, p))
            .sum()
    }

    /// Spreads a solution back over all `n_users`; unserved entries are zero.
    pub fn scatter(&self, solution: &CraSolution, n_users: usize) -> Allocation {
        let mut alloc = Allocation::zeros(n_users);
        for (j, &i) in self.served_users.iter().enumerate() {
            alloc.w[i] = solution.w[j];
            alloc.p[i] = solution.p[j];
        }
        alloc
    }

    pub(crate) fn infeasible(&self, deficit: f64, stranded: Vec<usize>) -> Error {
        Error::Infeasible {
            deficit,
            stranded: stranded.into_iter().map(|j| self.served_users[j]).collect(),
        }
    }
}

/// Bandwidth granted to SBSs for the offloaded users of `association`.
pub fn offload_grant(bids: &BidMatrix, association: &Association) -> f64 {
    association
        .beta
        .iter()
        .enumerate()
        .filter_map(|(i, b)| b.and_then(|k| bids.phi(k, i)))
        .sum()
}

/// Reference solver: the rate constraint is tight, so each user's PSD follows
/// from its bandwidth and the problem is separable convex in bandwidth with
/// one coupling budget.
pub fn cra_solve_direct(problem: &CraProblem) -> Result<CraSolution> {
    if problem.is_empty() {
        return Ok(CraSolution {
            w: Vec::new(),
            p: Vec::new(),
            cost: 0.0,
            multiplier: 0.0,
        });
    }
    let models = problem.models();
    let prices = alloc::vec![problem.c_p; models.len()];
    let out = allocate(
        &models,
        &prices,
        problem.gamma * problem.c_w,
        problem.remaining_w,
    )
    .map_err(|s| problem.infeasible(s.deficit, s.stranded))?;
    let p: Vec<f64> = models
        .iter()
        .zip(&out.w)
        .map(|(m, &w)| m.power(w))
        .collect();
    Ok(CraSolution {
        cost: problem.cost(&out.w, &p),
        w: out.w,
        p,
        multiplier: out.multiplier,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{achieved_rate, generate_scenario};
    use crate::ScenarioConfig;

    fn problem(n: usize, budget_scale: f64) -> CraProblem {
        let s = generate_scenario(&ScenarioConfig {
            n_users: n,
            seed: 9,
            ..ScenarioConfig::default()
        })
        .unwrap();
        let mut p = CraProblem::new(&s, (0..n).collect(), 0.0);
        let floor: f64 = p.models().iter().map(|m| m.w_lo).sum();
        p.remaining_w = floor * budget_scale;
        p
    }

    #[test]
    fn empty_served_set() {
        let p = problem(0, 1.0);
        let sol = cra_solve_direct(&p).unwrap();
        assert_eq!(sol.cost, 0.0);
        assert!(sol.w.is_empty());
    }

    #[test]
    fn binding_budget_runs_at_full_power() {
        let p = problem(12, 1.0);
        let sol = cra_solve_direct(&p).unwrap();
        for (m, (&w, &pw)) in p.models().iter().zip(sol.w.iter().zip(&sol.p)) {
            assert_eq!(w, m.w_lo);
            assert_eq!(pw, p.p_max);
        }
    }

    #[test]
    fn rate_is_tight_at_optimum() {
        let p = problem(25, 1.3);
        let sol = cra_solve_direct(&p).unwrap();
        for j in 0..p.len() {
            let r = achieved_rate(sol.w[j], sol.p[j], p.gains[j], p.n0);
            assert!(((r - p.r_min[j]) / p.r_min[j]).abs() < 1e-9);
            assert!(sol.w[j] <= p.w_max && sol.p[j] <= p.p_max);
        }
        assert!(sol.w.iter().sum::<f64>() <= p.remaining_w);
    }

    #[test]
    fn shortfall_lists_scenario_users() {
        let mut p = problem(5, 0.5);
        p.served_users = alloc::vec![10, 11, 12, 13, 14];
        match cra_solve_direct(&p) {
            Err(Error::Infeasible { deficit, stranded }) => {
                assert!(deficit > 0.0);
                assert!(stranded.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }
}
