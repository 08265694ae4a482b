use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::Range;

use crate::allocation::{allocate, ServeModel};
use crate::model::{serving_cost, Allocation, Association, BidMatrix, Scenario, SolveOutcome};
use crate::rhm::{cbs_models, cra_solve_direct, CraProblem};
use crate::{Error, Result};

/// Largest instance the exhaustive search accepts by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Optimal allocation for a fixed served set and CBS bandwidth budget.
///
/// Returns the allocation over all users (zero outside `served_set`) and its
/// serving cost.
pub fn alloc_subproblem(
    scenario: &Scenario,
    served_set: &[usize],
    remaining_w: f64,
) -> Result<(Allocation, f64)> {
    let problem = CraProblem::new(scenario, served_set.to_vec(), remaining_w);
    let solution = cra_solve_direct(&problem)?;
    Ok((
        problem.scatter(&solution, scenario.n_users()),
        solution.cost,
    ))
}

/// Best association seen over part of the search space.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchState {
    /// `(mask, cost)` of the incumbent; bit `j` offloads the `j`-th covered user.
    pub best: Option<(u64, f64)>,
    /// Smallest bandwidth shortfall among infeasible masks, Hz.
    pub min_deficit: f64,
    pub evaluated: u64,
}

impl SearchState {
    pub fn empty() -> Self {
        Self {
            best: None,
            min_deficit: f64::INFINITY,
            evaluated: 0,
        }
    }

    /// Order-independent combination of two partial searches.
    pub fn merge(self, other: Self) -> Self {
        let best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(if better(b, a) { b } else { a }),
            (a, b) => a.or(b),
        };
        Self {
            best,
            min_deficit: self.min_deficit.min(other.min_deficit),
            evaluated: self.evaluated + other.evaluated,
        }
    }
}

/// Lower cost, then fewer offloads, then lexicographically smaller `mu`
/// (the first differing user is offloaded in the smaller one).
fn better(a: (u64, f64), b: (u64, f64)) -> bool {
    match a.1.total_cmp(&b.1) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => match a.0.count_ones().cmp(&b.0.count_ones()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                let diff = a.0 ^ b.0;
                diff != 0 && a.0 & (1 << diff.trailing_zeros()) != 0
            }
        },
    }
}

/// Exhaustive search over which covered users are offloaded to their
/// cheapest SBS. Uncovered users are always CBS-served.
#[derive(Debug)]
pub struct OraSearch<'a> {
    scenario: &'a Scenario,
    bids: &'a BidMatrix,
    models: Vec<ServeModel>,
    /// Covered users, ascending; bit `j` of a mask refers to `free[j]`.
    free: Vec<usize>,
    free_bit: Vec<Option<u32>>,
    /// `(k*, Φ_{k*,i})` per user.
    best_bid: Vec<Option<(usize, f64)>>,
    /// Slack-budget optimum per user: bandwidth and serving cost.
    w_free: Vec<f64>,
    cost_free: Vec<f64>,
}

impl<'a> OraSearch<'a> {
    pub fn new(scenario: &'a Scenario, bids: &'a BidMatrix, cap: usize) -> Result<Self> {
        let n = scenario.n_users();
        if n > cap || n > 63 {
            return Err(Error::TooLarge {
                n_users: n,
                cap: cap.min(63),
            });
        }
        let cfg = &scenario.config;
        let models = cbs_models(scenario);
        let best_bid: Vec<_> = (0..n).map(|i| bids.best(i)).collect();
        let free: Vec<usize> = (0..n).filter(|&i| best_bid[i].is_some()).collect();
        let mut free_bit = alloc::vec![None; n];
        for (j, &i) in free.iter().enumerate() {
            free_bit[i] = Some(j as u32);
        }
        let w_free: Vec<f64> = models
            .iter()
            .map(|m| m.best_bandwidth(cfg.c_p, cfg.gamma * cfg.c_w))
            .collect();
        let cost_free = models
            .iter()
            .zip(&w_free)
            .map(|(m, &w)| serving_cost(cfg.c_p, cfg.c_w, cfg.gamma, w, m.power(w)))
            .collect();
        Ok(Self {
            scenario,
            bids,
            models,
            free,
            free_bit,
            best_bid,
            w_free,
            cost_free,
        })
    }

    /// Number of associations to search.
    pub fn mask_count(&self) -> u64 {
        1u64 << self.free.len()
    }

    fn offloaded(&self, mask: u64, i: usize) -> bool {
        self.free_bit[i].is_some_and(|b| mask & (1 << b) != 0)
    }

    /// Cost of the best allocation under `mask`, or the bandwidth deficit.
    pub fn evaluate(&self, mask: u64) -> core::result::Result<f64, f64> {
        let cfg = &self.scenario.config;
        let n = self.scenario.n_users();
        let mut grant = 0.0;
        let mut floor = 0.0;
        let mut free_sum = 0.0;
        let mut stranded = false;
        for i in 0..n {
            if self.offloaded(mask, i) {
                grant += self.best_bid[i].map_or(0.0, |(_, phi)| phi);
            } else {
                floor += self.models[i].w_lo;
                free_sum += self.w_free[i];
                stranded |= !self.models[i].is_feasible();
            }
        }
        let budget = cfg.total_bandwidth - grant;
        if grant > cfg.total_bandwidth || floor > budget {
            return Err(floor - budget);
        }
        if stranded {
            return Err(f64::INFINITY);
        }
        let offload_cost = |i: usize| {
            let phi = self.best_bid[i].map_or(0.0, |(_, phi)| phi);
            cfg.gamma * cfg.c_w * phi
        };
        if free_sum <= budget {
            let mut total = 0.0;
            for i in 0..n {
                total += if self.offloaded(mask, i) {
                    offload_cost(i)
                } else {
                    self.cost_free[i]
                };
            }
            return Ok(total);
        }
        let served: Vec<usize> = (0..n).filter(|&i| !self.offloaded(mask, i)).collect();
        let sub: Vec<ServeModel> = served.iter().map(|&i| self.models[i]).collect();
        let prices = alloc::vec![cfg.c_p; sub.len()];
        let out = allocate(&sub, &prices, cfg.gamma * cfg.c_w, budget).map_err(|s| s.deficit)?;
        let mut total = 0.0;
        let mut next = 0;
        for i in 0..n {
            total += if self.offloaded(mask, i) {
                offload_cost(i)
            } else {
                let w = out.w[next];
                next += 1;
                serving_cost(cfg.c_p, cfg.c_w, cfg.gamma, w, self.models[i].power(w))
            };
        }
        Ok(total)
    }

    /// Searches the masks in `range`.
    pub fn search(&self, range: Range<u64>) -> SearchState {
        let mut state = SearchState::empty();
        let total = self.scenario.config.total_bandwidth;
        for mask in range {
            state.evaluated += 1;
            // cheap prune: the grants alone must fit
            let mut grant = 0.0;
            for (j, &i) in self.free.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    grant += self.best_bid[i].map_or(0.0, |(_, phi)| phi);
                }
            }
            if grant > total {
                continue;
            }
            match self.evaluate(mask) {
                Ok(cost) => {
                    let cand = (mask, cost);
                    if state.best.is_none_or(|b| better(cand, b)) {
                        state.best = Some(cand);
                    }
                }
                Err(deficit) => state.min_deficit = state.min_deficit.min(deficit),
            }
        }
        state
    }

    pub fn association(&self, mask: u64) -> Association {
        let mut a = Association::all_served(self.scenario.n_users());
        for i in 0..self.scenario.n_users() {
            if self.offloaded(mask, i) {
                if let Some((k, _)) = self.best_bid[i] {
                    a.offload(i, k);
                }
            }
        }
        a
    }

    /// Turns the incumbent into a full outcome.
    pub fn finish(&self, state: &SearchState) -> Result<SolveOutcome> {
        let Some((mask, _)) = state.best else {
            let stranded = (0..self.scenario.n_users())
                .filter(|&i| !self.models[i].is_feasible())
                .collect();
            return Err(Error::Infeasible {
                deficit: state.min_deficit,
                stranded,
            });
        };
        let association = self.association(mask);
        let problem = CraProblem::from_association(self.scenario, self.bids, &association);
        let solution = cra_solve_direct(&problem)?;
        let allocation = problem.scatter(&solution, self.scenario.n_users());
        SolveOutcome::assemble(self.scenario, self.bids, association, allocation)
    }
}

/// Exhaustive search with the default size cap.
pub fn solve_ora_exact(scenario: &Scenario, bids: &BidMatrix) -> Result<SolveOutcome> {
    solve_ora_exact_with_cap(scenario, bids, DEFAULT_ENUMERATION_CAP)
}

pub fn solve_ora_exact_with_cap(
    scenario: &Scenario,
    bids: &BidMatrix,
    cap: usize,
) -> Result<SolveOutcome> {
    let search = OraSearch::new(scenario, bids, cap)?;
    let state = search.search(0..search.mask_count());
    let mut outcome = search.finish(&state)?;
    outcome.iterations = state.evaluated;
    Ok(outcome)
}
