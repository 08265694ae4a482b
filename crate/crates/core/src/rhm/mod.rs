//! Relaxed heuristic method: per-user association followed by convex
//! resource allocation for the users kept on the CBS.

mod cra;
mod dual;
mod hua;

use alloc::vec::Vec;

pub use cra::{cra_solve_direct, offload_grant, CraProblem, CraSolution};
pub use dual::{cra_solve_dual_ascent, DualAscentOptions, DualAscentResult, DualState, TracePoint};
pub use hua::hua_associate;

use crate::allocation::{admit_smallest_first, ServeModel};
use crate::model::{Association, BidMatrix, Scenario, SolveOutcome};
use crate::Result;

/// Which allocation solver runs after the association step.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum CraSolver {
    #[default]
    Direct,
    DualAscent(DualAscentOptions),
}

/// An association together with the users the CBS actually carries.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ServicePlan {
    pub association: Association,
    /// Users allocated CBS resources, ascending.
    pub admitted: Vec<usize>,
    pub remaining_w: f64,
    pub repaired: bool,
}

pub(crate) fn cbs_models(scenario: &Scenario) -> Vec<ServeModel> {
    let cfg = &scenario.config;
    scenario
        .g_cbs
        .iter()
        .zip(&scenario.rate_demand)
        .map(|(&g, &r)| ServeModel::new(r, g, cfg.p_max, cfg.w_max, cfg.noise_psd))
        .collect()
}

/// Admits the served users of `association` greedily when their minimum
/// bandwidths do not fit in what the SBS grants leave over. Offloads whose
/// grants alone exceed the total are revoked, largest bid first.
pub(crate) fn admit(
    scenario: &Scenario,
    bids: &BidMatrix,
    mut association: Association,
    models: &[ServeModel],
    mut repaired: bool,
) -> ServicePlan {
    let total = scenario.config.total_bandwidth;
    let mut revoked = Vec::new();
    let mut grant = offload_grant(bids, &association);
    while grant > total {
        let worst = (0..association.len())
            .filter_map(|i| association.beta[i].and_then(|k| Some((i, bids.phi(k, i)?))))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        let Some((i, _)) = worst else { break };
        association.serve(i);
        revoked.push(i);
        grant = offload_grant(bids, &association);
        repaired = true;
    }
    let remaining_w = total - grant;
    let candidates: Vec<usize> = association
        .served_users()
        .into_iter()
        .filter(|i| !revoked.contains(i))
        .collect();
    let fits = candidates.iter().all(|&i| models[i].is_feasible())
        && candidates.iter().map(|&i| models[i].w_lo).sum::<f64>() <= remaining_w;
    let admitted = if fits {
        candidates
    } else {
        repaired = true;
        let sub: Vec<ServeModel> = candidates.iter().map(|&i| models[i]).collect();
        admit_smallest_first(&sub, remaining_w)
            .into_iter()
            .map(|j| candidates[j])
            .collect()
    };
    ServicePlan {
        association,
        admitted,
        remaining_w,
        repaired,
    }
}

/// Makes a heuristic association feasible. While the served users' minimum
/// bandwidths do not fit, the covered served user with the largest `w_min`
/// whose offload frees bandwidth (or who cannot be served within `w_max`) is
/// offloaded, cheaper bid first on ties. Whatever still does not fit is
/// handled by [`admit`].
pub(crate) fn repair(
    scenario: &Scenario,
    bids: &BidMatrix,
    mut association: Association,
    models: &[ServeModel],
) -> ServicePlan {
    let total = scenario.config.total_bandwidth;
    let mut repaired = false;
    loop {
        let remaining = total - offload_grant(bids, &association);
        let served = association.served_users();
        let floor: f64 = served.iter().map(|&i| models[i].w_lo).sum();
        let stranded = served.iter().any(|&i| !models[i].is_feasible());
        if !stranded && floor <= remaining {
            break;
        }
        let pick = served
            .iter()
            .filter_map(|&i| {
                let (k, phi) = bids.best(i)?;
                let m = &models[i];
                (!m.is_feasible() || phi < m.w_lo).then_some((i, k, m.w_lo, phi))
            })
            .max_by(|a, b| {
                a.2.total_cmp(&b.2)
                    .then(b.3.total_cmp(&a.3))
                    .then(b.0.cmp(&a.0))
            });
        match pick {
            Some((i, k, _, _)) => {
                association.offload(i, k);
                repaired = true;
            }
            None => break,
        }
    }
    admit(scenario, bids, association, models, repaired)
}

/// Runs the association heuristic, repairs it if the allocation would be
/// infeasible, and solves the allocation with the chosen solver.
pub fn solve_rhm(
    scenario: &Scenario,
    bids: &BidMatrix,
    solver: &CraSolver,
) -> Result<SolveOutcome> {
    let models = cbs_models(scenario);
    let plan = repair(scenario, bids, hua_associate(scenario, bids), &models);
    let problem = CraProblem::new(scenario, plan.admitted, plan.remaining_w);
    let (solution, iterations, converged) = match solver {
        CraSolver::Direct => (cra_solve_direct(&problem)?, 0, true),
        CraSolver::DualAscent(options) => {
            let out = cra_solve_dual_ascent(&problem, options)?;
            (out.solution, out.state.iteration, out.converged)
        }
    };
    let allocation = problem.scatter(&solution, scenario.n_users());
    let mut outcome = SolveOutcome::assemble(scenario, bids, plan.association, allocation)?;
    outcome.iterations = iterations;
    outcome.converged = converged;
    outcome.repaired = plan.repaired;
    Ok(outcome)
}
