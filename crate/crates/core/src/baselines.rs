//! Direct serving: the CBS carries every user it can, with no offloading.

use crate::model::{Association, BidMatrix, Scenario, SolveOutcome};
use crate::rhm::{admit, cbs_models, cra_solve_direct, CraProblem};
use crate::Result;

/// Serves all users from the CBS with the full bandwidth. When the minimum
/// bandwidths do not fit, users are admitted in increasing `w_min` order,
/// which maximises the number served; the rest get nothing.
pub fn solve_dsm(scenario: &Scenario) -> Result<SolveOutcome> {
    let bids = BidMatrix::compute(scenario);
    let models = cbs_models(scenario);
    let plan = admit(
        scenario,
        &bids,
        Association::all_served(scenario.n_users()),
        &models,
        false,
    );
    let problem = CraProblem::new(scenario, plan.admitted, plan.remaining_w);
    let solution = cra_solve_direct(&problem)?;
    let allocation = problem.scatter(&solution, scenario.n_users());
    SolveOutcome::assemble(scenario, &bids, plan.association, allocation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate_scenario, min_bandwidth};
    use crate::ScenarioConfig;

    fn scenario(total_bandwidth: f64) -> Scenario {
        generate_scenario(&ScenarioConfig {
            n_users: 40,
            total_bandwidth,
            ..ScenarioConfig::default()
        })
        .unwrap()
    }

    fn floors(s: &Scenario) -> alloc::vec::Vec<f64> {
        let c = &s.config;
        s.g_cbs
            .iter()
            .map(|&g| min_bandwidth(c.r_min, g, c.p_max, c.noise_psd))
            .collect()
    }

    #[test]
    fn ample_bandwidth_serves_everyone() {
        let out = solve_dsm(&scenario(1e9)).unwrap();
        assert_eq!(out.service_rate, 1.0);
        assert_eq!(out.offloaded_count, 0);
    }

    #[test]
    fn total_outage_below_smallest_floor() {
        let s = scenario(1e9);
        let smallest = floors(&s).into_iter().fold(f64::INFINITY, f64::min);
        let out = solve_dsm(&scenario(0.5 * smallest)).unwrap();
        assert_eq!(out.service_rate, 0.0);
        assert_eq!(out.total_cost, 0.0);
    }

    #[test]
    fn partial_service_counts_admitted_users() {
        let s = scenario(1e9);
        let sum: f64 = floors(&s).iter().sum();
        let out = solve_dsm(&scenario(0.6 * sum)).unwrap();
        assert!(out.service_rate > 0.0 && out.service_rate < 1.0);
        let served = out.allocation.w.iter().filter(|&&w| w > 0.0).count();
        assert_eq!(out.service_rate, served as f64 / 40.0);
        assert!(out.allocation.total_bandwidth() <= 0.6 * sum);
    }
}
