use crate::model::{min_bandwidth, Association, BidMatrix, Scenario};

/// Per-user serve-or-offload rule.
///
/// A covered user is served locally when `c_w Φ_{k*,i} >= c_w w_min_i +
/// c_p p_max` and offloaded to its cheapest SBS otherwise. Uncovered users
/// are always served. The bandwidth terms carry no `γ` weight here.
pub fn hua_associate(scenario: &Scenario, bids: &BidMatrix) -> Association {
    let cfg = &scenario.config;
    let mut association = Association::all_served(scenario.n_users());
    for i in 0..scenario.n_users() {
        let Some((k, phi)) = bids.best(i) else {
            continue;
        };
        let w_min = min_bandwidth(
            scenario.rate_demand[i],
            scenario.g_cbs[i],
            cfg.p_max,
            cfg.noise_psd,
        );
        let offload_cost = cfg.c_w * phi;
        let serve_cost = cfg.c_w * w_min + cfg.c_p * cfg.p_max;
        if offload_cost < serve_cost {
            association.offload(i, k);
        }
    }
    association
}
