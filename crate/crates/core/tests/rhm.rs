use hetnet_core::baselines::solve_dsm;
use hetnet_core::model::{achieved_rate, generate_scenario, min_bandwidth};
use hetnet_core::rhm::{offload_grant, solve_rhm, CraSolver};
use hetnet_core::{BidMatrix, Scenario, ScenarioConfig, SolveOutcome};

fn scenario(seed: u64, n: usize) -> Scenario {
    generate_scenario(&ScenarioConfig {
        seed,
        n_users: n,
        ..ScenarioConfig::default()
    })
    .unwrap()
}

/// Bandwidth actually used: CBS allocations plus SBS grants.
fn used_bandwidth(bids: &BidMatrix, out: &SolveOutcome) -> f64 {
    out.allocation.total_bandwidth() + offload_grant(bids, &out.association)
}

#[test]
fn no_offload_matches_direct_serving() {
    // SBS rewards so large that every bid loses to local service
    for seed in 0..5 {
        let mut s = scenario(seed, 60);
        s.config.eta = 1e6;
        let bids = BidMatrix::compute(&s);
        let rhm = solve_rhm(&s, &bids, &CraSolver::Direct).unwrap();
        assert_eq!(rhm.offloaded_count, 0);
        assert_eq!(rhm, solve_dsm(&s).unwrap());
    }
    // nothing covered at all
    let s = scenario(3, 30);
    let uncovered = Scenario::from_gains(
        s.config.clone(),
        s.g_cbs.clone(),
        vec![vec![None; 30]; s.n_sbs()],
    )
    .unwrap();
    let bids = BidMatrix::compute(&uncovered);
    assert_eq!(
        solve_rhm(&uncovered, &bids, &CraSolver::Direct).unwrap(),
        solve_dsm(&uncovered).unwrap()
    );
}

#[test]
fn allocations_fit_the_budget_and_meet_demand() {
    for seed in 0..20 {
        let s = scenario(seed, 50 + 25 * seed as usize);
        let bids = BidMatrix::compute(&s);
        let out = solve_rhm(&s, &bids, &CraSolver::Direct).unwrap();
        if out.repaired {
            continue;
        }
        assert!(used_bandwidth(&bids, &out) <= s.config.total_bandwidth);
        for i in out.association.served_users() {
            let (w, p) = (out.allocation.w[i], out.allocation.p[i]);
            assert!(w <= s.config.w_max && p <= s.config.p_max);
            let got = achieved_rate(w, p, s.g_cbs[i], s.config.noise_psd);
            let r = s.rate_demand[i];
            assert!(
                (got - r).abs() <= 1e-9 * r,
                "seed {seed} user {i}: {got} vs {r}"
            );
        }
        assert_eq!(out.service_rate, 1.0);
    }
}

#[test]
fn tight_budget_triggers_flagged_repair() {
    let mut s = scenario(2, 300);
    let floor: f64 = (0..300)
        .map(|i| {
            min_bandwidth(
                s.rate_demand[i],
                s.g_cbs[i],
                s.config.p_max,
                s.config.noise_psd,
            )
        })
        .sum();
    s.config.total_bandwidth = 0.15 * floor;
    let bids = BidMatrix::compute(&s);
    let out = solve_rhm(&s, &bids, &CraSolver::Direct).unwrap();
    assert!(out.repaired);
    assert!(used_bandwidth(&bids, &out) <= s.config.total_bandwidth * (1.0 + 1e-12));
    assert!(out.service_rate >= solve_dsm(&s).unwrap().service_rate);
}

#[test]
fn offloading_never_hurts_service_and_lowers_cost() {
    let (mut rhm_cost, mut dsm_cost) = (0.0, 0.0);
    for seed in 0..10 {
        for n in [100, 300, 500, 700] {
            let s = scenario(seed, n);
            let bids = BidMatrix::compute(&s);
            let rhm = solve_rhm(&s, &bids, &CraSolver::Direct).unwrap();
            let dsm = solve_dsm(&s).unwrap();
            assert!(dsm.service_rate <= rhm.service_rate, "seed {seed} n {n}");
            rhm_cost += rhm.avg_cost_per_user();
            dsm_cost += dsm.avg_cost_per_user();
        }
    }
    assert!(rhm_cost <= dsm_cost);
}

#[test]
fn dsm_service_rate_follows_the_floor_sum() {
    for seed in 0..3 {
        let mut previous = 1.0;
        for n in (300..=700).step_by(20) {
            let s = scenario(seed, n);
            let c = &s.config;
            let floor: f64 = (0..n)
                .map(|i| min_bandwidth(s.rate_demand[i], s.g_cbs[i], c.p_max, c.noise_psd))
                .sum();
            let rate = solve_dsm(&s).unwrap().service_rate;
            assert_eq!(rate == 1.0, floor <= c.total_bandwidth, "seed {seed} n {n}");
            assert!(rate <= previous);
            previous = rate;
        }
    }
}

#[test]
fn association_time_grows_at_most_linearly() {
    use hetnet_core::rhm::hua_associate;
    use std::time::Instant;

    let median_time = |n: usize| {
        let s = scenario(5, n);
        let bids = BidMatrix::compute(&s);
        let mut t: Vec<f64> = (0..15)
            .map(|_| {
                let start = Instant::now();
                std::hint::black_box(hua_associate(&s, &bids));
                start.elapsed().as_secs_f64()
            })
            .collect();
        t.sort_by(f64::total_cmp);
        t[7]
    };
    let small = median_time(100);
    let large = median_time(1000);
    // 10x the users; allow generous slack for timer noise
    assert!(large <= 30.0 * small, "{small} -> {large}");
}
