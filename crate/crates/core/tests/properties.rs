use hetnet_core::model::{
    evaluate_cost, generate_scenario, min_bandwidth, min_power, min_power_rate_slope,
};
use hetnet_core::rhm::{hua_associate, solve_rhm, CraSolver};
use hetnet_core::{BidMatrix, ScenarioConfig};
use proptest::prelude::*;

const N0: f64 = 4e-21;

fn gain() -> impl Strategy<Value = f64> {
    (-16.0f64..-8.0).prop_map(|e| 10f64.powf(e))
}

fn rate() -> impl Strategy<Value = f64> {
    1e3f64..5e6
}

fn small_config() -> impl Strategy<Value = ScenarioConfig> {
    (any::<u64>(), 0usize..40, 0.0f64..2.0, 64e3f64..512e3).prop_map(|(seed, n, eta, r)| {
        ScenarioConfig {
            seed,
            n_users: n,
            eta,
            r_min: r,
            ..ScenarioConfig::default()
        }
    })
}

proptest! {
    #[test]
    fn min_bandwidth_inverts_min_power(r in rate(), g in gain(), p_max in 1e-9f64..1e-4) {
        let w = min_bandwidth(r, g, p_max, N0);
        let p = min_power(r, w, g, N0);
        prop_assert!((p - p_max).abs() <= 1e-9 * p_max, "{p} vs {p_max}");
    }

    #[test]
    fn min_power_increases_with_rate(r in rate(), w in 1e3f64..1e7, g in gain(), f in 1.001f64..2.0) {
        prop_assume!(r * f / w < 600.0);
        prop_assert!(min_power(r * f, w, g, N0) > min_power(r, w, g, N0));
        prop_assert!(min_power_rate_slope(r, w, g, N0) > 0.0);
    }

    #[test]
    fn min_power_decreases_with_bandwidth(r in rate(), w in 1e3f64..1e7, g in gain(), f in 1.001f64..2.0) {
        prop_assume!(r / w < 600.0);
        prop_assert!(min_power(r, w * f, g, N0) < min_power(r, w, g, N0));
    }

    #[test]
    fn total_bid_dominates_serving_bid(config in small_config()) {
        let s = generate_scenario(&config).unwrap();
        let bids = BidMatrix::compute(&s);
        for k in 0..s.n_sbs() {
            for i in 0..s.n_users() {
                match (bids.phi_serve[k][i], bids.phi_total[k][i]) {
                    (Some(serve), Some(total)) => {
                        prop_assert!(total >= serve);
                        prop_assert_eq!(total == serve, config.eta == 0.0);
                    }
                    (None, None) => {}
                    _ => prop_assert!(false, "bid defined in one matrix only"),
                }
            }
        }
    }

    #[test]
    fn generation_is_pure(config in small_config()) {
        prop_assert_eq!(generate_scenario(&config).unwrap(), generate_scenario(&config).unwrap());
    }

    #[test]
    fn cost_scales_with_prices(config in small_config(), k in -8i32..8, lambda in 0.01f64..100.0) {
        let s = generate_scenario(&config).unwrap();
        let bids = BidMatrix::compute(&s);
        let out = solve_rhm(&s, &bids, &CraSolver::Direct).unwrap();
        let base = evaluate_cost(&s, &out.association, &out.allocation, &bids).unwrap().total;
        let scaled_cost = |l: f64| {
            let mut t = s.clone();
            t.config.c_p *= l;
            t.config.c_w *= l;
            evaluate_cost(&t, &out.association, &out.allocation, &bids).unwrap().total
        };
        let pow2 = 2f64.powi(k);
        prop_assert_eq!(scaled_cost(pow2), pow2 * base);
        let c = scaled_cost(lambda);
        prop_assert!((c - lambda * base).abs() <= 1e-12 * lambda * base.abs());
    }

    #[test]
    fn association_ignores_common_price_scale(config in small_config(), lambda in 1e-3f64..1e3) {
        let s = generate_scenario(&config).unwrap();
        let bids = BidMatrix::compute(&s);
        let mut t = s.clone();
        t.config.c_p *= lambda;
        t.config.c_w *= lambda;
        let a = hua_associate(&s, &bids);
        let b = hua_associate(&t, &bids);
        // a user sitting on the decision boundary may flip under rounding
        let flips = a.mu.iter().zip(&b.mu).filter(|(x, y)| x != y).count();
        if flips > 0 {
            let cfg = &s.config;
            for i in (0..s.n_users()).filter(|&i| a.mu[i] != b.mu[i]) {
                let (_, phi) = bids.best(i).unwrap();
                let w_min = min_bandwidth(s.rate_demand[i], s.g_cbs[i], cfg.p_max, cfg.noise_psd);
                let lhs = cfg.c_w * phi;
                let rhs = cfg.c_w * w_min + cfg.c_p * cfg.p_max;
                prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
            }
        }
    }

    #[test]
    fn solver_outputs_respect_boxes(config in small_config()) {
        let s = generate_scenario(&config).unwrap();
        let bids = BidMatrix::compute(&s);
        let out = solve_rhm(&s, &bids, &CraSolver::Direct).unwrap();
        out.association.validate(&s).unwrap();
        for i in 0..s.n_users() {
            let (w, p) = (out.allocation.w[i], out.allocation.p[i]);
            prop_assert!((0.0..=config.w_max).contains(&w));
            prop_assert!((0.0..=config.p_max).contains(&p));
            if !out.association.mu[i] {
                prop_assert_eq!((w, p), (0.0, 0.0));
            }
        }
        prop_assert_eq!(out.offloaded_count, out.association.mu.iter().filter(|m| !**m).count());
    }
}
