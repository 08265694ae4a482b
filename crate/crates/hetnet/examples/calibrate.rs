//! Reports the quantities the default profile is tuned for.
//!
//! ```text
//! cargo run --release -p hetnet --example calibrate [profile.json]
//! ```

use std::path::Path;

use hetnet::config::load_config;
use hetnet::hetnet_core::model::{generate_scenario, min_bandwidth};
use hetnet::hetnet_core::{Scenario, ScenarioConfig};
use hetnet::{run_point, Method, RunOptions};

const SEEDS: u64 = 5;

/// Smallest user count at which serving everyone at `p_max` no longer fits.
fn crossover(config: &ScenarioConfig, n_cap: usize) -> Option<usize> {
    let big = ScenarioConfig {
        n_users: n_cap,
        ..config.clone()
    };
    let s: Scenario = generate_scenario(&big).ok()?;
    let mut sum = 0.0;
    for i in 0..n_cap {
        sum += min_bandwidth(s.rate_demand[i], s.g_cbs[i], config.p_max, config.noise_psd);
        if sum > config.total_bandwidth {
            return Some(i + 1);
        }
    }
    None
}

fn main() {
    let base = match std::env::args().nth(1) {
        Some(p) => load_config(Path::new(&p)).expect("profile loads"),
        None => ScenarioConfig::default(),
    };
    let options = RunOptions::default();
    println!(
        "seed  crossover  offload@300  cost_ratio@300  rhm_sr@700  dsm_sr@700  rhm_repaired@700"
    );
    for rep in 0..SEEDS {
        let seed = base.seed + rep;
        let at = |n| ScenarioConfig {
            seed,
            n_users: n,
            ..base.clone()
        };
        let cross = crossover(&at(0), 2000);
        let r300 = run_point(&at(300), &[Method::Dsm, Method::RhmDirect], &options).unwrap();
        let r700 = run_point(&at(700), &[Method::Dsm, Method::RhmDirect], &options).unwrap();
        println!(
            "{seed:>4}  {:>9}  {:>11.3}  {:>14.3}  {:>10.3}  {:>10.3}  {:>16}",
            cross.map_or("none".into(), |n| n.to_string()),
            r300[1].offloaded_count as f64 / 300.0,
            r300[1].avg_cost_per_user / r300[0].avg_cost_per_user,
            r700[1].service_rate,
            r700[0].service_rate,
            r700[1].status.name(),
        );
    }
}
