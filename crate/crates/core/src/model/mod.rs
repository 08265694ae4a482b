//! Domain types, scenario generation, the channel model and the closed-form
//! per-user formulas.

mod bids;
mod channel;
mod config;
mod cost;
mod outcome;
mod rate;
mod scenario;

pub use bids::BidMatrix;
pub use channel::channel_gain;
pub use config::ScenarioConfig;
pub(crate) use cost::serving_cost;
pub use cost::{evaluate_cost, CostBreakdown};
pub use outcome::{Allocation, Association, SolveOutcome, RATE_TOLERANCE};
pub use rate::{achieved_rate, min_bandwidth, min_power, min_power_rate_slope};
pub use scenario::{generate_scenario, Point, Scenario, SBS_RING_FACTOR};
