//! Solvers for joint user association and bandwidth/power allocation in a
//! single macro cell (CBS) with overlaid small cells (SBSs).
//!
//! Three solvers share one domain model:
//!
//! * [`ora`]: exact association enumeration with a convex allocation per
//!   association, plus a 0-1 knapsack dynamic program for the simplified
//!   bandwidth-only problem.
//! * [`rhm`]: per-user heuristic association followed by convex resource
//!   allocation, solved either directly or by projected dual ascent.
//! * [`baselines`]: serve everyone from the macro cell, no offloading.
//!
//! The crate is `no_std` (it needs `alloc`). Timing, IO and parallel
//! execution live in the `hetnet` companion crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

mod error;
pub mod math;

pub mod allocation;
pub mod baselines;
pub mod model;
pub mod ora;
pub mod rhm;

pub use error::{Error, Result};
pub use model::{
    Allocation, Association, BidMatrix, Point, Scenario, ScenarioConfig, SolveOutcome,
};
