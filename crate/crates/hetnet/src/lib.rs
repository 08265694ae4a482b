//! Experiment runner, file formats and command-line front end for
//! [`hetnet_core`].
//!
//! Everything that needs `std` lives here: wall-clock timing, JSON config
//! loading, CSV output, and parallel execution of sweeps and of the
//! exhaustive association search.

pub mod config;
pub mod csv;
mod error;
pub mod parallel;
pub mod runner;

pub use error::{HarnessError, Result};
pub use hetnet_core;
pub use runner::{
    run_once, run_point, run_sweep, solve, ExperimentSpec, Method, MetricsRow, RowStatus,
    RunOptions, Sweep, SweepParam,
};
