//! Single runs and parameter sweeps producing [`MetricsRow`]s.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use hetnet_core::baselines::solve_dsm;
use hetnet_core::model::generate_scenario;
use hetnet_core::ora::{solve_ora_exact_with_cap, DEFAULT_ENUMERATION_CAP};
use hetnet_core::rhm::{solve_rhm, CraSolver, DualAscentOptions};
use hetnet_core::{BidMatrix, Error as CoreError, Scenario, ScenarioConfig, SolveOutcome};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dsm,
    Ora,
    RhmDirect,
    RhmDual,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Dsm, Method::Ora, Method::RhmDirect, Method::RhmDual];

    pub fn name(self) -> &'static str {
        match self {
            Method::Dsm => "dsm",
            Method::Ora => "ora",
            Method::RhmDirect => "rhm_direct",
            Method::RhmDual => "rhm_dual",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                HarnessError::Invalid(format!(
                    "unknown method `{s}` (expected dsm, ora, rhm_direct or rhm_dual)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// RHM changed the association to make the allocation feasible.
    Repaired,
    /// Dual ascent hit its iteration limit; metrics are for the best iterate.
    NotConverged,
    /// The method refused the instance (ORA above its size cap).
    Skipped,
    /// No feasible association exists for this method.
    Infeasible,
}

impl RowStatus {
    pub fn name(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Repaired => "repaired",
            RowStatus::NotConverged => "not_converged",
            RowStatus::Skipped => "skipped",
            RowStatus::Infeasible => "infeasible",
        }
    }

    /// Whether the row carries solver metrics.
    pub fn has_metrics(self) -> bool {
        !matches!(self, RowStatus::Skipped | RowStatus::Infeasible)
    }
}

/// One line of experiment output. Metric fields are NaN when
/// `status.has_metrics()` is false.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub method: Method,
    pub sweep_value: Option<f64>,
    pub seed: u64,
    pub wall_clock_s: f64,
    pub avg_cost_per_user: f64,
    pub service_rate: f64,
    pub offloaded_count: usize,
    pub converged: bool,
    pub iterations: u64,
    pub status: RowStatus,
}

impl MetricsRow {
    fn from_outcome(method: Method, seed: u64, outcome: &SolveOutcome) -> Self {
        let status = if !outcome.converged {
            RowStatus::NotConverged
        } else if outcome.repaired {
            RowStatus::Repaired
        } else {
            RowStatus::Ok
        };
        Self {
            method,
            sweep_value: None,
            seed,
            wall_clock_s: outcome.wall_clock,
            avg_cost_per_user: outcome.avg_cost_per_user(),
            service_rate: outcome.service_rate,
            offloaded_count: outcome.offloaded_count,
            converged: outcome.converged,
            iterations: outcome.iterations,
            status,
        }
    }

    fn empty(method: Method, seed: u64, status: RowStatus) -> Self {
        Self {
            method,
            sweep_value: None,
            seed,
            wall_clock_s: f64::NAN,
            avg_cost_per_user: f64::NAN,
            service_rate: f64::NAN,
            offloaded_count: 0,
            converged: false,
            iterations: 0,
            status,
        }
    }
}

/// Solver knobs shared by every run of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunOptions {
    pub ora_cap: usize,
    pub dual_step: f64,
    pub dual_tol: f64,
    pub dual_max_iter: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        let dual = DualAscentOptions::default();
        Self {
            ora_cap: DEFAULT_ENUMERATION_CAP,
            dual_step: dual.step,
            dual_tol: dual.tol,
            dual_max_iter: dual.max_iter,
        }
    }
}

impl RunOptions {
    pub fn dual_options(&self) -> DualAscentOptions {
        DualAscentOptions {
            step: self.dual_step,
            tol: self.dual_tol,
            max_iter: self.dual_max_iter,
            warm_start: None,
        }
    }
}

/// Runs one method on a prepared instance and records the solver's
/// wall-clock time in the outcome.
pub fn solve(
    method: Method,
    scenario: &Scenario,
    bids: &BidMatrix,
    options: &RunOptions,
) -> std::result::Result<SolveOutcome, CoreError> {
    let start = Instant::now();
    let mut outcome = match method {
        Method::Dsm => solve_dsm(scenario),
        Method::Ora => solve_ora_exact_with_cap(scenario, bids, options.ora_cap),
        Method::RhmDirect => solve_rhm(scenario, bids, &CraSolver::Direct),
        Method::RhmDual => solve_rhm(
            scenario,
            bids,
            &CraSolver::DualAscent(options.dual_options()),
        ),
    }?;
    outcome.wall_clock = start.elapsed().as_secs_f64();
    Ok(outcome)
}

fn row_for(
    method: Method,
    scenario: &Scenario,
    bids: &BidMatrix,
    options: &RunOptions,
) -> Result<MetricsRow> {
    let seed = scenario.config.seed;
    match solve(method, scenario, bids, options) {
        Ok(outcome) => Ok(MetricsRow::from_outcome(method, seed, &outcome)),
        Err(CoreError::TooLarge { .. }) => Ok(MetricsRow::empty(method, seed, RowStatus::Skipped)),
        Err(CoreError::Infeasible { .. }) => {
            Ok(MetricsRow::empty(method, seed, RowStatus::Infeasible))
        }
        Err(e) => Err(e.into()),
    }
}

/// Generates the scenario for `config` and runs `method` on it. Scenario
/// generation is not included in the reported wall-clock time.
pub fn run_once(
    config: &ScenarioConfig,
    method: Method,
    options: &RunOptions,
) -> Result<MetricsRow> {
    let scenario = generate_scenario(config)?;
    let bids = BidMatrix::compute(&scenario);
    row_for(method, &scenario, &bids, options)
}

/// Runs every method on one generated instance.
pub fn run_point(
    config: &ScenarioConfig,
    methods: &[Method],
    options: &RunOptions,
) -> Result<Vec<MetricsRow>> {
    let scenario = generate_scenario(config)?;
    let bids = BidMatrix::compute(&scenario);
    methods
        .iter()
        .map(|&m| row_for(m, &scenario, &bids, options))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    /// Number of users.
    Users,
    /// Per-user rate demand, bit/s.
    Rmin,
}

impl FromStr for SweepParam {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "users" => Ok(SweepParam::Users),
            "rmin" => Ok(SweepParam::Rmin),
            _ => Err(HarnessError::Invalid(format!(
                "unknown sweep parameter `{s}` (expected users or rmin)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl Sweep {
    /// Points `from, from + step, ...` up to and including `to`.
    pub fn points(&self) -> Result<Vec<f64>> {
        let ok = self.from.is_finite()
            && self.to.is_finite()
            && self.step.is_finite()
            && self.step > 0.0
            && self.to >= self.from;
        if !ok {
            return Err(HarnessError::Invalid(
                "sweep needs finite bounds, from <= to and step > 0".into(),
            ));
        }
        let count = ((self.to - self.from) / self.step + 1e-9).floor() as u64 + 1;
        if count > 1_000_000 {
            return Err(HarnessError::Invalid("sweep has too many points".into()));
        }
        let points: Vec<f64> = (0..count)
            .map(|k| self.from + k as f64 * self.step)
            .collect();
        if self.param == SweepParam::Users && points.iter().any(|&v| v < 0.0 || v.fract() != 0.0) {
            return Err(HarnessError::Invalid(
                "user-count sweep needs non-negative integer points".into(),
            ));
        }
        Ok(points)
    }

    fn apply(&self, base: &ScenarioConfig, value: f64) -> ScenarioConfig {
        let mut c = base.clone();
        match self.param {
            SweepParam::Users => c.n_users = value as usize,
            SweepParam::Rmin => c.r_min = value,
        }
        c
    }
}

/// A full experiment: every method on every sweep point, replicated over
/// consecutive seeds starting at `base_config.seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub base_config: ScenarioConfig,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default = "default_replications")]
    pub replications: u64,
    #[serde(default)]
    pub options: RunOptions,
    /// Worker threads; all available cores when absent.
    #[serde(default)]
    pub workers: Option<usize>,
}

fn default_replications() -> u64 {
    5
}

impl ExperimentSpec {
    pub fn new(base_config: ScenarioConfig, methods: Vec<Method>) -> Self {
        Self {
            base_config,
            methods,
            sweep: None,
            replications: default_replications(),
            options: RunOptions::default(),
            workers: None,
        }
    }
}

/// Runs the experiment. Rows come back ordered by sweep point, then method,
/// then seed, whatever the number of workers.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<MetricsRow>> {
    spec.base_config.validate()?;
    if spec.methods.is_empty() {
        return Err(HarnessError::Invalid("no methods selected".into()));
    }
    if spec.replications == 0 {
        return Err(HarnessError::Invalid(
            "replications must be at least 1".into(),
        ));
    }
    if spec.workers == Some(0) {
        return Err(HarnessError::Invalid("workers must be at least 1".into()));
    }
    let points: Vec<Option<f64>> = match &spec.sweep {
        Some(s) => s.points()?.into_iter().map(Some).collect(),
        None => vec![None],
    };
    let jobs: Vec<(usize, Option<f64>, u64)> = points
        .iter()
        .enumerate()
        .flat_map(|(pi, &v)| (0..spec.replications).map(move |rep| (pi, v, rep)))
        .collect();

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = spec.workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| HarnessError::Invalid(format!("cannot start worker pool: {e}")))?;

    let results: Vec<Result<Vec<MetricsRow>>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(_, value, rep)| {
                let mut config = match (&spec.sweep, value) {
                    (Some(s), Some(v)) => s.apply(&spec.base_config, v),
                    _ => spec.base_config.clone(),
                };
                config.seed = spec.base_config.seed.wrapping_add(rep);
                let mut rows = run_point(&config, &spec.methods, &spec.options)?;
                for row in &mut rows {
                    row.sweep_value = value;
                }
                Ok(rows)
            })
            .collect()
    });

    // jobs are point-major, seed-minor; regroup as point, method, seed
    let mut per_job = Vec::with_capacity(results.len());
    for r in results {
        per_job.push(r?);
    }
    let reps = spec.replications as usize;
    let mut rows = Vec::with_capacity(per_job.len() * spec.methods.len());
    for point in per_job.chunks(reps) {
        for m in 0..spec.methods.len() {
            rows.extend(point.iter().map(|job| job[m].clone()));
        }
    }
    Ok(rows)
}
