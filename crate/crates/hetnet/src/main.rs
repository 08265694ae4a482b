use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hetnet::config::{load_config, to_json};
use hetnet::csv::{emit, metrics_csv, scenario_csv, trace_csv};
use hetnet::hetnet_core::model::generate_scenario;
use hetnet::hetnet_core::rhm::{
    cra_solve_dual_ascent, offload_grant, solve_rhm, CraProblem, CraSolver,
};
use hetnet::hetnet_core::{BidMatrix, ScenarioConfig};
use hetnet::{run_sweep, ExperimentSpec, Method, Result, RunOptions, Sweep, SweepParam};

/// Macro/small-cell association and resource allocation experiments.
#[derive(Debug, Parser)]
#[command(name = "hetnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance with one or more methods and print a metrics CSV.
    Run {
        #[command(flatten)]
        common: Common,
        /// Comma-separated methods: dsm, ora, rhm_direct, rhm_dual.
        #[arg(long, default_value = "rhm_direct")]
        method: String,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Sweep the user count or rate demand over replicated seeds.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "dsm,rhm_direct")]
        method: String,
        /// users or rmin.
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        step: f64,
        /// Seeds per point, counting up from the config seed.
        #[arg(long, default_value_t = 5)]
        reps: u64,
        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Export the generated user layout, CBS gains and best SBS bids.
    Scenario {
        #[command(flatten)]
        common: Common,
    },
    /// Print the effective scenario config as JSON.
    Config {
        #[command(flatten)]
        common: Common,
    },
    /// Run dual ascent on the RHM allocation step and export its trace.
    Trace {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// JSON scenario config; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config user count.
    #[arg(long)]
    users: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Largest user count the exhaustive search accepts.
    #[arg(long)]
    ora_cap: Option<usize>,
    /// Dual ascent step gain.
    #[arg(long)]
    dual_step: Option<f64>,
    #[arg(long)]
    dual_tol: Option<f64>,
    #[arg(long)]
    dual_max_iter: Option<u64>,
}

impl SolverArgs {
    fn options(&self) -> RunOptions {
        let mut o = RunOptions::default();
        if let Some(v) = self.ora_cap {
            o.ora_cap = v;
        }
        if let Some(v) = self.dual_step {
            o.dual_step = v;
        }
        if let Some(v) = self.dual_tol {
            o.dual_tol = v;
        }
        if let Some(v) = self.dual_max_iter {
            o.dual_max_iter = v;
        }
        o
    }
}

impl Common {
    fn config(&self) -> Result<ScenarioConfig> {
        let mut c = match &self.config {
            Some(p) => load_config(p)?,
            None => ScenarioConfig::default(),
        };
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(n) = self.users {
            c.n_users = n;
        }
        c.validate()?;
        Ok(c)
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}

fn methods(list: &str) -> Result<Vec<Method>> {
    list.split(',').map(|m| m.trim().parse()).collect()
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            common,
            method,
            solver,
        } => {
            let mut spec = ExperimentSpec::new(common.config()?, methods(&method)?);
            spec.replications = 1;
            spec.options = solver.options();
            spec.workers = Some(1);
            emit(common.out(), &metrics_csv(&run_sweep(&spec)?))
        }
        Command::Sweep {
            common,
            method,
            param,
            from,
            to,
            step,
            reps,
            workers,
            solver,
        } => {
            let mut spec = ExperimentSpec::new(common.config()?, methods(&method)?);
            spec.sweep = Some(Sweep {
                param: param.parse::<SweepParam>()?,
                from,
                to,
                step,
            });
            spec.replications = reps;
            spec.workers = workers;
            spec.options = solver.options();
            emit(common.out(), &metrics_csv(&run_sweep(&spec)?))
        }
        Command::Config { common } => {
            let mut json = to_json(&common.config()?);
            json.push('\n');
            emit(common.out(), &json)
        }
        Command::Scenario { common } => {
            let scenario = generate_scenario(&common.config()?)?;
            let bids = BidMatrix::compute(&scenario);
            emit(common.out(), &scenario_csv(&scenario, &bids))
        }
        Command::Trace { common, solver } => {
            let scenario = generate_scenario(&common.config()?)?;
            let bids = BidMatrix::compute(&scenario);
            let direct = solve_rhm(&scenario, &bids, &CraSolver::Direct)?;
            let admitted: Vec<usize> = direct
                .association
                .served_users()
                .into_iter()
                .filter(|&i| direct.allocation.w[i] > 0.0)
                .collect();
            let remaining =
                scenario.config.total_bandwidth - offload_grant(&bids, &direct.association);
            let problem = CraProblem::new(&scenario, admitted, remaining);
            let result = cra_solve_dual_ascent(&problem, &solver.options().dual_options())?;
            if !result.converged {
                eprintln!(
                    "dual ascent stopped after {} iterations without converging",
                    result.state.iteration
                );
            }
            emit(common.out(), &trace_csv(&result.trace))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
