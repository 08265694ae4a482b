//! CSV writers. Floats are printed with six significant digits and no
//! locale dependence, so identical inputs give byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hetnet_core::rhm::TracePoint;
use hetnet_core::{BidMatrix, Scenario};

use crate::{HarnessError, MetricsRow, Result};

pub const METRICS_HEADER: &str = "method,sweep_value,seed,wall_clock_s,avg_cost_per_user,\
service_rate,offloaded_count,converged,iterations,status";

pub const SCENARIO_HEADER: &str = "id,x,y,g_cbs,best_sbs,phi_total";

pub const TRACE_HEADER: &str = "iteration,max_residual,cost";

/// `x` to six significant digits, `%g` style. NaN becomes an empty cell.
pub fn fmt_sig6(x: f64) -> String {
    if x.is_nan() {
        return String::new();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn metrics_csv(rows: &[MetricsRow]) -> String {
    let mut out = String::from(METRICS_HEADER);
    out.push('\n');
    for r in rows {
        let has = r.status.has_metrics();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.method,
            r.sweep_value.map(fmt_sig6).unwrap_or_default(),
            r.seed,
            fmt_sig6(r.wall_clock_s),
            fmt_sig6(r.avg_cost_per_user),
            fmt_sig6(r.service_rate),
            if has {
                r.offloaded_count.to_string()
            } else {
                String::new()
            },
            if has {
                r.converged.to_string()
            } else {
                String::new()
            },
            if has {
                r.iterations.to_string()
            } else {
                String::new()
            },
            r.status.name(),
        );
    }
    out
}

/// One line per user: position, CBS gain and best SBS bid, if any.
pub fn scenario_csv(scenario: &Scenario, bids: &BidMatrix) -> String {
    let mut out = String::from(SCENARIO_HEADER);
    out.push('\n');
    for i in 0..scenario.n_users() {
        let p = scenario.user_positions[i];
        let (k, phi) = match bids.best(i) {
            Some((k, phi)) => (k.to_string(), fmt_sig6(phi)),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(
            out,
            "{i},{},{},{},{k},{phi}",
            fmt_sig6(p.x),
            fmt_sig6(p.y),
            fmt_sig6(scenario.g_cbs[i]),
        );
    }
    out
}

pub fn trace_csv(trace: &[TracePoint]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for t in trace {
        let _ = writeln!(
            out,
            "{},{},{}",
            t.iteration,
            fmt_sig6(t.max_residual),
            fmt_sig6(t.cost)
        );
    }
    out
}

/// Writes `contents` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, contents).map_err(|e| HarnessError::io(p, e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(contents.as_bytes())
                .map_err(|e| HarnessError::io("<stdout>", e))
        }
    }
}
