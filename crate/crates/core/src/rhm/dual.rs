//! Iterative Lagrangian solver for the allocation problem.
//!
//! The rate constraint of each served user carries a multiplier `y_i`
//! (cost per bit/s). One cycle updates `y`, then `p`, then `w`:
//!
//! * `y ← max(0, y + s_i (r_i - w_i log2(1 + p_i g_i / N0)))`, with a
//!   per-user step `s_i = step · ŷ_i ln2 / w_i`, where `ŷ_i` is the
//!   multiplier at which the current bandwidth would be rate-tight. This is
//!   a Newton-scaled projected ascent step; `step` is dimensionless.
//! * `p_i` minimises the Lagrangian for the current `w_i, y_i`; stationarity
//!   gives `p_i = y_i w_i / (c_p ln2) - N0 / g_i`, clamped to `[0, p_max]`.
//! * `w` minimises `Σ ν_i σ_i(w_i) + γ c_w w_i` under the budget, with the
//!   power price `ν_i = y_i ∂rate/∂p` read from the current `(p_i, w_i)`.
//!   The rate-form Lagrangian is linear in `w`, so its own minimiser would be
//!   bang-bang; pricing the tight-rate PSD instead keeps the step well posed
//!   and shares the bisection with [`cra_solve_direct`](super::cra_solve_direct).

use alloc::vec::Vec;

use super::cra::{CraProblem, CraSolution};
use crate::allocation::allocate;
use crate::math::LN_2;
use crate::model::{achieved_rate, min_power_rate_slope};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct DualAscentOptions {
    /// Dimensionless gain on the Newton-scaled multiplier step, in (0, 1].
    pub step: f64,
    /// Relative tolerance on both the rate residual and the primal change.
    pub tol: f64,
    pub max_iter: u64,
    /// Start here instead of `w = w_min, p = p_max, y = 0`.
    pub warm_start: Option<DualState>,
}

impl Default for DualAscentOptions {
    fn default() -> Self {
        Self {
            step: 0.5,
            tol: 1e-6,
            max_iter: 100_000,
            warm_start: None,
        }
    }
}

/// Iterate of the dual ascent, indexed like `CraProblem::served_users`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualState {
    pub y: Vec<f64>,
    pub p: Vec<f64>,
    pub w: Vec<f64>,
    /// `r_min - delivered rate`, bit/s.
    pub residual: Vec<f64>,
    pub iteration: u64,
}

impl DualState {
    /// The KKT point matching a direct solution: `y_i = c_p ∂p/∂r`.
    pub fn from_solution(problem: &CraProblem, solution: &CraSolution) -> Self {
        let y = (0..problem.len())
            .map(|j| {
                problem.c_p
                    * min_power_rate_slope(
                        problem.r_min[j],
                        solution.w[j],
                        problem.gains[j],
                        problem.n0,
                    )
            })
            .collect();
        let mut state = Self {
            y,
            p: solution.p.clone(),
            w: solution.w.clone(),
            residual: Vec::new(),
            iteration: 0,
        };
        state.residual = residuals(problem, &state.p, &state.w);
        state
    }

    /// Largest `|residual| / r_min`.
    pub fn max_relative_residual(&self, problem: &CraProblem) -> f64 {
        self.residual
            .iter()
            .zip(&problem.r_min)
            .map(|(res, r)| if *r > 0.0 { (res / r).abs() } else { res.abs() })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub iteration: u64,
    pub max_residual: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualAscentResult {
    /// Best iterate (smallest rate residual) and its cost.
    pub solution: CraSolution,
    pub state: DualState,
    pub converged: bool,
    pub trace: Vec<TracePoint>,
}

fn residuals(problem: &CraProblem, p: &[f64], w: &[f64]) -> Vec<f64> {
    (0..problem.len())
        .map(|j| problem.r_min[j] - achieved_rate(w[j], p[j], problem.gains[j], problem.n0))
        .collect()
}

pub fn cra_solve_dual_ascent(
    problem: &CraProblem,
    options: &DualAscentOptions,
) -> Result<DualAscentResult> {
    let n = problem.len();
    let models = problem.models();
    let floor: f64 = models.iter().map(|m| m.w_lo).sum();
    let stranded: Vec<usize> = (0..n).filter(|&j| !models[j].is_feasible()).collect();
    if !stranded.is_empty() || floor > problem.remaining_w {
        return Err(problem.infeasible(floor - problem.remaining_w, stranded));
    }

    let mut state = match &options.warm_start {
        Some(s) => s.clone(),
        None => {
            let w: Vec<f64> = models.iter().map(|m| m.w_lo).collect();
            let p: Vec<f64> = models.iter().map(|m| m.power(m.w_lo)).collect();
            DualState {
                y: alloc::vec![0.0; n],
                residual: residuals(problem, &p, &w),
                p,
                w,
                iteration: 0,
            }
        }
    };

    let bandwidth_price = problem.gamma * problem.c_w;
    let mut best = state.clone();
    let mut best_residual = state.max_relative_residual(problem);
    let mut trace = Vec::new();
    let mut converged = n == 0;
    let mut prices = alloc::vec![0.0; n];

    let mut multiplier = 0.0;
    let mut iteration = state.iteration;
    let limit = state.iteration.saturating_add(options.max_iter);
    while !converged && iteration < limit {
        iteration += 1;
        for j in 0..n {
            let (r, g, w) = (problem.r_min[j], problem.gains[j], state.w[j]);
            if r == 0.0 {
                continue;
            }
            let tight_price = problem.c_p * min_power_rate_slope(r, w, g, problem.n0);
            let step = options.step * tight_price * LN_2 / w;
            state.y[j] = (state.y[j] + step * state.residual[j]).max(0.0);
        }

        let mut change: f64 = 0.0;
        for (j, price) in prices.iter_mut().enumerate() {
            let (g, w, y) = (problem.gains[j], state.w[j], state.y[j]);
            let p = if problem.r_min[j] == 0.0 {
                0.0
            } else if problem.c_p == 0.0 {
                problem.p_max
            } else {
                (y * w / (problem.c_p * LN_2) - problem.n0 / g).clamp(0.0, problem.p_max)
            };
            change = change.max((p - state.p[j]).abs() / problem.p_max);
            state.p[j] = p;
            let snr = p * g / problem.n0;
            *price = y * w * g / (problem.n0 * LN_2 * (1.0 + snr));
        }

        let next = allocate(&models, &prices, bandwidth_price, problem.remaining_w)
            .map_err(|s| problem.infeasible(s.deficit, s.stranded))?;
        for ((m, &old), &new) in models.iter().zip(&state.w).zip(&next.w) {
            let scale = old.max(m.w_lo).max(f64::MIN_POSITIVE);
            change = change.max((new - old).abs() / scale);
        }
        state.w = next.w;
        multiplier = next.multiplier;
        state.residual = residuals(problem, &state.p, &state.w);
        state.iteration = iteration;

        let max_residual = state.max_relative_residual(problem);
        trace.push(TracePoint {
            iteration,
            max_residual,
            cost: problem.cost(&state.w, &state.p),
        });
        if max_residual <= best_residual {
            best_residual = max_residual;
            best = state.clone();
        }
        converged = max_residual < options.tol && change < options.tol;
    }

    let mut state = if converged { state } else { best };
    // primal recovery: tight power for the final bandwidths
    for ((m, &w), p) in models.iter().zip(&state.w).zip(&mut state.p) {
        if w >= m.w_lo {
            *p = m.power(w);
        }
    }
    state.residual = residuals(problem, &state.p, &state.w);
    Ok(DualAscentResult {
        solution: CraSolution {
            cost: problem.cost(&state.w, &state.p),
            w: state.w.clone(),
            p: state.p.clone(),
            multiplier,
        },
        state,
        converged,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generate_scenario;
    use crate::rhm::cra_solve_direct;
    use crate::ScenarioConfig;

    fn problem(n: usize, seed: u64, budget_scale: f64) -> CraProblem {
        let s = generate_scenario(&ScenarioConfig {
            n_users: n,
            seed,
            ..ScenarioConfig::default()
        })
        .unwrap();
        let mut p = CraProblem::new(&s, (0..n).collect(), 0.0);
        let floor: f64 = p.models().iter().map(|m| m.w_lo).sum();
        p.remaining_w = floor * budget_scale;
        p
    }

    #[test]
    fn single_user_matches_direct() {
        for seed in 0..5 {
            let p = problem(1, seed, 50.0);
            let direct = cra_solve_direct(&p).unwrap();
            let opts = DualAscentOptions {
                step: 0.1,
                tol: 1e-6,
                ..DualAscentOptions::default()
            };
            let out = cra_solve_dual_ascent(&p, &opts).unwrap();
            assert!(out.converged);
            let rel = (out.solution.cost - direct.cost).abs() / direct.cost;
            assert!(rel < 1e-4, "seed {seed}: {rel}");
        }
    }

    #[test]
    fn warm_start_at_optimum_stops_immediately() {
        for (n, scale) in [(1, 50.0), (20, 1.4), (20, 40.0)] {
            let p = problem(n, 3, scale);
            let direct = cra_solve_direct(&p).unwrap();
            let opts = DualAscentOptions {
                warm_start: Some(DualState::from_solution(&p, &direct)),
                ..DualAscentOptions::default()
            };
            let out = cra_solve_dual_ascent(&p, &opts).unwrap();
            assert!(out.converged);
            assert!(out.state.iteration <= 2, "{}", out.state.iteration);
            let rel = (out.solution.cost - direct.cost).abs() / direct.cost;
            assert!(rel < 1e-9, "{rel}");
        }
    }

    #[test]
    fn multiplier_rises_when_rate_is_short() {
        let p = problem(6, 4, 3.0);
        let direct = cra_solve_direct(&p).unwrap();
        let mut start = DualState::from_solution(&p, &direct);
        for j in 0..p.len() {
            start.w[j] *= 0.9;
        }
        start.residual = residuals(&p, &start.p, &start.w);
        assert!(start.residual.iter().all(|&r| r > 0.0));
        let opts = DualAscentOptions {
            max_iter: 1,
            warm_start: Some(start.clone()),
            ..DualAscentOptions::default()
        };
        let out = cra_solve_dual_ascent(&p, &opts).unwrap();
        // primal recovery rewrites p and w, but y is the raw update
        for j in 0..p.len() {
            assert!(out.state.y[j] > start.y[j]);
        }
    }

    #[test]
    fn multipliers_stay_nonnegative() {
        let p = problem(15, 6, 2.0);
        let opts = DualAscentOptions {
            max_iter: 50,
            ..DualAscentOptions::default()
        };
        let out = cra_solve_dual_ascent(&p, &opts).unwrap();
        assert!(out.state.y.iter().all(|&y| y >= 0.0));
    }

    #[test]
    fn residual_norm_settles() {
        for seed in 0..5 {
            let p = problem(10, seed, 3.0);
            let opts = DualAscentOptions {
                max_iter: 20,
                tol: 0.0,
                ..DualAscentOptions::default()
            };
            let out = cra_solve_dual_ascent(&p, &opts).unwrap();
            let window: Vec<f64> = out.trace[10..20].iter().map(|t| t.max_residual).collect();
            for pair in window.windows(2) {
                assert!(pair[1] <= pair[0], "seed {seed}: {window:?}");
            }
        }
    }

    #[test]
    fn infeasible_budget_is_reported() {
        let p = problem(5, 1, 0.9);
        assert!(matches!(
            cra_solve_dual_ascent(&p, &DualAscentOptions::default()),
            Err(crate::Error::Infeasible { .. })
        ));
    }
}
