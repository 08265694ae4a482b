//! Exact solvers: exhaustive association search with a convex allocation per
//! association, and the knapsack dynamic program for the simplified problem
//! in which served users run at full power on their minimum bandwidth.

mod exact;
mod knapsack;

pub use exact::{
    alloc_subproblem, solve_ora_exact, solve_ora_exact_with_cap, OraSearch, SearchState,
    DEFAULT_ENUMERATION_CAP,
};
pub use knapsack::{
    discretize, knapsack_dp, knapsack_dp_with_budget, simplify_to_knapsack, KnapsackSelection,
    SimplifiedOraInstance, DEFAULT_RESOLUTION_DIVISOR, DEFAULT_TABLE_BUDGET,
};
