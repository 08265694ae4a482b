//! Multi-threaded exhaustive association search.

use hetnet_core::ora::{OraSearch, SearchState};
use hetnet_core::{BidMatrix, Result, Scenario, SolveOutcome};
use rayon::prelude::*;

const CHUNK: u64 = 1 << 12;

/// Same result as `solve_ora_exact_with_cap`, with the mask space split
/// across the current rayon pool.
pub fn solve_ora_parallel(
    scenario: &Scenario,
    bids: &BidMatrix,
    cap: usize,
) -> Result<SolveOutcome> {
    let search = OraSearch::new(scenario, bids, cap)?;
    let masks = search.mask_count();
    let chunks = masks.div_ceil(CHUNK);
    let state = (0..chunks)
        .into_par_iter()
        .map(|c| search.search(c * CHUNK..((c + 1) * CHUNK).min(masks)))
        .reduce(SearchState::empty, SearchState::merge);
    let mut outcome = search.finish(&state)?;
    outcome.iterations = state.evaluated;
    Ok(outcome)
}
