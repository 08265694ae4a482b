use alloc::vec::Vec;

use super::{Allocation, Association, BidMatrix, Scenario};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CostBreakdown {
    pub total: f64,
    pub per_user: Vec<f64>,
}

/// Cost of a CBS-served user at PSD `p` over `w` Hz.
#[inline]
pub(crate) fn serving_cost(c_p: f64, c_w: f64, gamma: f64, w: f64, p: f64) -> f64 {
    c_p * p + gamma * c_w * w
}

/// CBS cost of an outcome: `c_p p_i + γ c_w w_i` per served user plus
/// `γ c_w Φ` for the bandwidth granted to the SBS of each offloaded user.
pub fn evaluate_cost(
    scenario: &Scenario,
    association: &Association,
    allocation: &Allocation,
    bids: &BidMatrix,
) -> Result<CostBreakdown> {
    association.validate(scenario)?;
    let n = scenario.n_users();
    if allocation.w.len() != n || allocation.p.len() != n {
        return Err(Error::Inconsistent {
            user: allocation.w.len().min(allocation.p.len()),
            reason: "allocation length differs from number of users",
        });
    }
    let cfg = &scenario.config;
    let mut per_user = Vec::with_capacity(n);
    for i in 0..n {
        let (w, p) = (allocation.w[i], allocation.p[i]);
        let c = match association.beta[i] {
            None => serving_cost(cfg.c_p, cfg.c_w, cfg.gamma, w, p),
            Some(k) => {
                if w != 0.0 || p != 0.0 {
                    return Err(Error::Inconsistent {
                        user: i,
                        reason: "offloaded user holds CBS resources",
                    });
                }
                let phi = bids.phi(k, i).ok_or(Error::Inconsistent {
                    user: i,
                    reason: "no bid from the serving SBS",
                })?;
                cfg.gamma * cfg.c_w * phi
            }
        };
        per_user.push(c);
    }
    Ok(CostBreakdown {
        total: per_user.iter().sum(),
        per_user,
    })
}
