use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A configuration field violates its invariant.
    InvalidConfig {
        field: &'static str,
        reason: &'static str,
    },
    /// A scalar argument is outside the domain of the formula.
    Domain { what: &'static str, value: f64 },
    /// Association and allocation disagree (allocation on an offloaded user,
    /// or an SBS index that does not cover the user).
    Inconsistent { user: usize, reason: &'static str },
    /// Exhaustive search refused because the instance is too large.
    TooLarge { n_users: usize, cap: usize },
    /// No association admits a feasible allocation.
    Infeasible {
        /// Smallest bandwidth shortfall seen over all candidate associations, Hz.
        deficit: f64,
        /// Users that cannot be served within their bandwidth cap.
        stranded: Vec<usize>,
    },
    /// Knapsack table would exceed the memory budget.
    TableTooLarge {
        cells: u64,
        budget: u64,
        suggested_resolution: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig { field, reason } => {
                write!(f, "invalid config field `{field}`: {reason}")
            }
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::Inconsistent { user, reason } => {
                write!(f, "inconsistent outcome for user {user}: {reason}")
            }
            Error::TooLarge { n_users, cap } => write!(
                f,
                "{n_users} users exceeds the exhaustive-search cap of {cap}; use the relaxed heuristic method instead"
            ),
            Error::Infeasible { deficit, stranded } => {
                write!(f, "no feasible association (minimum bandwidth deficit {deficit:.6e} Hz")?;
                if !stranded.is_empty() {
                    write!(f, ", {} users cannot meet the rate within w_max", stranded.len())?;
                }
                write!(f, ")")
            }
            Error::TableTooLarge {
                cells,
                budget,
                suggested_resolution,
            } => write!(
                f,
                "knapsack table of {cells} cells exceeds budget of {budget}; try resolution >= {suggested_resolution:.6e} Hz"
            ),
        }
    }
}

impl core::error::Error for Error {}
