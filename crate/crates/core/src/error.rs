use thiserror::Error;

/// Errors produced by the library.
///
/// The variants fall into three groups that the CLI maps onto exit codes:
/// malformed input, resource limits, and searches that cannot succeed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("relation contains a cycle through element {element}")]
    Cycle { element: usize },

    #[error("{what} {value} is out of range (limit {limit})")]
    Range {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("{what} {value} exceeds the configured cap {cap}")]
    Cap {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("family has {size} sets; at most {cap} are supported here")]
    Size { size: usize, cap: usize },

    #[error("ground sets differ: {left} vs {right}")]
    GroundMismatch { left: usize, right: usize },

    #[error("{what} needs {required} units of work, budget is {budget}")]
    Budget {
        what: &'static str,
        required: String,
        budget: u64,
    },

    #[error("no {mode} embedding exists for any k <= {k_max}")]
    Infeasible { mode: &'static str, k_max: usize },

    #[error("ground size n = {n} is too small for this plan; smallest feasible n is {n_min}")]
    TooSmall { n: usize, n_min: usize },

    #[error("iteration count must be at least 1 (got {0})")]
    Iteration(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by exceeding a configured resource limit.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::Cap { .. } | Error::Size { .. } | Error::Budget { .. }
        )
    }
}
