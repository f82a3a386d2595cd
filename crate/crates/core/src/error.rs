use std::fmt;

use thiserror::Error;

use crate::linopt::LpError;

/// A single broken invariant found by [`crate::model::validate_instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Stable kebab-case tag, e.g. `mass-sum` or `index-range`.
    pub tag: &'static str,
    pub detail: String,
}

impl Violation {
    pub(crate) fn new(tag: &'static str, detail: impl Into<String>) -> Self {
        Violation { tag, detail: detail.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.tag, self.detail)
    }
}

fn join(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {}", join(.0))]
    InvalidInstance(Vec<Violation>),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("scenario index {index} out of range for {num_scenarios} scenarios")]
    IndexOutOfRange { index: usize, num_scenarios: usize },
    #[error("solution is infeasible (max constraint violation {violation:e})")]
    InfeasibleSolution { violation: f64 },
    #[error("feasible set is empty")]
    EmptyFeasibleSet,
    #[error("{what} needs {required} candidates, over the budget of {budget}; export the MIP model and use an external solver")]
    BudgetExceeded { what: &'static str, required: u128, budget: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("binomial coefficient C({n}, {k}) exceeds the supported range")]
    CombinatorialOverflow { n: usize, k: usize },
    #[error("possibility distribution is not normal (max value {max})")]
    NotNormal { max: f64 },
    #[error("big-M cannot be derived from an unbounded box; pass an explicit value")]
    BigMRequired,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
