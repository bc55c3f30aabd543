use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures raised while building or analysing systems.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("system has no microstates")]
    EmptySystem,
    #[error("{what} is not a permutation of 0..{n}")]
    NotAPermutation { what: &'static str, n: usize },
    #[error("{what} has length {got}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("reversion violates {0}")]
    BadReversion(&'static str),
    #[error("macro label table is inconsistent: {0}")]
    BadLabelTable(String),
    #[error("no reversion map is present")]
    NoReversion,
    #[error("reversion does not map macrostates onto macrostates")]
    NotEquivariant,
    #[error("the two systems do not share a label universe")]
    LabelUniverseMismatch,
    #[error("system carries no numeric macro values")]
    NotNumeric,
    #[error("label map is not surjective onto 0..{0}")]
    NotSurjective(usize),
    #[error("restriction set is empty")]
    EmptyRestriction,
    #[error("{what} needs {needed} items but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    #[error("element set is not closed under inversion")]
    NotClosedUnderInverse,
    #[error("bad numerical partition: {0}")]
    BadPartition(String),
    #[error("alpha-cycle {cycle:?} never meets E")]
    NotEBound { cycle: Vec<usize> },
    #[error("history {0:?} has zero probability")]
    ConditioningOnNull(Vec<usize>),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("macrostate {0} is an equilibrium macrostate")]
    NotNonEquilibrium(usize),
    #[error("invalid distribution: {0}")]
    BadDistribution(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
