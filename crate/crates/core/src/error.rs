use std::fmt;

use thiserror::Error;

/// Which resource cap stopped a computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BudgetExceeded {
    SPairs { limit: usize },
    Degree { limit: u32, reached: u32 },
    Terms { limit: usize, reached: usize },
    CertificateDegree { limit: u32 },
    MonoidDegree { limit: u32 },
    Search(String),
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetExceeded::SPairs { limit } => write!(f, "more than {limit} S-pairs"),
            BudgetExceeded::Degree { limit, reached } => {
                write!(f, "intermediate degree {reached} over cap {limit}")
            }
            BudgetExceeded::Terms { limit, reached } => {
                write!(f, "intermediate polynomial with {reached} terms over cap {limit}")
            }
            BudgetExceeded::CertificateDegree { limit } => {
                write!(f, "no certificate up to degree {limit}")
            }
            BudgetExceeded::MonoidDegree { limit } => {
                write!(f, "no valid monoid up to degree {limit}")
            }
            BudgetExceeded::Search(what) => write!(f, "search cap reached: {what}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomials live in different variable sets")]
    VariableMismatch,
    #[error("polynomials live over different fields")]
    FieldMismatch,
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("inconclusive: {0}")]
    Budget(BudgetExceeded),
    #[error("map undefined on the source variety")]
    MapUndefined,
    #[error("chart empty: {0}")]
    ChartEmpty(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Budget(_))
    }
}

impl From<BudgetExceeded> for Error {
    fn from(b: BudgetExceeded) -> Self {
        Error::Budget(b)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
