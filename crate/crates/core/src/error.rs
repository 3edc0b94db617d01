use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid cycle type: {0}")]
    InvalidCycleType(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} = {value} exceeds the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: String,
        bound: String,
    },

    #[error("point {0} lies on (or within 1e-12 of) a branch cut")]
    BranchCut(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn bound(what: &'static str, value: impl ToString, bound: impl ToString) -> Self {
        Error::BoundExceeded {
            what,
            value: value.to_string(),
            bound: bound.to_string(),
        }
    }

    /// Process exit code for the CLI: 3 for bound violations, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BoundExceeded { .. } => 3,
            _ => 2,
        }
    }
}
