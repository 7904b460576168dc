use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("strike {strike} is not a mesh node (cell width {width})")]
    MisalignedStrike { strike: f64, width: f64 },

    #[error("risk-free value required by the linear driver was not supplied")]
    MissingRiskFreeValue,

    #[error("singular pivot in banded factorization at row {row}")]
    SingularMatrix { row: usize },

    #[error("non-finite value at time step {step}, cell {cell}")]
    NonFinite { step: usize, cell: usize },

    #[error("refinement ladder is not nested: {0}")]
    NonNestedLadder(String),

    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
