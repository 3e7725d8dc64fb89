use crate::ast::MbaClass;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid width {0}: supported range is 1..=64")]
    InvalidWidth(u32),

    #[error("variable `{0}` is not assigned")]
    UnassignedVariable(String),

    #[error("expression classifies as {0:?}, expected a linear MBA")]
    NotLinear(MbaClass),

    #[error("expression classifies as nonlinear; only linear and semi-linear MBAs are supported")]
    Nonlinear,

    #[error("too many variables: {count} (limit {limit})")]
    TooManyVariables { count: usize, limit: usize },

    #[error("{0}")]
    Generation(String),

    #[error("{path}: {message}")]
    Dataset { path: String, message: String },
}
