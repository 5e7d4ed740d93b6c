use thiserror::Error;

use crate::field::FieldSpec;
use crate::mpoly::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("operands live in different fields ({left} vs {right})")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("no value assigned to variable {0}")]
    MissingAssignment(Var),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid structure ({clause}): {detail}")]
    InvalidStructure { clause: String, detail: String },

    #[error("parse error at line {line}, column {col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("expected {expected} arguments, got {got}")]
    ArgumentCount { expected: usize, got: usize },

    #[error("argument {index} does not lie in {space}")]
    ArgumentOutsideSpace { index: usize, space: String },

    #[error("enumeration needs {required} steps, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
