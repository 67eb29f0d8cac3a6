use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: scene files, element strings, generator records.
    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("not invertible: {0}")]
    NotInvertible(String),

    /// Parameters that violate a symmetry-group membership equation.
    #[error("not in the symmetry group: {0}")]
    NotInFamily(String),

    #[error("theorem hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("size limit exceeded: {what} reached {bits} bits (cap {cap})")]
    SizeLimit { what: String, bits: u64, cap: u64 },

    #[error("cycle not resolved up to lmax = {0}")]
    CycleNotResolved(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }

    /// Process exit status used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::HypothesisNotMet(_) | Error::CycleNotResolved(_) => 2,
            Error::SizeLimit { .. } => 3,
            _ => 1,
        }
    }
}
