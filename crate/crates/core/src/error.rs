use thiserror::Error;

/// Errors produced by the library.
///
/// The CLI maps these onto exit codes: parse errors → 4, precondition
/// violations → 2, numeric failures → 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("polytope is not full-dimensional (dim {dim} in ambient {ambient})")]
    NotFullDimensional { dim: usize, ambient: usize },

    #[error("origin is not interior to the polytope; translate by nu first")]
    OriginNotInterior,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("division by zero evaluating a negative exponent in variable {var}")]
    EvalDivisionByZero { var: usize },

    #[error("singular parameter point: {0}")]
    SingularParameter(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::UnknownVariable { .. } | Error::InvalidSpec(_) => 4,
            Error::Numeric(_) => 3,
            _ => 2,
        }
    }
}
