use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at {0}")]
    DenominatorVanishes(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("arity mismatch for `{name}`: expected {expected}, found {found}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("map `{map}` is not invertible (det = {det})")]
    NotInvertible { map: String, det: String },
    #[error("variable `{var}` is not linear in term {term}")]
    LinearityViolation { var: String, term: usize },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("point {0} violates a ring constraint")]
    ConstraintViolated(String),
    #[error("missing operation `{0}`")]
    MissingOp(String),
    #[error("missing map `{0}`")]
    MissingMap(String),
    #[error("predicate failed: {0}")]
    PredicateFailed(String),
    #[error("inconsistent linear system at row {0}")]
    Inconsistent(usize),
    #[error("unknown catalog entry {0}")]
    UnknownEntry(u32),
    #[error("unknown structure `{0}`")]
    UnknownStructure(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax { pos, msg: msg.into() }
    }
}
