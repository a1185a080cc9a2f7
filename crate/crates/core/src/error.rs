use std::fmt;

/// Errors raised across the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what}: instance of size {size} exceeds the cap of {cap}")]
    InstanceTooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("{what}: budget of {budget} exhausted after {partial} items")]
    BudgetExceeded {
        what: &'static str,
        budget: u64,
        partial: u64,
    },

    #[error("gadget parameter ell must be even, got {0}")]
    OddEll(usize),

    #[error("vertex {0} is not a vertex of the graph")]
    UnknownVertex(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("set {set} is not a subset of {of}")]
    NotSubset { set: String, of: String },

    #[error("guarantee violated for objective {objective} at solution {solution}: value {value} > guarantee {guarantee}")]
    GuaranteeViolation {
        objective: String,
        solution: String,
        value: String,
        guarantee: String,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry {
        row: usize,
        col: usize,
        value: String,
    },

    #[error("identity violated at {at}: expected {expected}, found {found}")]
    IdentityViolation {
        at: String,
        expected: String,
        found: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("linear program is infeasible: {0}")]
    Infeasible(String),

    #[error("linear program is unbounded: {0}")]
    Unbounded(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: Position, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Location of a parse failure. Rows and columns are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: Option<usize>,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.column {
            Some(c) => write!(f, "line {}, column {}", self.line, c),
            None => write!(f, "line {}", self.line),
        }
    }
}

impl Error {
    pub(crate) fn parse(line: usize, column: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos: Position { line, column },
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
