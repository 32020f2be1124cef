use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^63")]
    InvalidPrime(u64),

    #[error("prime bit length {0} outside [20, 62]")]
    PrimeBits(u32),

    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfBounds { row: usize, col: usize, rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed wedge subset {subset:?} for n = {n}")]
    MalformedSubset { subset: Vec<usize>, n: usize },

    #[error("divisor class {class} does not match surface {surface}")]
    ClassMismatch { class: String, surface: String },

    #[error("invalid surface model: {0}")]
    InvalidSurface(String),

    #[error("the degree-one piece is zero, so V would be empty")]
    EmptyGenerators,

    #[error("defining form is zero")]
    ZeroForm,

    #[error("point {0:?} is singular on the curve")]
    SingularPoint(Vec<u64>),

    #[error("point {0:?} does not lie on the curve")]
    PointNotOnCurve(Vec<u64>),

    #[error("prime {prime} must exceed {needed} for the requested vanishing orders")]
    PrimeTooSmall { prime: u64, needed: u64 },

    #[error("branch expansion failed: {0}")]
    Branch(String),

    #[error("found {} of {requested} smooth points within the search budget", partial.len())]
    PointBudget { requested: usize, partial: Vec<[u64; 3]> },

    #[error("every section of the degree-one piece vanishes at {0:?}")]
    BaseLocus(Vec<u64>),

    #[error("cell (p={p}, q={q}) is outside the computable window: {reason}")]
    Window { p: usize, q: usize, reason: String },

    #[error("vector is not a cocycle at (p={p}, q={q})")]
    NotACocycle { p: usize, q: usize },

    #[error("class is zero")]
    ZeroClass,

    #[error("standing hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("module lacks restriction provenance: {0}")]
    Provenance(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("largest Koszul matrix would hold {nnz} nonzeros, above the limit {limit} (use force)")]
    Guardrail { nnz: usize, limit: usize },

    #[error("internal consistency check failed: {0}")]
    Construction(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
