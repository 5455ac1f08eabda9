use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: odd label {label} on edge {u}-{v}")]
    OddLabel {
        line: usize,
        u: String,
        v: String,
        label: u32,
    },

    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: String, v: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("diagram is not admissible: {0}")]
    InvalidDiagram(String),

    #[error("word reduction exceeded the orbit budget of {budget} words")]
    BudgetExceeded { budget: usize },

    #[error("invalid label: {0}")]
    InvalidLabel(String),

    #[error("canonicalization failed: {0}")]
    Canonicalization(String),

    #[error("cross-check mismatch: {0}")]
    CrossCheck(String),

    #[error("free product: {0}")]
    FreeProduct(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
