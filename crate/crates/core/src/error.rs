use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("encrypted PDF is not supported: {0}")]
    EncryptedPdf(PathBuf),
    #[error("malformed PDF: {0}")]
    MalformedPdf(String),
    #[error("schema violation at `{path}`: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("document has no spans")]
    EmptyDocument,
    #[error("inconsistent table lattice: {0}")]
    InconsistentLattice(String),
    #[error("line range {start}..={end} out of bounds for {len} lines")]
    RangeOutOfBounds { start: usize, end: usize, len: usize },
    #[error("value out of domain: {0}")]
    Domain(String),
    #[error("embedding dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("embedder unreachable: {0}")]
    EmbedderUnreachable(String),
    #[error("chunk lacks page metadata: {0}")]
    MissingPages(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
