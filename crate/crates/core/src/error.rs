use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A dataset file or row failed validation. `line` is 1-based.
    #[error("line {line}: {message}")]
    Ingest { line: usize, message: String },

    #[error("invalid schema: {0}")]
    Schema(String),

    #[error("arity mismatch: expected {expected}, got {found}")]
    Arity { expected: usize, found: usize },

    /// A sample carries both labels.
    #[error("conflicting labels for vector {0:?}")]
    ConflictingLabel(Vec<u64>),

    /// A strategy picks something the game does not offer.
    #[error("strategy domain error: {0}")]
    Domain(String),

    /// The operation needs a different kind of model (graph game vs. MDP).
    #[error("model kind error: {0}")]
    ModelKind(String),

    #[error("invalid game: {0}")]
    Game(String),

    #[error("degenerate ROC curve: {0}")]
    DegenerateCurve(&'static str),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("no predicate splits the data")]
    EmptyUniverse,

    #[error("tree parse error at {path}: {message}")]
    TreeParse { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
