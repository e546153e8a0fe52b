use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("missing index file {0}")]
    MissingFile(PathBuf),

    #[error("{path}, line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("degenerate corpus: every document tokenizes to zero tokens")]
    DegenerateCorpus,

    #[error("duplicate document id {0:?}")]
    DuplicateId(String),

    #[error("corrupt matrix: {0}")]
    CorruptMatrix(String),

    #[error("structural mismatch: {0}")]
    Structural(String),

    #[error("index format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("run and qrels share no query ids")]
    NoOverlap,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
