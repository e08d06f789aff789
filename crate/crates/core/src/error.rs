use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate transaction id `{0}`")]
    DuplicateTransaction(String),

    #[error("duplicate item `{0}` in catalog")]
    DuplicateItem(String),

    #[error("empty item identifier")]
    EmptyItem,

    #[error("empty transaction id")]
    EmptyTransactionId,

    #[error("transaction `{tid}`: item `{item}` has invalid count {count}")]
    InvalidCount {
        tid: String,
        item: String,
        count: i64,
    },

    #[error("dataset has no transactions")]
    EmptyDataset,

    #[error("dataset has no items")]
    EmptyCatalog,

    #[error("transaction `{tid}` has {got} cells, expected {expected}")]
    RowLength {
        tid: String,
        got: usize,
        expected: usize,
    },

    #[error("unknown transaction id `{0}`")]
    NotFound(String),

    #[error("at least 2 transactions are required, got {0}")]
    TooFewTransactions(usize),

    #[error("invalid similarity matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{}line {line}: {message}", path.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default())]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: None,
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Attaches the originating file to a parse error. Other variants pass through.
    pub fn with_path(self, file: impl Into<PathBuf>) -> Self {
        match self {
            Error::Parse { line, message, .. } => Error::Parse {
                path: Some(file.into()),
                line,
                message,
            },
            other => other,
        }
    }

    /// Process exit status for the CLI: 1 usage, 2 input/parse, 3 compute.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) => 1,
            Error::Parse { .. }
            | Error::Io { .. }
            | Error::DuplicateTransaction(_)
            | Error::DuplicateItem(_)
            | Error::EmptyItem
            | Error::EmptyTransactionId
            | Error::InvalidCount { .. }
            | Error::EmptyDataset
            | Error::EmptyCatalog
            | Error::RowLength { .. } => 2,
            Error::NotFound(_) | Error::TooFewTransactions(_) | Error::InvalidMatrix(_) => 3,
        }
    }
}
