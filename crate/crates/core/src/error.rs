use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed board {input:?}: {reason}")]
    MalformedBoard { input: String, reason: &'static str },

    #[error("illegal move {0}: blank would leave the grid")]
    IllegalMove(String),

    #[error("no solvable board at optimal distance {0}")]
    UnreachableDistance(u32),

    #[error("action {0} cannot be compared with itself")]
    SelfComparison(usize),

    #[error("cannot search from a terminal state")]
    TerminalState,

    #[error("non-terminal state has no legal actions")]
    NoActions,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("episode failed for {config}: {source}")]
    Episode {
        config: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
