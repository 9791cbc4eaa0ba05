use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed json in {path}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("no tables found in {0}")]
    NoTables(PathBuf),

    #[error("missing corpus metadata file {0}")]
    MissingMetadata(PathBuf),

    #[error("{file}:{line}: ragged row, expected {expected} cells, found {found}")]
    RaggedRow { file: PathBuf, line: usize, expected: usize, found: usize },

    #[error("{file}:{line}: empty cell in column {col}")]
    EmptyCell { file: PathBuf, line: usize, col: usize },

    #[error("duplicate table id `{0}`")]
    DuplicateTable(String),

    #[error("invalid table `{table}`: {reason}")]
    InvalidTable { table: String, reason: String },

    #[error("invalid question `{id}`: {reason}")]
    InvalidQuestion { id: String, reason: String },

    #[error("no constituents in question `{0}`")]
    NoConstituents(String),

    #[error("hypothesis `{0}` has no content tokens")]
    EmptyHypothesis(String),

    #[error("malformed relation pattern `{0}`: X and Y must each appear exactly once")]
    MalformedPattern(String),

    #[error("constraint `{tag}` references undeclared variable `{var}`")]
    UndeclaredVariable { tag: String, var: String },

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("brute force limited to {max} variables, problem has {found}")]
    TooManyVariables { max: usize, found: usize },

    #[error("solution is not optimal (status {0})")]
    NotOptimal(String),

    #[error("perturbation pool has {0} usable words, need at least 3")]
    PoolTooSmall(usize),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("ensemble: {0}")]
    Ensemble(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
