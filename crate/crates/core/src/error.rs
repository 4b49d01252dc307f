use thiserror::Error;

/// Errors raised by construction, evaluation and file handling.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("letter `{letter}` appears in more than one alphabet component ({first} and {second})")]
    OverlappingAlphabet {
        letter: String,
        first: String,
        second: String,
    },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("renaming violates letter kinds: {0}")]
    KindViolation(String),

    #[error("automaton program `{0}` needs a witness bound")]
    BoundRequired(String),

    #[error("unknown world `{0}`")]
    UnknownWorld(String),

    #[error("invalid kripke structure: {0}")]
    InvalidKripke(String),

    #[error("invalid tiling system: {0}")]
    InvalidTiling(String),

    #[error("grid is missing cell ({n}, {m})")]
    IncompleteGrid { n: usize, m: usize },

    #[error("({i}, {j}) is outside the triangle j <= i")]
    OutsideTriangle { i: usize, j: usize },

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{field}: {message}")]
    Format { field: String, message: String },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn format(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
