use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input text. `line` is 1-based, `byte` is a 0-based offset within the line.
    #[error("parse error at line {line}, byte {byte}: {message}")]
    Parse {
        line: usize,
        byte: usize,
        message: String,
    },

    /// Well-formed input describing something that is not a simple undirected graph.
    #[error("invalid graph: {0}")]
    Validation(String),

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A scaled series coefficient was not an integer.
    #[error("integrality violation in {matrix}[{term}] at ({row}, {col}): {value}")]
    Integrality {
        matrix: &'static str,
        term: usize,
        row: usize,
        col: usize,
        value: String,
    },

    /// A mathematically guaranteed bound was exceeded.
    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error("points {i} and {k} are {distance:e} apart (floor {floor:e}); reduce the time step")]
    Singularity {
        i: usize,
        k: usize,
        distance: f64,
        floor: f64,
    },

    #[error("graph has {n} vertices, brute force is limited to {max}")]
    TooLarge { n: usize, max: usize },
}

impl Error {
    pub(crate) fn parse(line: usize, byte: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            byte,
            message: message.into(),
        }
    }

    /// True for errors that signal a bug or a broken invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Integrality { .. } | Error::Consistency(_))
    }
}
