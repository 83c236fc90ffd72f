use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A malformed line in one of the tab-separated resources.
    #[error("{source_name}:{line}: {message}")]
    Format {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("duplicate sense ({lemma}, {sense_id})")]
    DuplicateSense { lemma: String, sense_id: u32 },

    #[error("invalid record: {0}")]
    Invalid(String),

    #[error("inflection lexicon is empty")]
    EmptyInflections,

    #[error("'{0}' is too short to be stemmed")]
    TooShort(String),

    #[error("tokens outside the lexicon: {}", .0.join(", "))]
    UnknownTokens(Vec<String>),

    #[error("unparsable: {0}")]
    Unparsable(String),

    #[error("unanalyzable question: {0}")]
    UnanalyzableQuestion(String),

    #[error("pattern {id}: {message}")]
    Pattern { id: String, message: String },

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn format(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            source_name: source_name.to_owned(),
            line,
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the run configuration rather than by input data.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}
