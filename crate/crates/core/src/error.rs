use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{origin}:{line}: {msg}")]
    Parse {
        origin: String,
        line: usize,
        msg: String,
    },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("empty {0} split")]
    EmptySplit(&'static str),

    #[error("sentence {0} requires tags")]
    Untagged(String),

    #[error("lexicon too sparse: {nouns} nouns and {verbs} verbs qualify, need at least {min} of each")]
    LexiconTooSparse { nouns: usize, verbs: usize, min: usize },

    #[error("no pairs")]
    NoPairs,

    #[error("duplicate pair id {0}")]
    DuplicatePairId(String),

    #[error("rank-deficient design: {0}")]
    RankDeficient(String),

    #[error("external scorer: {0}")]
    Protocol(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
