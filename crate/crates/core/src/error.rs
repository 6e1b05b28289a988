use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("line {line}: score {value} outside [0, 100]")]
    Range { line: u64, value: String },

    #[error("conflict: {0}")]
    Conflict(String),

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("empty subset `{0}`")]
    EmptySubset(String),

    #[error("missing {metric} score for parser `{parser}` on treebank `{treebank}`")]
    MissingScore {
        parser: String,
        treebank: String,
        metric: String,
    },

    #[error("every cell of subset `{subset}` was skipped for parser `{parser}`")]
    AllSkipped { parser: String, subset: String },

    #[error("unknown parser `{0}`")]
    UnknownParser(String),

    #[error("unknown treebank `{0}`")]
    UnknownTreebank(String),

    #[error("score matrix has no parsers")]
    NoParsers,

    #[error("line {line}: {message}")]
    Conllu { line: usize, message: String },

    #[error("alignment mismatch in sentence {sentence}{}: {detail}", word.map(|w| format!(", word {w}")).unwrap_or_default())]
    Alignment {
        sentence: usize,
        word: Option<usize>,
        detail: String,
    },

    #[error("subset size {subset_size} exceeds universe size {universe}")]
    SubsetTooLarge { subset_size: usize, universe: usize },

    #[error("{requested} distinct samples requested but only {available} combinations exist")]
    TooManyDistinct { requested: u64, available: String },

    #[error("error reduction undefined on treebank `{treebank}`: reference scores 100 and compared scores {compared}")]
    UndefinedErrorReduction { treebank: String, compared: String },

    #[error("only {available} distinct languages available, {requested} requested")]
    NotEnoughLanguages { requested: usize, available: usize },

    #[error("invalid tag `{0}`")]
    InvalidTag(String),

    #[error("tag `{0}` matches no treebank in the metadata")]
    UnknownTag(String),

    #[error("empty sample set")]
    NoSamples,

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
