use std::path::PathBuf;

use thiserror::Error;

use crate::model::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. Each variant carries a stable
/// machine-readable code (see [`Error::code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph failed validation: {0}")]
    InvalidGraph(ValidationReport),

    #[error("formulae attach to different sentences: {left} vs {right}")]
    SentenceMismatch { left: String, right: String },

    #[error("gold and prediction refer to different passages: {gold} vs {pred}")]
    PassageMismatch { gold: String, pred: String },

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown id `{id}` at byte {position}")]
    UnknownId { position: usize, id: String },

    #[error("unknown operator word `{word}` at byte {position}")]
    UnknownOperator { position: usize, word: String },

    #[error("unresolved degree of certainty `{word}` for {sentence}")]
    UnresolvedDegree { sentence: String, word: String },

    #[error("schema violation at {pointer}: {message}")]
    SchemaViolation { pointer: String, message: String },

    #[error("label lists differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("label `{0}` is not in the label space")]
    UnknownLabel(String),

    #[error("empty input")]
    EmptyInput,

    #[error("missing variable spans in sentence {0}")]
    MissingSpans(String),

    #[error("cannot align variables in sentence {sentence}: {message}")]
    VariableAlignment { sentence: String, message: String },

    #[error("annotations do not cover the same passage: {0}")]
    PairMismatch(String),

    #[error("parse has {parse} tokens, sentence has {sentence}: {detail}")]
    ParseMismatch {
        parse: usize,
        sentence: usize,
        detail: String,
    },

    #[error("malformed row at line {line}: {message}")]
    MalformedRow { line: usize, message: String },

    #[error("sentence starting at line {line} has {count} roots")]
    MultipleRoots { line: usize, count: usize },

    #[error("invalid dependency tree: {0}")]
    InvalidTree(String),

    #[error("lexicon entry `{word}` appears in both {first} and {second}")]
    LexiconOverlap {
        word: String,
        first: &'static str,
        second: &'static str,
    },

    #[error("malformed lexicon: {0}")]
    MalformedLexicon(String),

    #[error("cannot split an empty corpus")]
    EmptyCorpus,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidGraph(_) => "INVALID_GRAPH",
            Error::SentenceMismatch { .. } => "SENTENCE_MISMATCH",
            Error::PassageMismatch { .. } => "PASSAGE_MISMATCH",
            Error::Syntax { .. } => "SYNTAX",
            Error::UnknownId { .. } => "UNKNOWN_ID",
            Error::UnknownOperator { .. } => "UNKNOWN_OPERATOR",
            Error::UnresolvedDegree { .. } => "UNRESOLVED_DEGREE",
            Error::SchemaViolation { .. } => "SCHEMA_VIOLATION",
            Error::LengthMismatch { .. } => "LENGTH_MISMATCH",
            Error::UnknownLabel(_) => "UNKNOWN_LABEL",
            Error::EmptyInput => "EMPTY_INPUT",
            Error::MissingSpans(_) => "MISSING_SPANS",
            Error::VariableAlignment { .. } => "VARIABLE_ALIGNMENT_FAILURE",
            Error::PairMismatch(_) => "PAIRING_ERROR",
            Error::ParseMismatch { .. } => "PARSE_MISMATCH",
            Error::MalformedRow { .. } => "MALFORMED_ROW",
            Error::MultipleRoots { .. } => "MULTIPLE_ROOTS",
            Error::InvalidTree(_) => "INVALID_TREE",
            Error::LexiconOverlap { .. } => "LEXICON_OVERLAP",
            Error::MalformedLexicon(_) => "MALFORMED_LEXICON",
            Error::EmptyCorpus => "EMPTY_CORPUS",
            Error::Io { .. } => "IO",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
