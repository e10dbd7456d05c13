//! Text and JSON representations of metagraphs.

pub mod adapter;
pub mod json;
pub mod linearized;
pub mod source;
pub mod words;

pub use adapter::{
    adapter_for, builtin_adapters, load_corpus, read_prediction_lines, write_corpus_as, write_linearized_records,
    ImportAdapter, JsonAdapter, LinearizedRecordAdapter,
};
pub use json::{read_json, read_json_corpus, write_json, write_json_corpus};
pub use linearized::{
    normalize_whitespace, parse_linearized, parse_triples, render_linearized, serialize_linearized,
    Diagnostic, DiagnosticCode, ParseMode, ParseOutcome,
};
pub use source::{parse_source, write_source};
