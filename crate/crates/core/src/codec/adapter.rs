//! Import adapters turn third-party or line-oriented files into metagraphs.

use std::path::Path;

use super::json::{read_json_corpus, write_json_corpus};
use super::linearized::{parse_linearized, serialize_linearized, ParseMode};
use super::source::{parse_source, write_source};
use crate::error::{Error, Result};
use crate::model::LogicMetagraph;

pub trait ImportAdapter {
    fn name(&self) -> &'static str;

    fn accepts(&self, path: &Path) -> bool;

    fn import(&self, content: &str) -> Result<Vec<LogicMetagraph>>;
}

/// Canonical JSON: one graph or an array of graphs.
pub struct JsonAdapter;

impl ImportAdapter for JsonAdapter {
    fn name(&self) -> &'static str {
        "json"
    }

    fn accepts(&self, path: &Path) -> bool {
        path.extension().is_some_and(|e| e == "json")
    }

    fn import(&self, content: &str) -> Result<Vec<LogicMetagraph>> {
        read_json_corpus(content)
    }
}

/// Tab-separated records `id<TAB>source<TAB>linearized`, one per line.
/// Blank lines and lines starting with `#` are skipped.
pub struct LinearizedRecordAdapter;

impl ImportAdapter for LinearizedRecordAdapter {
    fn name(&self) -> &'static str {
        "linearized"
    }

    fn accepts(&self, path: &Path) -> bool {
        path.extension().is_some_and(|e| e == "lin" || e == "tsv")
    }

    fn import(&self, content: &str) -> Result<Vec<LogicMetagraph>> {
        let mut out = Vec::new();
        let mut offset = 0;
        for line in content.split_inclusive('\n') {
            let start = offset;
            offset += line.len();
            let line = line.trim_end_matches(['\n', '\r']);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [id, source, linearized] = fields[..] else {
                return Err(Error::Syntax {
                    position: start,
                    message: format!("expected 3 tab-separated fields, found {}", fields.len()),
                });
            };
            let passage = parse_source(id.trim(), source)?;
            let graph = parse_linearized(linearized, &passage, ParseMode::Strict)
                .into_result()
                .map_err(|e| shift(e, start + id.len() + source.len() + 2))?;
            out.push(graph);
        }
        Ok(out)
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { position, message } => Error::Syntax {
            position: position + by,
            message,
        },
        Error::UnknownId { position, id } => Error::UnknownId {
            position: position + by,
            id,
        },
        Error::UnknownOperator { position, word } => Error::UnknownOperator {
            position: position + by,
            word,
        },
        e => e,
    }
}

pub fn builtin_adapters() -> Vec<Box<dyn ImportAdapter>> {
    vec![Box::new(JsonAdapter), Box::new(LinearizedRecordAdapter)]
}

pub fn adapter_for(path: &Path) -> Option<Box<dyn ImportAdapter>> {
    builtin_adapters().into_iter().find(|a| a.accepts(path))
}

/// Reads a corpus file with the adapter matching its extension.
pub fn load_corpus(path: &Path) -> Result<Vec<LogicMetagraph>> {
    let adapter = adapter_for(path).ok_or_else(|| Error::Syntax {
        position: 0,
        message: format!("no reader for {}", path.display()),
    })?;
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    adapter.import(&content)
}

pub fn write_linearized_records(graphs: &[LogicMetagraph]) -> Result<String> {
    let mut out = String::new();
    for g in graphs {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            g.passage.id,
            write_source(&g.passage),
            serialize_linearized(g)?
        ));
    }
    Ok(out)
}

pub fn write_corpus_as(graphs: &[LogicMetagraph], linearized: bool) -> Result<String> {
    if linearized {
        write_linearized_records(graphs)
    } else {
        Ok(write_json_corpus(graphs))
    }
}

/// Reads prediction lines `id<TAB>linearized`.
pub fn read_prediction_lines(content: &str) -> Result<Vec<(String, String)>> {
    content
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            l.split_once('\t')
                .map(|(id, text)| (id.trim().to_string(), text.to_string()))
                .ok_or_else(|| Error::Syntax {
                    position: i,
                    message: format!("line {}: expected `id<TAB>linearized`", i + 1),
                })
        })
        .collect()
}
