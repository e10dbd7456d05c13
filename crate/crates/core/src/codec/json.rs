//! Canonical JSON documents.
//!
//! ```json
//! {
//!   "id": "p1",
//!   "sentences": [{"id": "sent1", "text": "…", "variables": [{"id": "v1", "span": [0, 4]}]}],
//!   "edges": [{"premise": "sent1", "conclusion": "sent3", "kind": "support"}],
//!   "formulae": [{"sentence": "sent3", "global": [],
//!                 "triples": [{"left": {"var": "v2", "prefix": []}, "op": "and",
//!                              "right": {"var": "v3", "prefix": ["necessary"]}}]}],
//!   "degrees": {"sent1": "contingent"}
//! }
//! ```
//!
//! Spans are `[start, end)` character offsets or `null`. The reader reports
//! the first schema problem with a JSON pointer to it.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use super::words::{self, Operator};
use crate::error::{Error, Result};
use crate::model::{
    BinaryOp, CanonicalDegree, EdgeType, Formula, LogicMetagraph, LogicalTriple, MetaEdge,
    ModalPrefix, Operand, Passage, Sentence, UnaryOp, VariableSpan,
};

fn violation(pointer: &str, message: impl Into<String>) -> Error {
    Error::SchemaViolation {
        pointer: if pointer.is_empty() { "/".into() } else { pointer.into() },
        message: message.into(),
    }
}

fn object<'v>(v: &'v Value, at: &str) -> Result<&'v Map<String, Value>> {
    v.as_object().ok_or_else(|| violation(at, "expected an object"))
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str, at: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| violation(&format!("{at}/{key}"), "required field is missing"))
}

fn string(obj: &Map<String, Value>, key: &str, at: &str) -> Result<String> {
    field(obj, key, at)?
        .as_str()
        .map(str::to_owned)
        .ok_or_else(|| violation(&format!("{at}/{key}"), "expected a string"))
}

fn array<'v>(obj: &'v Map<String, Value>, key: &str, at: &str) -> Result<&'v Vec<Value>> {
    field(obj, key, at)?
        .as_array()
        .ok_or_else(|| violation(&format!("{at}/{key}"), "expected an array"))
}

fn read_span(v: &Value, at: &str) -> Result<Option<(usize, usize)>> {
    if v.is_null() {
        return Ok(None);
    }
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| violation(at, "expected [start, end] or null"))?;
    let num = |i: usize| {
        pair[i]
            .as_u64()
            .map(|n| n as usize)
            .ok_or_else(|| violation(&format!("{at}/{i}"), "expected a non-negative integer"))
    };
    Ok(Some((num(0)?, num(1)?)))
}

fn read_prefix(values: &[Value], at: &str) -> Result<ModalPrefix> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let here = format!("{at}/{i}");
            let name = v.as_str().ok_or_else(|| violation(&here, "expected a string"))?;
            match words::operator(&format!("[{name}]")) {
                Some(Operator::Unary(op)) => Ok(op),
                _ => Err(violation(&here, format!("`{name}` is not a unary operator"))),
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(ModalPrefix)
}

fn read_operand(v: &Value, at: &str) -> Result<Operand> {
    let o = object(v, at)?;
    Ok(Operand {
        var: string(o, "var", at)?,
        prefix: read_prefix(array(o, "prefix", at)?, &format!("{at}/prefix"))?,
    })
}

fn read_triple(v: &Value, at: &str) -> Result<LogicalTriple> {
    let o = object(v, at)?;
    let op_name = string(o, "op", at)?;
    let op = match words::operator(&format!("[{op_name}]")) {
        Some(Operator::Binary(op)) => op,
        _ => return Err(violation(&format!("{at}/op"), format!("`{op_name}` is not a binary operator"))),
    };
    Ok(LogicalTriple {
        left: read_operand(field(o, "left", at)?, &format!("{at}/left"))?,
        op,
        right: read_operand(field(o, "right", at)?, &format!("{at}/right"))?,
    })
}

fn read_graph(v: &Value, at: &str) -> Result<LogicMetagraph> {
    let root = object(v, at)?;
    let id = string(root, "id", at)?;

    let mut sentences = Vec::new();
    for (i, s) in array(root, "sentences", at)?.iter().enumerate() {
        let here = format!("{at}/sentences/{i}");
        let o = object(s, &here)?;
        let mut variables = Vec::new();
        for (j, var) in array(o, "variables", &here)?.iter().enumerate() {
            let vat = format!("{here}/variables/{j}");
            let vo = object(var, &vat)?;
            let span = match vo.get("span") {
                None => None,
                Some(span) => read_span(span, &format!("{vat}/span"))?,
            };
            variables.push(VariableSpan::new(string(vo, "id", &vat)?, span));
        }
        sentences.push(Sentence::new(string(o, "id", &here)?, string(o, "text", &here)?, variables));
    }

    let mut edges = Vec::new();
    for (i, e) in array(root, "edges", at)?.iter().enumerate() {
        let here = format!("{at}/edges/{i}");
        let o = object(e, &here)?;
        let kind = match string(o, "kind", &here)?.as_str() {
            "support" => EdgeType::Support,
            "rebut" => EdgeType::Rebut,
            other => return Err(violation(&format!("{here}/kind"), format!("unknown edge kind `{other}`"))),
        };
        edges.push(MetaEdge::new(string(o, "premise", &here)?, string(o, "conclusion", &here)?, kind));
    }

    let mut formulae = Vec::new();
    for (i, f) in array(root, "formulae", at)?.iter().enumerate() {
        let here = format!("{at}/formulae/{i}");
        let o = object(f, &here)?;
        let global = match o.get("global") {
            None => ModalPrefix::empty(),
            Some(g) => read_prefix(
                g.as_array().ok_or_else(|| violation(&format!("{here}/global"), "expected an array"))?,
                &format!("{here}/global"),
            )?,
        };
        let triples = array(o, "triples", &here)?
            .iter()
            .enumerate()
            .map(|(j, t)| read_triple(t, &format!("{here}/triples/{j}")))
            .collect::<Result<Vec<_>>>()?;
        formulae.push(Formula {
            sentence: string(o, "sentence", &here)?,
            triples,
            global,
        });
    }

    let mut degrees = BTreeMap::new();
    let here = format!("{at}/degrees");
    let dmap = field(root, "degrees", at)?
        .as_object()
        .ok_or_else(|| violation(&here, "expected an object"))?;
    for (sent, word) in dmap {
        let dat = format!("{here}/{}", sent.replace('~', "~0").replace('/', "~1"));
        let word = word.as_str().ok_or_else(|| violation(&dat, "expected a string"))?;
        let degree = CanonicalDegree::from_word(word)
            .ok_or_else(|| violation(&dat, format!("unknown degree `{word}`")))?;
        degrees.insert(sent.clone(), degree);
    }

    Ok(LogicMetagraph {
        passage: Passage::new(id, sentences),
        edges,
        formulae,
        degrees,
    })
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| violation("", format!("invalid JSON: {e}")))
}

pub fn read_json(text: &str) -> Result<LogicMetagraph> {
    read_graph(&parse_value(text)?, "")
}

/// Reads either a single graph document or an array of them.
pub fn read_json_corpus(text: &str) -> Result<Vec<LogicMetagraph>> {
    match parse_value(text)? {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, v)| read_graph(v, &format!("/{i}")))
            .collect(),
        v => Ok(vec![read_graph(&v, "")?]),
    }
}

#[derive(Serialize)]
struct GraphDoc<'g> {
    id: &'g str,
    sentences: Vec<SentenceDoc<'g>>,
    edges: Vec<EdgeDoc<'g>>,
    formulae: Vec<FormulaDoc<'g>>,
    degrees: BTreeMap<&'g str, &'static str>,
}

#[derive(Serialize)]
struct SentenceDoc<'g> {
    id: &'g str,
    text: &'g str,
    variables: Vec<VariableDoc<'g>>,
}

#[derive(Serialize)]
struct VariableDoc<'g> {
    id: &'g str,
    span: Option<[usize; 2]>,
}

#[derive(Serialize)]
struct EdgeDoc<'g> {
    premise: &'g str,
    conclusion: &'g str,
    kind: &'static str,
}

#[derive(Serialize)]
struct FormulaDoc<'g> {
    sentence: &'g str,
    global: Vec<&'static str>,
    triples: Vec<TripleDoc<'g>>,
}

#[derive(Serialize)]
struct TripleDoc<'g> {
    left: OperandDoc<'g>,
    op: &'static str,
    right: OperandDoc<'g>,
}

#[derive(Serialize)]
struct OperandDoc<'g> {
    var: &'g str,
    prefix: Vec<&'static str>,
}

fn prefix_doc(p: &ModalPrefix) -> Vec<&'static str> {
    p.ops().iter().map(|op: &UnaryOp| words::bare(words::unary_word(*op))).collect()
}

fn operand_doc(o: &Operand) -> OperandDoc<'_> {
    OperandDoc {
        var: &o.var,
        prefix: prefix_doc(&o.prefix),
    }
}

fn op_doc(op: BinaryOp) -> &'static str {
    words::bare(words::binary_word(op))
}

fn graph_doc(g: &LogicMetagraph) -> GraphDoc<'_> {
    GraphDoc {
        id: &g.passage.id,
        sentences: g
            .passage
            .sentences
            .iter()
            .map(|s| SentenceDoc {
                id: &s.id,
                text: &s.text,
                variables: s
                    .variables
                    .iter()
                    .map(|v| VariableDoc {
                        id: &v.id,
                        span: v.span.map(|(a, b)| [a, b]),
                    })
                    .collect(),
            })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|e| EdgeDoc {
                premise: &e.premise,
                conclusion: &e.conclusion,
                kind: e.kind.name(),
            })
            .collect(),
        formulae: g
            .formulae
            .iter()
            .map(|f| FormulaDoc {
                sentence: &f.sentence,
                global: prefix_doc(&f.global),
                triples: f
                    .triples
                    .iter()
                    .map(|t| TripleDoc {
                        left: operand_doc(&t.left),
                        op: op_doc(t.op),
                        right: operand_doc(&t.right),
                    })
                    .collect(),
            })
            .collect(),
        degrees: g.degrees.iter().map(|(k, d)| (k.as_str(), d.word())).collect(),
    }
}

pub fn to_json_value(graph: &LogicMetagraph) -> Value {
    serde_json::to_value(graph_doc(graph)).expect("graph documents always serialize")
}

/// Pretty-printed canonical document.
pub fn write_json(graph: &LogicMetagraph) -> String {
    serde_json::to_string_pretty(&graph_doc(graph)).expect("graph documents always serialize")
}

pub fn write_json_corpus(graphs: &[LogicMetagraph]) -> String {
    let docs: Vec<GraphDoc<'_>> = graphs.iter().map(graph_doc).collect();
    serde_json::to_string_pretty(&docs).expect("graph documents always serialize")
}
