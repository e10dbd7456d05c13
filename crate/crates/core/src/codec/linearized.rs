//! The `$graph$ … $formula$ … $degree$ …` text format.
//!
//! ```text
//! $graph$ sent1 -> sent3; sent2 -> sent3; sent4 => sent2; $formula$ sent3: v2 [and] [necessary] v3; $degree$ sent1: contingent | sent2: contingent | sent3: necessary | sent4: contingent
//! ```
//!
//! `->` is support and `=>` is rebut; edges end with `;`. A formula group is
//! an optional run of global prefix words, a `sentN:` label, then triples
//! each ending with `;`. Groups for different sentences are joined with
//! `|`, as are degree entries.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::words::{self, Operator};
use crate::error::{Error, Result};
use crate::model::{
    CanonicalDegree, EdgeType, Formula, LogicMetagraph, LogicalTriple, MetaEdge, ModalPrefix,
    Operand, Passage, SentenceId, UnaryOp,
};

pub const GRAPH_MARKER: &str = "$graph$";
pub const FORMULA_MARKER: &str = "$formula$";
pub const DEGREE_MARKER: &str = "$degree$";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParseMode {
    Strict,
    #[default]
    Lenient,
}

impl std::str::FromStr for ParseMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(ParseMode::Strict),
            "lenient" => Ok(ParseMode::Lenient),
            other => Err(format!("unknown parse mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagnosticCode {
    Syntax,
    UnknownId,
    UnknownOperator,
    UnresolvedDegree,
    MalformedEdge,
    MalformedDegree,
    MissingSection,
    DuplicateEntry,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::Syntax => "SYNTAX",
            DiagnosticCode::UnknownId => "UNKNOWN_ID",
            DiagnosticCode::UnknownOperator => "UNKNOWN_OPERATOR",
            DiagnosticCode::UnresolvedDegree => "UNRESOLVED_DEGREE",
            DiagnosticCode::MalformedEdge => "MALFORMED_EDGE",
            DiagnosticCode::MalformedDegree => "MALFORMED_DEGREE",
            DiagnosticCode::MissingSection => "MISSING_SECTION",
            DiagnosticCode::DuplicateEntry => "DUPLICATE_ENTRY",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    /// Byte offset into the parsed text.
    pub position: usize,
    pub code: DiagnosticCode,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at byte {}: {}", self.code, self.position, self.message)
    }
}

impl Diagnostic {
    fn into_error(self) -> Error {
        match self.code {
            DiagnosticCode::UnknownId => Error::UnknownId {
                position: self.position,
                id: self.message,
            },
            DiagnosticCode::UnknownOperator => Error::UnknownOperator {
                position: self.position,
                word: self.message,
            },
            _ => Error::Syntax {
                position: self.position,
                message: format!("{}: {}", self.code, self.message),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseOutcome {
    /// Always present in lenient mode; absent in strict mode as soon as any
    /// diagnostic was raised.
    pub graph: Option<LogicMetagraph>,
    pub diagnostics: Vec<Diagnostic>,
    pub mode: ParseMode,
    /// Sentences whose degree word was out of vocabulary, with that word.
    /// These slots are left empty in the graph.
    pub unresolved_degrees: BTreeMap<SentenceId, String>,
}

impl ParseOutcome {
    pub fn into_result(self) -> Result<LogicMetagraph> {
        match (self.graph, self.diagnostics.into_iter().next()) {
            (Some(g), None) => Ok(g),
            (_, Some(d)) => Err(d.into_error()),
            (None, None) => unreachable!("strict parse without graph or diagnostic"),
        }
    }
}

struct Abort;

struct Parser<'a> {
    passage: &'a Passage,
    mode: ParseMode,
    diagnostics: Vec<Diagnostic>,
}

type Step<T = ()> = std::result::Result<T, Abort>;

impl<'a> Parser<'a> {
    fn emit(&mut self, position: usize, code: DiagnosticCode, message: impl Into<String>) -> Step {
        let code = match (self.mode, code) {
            (
                ParseMode::Strict,
                DiagnosticCode::MalformedEdge
                | DiagnosticCode::MalformedDegree
                | DiagnosticCode::MissingSection
                | DiagnosticCode::DuplicateEntry,
            ) => DiagnosticCode::Syntax,
            (_, code) => code,
        };
        self.diagnostics.push(Diagnostic {
            position,
            code,
            message: message.into(),
        });
        match self.mode {
            ParseMode::Strict => Err(Abort),
            ParseMode::Lenient => Ok(()),
        }
    }
}

/// Splits `body` on `sep`, returning trimmed non-empty pieces with their
/// absolute byte offsets.
fn clauses(body: &str, offset: usize, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for piece in body.split(sep) {
        let lead = piece.len() - piece.trim_start().len();
        let trimmed = piece.trim();
        if !trimmed.is_empty() {
            out.push((offset + start + lead, trimmed));
        }
        start += piece.len() + sep.len_utf8();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TokKind {
    Word,
    Semi,
    Bar,
}

#[derive(Debug, Clone, Copy)]
struct Tok<'s> {
    pos: usize,
    text: &'s str,
    kind: TokKind,
}

fn tokenize(body: &str, offset: usize) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in body.char_indices() {
        let kind = match c {
            ';' => Some(TokKind::Semi),
            '|' => Some(TokKind::Bar),
            _ => None,
        };
        if c.is_whitespace() || kind.is_some() {
            if let Some(s) = start.take() {
                out.push(Tok {
                    pos: offset + s,
                    text: &body[s..i],
                    kind: TokKind::Word,
                });
            }
            if let Some(kind) = kind {
                out.push(Tok {
                    pos: offset + i,
                    text: &body[i..i + 1],
                    kind,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok {
            pos: offset + s,
            text: &body[s..],
            kind: TokKind::Word,
        });
    }
    out
}

fn is_label(word: &str) -> bool {
    word.len() > 1 && word.ends_with(':') && !word.starts_with('[')
}

fn is_bracket(word: &str) -> bool {
    word.starts_with('[') && word.ends_with(']')
}

type TripleError = (usize, DiagnosticCode, String);

/// Parses `[unary]* var [binary] [unary]* var` without resolving ids.
fn triple_from_tokens(toks: &[Tok<'_>]) -> std::result::Result<LogicalTriple, TripleError> {
    let mut i = 0;
    let operand = |i: &mut usize| -> std::result::Result<Operand, TripleError> {
        let mut prefix = Vec::new();
        while let Some(t) = toks.get(*i).filter(|t| is_bracket(t.text)) {
            match words::operator(t.text) {
                Some(Operator::Unary(op)) => prefix.push(op),
                Some(Operator::Binary(_)) => {
                    return Err((t.pos, DiagnosticCode::Syntax, format!("unexpected `{}`", t.text)))
                }
                None => return Err((t.pos, DiagnosticCode::UnknownOperator, t.text.to_string())),
            }
            *i += 1;
        }
        match toks.get(*i) {
            Some(t) => {
                *i += 1;
                Ok(Operand::new(t.text, ModalPrefix(prefix)))
            }
            None => {
                let pos = toks.last().map_or(0, |t| t.pos);
                Err((pos, DiagnosticCode::Syntax, "missing variable".into()))
            }
        }
    };
    let left = operand(&mut i)?;
    let op = match toks.get(i) {
        Some(t) => match words::operator(t.text) {
            Some(Operator::Binary(op)) => op,
            Some(Operator::Unary(_)) => {
                return Err((t.pos, DiagnosticCode::Syntax, format!("expected a binary operator, got `{}`", t.text)))
            }
            None if is_bracket(t.text) => {
                return Err((t.pos, DiagnosticCode::UnknownOperator, t.text.to_string()))
            }
            None => return Err((t.pos, DiagnosticCode::Syntax, format!("expected a binary operator, got `{}`", t.text))),
        },
        None => {
            let pos = toks.last().map_or(0, |t| t.pos);
            return Err((pos, DiagnosticCode::Syntax, "missing binary operator".into()));
        }
    };
    i += 1;
    let right = operand(&mut i)?;
    if let Some(t) = toks.get(i) {
        return Err((t.pos, DiagnosticCode::Syntax, format!("trailing `{}`", t.text)));
    }
    Ok(LogicalTriple::new(left, op, right))
}

/// Parses a bare list of `;`-separated triples such as
/// `[necessary] v1 [and] v2; v3 [entail] v4`. Variable ids are not checked.
pub fn parse_triples(text: &str) -> Result<Vec<LogicalTriple>> {
    let toks = tokenize(text, 0);
    toks.split(|t| t.kind != TokKind::Word)
        .filter(|seg| !seg.is_empty())
        .map(|seg| {
            triple_from_tokens(seg).map_err(|(position, code, message)| {
                Diagnostic {
                    position,
                    code,
                    message,
                }
                .into_error()
            })
        })
        .collect()
}

/// Parses a linearized graph against `passage`, which supplies the sentence
/// and variable ids that may be referenced.
pub fn parse_linearized(text: &str, passage: &Passage, mode: ParseMode) -> ParseOutcome {
    let mut parser = Parser {
        passage,
        mode,
        diagnostics: Vec::new(),
    };
    let mut graph = LogicMetagraph::empty(passage.clone());
    let mut unresolved = BTreeMap::new();
    let finished = parser.run(text, &mut graph, &mut unresolved).is_ok();
    ParseOutcome {
        graph: (finished && (mode == ParseMode::Lenient || parser.diagnostics.is_empty())).then_some(graph),
        diagnostics: parser.diagnostics,
        mode,
        unresolved_degrees: unresolved,
    }
}

impl<'a> Parser<'a> {
    fn run(
        &mut self,
        text: &str,
        graph: &mut LogicMetagraph,
        unresolved: &mut BTreeMap<SentenceId, String>,
    ) -> Step {
        let [g, f, d] = self.sections(text)?;
        if let Some((off, body)) = g {
            self.graph_section(body, off, graph)?;
        }
        if let Some((off, body)) = f {
            self.formula_section(body, off, graph)?;
        }
        if let Some((off, body)) = d {
            self.degree_section(body, off, graph, unresolved)?;
        }
        Ok(())
    }

    fn sections<'t>(&mut self, text: &'t str) -> Step<[Option<(usize, &'t str)>; 3]> {
        let markers = [GRAPH_MARKER, FORMULA_MARKER, DEGREE_MARKER];
        let found: Vec<Option<usize>> = markers.iter().map(|m| text.find(m)).collect();

        if self.mode == ParseMode::Strict {
            for (m, at) in markers.iter().zip(&found) {
                match at {
                    None => self.emit(text.len(), DiagnosticCode::MissingSection, format!("missing {m}"))?,
                    Some(at) if text[at + m.len()..].contains(m) => {
                        self.emit(*at, DiagnosticCode::Syntax, format!("repeated {m}"))?
                    }
                    Some(_) => {}
                }
            }
            let positions: Vec<usize> = found.iter().flatten().copied().collect();
            if positions.windows(2).any(|w| w[0] > w[1]) {
                self.emit(0, DiagnosticCode::Syntax, "sections out of order")?;
            }
            if !text[..positions[0]].trim().is_empty() {
                self.emit(0, DiagnosticCode::Syntax, "text before $graph$")?;
            }
        } else {
            for (m, at) in markers.iter().zip(&found) {
                if at.is_none() {
                    self.emit(text.len(), DiagnosticCode::MissingSection, format!("missing {m}"))?;
                }
            }
        }

        let mut out = [None, None, None];
        for (i, at) in found.iter().enumerate() {
            let Some(at) = *at else { continue };
            let start = at + markers[i].len();
            let end = found
                .iter()
                .flatten()
                .copied()
                .filter(|&other| other > at)
                .min()
                .unwrap_or(text.len());
            out[i] = Some((start, &text[start..end]));
        }
        Ok(out)
    }

    fn graph_section(&mut self, body: &str, offset: usize, graph: &mut LogicMetagraph) -> Step {
        for (pos, clause) in clauses(body, offset, ';') {
            let arrow = [("->", EdgeType::Support), ("=>", EdgeType::Rebut)]
                .into_iter()
                .filter_map(|(a, kind)| clause.find(a).map(|at| (at, kind)))
                .min_by_key(|(at, _)| *at);
            let Some((at, kind)) = arrow else {
                self.emit(pos, DiagnosticCode::MalformedEdge, format!("no arrow in `{clause}`"))?;
                continue;
            };
            let premise = clause[..at].trim();
            let conclusion = clause[at + 2..].trim();
            let single = |s: &str| !s.is_empty() && !s.contains(char::is_whitespace);
            if !single(premise) || !single(conclusion) {
                self.emit(pos, DiagnosticCode::MalformedEdge, format!("malformed edge `{clause}`"))?;
                continue;
            }
            let mut ok = true;
            for id in [premise, conclusion] {
                if !self.passage.contains(id) {
                    self.emit(pos, DiagnosticCode::UnknownId, id)?;
                    ok = false;
                }
            }
            if ok {
                graph.edges.push(MetaEdge::new(premise, conclusion, kind));
            }
        }
        Ok(())
    }

    fn formula_section(&mut self, body: &str, offset: usize, graph: &mut LogicMetagraph) -> Step {
        let toks = tokenize(body, offset);
        let mut current = FormulaSlot::Unlabelled;

        for seg in toks.split(|t| t.kind != TokKind::Word).filter(|s| !s.is_empty()) {
            let labels: Vec<usize> = (0..seg.len()).filter(|&i| is_label(seg[i].text)).collect();
            let triple_toks = match labels.as_slice() {
                [] => seg,
                [k] => {
                    let label = seg[*k];
                    let mut global = Vec::new();
                    let mut bad_global = false;
                    for t in &seg[..*k] {
                        match words::operator(t.text) {
                            Some(Operator::Unary(op)) => global.push(op),
                            Some(Operator::Binary(_)) => {
                                self.emit(t.pos, DiagnosticCode::Syntax, format!("binary `{}` before label", t.text))?;
                                bad_global = true;
                            }
                            None if is_bracket(t.text) => {
                                self.emit(t.pos, DiagnosticCode::UnknownOperator, t.text)?;
                                bad_global = true;
                            }
                            None => {
                                self.emit(t.pos, DiagnosticCode::Syntax, format!("unexpected `{}` before label", t.text))?;
                                bad_global = true;
                            }
                        }
                    }
                    current = self.open_formula(label, global, bad_global, graph)?;
                    &seg[k + 1..]
                }
                _ => {
                    self.emit(seg[labels[1]].pos, DiagnosticCode::Syntax, "two sentence labels in one clause")?;
                    current = FormulaSlot::Skip;
                    continue;
                }
            };
            if triple_toks.is_empty() {
                continue;
            }
            let idx = match current {
                FormulaSlot::Sentence(idx) => idx,
                FormulaSlot::Skip => continue,
                FormulaSlot::Unlabelled => {
                    self.emit(triple_toks[0].pos, DiagnosticCode::Syntax, "triple without a sentence label")?;
                    continue;
                }
            };
            match triple_from_tokens(triple_toks) {
                Err((pos, code, msg)) => self.emit(pos, code, msg)?,
                Ok(triple) => {
                    let sentence = self
                        .passage
                        .sentence(&graph.formulae[idx].sentence)
                        .expect("label was resolved");
                    let mut ok = true;
                    for (var, t) in [(&triple.left.var, triple_toks[0]), (&triple.right.var, triple_toks[triple_toks.len() - 1])] {
                        if sentence.variable(var).is_none() {
                            self.emit(t.pos, DiagnosticCode::UnknownId, format!("{}/{}", sentence.id, var))?;
                            ok = false;
                        }
                    }
                    if ok {
                        graph.formulae[idx].triples.push(triple);
                    }
                }
            }
        }
        Ok(())
    }

    fn open_formula(
        &mut self,
        label: Tok<'_>,
        global: Vec<UnaryOp>,
        bad_global: bool,
        graph: &mut LogicMetagraph,
    ) -> Step<FormulaSlot> {
        let id = label.text.trim_end_matches(':');
        if !self.passage.contains(id) {
            self.emit(label.pos, DiagnosticCode::UnknownId, id)?;
            return Ok(FormulaSlot::Skip);
        }
        if bad_global {
            return Ok(FormulaSlot::Skip);
        }
        if let Some(idx) = graph.formulae.iter().position(|f| f.sentence == id) {
            self.emit(label.pos, DiagnosticCode::DuplicateEntry, format!("second formula for {id}"))?;
            if graph.formulae[idx].global.is_empty() {
                graph.formulae[idx].global = ModalPrefix(global);
            }
            return Ok(FormulaSlot::Sentence(idx));
        }
        graph
            .formulae
            .push(Formula::new(id, Vec::new()).with_global(ModalPrefix(global)));
        Ok(FormulaSlot::Sentence(graph.formulae.len() - 1))
    }

    fn degree_section(
        &mut self,
        body: &str,
        offset: usize,
        graph: &mut LogicMetagraph,
        unresolved: &mut BTreeMap<SentenceId, String>,
    ) -> Step {
        for (pos, clause) in clauses(body, offset, '|') {
            let Some((id, word)) = clause.split_once(':') else {
                self.emit(pos, DiagnosticCode::MalformedDegree, format!("no `:` in `{clause}`"))?;
                continue;
            };
            let (id, word) = (id.trim(), word.trim().trim_end_matches(';').trim());
            if id.is_empty() || id.contains(char::is_whitespace) {
                self.emit(pos, DiagnosticCode::MalformedDegree, format!("malformed degree `{clause}`"))?;
                continue;
            }
            if !self.passage.contains(id) {
                self.emit(pos, DiagnosticCode::UnknownId, id)?;
                continue;
            }
            if graph.degrees.contains_key(id) || unresolved.contains_key(id) {
                self.emit(pos, DiagnosticCode::DuplicateEntry, format!("second degree for {id}"))?;
                continue;
            }
            match CanonicalDegree::from_word(&word.to_lowercase()) {
                Some(degree) => {
                    graph.degrees.insert(id.to_string(), degree);
                }
                None => {
                    self.emit(pos, DiagnosticCode::UnresolvedDegree, format!("{id}: {word}"))?;
                    unresolved.insert(id.to_string(), word.to_string());
                }
            }
        }
        Ok(())
    }
}

/// Where subsequent triples of the formula section go.
#[derive(Clone, Copy)]
enum FormulaSlot {
    Unlabelled,
    Skip,
    Sentence(usize),
}

/// Collapses whitespace runs to single spaces and trims the ends.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn render_operand(o: &Operand) -> String {
    let w = words::prefix_words(o.prefix.ops());
    if w.is_empty() {
        o.var.clone()
    } else {
        format!("{w} {}", o.var)
    }
}

pub fn render_triple(t: &LogicalTriple) -> String {
    format!(
        "{} {} {}",
        render_operand(&t.left),
        words::binary_word(t.op),
        render_operand(&t.right)
    )
}

/// Orders ids by passage position; unknown ids sort last, by id.
fn passage_order<'g>(passage: &Passage, ids: impl Iterator<Item = &'g str>) -> Vec<&'g str> {
    let mut ids: Vec<&str> = ids.collect();
    ids.sort_by_key(|id| (passage.position(id).unwrap_or(usize::MAX), id.to_string()));
    ids
}

/// Serializes without validating. Edges keep their stored order; formulae
/// and degrees follow sentence order.
pub fn render_linearized(graph: &LogicMetagraph) -> String {
    let mut parts: Vec<String> = vec![GRAPH_MARKER.into()];
    parts.extend(graph.edges.iter().map(|e| format!("{e};")));

    parts.push(FORMULA_MARKER.into());
    let order = passage_order(&graph.passage, graph.formulae.iter().map(|f| f.sentence.as_str()));
    let groups: Vec<String> = order
        .iter()
        .filter_map(|id| graph.formula(id))
        .map(|f| {
            let mut g: Vec<String> = f.global.ops().iter().map(|op| words::unary_word(*op).to_string()).collect();
            g.push(format!("{}:", f.sentence));
            g.extend(f.triples.iter().map(|t| format!("{};", render_triple(t))));
            g.join(" ")
        })
        .collect();
    if !groups.is_empty() {
        parts.push(groups.join(" | "));
    }

    parts.push(DEGREE_MARKER.into());
    let order = passage_order(&graph.passage, graph.degrees.keys().map(String::as_str));
    let degrees: Vec<String> = order
        .iter()
        .map(|id| format!("{id}: {}", graph.degrees[*id]))
        .collect();
    if !degrees.is_empty() {
        parts.push(degrees.join(" | "));
    }
    parts.join(" ")
}

pub fn serialize_linearized(graph: &LogicMetagraph) -> Result<String> {
    crate::model::validate_graph(graph).into_result()?;
    Ok(render_linearized(graph))
}
