//! Rule-based unary-operator extraction from dependency parses.
//!
//! Indicator words within [`MAX_HOPS`] head edges of the sentence root give
//! the global prefix; indicators inside a variable span, measured from the
//! span's own root, give that variable's local prefix. A token used
//! globally is not reused locally. Prefixes list the indicator nearest its
//! root first, ties by token position.

mod conllu;
mod lexicon;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

pub use conllu::{ingest_conllu, DepToken, DependencyParse};
pub use lexicon::IndicatorLexicon;

use crate::error::{Error, Result};
use crate::model::{ModalPrefix, Sentence, UnaryOp, VariableId};

/// Largest root distance at which an indicator still counts. The root
/// itself is at distance 0.
pub const MAX_HOPS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "scope", content = "variable", rename_all = "lowercase")]
pub enum Scope {
    Global,
    Local(VariableId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Match {
    pub token: usize,
    pub op: UnaryOp,
    pub hops: usize,
    pub scope: Scope,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionResult {
    pub global: ModalPrefix,
    pub local: BTreeMap<VariableId, ModalPrefix>,
    pub matched: Vec<Match>,
}

fn indicator(lexicon: &IndicatorLexicon, token: &DepToken) -> Option<UnaryOp> {
    lexicon
        .lookup(&token.form)
        .or_else(|| token.lemma.as_deref().and_then(|l| lexicon.lookup(l)))
}

/// Char offsets of each parse token in the sentence text. Tokens must
/// appear in order, separated only by whitespace.
fn token_offsets(text: &str, parse: &DependencyParse) -> Result<Vec<(usize, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mismatch = |detail: String| Error::ParseMismatch {
        parse: parse.len(),
        sentence: text.split_whitespace().count(),
        detail,
    };
    let mut cursor = 0;
    let mut out = Vec::with_capacity(parse.len());
    for (i, form) in parse.forms().enumerate() {
        while cursor < chars.len() && chars[cursor].is_whitespace() {
            cursor += 1;
        }
        let f: Vec<char> = form.chars().collect();
        if f.is_empty() || chars.get(cursor..cursor + f.len()) != Some(&f[..]) {
            return Err(mismatch(format!("token {i} `{form}` not found at char {cursor}")));
        }
        out.push((cursor, cursor + f.len()));
        cursor += f.len();
    }
    if chars[cursor..].iter().any(|c| !c.is_whitespace()) {
        return Err(mismatch(format!("text after char {cursor} is not covered by the parse")));
    }
    Ok(out)
}

fn ordered(mut found: Vec<Match>) -> (ModalPrefix, Vec<Match>) {
    found.sort_by_key(|m| (m.hops, m.token));
    (ModalPrefix(found.iter().map(|m| m.op).collect()), found)
}

/// Indicators within [`MAX_HOPS`] of the sentence root.
pub fn extract_global(
    sentence: &Sentence,
    parse: &DependencyParse,
    lexicon: &IndicatorLexicon,
) -> Result<(ModalPrefix, Vec<Match>)> {
    token_offsets(&sentence.text, parse)?;
    let found = parse
        .tokens()
        .iter()
        .enumerate()
        .filter(|(i, _)| parse.depth(*i) <= MAX_HOPS)
        .filter_map(|(i, t)| {
            indicator(lexicon, t).map(|op| Match {
                token: i,
                op,
                hops: parse.depth(i),
                scope: Scope::Global,
            })
        })
        .collect();
    Ok(ordered(found))
}

/// The span token whose head lies outside the span; the shallowest one,
/// then the earliest, if there are several.
fn span_root(parse: &DependencyParse, tokens: &BTreeSet<usize>) -> Option<usize> {
    tokens
        .iter()
        .copied()
        .filter(|t| parse.tokens()[*t].head.is_none_or(|h| !tokens.contains(&h)))
        .min_by_key(|t| (parse.depth(*t), *t))
}

fn local_matches(
    sentence: &Sentence,
    parse: &DependencyParse,
    lexicon: &IndicatorLexicon,
    consumed: &BTreeSet<usize>,
) -> Result<Vec<(VariableId, ModalPrefix, Vec<Match>)>> {
    let offsets = token_offsets(&sentence.text, parse)?;
    let mut out = Vec::new();
    for v in &sentence.variables {
        let (start, end) = v.span.ok_or_else(|| {
            Error::MissingSpans(format!("{}: variable {} has no span", sentence.id, v.id))
        })?;
        let inside: BTreeSet<usize> = offsets
            .iter()
            .enumerate()
            .filter(|(_, (ts, te))| *ts < end && start < *te)
            .map(|(i, _)| i)
            .collect();
        let found = match span_root(parse, &inside) {
            None => Vec::new(),
            Some(root) => inside
                .iter()
                .filter(|t| !consumed.contains(t))
                .filter_map(|&t| {
                    let hops = parse.hops_to(t, root).filter(|h| *h <= MAX_HOPS)?;
                    indicator(lexicon, &parse.tokens()[t]).map(|op| Match {
                        token: t,
                        op,
                        hops,
                        scope: Scope::Local(v.id.clone()),
                    })
                })
                .collect(),
        };
        let (prefix, found) = ordered(found);
        out.push((v.id.clone(), prefix, found));
    }
    Ok(out)
}

/// Local prefix of every variable, skipping tokens already matched
/// globally.
pub fn extract_local(
    sentence: &Sentence,
    parse: &DependencyParse,
    lexicon: &IndicatorLexicon,
    global_matches: &[Match],
) -> Result<BTreeMap<VariableId, ModalPrefix>> {
    let consumed = global_matches.iter().map(|m| m.token).collect();
    Ok(local_matches(sentence, parse, lexicon, &consumed)?
        .into_iter()
        .map(|(v, p, _)| (v, p))
        .collect())
}

pub fn extract(
    sentence: &Sentence,
    parse: &DependencyParse,
    lexicon: &IndicatorLexicon,
) -> Result<ExtractionResult> {
    let (global, mut matched) = extract_global(sentence, parse, lexicon)?;
    let mut consumed: BTreeSet<usize> = matched.iter().map(|m| m.token).collect();
    let mut local = BTreeMap::new();
    // Overlapping spans would otherwise both claim a token.
    for v in &sentence.variables {
        let single = Sentence {
            variables: vec![v.clone()],
            ..sentence.clone()
        };
        for (id, prefix, found) in local_matches(&single, parse, lexicon, &consumed)? {
            consumed.extend(found.iter().map(|m| m.token));
            matched.extend(found);
            local.insert(id, prefix);
        }
    }
    Ok(ExtractionResult {
        global,
        local,
        matched,
    })
}
