use std::collections::BTreeSet;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::UnaryOp;

const DEFAULT: &str = include_str!("../../data/lexicon.txt");

fn section(op: UnaryOp) -> &'static str {
    match op {
        UnaryOp::Negation => "negation",
        UnaryOp::Box => "box",
        UnaryOp::Diamond => "diamond",
    }
}

fn op_for_section(name: &str) -> Option<UnaryOp> {
    UnaryOp::ALL.into_iter().find(|op| section(*op) == name)
}

fn lowered(words: impl IntoIterator<Item = impl AsRef<str>>) -> BTreeSet<String> {
    words.into_iter().map(|w| w.as_ref().trim().to_lowercase()).collect()
}

/// Indicator words for each unary operator. Entries are lowercase and the
/// three sets are disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorLexicon {
    pub negation: BTreeSet<String>,
    pub boxes: BTreeSet<String>,
    pub diamond: BTreeSet<String>,
}

impl Default for IndicatorLexicon {
    fn default() -> Self {
        Self::from_text(DEFAULT).expect("bundled lexicon is well formed")
    }
}

impl IndicatorLexicon {
    pub fn new(
        negation: impl IntoIterator<Item = impl AsRef<str>>,
        boxes: impl IntoIterator<Item = impl AsRef<str>>,
        diamond: impl IntoIterator<Item = impl AsRef<str>>,
    ) -> Result<Self> {
        let lex = IndicatorLexicon {
            negation: lowered(negation),
            boxes: lowered(boxes),
            diamond: lowered(diamond),
        };
        lex.check()?;
        Ok(lex)
    }

    fn set(&self, op: UnaryOp) -> &BTreeSet<String> {
        match op {
            UnaryOp::Negation => &self.negation,
            UnaryOp::Box => &self.boxes,
            UnaryOp::Diamond => &self.diamond,
        }
    }

    fn check(&self) -> Result<()> {
        for (i, a) in UnaryOp::ALL.iter().enumerate() {
            if self.set(*a).iter().any(|w| w.is_empty()) {
                return Err(Error::MalformedLexicon(format!("empty entry in {}", section(*a))));
            }
            for b in &UnaryOp::ALL[i + 1..] {
                if let Some(word) = self.set(*a).intersection(self.set(*b)).next() {
                    return Err(Error::LexiconOverlap {
                        word: word.clone(),
                        first: section(*a),
                        second: section(*b),
                    });
                }
            }
        }
        Ok(())
    }

    /// The operator a word indicates, ignoring case.
    pub fn lookup(&self, word: &str) -> Option<UnaryOp> {
        let w = word.to_lowercase();
        UnaryOp::ALL.into_iter().find(|op| self.set(*op).contains(&w))
    }

    /// Plain-text form: `[negation]`, `[box]` and `[diamond]` headers, one
    /// word per line, `#` comments.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut sets: [Vec<String>; 3] = Default::default();
        let mut current: Option<usize> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let op = op_for_section(name.trim()).ok_or_else(|| {
                    Error::MalformedLexicon(format!("line {}: unknown section `{name}`", n + 1))
                })?;
                current = UnaryOp::ALL.iter().position(|o| *o == op);
                continue;
            }
            let slot = current.ok_or_else(|| {
                Error::MalformedLexicon(format!("line {}: entry before any section header", n + 1))
            })?;
            sets[slot].push(line.to_string());
        }
        let [neg, nec, pos] = sets;
        Self::new(neg, nec, pos)
    }

    /// JSON form: an object with `negation`, `box` and `diamond` arrays.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::MalformedLexicon(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::MalformedLexicon("expected an object".into()))?;
        if let Some(k) = obj.keys().find(|k| op_for_section(k).is_none()) {
            return Err(Error::MalformedLexicon(format!("unknown section `{k}`")));
        }
        let words = |op: UnaryOp| -> Result<Vec<String>> {
            let Some(list) = obj.get(section(op)) else {
                return Ok(Vec::new());
            };
            list.as_array()
                .ok_or_else(|| Error::MalformedLexicon(format!("`{}` is not an array", section(op))))?
                .iter()
                .map(|w| {
                    w.as_str().map(str::to_string).ok_or_else(|| {
                        Error::MalformedLexicon(format!("non-string entry in `{}`", section(op)))
                    })
                })
                .collect()
        };
        Self::new(
            words(UnaryOp::Negation)?,
            words(UnaryOp::Box)?,
            words(UnaryOp::Diamond)?,
        )
    }

    /// Reads a lexicon file; `.json` files use the JSON form.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Self::from_json(&text)
        } else {
            Self::from_text(&text)
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for op in UnaryOp::ALL {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&format!("[{}]\n", section(op)));
            for w in self.set(op) {
                out.push_str(w);
                out.push('\n');
            }
        }
        out
    }
}
