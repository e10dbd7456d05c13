//! The sentence/variable denotation used as model input, e.g.
//! `sent1: v1: it rains . sent2: v1: the ground is wet , v2: and slippery .`
//!
//! Sentence labels are `sent<digits>:` and variable labels `v<digits>:`.
//! A variable's span runs from its label to the next label. Text before the
//! first variable label of a sentence belongs to no variable. A variable
//! label followed directly by another label has no span.

use crate::error::{Error, Result};
use crate::model::{Passage, Sentence, VariableSpan};

fn label<'w>(word: &'w str, stem: &str) -> Option<&'w str> {
    let id = word.strip_suffix(':')?;
    let digits = id.strip_prefix(stem)?;
    (!digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())).then_some(id)
}

struct Building {
    sentence: Sentence,
    len: usize,
    open: Option<(String, Option<usize>)>,
}

impl Building {
    fn close_var(&mut self) {
        if let Some((id, start)) = self.open.take() {
            let span = start.map(|s| (s, self.len));
            self.sentence.variables.push(VariableSpan::new(id, span));
        }
    }

    fn push_word(&mut self, word: &str) {
        if !self.sentence.text.is_empty() {
            self.sentence.text.push(' ');
            self.len += 1;
        }
        if let Some((_, start @ None)) = &mut self.open {
            *start = Some(self.len);
        }
        self.sentence.text.push_str(word);
        self.len += word.chars().count();
    }

    fn finish(mut self) -> Sentence {
        self.close_var();
        self.sentence
    }
}

pub fn parse_source(passage_id: &str, text: &str) -> Result<Passage> {
    let mut sentences = Vec::new();
    let mut current: Option<Building> = None;
    let mut offset = 0;
    for word in text.split_whitespace() {
        let position = text[offset..].find(word).map_or(offset, |p| p + offset);
        offset = position + word.len();
        if let Some(id) = label(word, "sent") {
            sentences.extend(current.take().map(Building::finish));
            current = Some(Building {
                sentence: Sentence::new(id, "", Vec::new()),
                len: 0,
                open: None,
            });
            continue;
        }
        let Some(b) = current.as_mut() else {
            return Err(Error::Syntax {
                position,
                message: "text before the first sentence label".into(),
            });
        };
        if let Some(id) = label(word, "v") {
            b.close_var();
            b.open = Some((id.to_string(), None));
        } else {
            b.push_word(word);
        }
    }
    sentences.extend(current.map(Building::finish));
    Ok(Passage::new(passage_id, sentences))
}

/// Inverse of [`parse_source`] for passages whose spans run label to label.
pub fn write_source(passage: &Passage) -> String {
    let mut out: Vec<String> = Vec::new();
    for s in &passage.sentences {
        out.push(format!("{}:", s.id));
        let chars: Vec<char> = s.text.chars().collect();
        let slice = |a: usize, b: usize| -> String { chars[a.min(chars.len())..b.min(chars.len())].iter().collect() };
        let mut spanned: Vec<(&str, usize, usize)> = s
            .variables
            .iter()
            .filter_map(|v| v.span.map(|(a, b)| (v.id.as_str(), a, b)))
            .collect();
        spanned.sort_by_key(|(_, a, _)| *a);
        let mut cursor = 0;
        for (id, start, end) in spanned {
            let gap = slice(cursor, start);
            out.extend(gap.split_whitespace().map(str::to_owned));
            out.push(format!("{id}:"));
            out.extend(slice(start, end).split_whitespace().map(str::to_owned));
            cursor = end.max(cursor);
        }
        out.extend(slice(cursor, chars.len()).split_whitespace().map(str::to_owned));
        out.extend(s.variables.iter().filter(|v| v.span.is_none()).map(|v| format!("{}:", v.id)));
    }
    out.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labelled_input() {
        let text = "sent1: v1: it rains . sent2: v1: neptune and pluto , v2: the two known planets , v3: do not have mass . sent3: therefore , v1: there must be a planet .";
        let p = parse_source("p", text).unwrap();
        assert_eq!(p.sentences.len(), 3);
        let s2 = &p.sentences[1];
        assert_eq!(s2.text, "neptune and pluto , the two known planets , do not have mass .");
        let chars: Vec<char> = s2.text.chars().collect();
        let (a, b) = s2.variables[1].span.unwrap();
        assert_eq!(chars[a..b].iter().collect::<String>(), "the two known planets ,");
        let s3 = &p.sentences[2];
        assert_eq!(s3.variables[0].span, Some((12, 36)));
        assert_eq!(write_source(&p), text);
    }

    #[test]
    fn spanless_variables() {
        let p = parse_source("p", "sent1: some text v1: v2:").unwrap();
        assert_eq!(p.sentences[0].text, "some text");
        assert_eq!(p.sentences[0].variables, vec![VariableSpan::new("v1", None), VariableSpan::new("v2", None)]);
        assert_eq!(write_source(&p), "sent1: some text v1: v2:");
    }

    #[test]
    fn text_before_label() {
        assert_eq!(parse_source("p", "oops sent1: x").unwrap_err().code(), "SYNTAX");
    }
}
