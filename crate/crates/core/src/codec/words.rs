//! The operator-to-word table shared by the parser and the serializer.

use crate::model::{BinaryOp, UnaryOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Unary(UnaryOp),
    Binary(BinaryOp),
}

/// Bracketed words of the linearized format. The mapping is a bijection.
pub const OPERATOR_WORDS: [(&str, Operator); 6] = [
    ("[necessary]", Operator::Unary(UnaryOp::Box)),
    ("[possible]", Operator::Unary(UnaryOp::Diamond)),
    ("[negative]", Operator::Unary(UnaryOp::Negation)),
    ("[and]", Operator::Binary(BinaryOp::Conjunction)),
    ("[or]", Operator::Binary(BinaryOp::Disjunction)),
    ("[entail]", Operator::Binary(BinaryOp::Implication)),
];

pub fn operator(word: &str) -> Option<Operator> {
    OPERATOR_WORDS.iter().find(|(w, _)| *w == word).map(|(_, op)| *op)
}

pub fn word(op: Operator) -> &'static str {
    OPERATOR_WORDS
        .iter()
        .find(|(_, o)| *o == op)
        .map(|(w, _)| *w)
        .expect("every operator has a word")
}

pub fn unary_word(op: UnaryOp) -> &'static str {
    word(Operator::Unary(op))
}

pub fn binary_word(op: BinaryOp) -> &'static str {
    word(Operator::Binary(op))
}

/// Bare names used in JSON, e.g. `necessary` / `entail`.
pub fn bare(word: &str) -> &str {
    word.trim_start_matches('[').trim_end_matches(']')
}

/// Space-separated bracket words of a prefix, outermost first.
pub fn prefix_words(ops: &[UnaryOp]) -> String {
    ops.iter().map(|op| unary_word(*op)).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bijection() {
        for (w, op) in OPERATOR_WORDS {
            assert_eq!(operator(w), Some(op));
            assert_eq!(word(op), w);
        }
        let mut ws: Vec<_> = OPERATOR_WORDS.iter().map(|(w, _)| *w).collect();
        ws.dedup();
        assert_eq!(ws.len(), 6);
        assert_eq!(operator("[causal]"), None);
    }
}
