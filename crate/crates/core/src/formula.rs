//! Canonical triples and formula equivalence.

use std::collections::BTreeMap;
use std::fmt;

use crate::codec::words;
use crate::error::{Error, Result};
use crate::modal::{normalize, CanonicalPrefix};
use crate::model::{BinaryOp, Formula, LogicalTriple, VariableId};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalOperand {
    pub var: VariableId,
    pub prefix: CanonicalPrefix,
}

impl CanonicalOperand {
    fn sort_key(&self) -> (&str, String) {
        (&self.var, words::prefix_words(self.prefix.ops()))
    }
}

/// A triple with normalized prefixes. Operands of ∧ and ∨ are stored in
/// ascending (variable id, prefix words) order; implication keeps its
/// direction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalTriple {
    pub left: CanonicalOperand,
    pub op: BinaryOp,
    pub right: CanonicalOperand,
    pub ordered: bool,
}

impl fmt::Display for CanonicalTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |o: &CanonicalOperand| {
            let w = words::prefix_words(o.prefix.ops());
            if w.is_empty() {
                o.var.clone()
            } else {
                format!("{w} {}", o.var)
            }
        };
        write!(f, "{} {} {}", side(&self.left), words::binary_word(self.op), side(&self.right))
    }
}

pub fn canonicalize_triple(t: &LogicalTriple) -> CanonicalTriple {
    let mut left = CanonicalOperand {
        var: t.left.var.clone(),
        prefix: normalize(&t.left.prefix),
    };
    let mut right = CanonicalOperand {
        var: t.right.var.clone(),
        prefix: normalize(&t.right.prefix),
    };
    if t.op.is_symmetric() && right.sort_key() < left.sort_key() {
        std::mem::swap(&mut left, &mut right);
    }
    CanonicalTriple {
        left,
        op: t.op,
        right,
        ordered: !t.op.is_symmetric(),
    }
}

impl From<&CanonicalTriple> for LogicalTriple {
    fn from(c: &CanonicalTriple) -> Self {
        use crate::model::Operand;
        LogicalTriple::new(
            Operand::new(c.left.var.clone(), c.left.prefix.to_prefix()),
            c.op,
            Operand::new(c.right.var.clone(), c.right.prefix.to_prefix()),
        )
    }
}

pub type TripleMultiset = BTreeMap<CanonicalTriple, usize>;

pub fn triple_multiset(f: &Formula) -> TripleMultiset {
    let mut out = TripleMultiset::new();
    for t in &f.triples {
        *out.entry(canonicalize_triple(t)).or_default() += 1;
    }
    out
}

/// Same canonical triples with the same multiplicities, and the same
/// normalized global prefix.
pub fn formulae_equal(a: &Formula, b: &Formula) -> Result<bool> {
    if a.sentence != b.sentence {
        return Err(Error::SentenceMismatch {
            left: a.sentence.clone(),
            right: b.sentence.clone(),
        });
    }
    Ok(normalize(&a.global) == normalize(&b.global) && triple_multiset(a) == triple_multiset(b))
}

/// Size of the multiset intersection.
pub fn multiset_overlap<K: Ord>(a: &BTreeMap<K, usize>, b: &BTreeMap<K, usize>) -> usize {
    a.iter()
        .map(|(k, n)| b.get(k).map_or(0, |m| (*n).min(*m)))
        .sum()
}
