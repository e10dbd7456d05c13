//! S5 canonicalization of unary operator strings.
//!
//! [`normalize`] rewrites a prefix with a fixed rule set, leftmost match
//! first, until it reaches one of six normal forms. [`semantically_equal`]
//! is the independent check: it evaluates both prefixes, applied to a single
//! atom, in every universal-frame Kripke model with at most three worlds.

use std::fmt;

use serde::Serialize;

use crate::model::{CanonicalDegree, ModalPrefix, UnaryOp};

use UnaryOp::{Box as Nec, Diamond as Pos, Negation as Not};

/// The six irreducible operator strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CanonicalPrefix {
    Empty,
    Neg,
    Box,
    Diamond,
    NegBox,
    NegDiamond,
}

impl CanonicalPrefix {
    pub const ALL: [CanonicalPrefix; 6] = [
        CanonicalPrefix::Empty,
        CanonicalPrefix::Neg,
        CanonicalPrefix::Box,
        CanonicalPrefix::Diamond,
        CanonicalPrefix::NegBox,
        CanonicalPrefix::NegDiamond,
    ];

    pub fn ops(self) -> &'static [UnaryOp] {
        match self {
            CanonicalPrefix::Empty => &[],
            CanonicalPrefix::Neg => &[Not],
            CanonicalPrefix::Box => &[Nec],
            CanonicalPrefix::Diamond => &[Pos],
            CanonicalPrefix::NegBox => &[Not, Nec],
            CanonicalPrefix::NegDiamond => &[Not, Pos],
        }
    }

    pub fn to_prefix(self) -> ModalPrefix {
        ModalPrefix(self.ops().to_vec())
    }

    fn from_ops(ops: &[UnaryOp]) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.ops() == ops)
    }

    /// Degree of certainty. Bare negation has no slot of its own in the
    /// five-way scale and is reported as contingent.
    pub fn degree(self) -> CanonicalDegree {
        match self {
            CanonicalPrefix::Box => CanonicalDegree::Necessary,
            CanonicalPrefix::Diamond => CanonicalDegree::Possible,
            CanonicalPrefix::Empty | CanonicalPrefix::Neg => CanonicalDegree::Contingent,
            CanonicalPrefix::NegBox => CanonicalDegree::Unnecessary,
            CanonicalPrefix::NegDiamond => CanonicalDegree::Impossible,
        }
    }
}

impl From<CanonicalDegree> for CanonicalPrefix {
    fn from(d: CanonicalDegree) -> Self {
        match d {
            CanonicalDegree::Necessary => CanonicalPrefix::Box,
            CanonicalDegree::Possible => CanonicalPrefix::Diamond,
            CanonicalDegree::Contingent => CanonicalPrefix::Empty,
            CanonicalDegree::Unnecessary => CanonicalPrefix::NegBox,
            CanonicalDegree::Impossible => CanonicalPrefix::NegDiamond,
        }
    }
}

impl fmt::Display for CanonicalPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ops().is_empty() {
            return f.write_str("ε");
        }
        self.ops().iter().try_for_each(|op| write!(f, "{}", op.symbol()))
    }
}

/// Two-symbol rewrite rules, read as operator strings applied to p.
pub const REWRITE_RULES: [([UnaryOp; 2], &[UnaryOp]); 7] = [
    ([Not, Not], &[]),
    ([Nec, Nec], &[Nec]),
    ([Pos, Pos], &[Pos]),
    ([Nec, Pos], &[Pos]),
    ([Pos, Nec], &[Nec]),
    ([Nec, Not], &[Not, Pos]),
    ([Pos, Not], &[Not, Nec]),
];

fn rewrite_once(ops: &mut Vec<UnaryOp>) -> bool {
    for i in 0..ops.len().saturating_sub(1) {
        let pair = [ops[i], ops[i + 1]];
        if let Some((_, rhs)) = REWRITE_RULES.iter().find(|(lhs, _)| *lhs == pair) {
            ops.splice(i..i + 2, rhs.iter().copied());
            return true;
        }
    }
    false
}

/// Rewrites to a fixed point and returns the irreducible string.
pub fn rewrite(prefix: &ModalPrefix) -> Vec<UnaryOp> {
    let mut ops = prefix.0.clone();
    while rewrite_once(&mut ops) {}
    ops
}

/// Number of rewrite steps `rewrite` takes on this prefix.
pub fn rewrite_steps(prefix: &ModalPrefix) -> usize {
    let mut ops = prefix.0.clone();
    let mut steps = 0;
    while rewrite_once(&mut ops) {
        steps += 1;
    }
    steps
}

pub fn normalize(prefix: &ModalPrefix) -> CanonicalPrefix {
    let ops = rewrite(prefix);
    // Any string of length >= 2 other than ¬□ / ¬◇ contains a redex.
    CanonicalPrefix::from_ops(&ops).unwrap_or_else(|| unreachable!("irreducible string {ops:?}"))
}

pub fn reduce_to_degree(prefix: &ModalPrefix) -> CanonicalDegree {
    normalize(prefix).degree()
}

/// An S5 model over one atom. Every world sees every world, so only the
/// valuation matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    valuation: Vec<bool>,
}

impl KripkeModel {
    /// Returns `None` for an empty world set.
    pub fn new(valuation: Vec<bool>) -> Option<Self> {
        (!valuation.is_empty()).then_some(KripkeModel { valuation })
    }

    pub fn worlds(&self) -> usize {
        self.valuation.len()
    }

    /// Truth of `prefix p` at each world.
    pub fn eval(&self, prefix: &[UnaryOp]) -> Vec<bool> {
        let mut truth = self.valuation.clone();
        for op in prefix.iter().rev() {
            match op {
                Not => truth.iter_mut().for_each(|t| *t = !*t),
                Nec => {
                    let all = truth.iter().all(|&t| t);
                    truth.fill(all);
                }
                Pos => {
                    let any = truth.iter().any(|&t| t);
                    truth.fill(any);
                }
            }
        }
        truth
    }

    /// Every model with between 1 and `max_worlds` worlds.
    pub fn enumerate(max_worlds: usize) -> impl Iterator<Item = KripkeModel> {
        (1..=max_worlds).flat_map(|n| {
            (0u32..1 << n).map(move |bits| KripkeModel {
                valuation: (0..n).map(|w| bits >> w & 1 == 1).collect(),
            })
        })
    }
}

pub const ORACLE_WORLDS: usize = 3;

/// True iff the two prefixes agree at every world of every model with at
/// most [`ORACLE_WORLDS`] worlds.
pub fn semantically_equal(a: &ModalPrefix, b: &ModalPrefix) -> bool {
    KripkeModel::enumerate(ORACLE_WORLDS).all(|m| m.eval(a.ops()) == m.eval(b.ops()))
}
