//! Brute-force reference implementations, written without the library's
//! canonicalization: operator strings are compared by evaluating them in
//! every small S5 model, and matchings are found by exhaustive search.

use metalogic::{BinaryOp, EdgeType, LogicMetagraph, LogicalTriple, ModalPrefix, UnaryOp};

/// Truth of `ops p` in an S5 model given by the set of worlds where p holds.
/// Returns the set of worlds (as a bitmask) where the formula holds.
fn holds(ops: &[UnaryOp], p: u32, worlds: u32) -> u32 {
    let all = (1u32 << worlds) - 1;
    match ops.split_first() {
        None => p & all,
        Some((op, rest)) => {
            let inner = holds(rest, p, worlds);
            match op {
                UnaryOp::Negation => !inner & all,
                UnaryOp::Box => {
                    if inner == all {
                        all
                    } else {
                        0
                    }
                }
                UnaryOp::Diamond => {
                    if inner != 0 {
                        all
                    } else {
                        0
                    }
                }
            }
        }
    }
}

pub fn equivalent(a: &ModalPrefix, b: &ModalPrefix) -> bool {
    (1..=3u32).all(|w| (0..1u32 << w).all(|p| holds(&a.0, p, w) == holds(&b.0, p, w)))
}

pub fn f1(matched: usize, gold: usize, pred: usize) -> f64 {
    if gold + pred == 0 {
        1.0
    } else {
        2.0 * matched as f64 / (gold + pred) as f64
    }
}

fn dedup<T: PartialEq + Clone>(items: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for x in items {
        if !out.contains(x) {
            out.push(x.clone());
        }
    }
    out
}

/// Largest matching between `gold` and `pred` under `eq`, by exhaustive
/// search.
pub fn max_matching<T>(gold: &[T], pred: &[T], eq: &dyn Fn(&T, &T) -> bool) -> usize {
    fn go<T>(i: usize, gold: &[T], pred: &[T], used: &mut Vec<bool>, eq: &dyn Fn(&T, &T) -> bool) -> usize {
        if i == gold.len() {
            return 0;
        }
        let mut best = go(i + 1, gold, pred, used, eq);
        for j in 0..pred.len() {
            if !used[j] && eq(&gold[i], &pred[j]) {
                used[j] = true;
                best = best.max(1 + go(i + 1, gold, pred, used, eq));
                used[j] = false;
            }
        }
        best
    }
    go(0, gold, pred, &mut vec![false; pred.len()], eq)
}

fn set_f1<T: PartialEq + Clone>(gold: &[T], pred: &[T]) -> f64 {
    let (g, p) = (dedup(gold), dedup(pred));
    let matched = g.iter().filter(|x| p.contains(x)).count();
    f1(matched, g.len(), p.len())
}

fn nodes(g: &LogicMetagraph) -> Vec<String> {
    g.edges
        .iter()
        .flat_map(|e| [e.premise.clone(), e.conclusion.clone()])
        .collect()
}

fn steps(g: &LogicMetagraph, kind: Option<EdgeType>) -> Vec<(String, String, EdgeType)> {
    g.edges
        .iter()
        .filter(|e| kind.is_none_or(|k| e.kind == k))
        .map(|e| (e.premise.clone(), e.conclusion.clone(), e.kind))
        .collect()
}

fn same_operand(a: &metalogic::Operand, b: &metalogic::Operand) -> bool {
    a.var == b.var && equivalent(&a.prefix, &b.prefix)
}

pub fn triples_match(a: &LogicalTriple, b: &LogicalTriple) -> bool {
    if a.op != b.op {
        return false;
    }
    let direct = same_operand(&a.left, &b.left) && same_operand(&a.right, &b.right);
    let swapped = same_operand(&a.left, &b.right) && same_operand(&a.right, &b.left);
    direct || (a.op != BinaryOp::Implication && swapped)
}

enum Item {
    Triple(LogicalTriple),
    Global(ModalPrefix),
}

fn items(g: &LogicMetagraph, sentence: &str) -> Vec<Item> {
    let Some(f) = g.formulae.iter().find(|f| f.sentence == sentence) else {
        return Vec::new();
    };
    let mut out: Vec<Item> = f.triples.iter().cloned().map(Item::Triple).collect();
    if !equivalent(&f.global, &ModalPrefix::empty()) {
        out.push(Item::Global(f.global.clone()));
    }
    out
}

fn items_match(a: &Item, b: &Item) -> bool {
    match (a, b) {
        (Item::Triple(x), Item::Triple(y)) => triples_match(x, y),
        (Item::Global(x), Item::Global(y)) => equivalent(x, y),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleScores {
    pub node_f1: f64,
    pub step_f1: f64,
    pub support_f1: Option<f64>,
    pub rebut_f1: Option<f64>,
    pub formula_f1: f64,
    pub formula_all: bool,
    pub certainty_acc: f64,
    pub certainty_all: bool,
    pub overall: bool,
}

pub fn score(gold: &LogicMetagraph, pred: &LogicMetagraph) -> OracleScores {
    let per_kind = |k| {
        let g = steps(gold, Some(k));
        (!g.is_empty()).then(|| set_f1(&g, &steps(pred, Some(k))))
    };

    let sentences = dedup(
        &gold
            .formulae
            .iter()
            .chain(&pred.formulae)
            .map(|f| f.sentence.clone())
            .collect::<Vec<_>>(),
    );
    let formula_scores: Vec<f64> = sentences
        .iter()
        .map(|s| {
            let (g, p) = (items(gold, s), items(pred, s));
            f1(max_matching(&g, &p, &items_match), g.len(), p.len())
        })
        .collect();
    let formula_f1 = if formula_scores.is_empty() {
        1.0
    } else {
        formula_scores.iter().sum::<f64>() / formula_scores.len() as f64
    };

    let total = gold.degrees.len();
    let correct = gold
        .degrees
        .iter()
        .filter(|(s, d)| pred.degrees.get(*s) == Some(*d))
        .count();

    let step_f1 = set_f1(&steps(gold, None), &steps(pred, None));
    let formula_all = formula_scores.iter().all(|s| *s == 1.0);
    let certainty_all = correct == total;
    OracleScores {
        node_f1: set_f1(&nodes(gold), &nodes(pred)),
        step_f1,
        support_f1: per_kind(EdgeType::Support),
        rebut_f1: per_kind(EdgeType::Rebut),
        formula_f1,
        formula_all,
        certainty_acc: if total == 0 { 1.0 } else { correct as f64 / total as f64 },
        certainty_all,
        overall: step_f1 == 1.0 && formula_all && certainty_all,
    }
}
