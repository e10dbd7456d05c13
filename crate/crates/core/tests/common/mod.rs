#![allow(dead_code)]

pub mod oracle;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use metalogic::{
    BinaryOp, CanonicalDegree, Formula, LogicMetagraph, LogicalTriple, MetaEdge, ModalPrefix,
    Operand, Passage, Sentence, UnaryOp, VariableSpan,
};

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_sentences: usize,
    pub max_vars: usize,
    pub max_edges: usize,
    pub max_triples: usize,
    pub max_prefix: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_sentences: 6,
            max_vars: 4,
            max_edges: 6,
            max_triples: 3,
            max_prefix: 4,
        }
    }
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_prefix(rng: &mut StdRng, max_len: usize) -> ModalPrefix {
    let len = rng.random_range(0..=max_len);
    ModalPrefix((0..len).map(|_| UnaryOp::ALL[rng.random_range(0..3)]).collect())
}

fn random_op(rng: &mut StdRng) -> BinaryOp {
    BinaryOp::ALL[rng.random_range(0..3)]
}

pub fn random_degree(rng: &mut StdRng) -> CanonicalDegree {
    CanonicalDegree::ALL[rng.random_range(0..5)]
}

/// Sentence `i` has `2k` two-letter tokens; variable `j` covers token `2j`.
pub fn random_passage(rng: &mut StdRng, id: &str, shape: &Shape) -> Passage {
    let n = rng.random_range(1..=shape.max_sentences);
    let sentences = (1..=n)
        .map(|i| {
            let k = rng.random_range(0..=shape.max_vars);
            let words: Vec<String> = (0..2 * k.max(1)).map(|t| format!("w{}", t % 10)).collect();
            let vars = (0..k)
                .map(|j| VariableSpan::new(format!("v{}", j + 1), Some((6 * j, 6 * j + 2))))
                .collect();
            Sentence::new(format!("sent{i}"), words.join(" "), vars)
        })
        .collect();
    Passage::new(id, sentences)
}

fn random_triple(rng: &mut StdRng, s: &Sentence, shape: &Shape) -> LogicalTriple {
    let mut ids: Vec<&str> = s.variables.iter().map(|v| v.id.as_str()).collect();
    ids.shuffle(rng);
    LogicalTriple::new(
        Operand::new(ids[0], random_prefix(rng, shape.max_prefix)),
        random_op(rng),
        Operand::new(ids[1], random_prefix(rng, shape.max_prefix)),
    )
}

/// A valid graph over `passage`: edges follow a random topological order,
/// every used sentence has a degree, formulae relate distinct variables.
pub fn random_graph_over(rng: &mut StdRng, passage: Passage, shape: &Shape) -> LogicMetagraph {
    let mut g = LogicMetagraph::empty(passage);
    let ids: Vec<String> = g.passage.sentences.iter().map(|s| s.id.clone()).collect();

    let mut order = ids.clone();
    order.shuffle(rng);
    let mut candidates = Vec::new();
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            candidates.push((order[a].clone(), order[b].clone()));
        }
    }
    candidates.shuffle(rng);
    let n_edges = rng.random_range(0..=shape.max_edges.min(candidates.len()));
    for (p, c) in candidates.into_iter().take(n_edges) {
        g.edges.push(if rng.random_bool(0.7) {
            MetaEdge::support(p, c)
        } else {
            MetaEdge::rebut(p, c)
        });
    }

    let used: Vec<String> = g.used_sentences().into_iter().map(String::from).collect();
    for id in &ids {
        if used.contains(id) || rng.random_bool(0.5) {
            g.degrees.insert(id.clone(), random_degree(rng));
        }
    }

    for s in g.passage.sentences.clone() {
        if s.variables.len() < 2 || !rng.random_bool(0.6) {
            continue;
        }
        let n = rng.random_range(1..=shape.max_triples);
        let triples = (0..n).map(|_| random_triple(rng, &s, shape)).collect();
        let mut f = Formula::new(s.id.clone(), triples);
        if rng.random_bool(0.3) {
            f.global = random_prefix(rng, 3);
        }
        g.formulae.push(f);
    }
    g.formulae.shuffle(rng);
    g
}

pub fn random_graph(rng: &mut StdRng, id: &str, shape: &Shape) -> LogicMetagraph {
    let passage = random_passage(rng, id, shape);
    random_graph_over(rng, passage, shape)
}

/// A perturbed copy, as a model might predict it. The result may be
/// invalid (cycles, missing degrees); scoring must not care.
pub fn mutate(rng: &mut StdRng, gold: &LogicMetagraph, shape: &Shape) -> LogicMetagraph {
    let mut g = gold.clone();
    let ids: Vec<String> = g.passage.sentences.iter().map(|s| s.id.clone()).collect();
    for _ in 0..rng.random_range(0..=3) {
        match rng.random_range(0..10) {
            0 if !g.edges.is_empty() => {
                let i = rng.random_range(0..g.edges.len());
                g.edges.remove(i);
            }
            1 if !g.edges.is_empty() => {
                let i = rng.random_range(0..g.edges.len());
                g.edges[i].kind = match g.edges[i].kind {
                    metalogic::EdgeType::Support => metalogic::EdgeType::Rebut,
                    metalogic::EdgeType::Rebut => metalogic::EdgeType::Support,
                };
            }
            2 if ids.len() >= 2 => {
                let a = &ids[rng.random_range(0..ids.len())];
                let b = &ids[rng.random_range(0..ids.len())];
                if a != b {
                    g.edges.push(MetaEdge::support(a.clone(), b.clone()));
                }
            }
            3 => {
                let id = &ids[rng.random_range(0..ids.len())];
                g.degrees.insert(id.clone(), random_degree(rng));
            }
            4 => {
                let id = &ids[rng.random_range(0..ids.len())];
                g.degrees.remove(id);
            }
            5 if !g.formulae.is_empty() => {
                // semantics-preserving: swap a symmetric triple or pad with ¬¬
                let f = rng.random_range(0..g.formulae.len());
                let t = rng.random_range(0..g.formulae[f].triples.len());
                let triple = &mut g.formulae[f].triples[t];
                if triple.op.is_symmetric() {
                    std::mem::swap(&mut triple.left, &mut triple.right);
                } else {
                    triple.left.prefix.0.splice(0..0, [UnaryOp::Negation, UnaryOp::Negation]);
                }
            }
            6 if !g.formulae.is_empty() => {
                let f = rng.random_range(0..g.formulae.len());
                let t = rng.random_range(0..g.formulae[f].triples.len());
                g.formulae[f].triples[t].op = random_op(rng);
            }
            7 if !g.formulae.is_empty() => {
                let f = rng.random_range(0..g.formulae.len());
                let t = rng.random_range(0..g.formulae[f].triples.len());
                g.formulae[f].triples[t].right.prefix = random_prefix(rng, shape.max_prefix);
            }
            8 if !g.formulae.is_empty() => {
                let f = rng.random_range(0..g.formulae.len());
                if g.formulae[f].triples.len() > 1 {
                    g.formulae[f].triples.pop();
                } else {
                    g.formulae.remove(f);
                }
            }
            9 => {
                let s = g.passage.sentences[rng.random_range(0..ids.len())].clone();
                if s.variables.len() >= 2 && g.formula(&s.id).is_none() {
                    let t = random_triple(rng, &s, shape);
                    g.formulae.push(Formula::new(s.id.clone(), vec![t]).with_global(random_prefix(rng, 2)));
                }
            }
            _ => {}
        }
    }
    g
}

/// A small worked example: four sentences, three edges, one formula.
pub const EXAMPLE_SOURCE: &str = "sent1: v1: it rained v2: the match stopped \
    sent2: v1: the field flooded \
    sent3: v1: fans left v2: the game ended v3: the lights failed \
    sent4: v1: the roof held";

pub const EXAMPLE_LINEARIZED: &str = "$graph$ sent1 -> sent3; sent2 -> sent3; sent4 => sent2; \
    $formula$ sent3: v2 [and] [necessary] v3; \
    $degree$ sent1: contingent | sent2: contingent | sent3: necessary | sent4: contingent";
