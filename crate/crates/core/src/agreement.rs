//! Cohen's kappa between two annotators, over four views of a metagraph:
//! sentence roles, the meta-edge adjacency matrix, per-token variable
//! membership and the per-sentence logical relation matrix.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    roles_unchecked, validate_graph, BinaryOp, EdgeType, LogicMetagraph, Passage, Role,
    Sentence, VariableId,
};

/// Cohen's kappa of two parallel label sequences.
///
/// When chance agreement is 1 (both annotators used one and the same
/// label throughout) the result is 1 if they agree everywhere and 0
/// otherwise.
pub fn kappa<L: Ord + Clone + Debug>(a: &[L], b: &[L], label_space: &BTreeSet<L>) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(l) = a.iter().chain(b).find(|l| !label_space.contains(*l)) {
        return Err(Error::UnknownLabel(format!("{l:?}")));
    }

    let n = a.len() as f64;
    let mut ma: BTreeMap<&L, usize> = BTreeMap::new();
    let mut mb: BTreeMap<&L, usize> = BTreeMap::new();
    let mut agree = 0usize;
    for (x, y) in a.iter().zip(b) {
        *ma.entry(x).or_default() += 1;
        *mb.entry(y).or_default() += 1;
        agree += usize::from(x == y);
    }
    let p_o = agree as f64 / n;
    let p_e: f64 = ma
        .iter()
        .map(|(l, ca)| *ca as f64 / n * mb.get(l).map_or(0.0, |cb| *cb as f64 / n))
        .sum();

    if p_e >= 1.0 {
        return Ok(if agree == a.len() { 1.0 } else { 0.0 });
    }
    Ok((p_o - p_e) / (1.0 - p_e))
}

/// Two annotators' graphs over one passage.
#[derive(Debug, Clone)]
pub struct AnnotationPair {
    pub a: LogicMetagraph,
    pub b: LogicMetagraph,
}

impl AnnotationPair {
    /// Both graphs must be valid and share the passage id and sentence ids.
    /// Variable annotations may differ.
    pub fn new(a: LogicMetagraph, b: LogicMetagraph) -> Result<Self> {
        validate_graph(&a).into_result()?;
        validate_graph(&b).into_result()?;
        if a.passage.id != b.passage.id {
            return Err(Error::PassageMismatch {
                gold: a.passage.id.clone(),
                pred: b.passage.id.clone(),
            });
        }
        let ids = |p: &Passage| p.sentences.iter().map(|s| s.id.clone()).collect::<Vec<_>>();
        let (ia, ib) = (ids(&a.passage), ids(&b.passage));
        if ia != ib {
            let differing = ia.iter().zip(&ib).find(|(x, y)| x != y);
            let (left, right) = match differing {
                Some((x, y)) => (x.clone(), y.clone()),
                None => (format!("{} sentences", ia.len()), format!("{} sentences", ib.len())),
            };
            return Err(Error::SentenceMismatch { left, right });
        }
        Ok(AnnotationPair { a, b })
    }

    pub fn passage(&self) -> &Passage {
        &self.a.passage
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionKappa {
    pub kappa: f64,
    pub label_space: usize,
    pub items: usize,
}

fn pooled<L: Ord + Clone + Debug>(a: &[L], b: &[L], space: &[L]) -> Result<DimensionKappa> {
    let space: BTreeSet<L> = space.iter().cloned().collect();
    Ok(DimensionKappa {
        kappa: kappa(a, b, &space)?,
        label_space: space.len(),
        items: a.len(),
    })
}

/// Roles of every sentence, pooled across passages.
pub fn kappa_meta_node(pairs: &[AnnotationPair]) -> Result<DimensionKappa> {
    let (mut la, mut lb) = (Vec::new(), Vec::new());
    for p in pairs {
        let (ra, rb) = (roles_unchecked(&p.a), roles_unchecked(&p.b));
        for s in &p.passage().sentences {
            la.push(ra[&s.id]);
            lb.push(rb[&s.id]);
        }
    }
    pooled(&la, &lb, &Role::ALL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeLabel {
    Support,
    Rebut,
    NoEdge,
}

fn edge_matrix(g: &LogicMetagraph) -> BTreeMap<(&str, &str), EdgeLabel> {
    g.edges
        .iter()
        .map(|e| {
            let label = match e.kind {
                EdgeType::Support => EdgeLabel::Support,
                EdgeType::Rebut => EdgeLabel::Rebut,
            };
            ((e.premise.as_str(), e.conclusion.as_str()), label)
        })
        .collect()
}

/// Off-diagonal cells of each passage's adjacency matrix, pooled.
pub fn kappa_meta_edge(pairs: &[AnnotationPair]) -> Result<DimensionKappa> {
    let (mut la, mut lb) = (Vec::new(), Vec::new());
    for p in pairs {
        let (ma, mb) = (edge_matrix(&p.a), edge_matrix(&p.b));
        let ids: Vec<&str> = p.passage().sentences.iter().map(|s| s.id.as_str()).collect();
        for i in &ids {
            for j in &ids {
                if i == j {
                    continue;
                }
                la.push(ma.get(&(*i, *j)).copied().unwrap_or(EdgeLabel::NoEdge));
                lb.push(mb.get(&(*i, *j)).copied().unwrap_or(EdgeLabel::NoEdge));
            }
        }
    }
    pooled(&la, &lb, &[EdgeLabel::Support, EdgeLabel::Rebut, EdgeLabel::NoEdge])
}

/// Splits sentence text into tokens, as end-exclusive char offset ranges.
pub trait Tokenizer {
    fn tokenize(&self, text: &str) -> Vec<(usize, usize)>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct WhitespaceTokenizer;

impl Tokenizer for WhitespaceTokenizer {
    fn tokenize(&self, text: &str) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in text.chars().enumerate() {
            match (c.is_whitespace(), start) {
                (true, Some(s)) => {
                    out.push((s, i));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s, text.chars().count()));
        }
        out
    }
}

fn spans(s: &Sentence) -> Result<Vec<(usize, usize)>> {
    s.variables
        .iter()
        .map(|v| {
            v.span
                .ok_or_else(|| Error::MissingSpans(format!("{}: variable {} has no span", s.id, v.id)))
        })
        .collect()
}

fn token_votes(s: &Sentence, tokens: &[(usize, usize)]) -> Result<Vec<bool>> {
    let spans = spans(s)?;
    Ok(tokens
        .iter()
        .map(|&(ts, te)| spans.iter().any(|&(vs, ve)| ts < ve && vs < te))
        .collect())
}

/// Binary in-variable votes per token; one kappa per passage, then the
/// mean over passages. A token is in a variable when it overlaps a span.
pub fn kappa_logical_variable_with(pairs: &[AnnotationPair], tokenizer: &dyn Tokenizer) -> Result<DimensionKappa> {
    let mut per_passage = Vec::new();
    let mut items = 0;
    for p in pairs {
        let (mut la, mut lb) = (Vec::new(), Vec::new());
        for (sa, sb) in p.a.passage.sentences.iter().zip(&p.b.passage.sentences) {
            let tokens = tokenizer.tokenize(&sa.text);
            la.extend(token_votes(sa, &tokens)?);
            lb.extend(token_votes(sb, &tokens)?);
        }
        if la.is_empty() {
            continue;
        }
        items += la.len();
        per_passage.push(kappa(&la, &lb, &BTreeSet::from([false, true]))?);
    }
    if per_passage.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(DimensionKappa {
        kappa: per_passage.iter().sum::<f64>() / per_passage.len() as f64,
        label_space: 2,
        items,
    })
}

pub fn kappa_logical_variable(pairs: &[AnnotationPair]) -> Result<DimensionKappa> {
    kappa_logical_variable_with(pairs, &WhitespaceTokenizer)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RelationLabel {
    Implication,
    Conjunction,
    Disjunction,
    NoRelation,
}

impl From<BinaryOp> for RelationLabel {
    fn from(op: BinaryOp) -> Self {
        match op {
            BinaryOp::Implication => RelationLabel::Implication,
            BinaryOp::Conjunction => RelationLabel::Conjunction,
            BinaryOp::Disjunction => RelationLabel::Disjunction,
        }
    }
}

/// Pairs the variables of the two annotations one-to-one: by identical span
/// when every variable has one, otherwise by id.
fn align(sa: &Sentence, sb: &Sentence) -> Result<Vec<(VariableId, VariableId)>> {
    let fail = |message: String| Error::VariableAlignment {
        sentence: sa.id.clone(),
        message,
    };
    if sa.variables.len() != sb.variables.len() {
        return Err(fail(format!(
            "{} variables against {}",
            sa.variables.len(),
            sb.variables.len()
        )));
    }
    let all_spanned = sa.variables.iter().chain(&sb.variables).all(|v| v.span.is_some());
    let key = |v: &crate::model::VariableSpan| {
        if all_spanned {
            format!("{:?}", v.span)
        } else {
            v.id.clone()
        }
    };
    let by_key: BTreeMap<String, &VariableId> = sb.variables.iter().map(|v| (key(v), &v.id)).collect();
    if by_key.len() != sb.variables.len() {
        return Err(fail("duplicate variable keys in the second annotation".into()));
    }
    sa.variables
        .iter()
        .map(|v| {
            by_key
                .get(&key(v))
                .map(|other| (v.id.clone(), (*other).clone()))
                .ok_or_else(|| fail(format!("no counterpart for {}", v.id)))
        })
        .collect()
}

fn relation_matrix<'g>(g: &'g LogicMetagraph, sentence: &str) -> BTreeMap<(&'g str, &'g str), RelationLabel> {
    let mut m = BTreeMap::new();
    for t in g.formula(sentence).into_iter().flat_map(|f| &f.triples) {
        let (l, r) = (t.left.var.as_str(), t.right.var.as_str());
        m.entry((l, r)).or_insert(t.op.into());
        if t.op.is_symmetric() {
            m.entry((r, l)).or_insert(t.op.into());
        }
    }
    m
}

/// Ordered variable pairs within each sentence, diagonal included, pooled.
/// ∧ and ∨ label both cells of a pair; → labels only its own direction.
pub fn kappa_logical_relation(pairs: &[AnnotationPair]) -> Result<DimensionKappa> {
    let (mut la, mut lb) = (Vec::new(), Vec::new());
    for p in pairs {
        for (sa, sb) in p.a.passage.sentences.iter().zip(&p.b.passage.sentences) {
            let aligned = align(sa, sb)?;
            let (ma, mb) = (relation_matrix(&p.a, &sa.id), relation_matrix(&p.b, &sb.id));
            for (ia, ib) in &aligned {
                for (ja, jb) in &aligned {
                    la.push(ma.get(&(ia.as_str(), ja.as_str())).copied().unwrap_or(RelationLabel::NoRelation));
                    lb.push(mb.get(&(ib.as_str(), jb.as_str())).copied().unwrap_or(RelationLabel::NoRelation));
                }
            }
        }
    }
    pooled(
        &la,
        &lb,
        &[
            RelationLabel::Implication,
            RelationLabel::Conjunction,
            RelationLabel::Disjunction,
            RelationLabel::NoRelation,
        ],
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub passages: usize,
    pub meta_node: DimensionKappa,
    pub meta_edge: DimensionKappa,
    pub logical_variable: DimensionKappa,
    pub logical_relation: DimensionKappa,
}

pub fn agreement_report(pairs: &[AnnotationPair]) -> Result<AgreementReport> {
    Ok(AgreementReport {
        passages: pairs.len(),
        meta_node: kappa_meta_node(pairs)?,
        meta_edge: kappa_meta_edge(pairs)?,
        logical_variable: kappa_logical_variable(pairs)?,
        logical_relation: kappa_logical_relation(pairs)?,
    })
}
