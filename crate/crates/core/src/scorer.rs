//! Evaluation metrics for predicted metagraphs.
//!
//! Each sample is scored on four dimensions (nodes, steps, formulae,
//! certainty) plus an overall AllCorrect bit. Dataset scores are unweighted
//! means over samples, except certainty macro-F1 and the per-operator table,
//! which pool counts across the whole dataset.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::codec::ParseOutcome;
use crate::error::{Error, Result};
use crate::formula::{canonicalize_triple, multiset_overlap, CanonicalTriple};
use crate::modal::{normalize, CanonicalPrefix};
use crate::model::{
    steps_unchecked, BinaryOp, CanonicalDegree, EdgeType, Formula, LogicMetagraph, SentenceId,
    UnaryOp, VariableId,
};

/// What a model produced for one passage.
#[derive(Debug, Clone)]
pub enum Prediction {
    Graph(LogicMetagraph),
    Parsed(ParseOutcome),
}

impl From<LogicMetagraph> for Prediction {
    fn from(g: LogicMetagraph) -> Self {
        Prediction::Graph(g)
    }
}

impl From<ParseOutcome> for Prediction {
    fn from(p: ParseOutcome) -> Self {
        Prediction::Parsed(p)
    }
}

impl Prediction {
    /// The predicted graph; a failed strict parse counts as an empty
    /// prediction over the gold passage.
    pub fn graph<'p>(&'p self, gold: &LogicMetagraph) -> Cow<'p, LogicMetagraph> {
        match self {
            Prediction::Graph(g) => Cow::Borrowed(g),
            Prediction::Parsed(ParseOutcome { graph: Some(g), .. }) => Cow::Borrowed(g),
            Prediction::Parsed(_) => Cow::Owned(LogicMetagraph::empty(gold.passage.clone())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SamplePrediction {
    pub gold: LogicMetagraph,
    pub pred: Prediction,
}

impl SamplePrediction {
    pub fn new(gold: LogicMetagraph, pred: impl Into<Prediction>) -> Self {
        SamplePrediction {
            gold,
            pred: pred.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionScore {
    pub f1: f64,
    pub all_correct: bool,
}

impl DimensionScore {
    fn from_f1(f1: f64) -> Self {
        DimensionScore {
            f1,
            all_correct: f1 == 1.0,
        }
    }
}

/// F1 from match counts. Two empty sides agree perfectly.
pub fn f1_from_counts(matched: usize, gold: usize, pred: usize) -> f64 {
    if gold + pred == 0 {
        1.0
    } else {
        2.0 * matched as f64 / (gold + pred) as f64
    }
}

fn check_passage(gold: &LogicMetagraph, pred: &LogicMetagraph) -> Result<()> {
    if gold.passage.id != pred.passage.id {
        return Err(Error::PassageMismatch {
            gold: gold.passage.id.clone(),
            pred: pred.passage.id.clone(),
        });
    }
    Ok(())
}

fn set_f1<T: Ord>(gold: &BTreeSet<T>, pred: &BTreeSet<T>) -> f64 {
    f1_from_counts(gold.intersection(pred).count(), gold.len(), pred.len())
}

/// F1 over the sentences that take part in any edge.
pub fn score_nodes(gold: &LogicMetagraph, pred: &LogicMetagraph) -> Result<DimensionScore> {
    check_passage(gold, pred)?;
    Ok(DimensionScore::from_f1(set_f1(&gold.used_sentences(), &pred.used_sentences())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepScores {
    pub total: DimensionScore,
    /// Present only when the gold graph has a support step.
    pub support: Option<DimensionScore>,
    /// Present only when the gold graph has a rebut step.
    pub rebut: Option<DimensionScore>,
}

pub fn score_steps(gold: &LogicMetagraph, pred: &LogicMetagraph) -> Result<StepScores> {
    check_passage(gold, pred)?;
    let g = steps_unchecked(&gold.edges);
    let p = steps_unchecked(&pred.edges);
    let per_kind = |kind: EdgeType| {
        let gk: BTreeSet<_> = g.iter().filter(|s| s.kind == kind).collect();
        let pk: BTreeSet<_> = p.iter().filter(|s| s.kind == kind).collect();
        (!gk.is_empty()).then(|| DimensionScore::from_f1(set_f1(&gk, &pk)))
    };
    Ok(StepScores {
        total: DimensionScore::from_f1(set_f1(&g, &p)),
        support: per_kind(EdgeType::Support),
        rebut: per_kind(EdgeType::Rebut),
    })
}

/// One matchable element of a sentence formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum FormulaItem {
    Triple(CanonicalTriple),
    Global(CanonicalPrefix),
}

fn formula_items(f: Option<&Formula>) -> BTreeMap<FormulaItem, usize> {
    let mut out = BTreeMap::new();
    let Some(f) = f else { return out };
    for t in &f.triples {
        *out.entry(FormulaItem::Triple(canonicalize_triple(t))).or_default() += 1;
    }
    let global = normalize(&f.global);
    if global != CanonicalPrefix::Empty {
        out.insert(FormulaItem::Global(global), 1);
    }
    out
}

fn formula_sentences<'g>(gold: &'g LogicMetagraph, pred: &'g LogicMetagraph) -> BTreeSet<&'g str> {
    gold.formulae
        .iter()
        .chain(&pred.formulae)
        .map(|f| f.sentence.as_str())
        .collect()
}

/// Per-sentence F1 over canonical triples (plus a non-trivial global
/// prefix, which counts as one more item), averaged over every sentence
/// that has a formula on either side.
pub fn score_formulae(gold: &LogicMetagraph, pred: &LogicMetagraph) -> Result<DimensionScore> {
    check_passage(gold, pred)?;
    let sentences = formula_sentences(gold, pred);
    if sentences.is_empty() {
        return Ok(DimensionScore::from_f1(1.0));
    }
    let scores: Vec<f64> = sentences
        .iter()
        .map(|s| {
            let g = formula_items(gold.formula(s));
            let p = formula_items(pred.formula(s));
            f1_from_counts(
                multiset_overlap(&g, &p),
                g.values().sum(),
                p.values().sum(),
            )
        })
        .collect();
    Ok(DimensionScore {
        f1: scores.iter().sum::<f64>() / scores.len() as f64,
        all_correct: scores.iter().all(|&s| s == 1.0),
    })
}

/// A gold label with the predicted label, if any.
pub type CertaintyPair = (CanonicalDegree, Option<CanonicalDegree>);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertaintyScore {
    pub accuracy: f64,
    pub all_correct: bool,
    #[serde(skip)]
    pub pairs: Vec<CertaintyPair>,
}

/// Accuracy over the sentences that carry a gold degree. Missing or
/// unresolved predictions are wrong.
pub fn score_certainty(gold: &LogicMetagraph, pred: &LogicMetagraph) -> Result<CertaintyScore> {
    check_passage(gold, pred)?;
    let pairs: Vec<CertaintyPair> = gold
        .degrees
        .iter()
        .map(|(s, d)| (*d, pred.degrees.get(s).copied()))
        .collect();
    let correct = pairs.iter().filter(|(g, p)| Some(*g) == *p).count();
    let accuracy = if pairs.is_empty() {
        1.0
    } else {
        correct as f64 / pairs.len() as f64
    };
    Ok(CertaintyScore {
        accuracy,
        all_correct: correct == pairs.len(),
        pairs,
    })
}

/// Macro-F1 over the degree classes that occur in the pool, as gold or as
/// prediction. A class that only one side uses scores 0.
pub fn certainty_macro_f1(pairs: &[CertaintyPair]) -> f64 {
    let classes: BTreeSet<CanonicalDegree> = pairs
        .iter()
        .flat_map(|(g, p)| std::iter::once(*g).chain(*p))
        .collect();
    if classes.is_empty() {
        return 1.0;
    }
    let total: f64 = classes
        .iter()
        .map(|c| {
            let tp = pairs.iter().filter(|(g, p)| g == c && *p == Some(*c)).count();
            let gold = pairs.iter().filter(|(g, _)| g == c).count();
            let pred = pairs.iter().filter(|(_, p)| *p == Some(*c)).count();
            f1_from_counts(tp, gold, pred)
        })
        .sum();
    total / classes.len() as f64
}

pub fn score_overall(gold: &LogicMetagraph, pred: &LogicMetagraph) -> Result<bool> {
    Ok(score_steps(gold, pred)?.total.all_correct
        && score_formulae(gold, pred)?.all_correct
        && score_certainty(gold, pred)?.all_correct)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OperatorKey {
    Implication,
    Conjunction,
    Disjunction,
    Negation,
    Box,
    Diamond,
    NotApplicable,
}

impl OperatorKey {
    pub const ALL: [OperatorKey; 7] = [
        OperatorKey::Implication,
        OperatorKey::Conjunction,
        OperatorKey::Disjunction,
        OperatorKey::Negation,
        OperatorKey::Box,
        OperatorKey::Diamond,
        OperatorKey::NotApplicable,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            OperatorKey::Implication => "→",
            OperatorKey::Conjunction => "∧",
            OperatorKey::Disjunction => "∨",
            OperatorKey::Negation => "¬",
            OperatorKey::Box => "□",
            OperatorKey::Diamond => "◇",
            OperatorKey::NotApplicable => "N/A",
        }
    }

    fn binary(op: BinaryOp) -> Self {
        match op {
            BinaryOp::Implication => OperatorKey::Implication,
            BinaryOp::Conjunction => OperatorKey::Conjunction,
            BinaryOp::Disjunction => OperatorKey::Disjunction,
        }
    }

    fn unary(op: UnaryOp) -> Self {
        match op {
            UnaryOp::Negation => OperatorKey::Negation,
            UnaryOp::Box => OperatorKey::Box,
            UnaryOp::Diamond => OperatorKey::Diamond,
        }
    }
}

impl fmt::Display for OperatorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MatchCounts {
    pub matched: usize,
    pub gold: usize,
    pub pred: usize,
}

impl MatchCounts {
    pub fn f1(&self) -> f64 {
        f1_from_counts(self.matched, self.gold, self.pred)
    }

    fn add(&mut self, other: MatchCounts) {
        self.matched += other.matched;
        self.gold += other.gold;
        self.pred += other.pred;
    }
}

pub type OperatorCounts = BTreeMap<OperatorKey, MatchCounts>;

/// Unary-operator labels of each (sentence, variable) slot: the elements of
/// the canonical prefixes the variable carries in its triples, or N/A when
/// that prefix is empty.
fn unary_slots(g: &LogicMetagraph) -> BTreeMap<(SentenceId, VariableId), BTreeSet<OperatorKey>> {
    let mut out: BTreeMap<_, BTreeSet<_>> = BTreeMap::new();
    for f in &g.formulae {
        for t in &f.triples {
            for side in [&t.left, &t.right] {
                let canonical = normalize(&side.prefix);
                let slot = out.entry((f.sentence.clone(), side.var.clone())).or_default();
                if canonical.ops().is_empty() {
                    slot.insert(OperatorKey::NotApplicable);
                }
                slot.extend(canonical.ops().iter().map(|op| OperatorKey::unary(*op)));
            }
        }
    }
    out
}

/// Per-operator match counts for one sample.
pub fn operator_counts(gold: &LogicMetagraph, pred: &LogicMetagraph) -> OperatorCounts {
    let mut counts = OperatorCounts::new();

    for s in formula_sentences(gold, pred) {
        let by_op = |g: &LogicMetagraph| {
            let mut m: BTreeMap<BinaryOp, BTreeMap<CanonicalTriple, usize>> = BTreeMap::new();
            for t in g.formula(s).into_iter().flat_map(|f| &f.triples) {
                let c = canonicalize_triple(t);
                *m.entry(c.op).or_default().entry(c).or_default() += 1;
            }
            m
        };
        let (g, p) = (by_op(gold), by_op(pred));
        for op in BinaryOp::ALL {
            let empty = BTreeMap::new();
            let (gm, pm) = (g.get(&op).unwrap_or(&empty), p.get(&op).unwrap_or(&empty));
            counts.entry(OperatorKey::binary(op)).or_default().add(MatchCounts {
                matched: multiset_overlap(gm, pm),
                gold: gm.values().sum(),
                pred: pm.values().sum(),
            });
        }
    }

    let (gs, ps) = (unary_slots(gold), unary_slots(pred));
    let empty = BTreeSet::new();
    let keys: BTreeSet<_> = gs.keys().chain(ps.keys()).collect();
    for key in keys {
        let g = gs.get(key).unwrap_or(&empty);
        let p = ps.get(key).unwrap_or(&empty);
        for op in [OperatorKey::Negation, OperatorKey::Box, OperatorKey::Diamond, OperatorKey::NotApplicable] {
            counts.entry(op).or_default().add(MatchCounts {
                matched: usize::from(g.contains(&op) && p.contains(&op)),
                gold: usize::from(g.contains(&op)),
                pred: usize::from(p.contains(&op)),
            });
        }
    }

    counts.retain(|_, c| c.gold + c.pred > 0);
    counts
}

/// Pooled per-operator F1 over a dataset; operators that never occur are
/// left out.
pub fn score_per_operator(samples: &[SamplePrediction]) -> BTreeMap<OperatorKey, f64> {
    let mut total = OperatorCounts::new();
    for s in samples {
        let pred = s.pred.graph(&s.gold);
        if check_passage(&s.gold, &pred).is_err() {
            continue;
        }
        for (k, c) in operator_counts(&s.gold, &pred) {
            total.entry(k).or_default().add(c);
        }
    }
    total.into_iter().map(|(k, c)| (k, c.f1())).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleScore {
    pub passage: String,
    pub nodes: DimensionScore,
    pub steps: StepScores,
    pub formulae: DimensionScore,
    pub certainty: CertaintyScore,
    pub overall: bool,
    #[serde(skip)]
    pub operators: OperatorCounts,
}

pub fn score_sample(gold: &LogicMetagraph, pred: &LogicMetagraph) -> Result<SampleScore> {
    let nodes = score_nodes(gold, pred)?;
    let steps = score_steps(gold, pred)?;
    let formulae = score_formulae(gold, pred)?;
    let certainty = score_certainty(gold, pred)?;
    let overall = steps.total.all_correct && formulae.all_correct && certainty.all_correct;
    Ok(SampleScore {
        passage: gold.passage.id.clone(),
        nodes,
        steps,
        formulae,
        certainty,
        overall,
        operators: operator_counts(gold, pred),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleError {
    pub index: usize,
    pub passage: String,
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
struct Mean {
    sum: f64,
    n: usize,
}

impl Mean {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.n += 1;
    }

    fn push_bit(&mut self, b: bool) {
        self.push(if b { 1.0 } else { 0.0 });
    }

    fn merge(&mut self, o: &Mean) {
        self.sum += o.sum;
        self.n += o.n;
    }

    fn value(&self) -> Option<f64> {
        (self.n > 0).then(|| self.sum / self.n as f64)
    }
}

/// Running totals over scored samples. Accumulators for disjoint parts of a
/// dataset can be merged in any order.
#[derive(Debug, Clone, Default)]
pub struct ScoreAccumulator {
    samples: usize,
    node_f1: Mean,
    node_all: Mean,
    step_f1: Mean,
    step_all: Mean,
    support_f1: Mean,
    support_all: Mean,
    rebut_f1: Mean,
    rebut_all: Mean,
    formula_f1: Mean,
    formula_all: Mean,
    certainty_acc: Mean,
    certainty_all: Mean,
    overall: Mean,
    pool: Vec<CertaintyPair>,
    operators: OperatorCounts,
    errors: Vec<SampleError>,
}

impl ScoreAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, gold: &LogicMetagraph, pred: &Prediction) {
        let index = self.samples;
        self.samples += 1;
        let graph = pred.graph(gold);
        match score_sample(gold, &graph) {
            Ok(s) => self.add_score(s),
            Err(e) => self.errors.push(SampleError {
                index,
                passage: gold.passage.id.clone(),
                code: e.code(),
                message: e.to_string(),
            }),
        }
    }

    pub fn add_score(&mut self, s: SampleScore) {
        self.node_f1.push(s.nodes.f1);
        self.node_all.push_bit(s.nodes.all_correct);
        self.step_f1.push(s.steps.total.f1);
        self.step_all.push_bit(s.steps.total.all_correct);
        if let Some(d) = s.steps.support {
            self.support_f1.push(d.f1);
            self.support_all.push_bit(d.all_correct);
        }
        if let Some(d) = s.steps.rebut {
            self.rebut_f1.push(d.f1);
            self.rebut_all.push_bit(d.all_correct);
        }
        self.formula_f1.push(s.formulae.f1);
        self.formula_all.push_bit(s.formulae.all_correct);
        self.certainty_acc.push(s.certainty.accuracy);
        self.certainty_all.push_bit(s.certainty.all_correct);
        self.overall.push_bit(s.overall);
        self.pool.extend(s.certainty.pairs);
        for (k, c) in s.operators {
            self.operators.entry(k).or_default().add(c);
        }
    }

    pub fn merge(&mut self, other: ScoreAccumulator) {
        let offset = self.samples;
        self.samples += other.samples;
        for (a, b) in [
            (&mut self.node_f1, &other.node_f1),
            (&mut self.node_all, &other.node_all),
            (&mut self.step_f1, &other.step_f1),
            (&mut self.step_all, &other.step_all),
            (&mut self.support_f1, &other.support_f1),
            (&mut self.support_all, &other.support_all),
            (&mut self.rebut_f1, &other.rebut_f1),
            (&mut self.rebut_all, &other.rebut_all),
            (&mut self.formula_f1, &other.formula_f1),
            (&mut self.formula_all, &other.formula_all),
            (&mut self.certainty_acc, &other.certainty_acc),
            (&mut self.certainty_all, &other.certainty_all),
            (&mut self.overall, &other.overall),
        ] {
            a.merge(b);
        }
        self.pool.extend(other.pool);
        for (k, c) in other.operators {
            self.operators.entry(k).or_default().add(c);
        }
        self.errors.extend(other.errors.into_iter().map(|mut e| {
            e.index += offset;
            e
        }));
    }

    pub fn finish(self) -> ScoreReport {
        let v = |m: &Mean| m.value().unwrap_or(0.0);
        ScoreReport {
            samples: self.samples,
            scored: self.node_f1.n,
            node_f1: v(&self.node_f1),
            node_allcorrect: v(&self.node_all),
            step_f1: v(&self.step_f1),
            step_allcorrect: v(&self.step_all),
            support_f1: self.support_f1.value(),
            support_allcorrect: self.support_all.value(),
            rebut_f1: self.rebut_f1.value(),
            rebut_allcorrect: self.rebut_all.value(),
            formula_f1: v(&self.formula_f1),
            formula_allcorrect: v(&self.formula_all),
            certainty_acc: v(&self.certainty_acc),
            certainty_allcorrect: v(&self.certainty_all),
            certainty_macro_f1: certainty_macro_f1(&self.pool),
            overall_allcorrect: v(&self.overall),
            per_operator_f1: self.operators.iter().map(|(k, c)| (*k, c.f1())).collect(),
            errors: self.errors,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    pub samples: usize,
    pub scored: usize,
    pub node_f1: f64,
    pub node_allcorrect: f64,
    pub step_f1: f64,
    pub step_allcorrect: f64,
    pub support_f1: Option<f64>,
    pub support_allcorrect: Option<f64>,
    pub rebut_f1: Option<f64>,
    pub rebut_allcorrect: Option<f64>,
    pub formula_f1: f64,
    pub formula_allcorrect: f64,
    pub certainty_acc: f64,
    pub certainty_allcorrect: f64,
    pub certainty_macro_f1: f64,
    pub overall_allcorrect: f64,
    #[serde(serialize_with = "operator_map")]
    pub per_operator_f1: BTreeMap<OperatorKey, f64>,
    pub errors: Vec<SampleError>,
}

fn operator_map<S: serde::Serializer>(m: &BTreeMap<OperatorKey, f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k.symbol(), v)?;
    }
    map.end()
}

pub fn score_dataset(samples: &[SamplePrediction]) -> ScoreReport {
    let mut acc = ScoreAccumulator::new();
    for s in samples {
        acc.add(&s.gold, &s.pred);
    }
    acc.finish()
}

impl ScoreReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// Plain-text tables in percent, one decimal.
    pub fn to_table(&self) -> String {
        let pct = |x: f64| format!("{:.1}", 100.0 * x);
        let opt = |x: Option<f64>| x.map_or("-".to_string(), pct);
        let row = |cells: &[String], widths: &[usize]| {
            cells
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join(" | ")
        };

        let head = ["Node F1", "All", "Step F1", "All", "Formula F1", "All", "Certainty Acc", "All", "F1*", "Overall All"]
            .map(String::from);
        let body = [
            pct(self.node_f1),
            pct(self.node_allcorrect),
            pct(self.step_f1),
            pct(self.step_allcorrect),
            pct(self.formula_f1),
            pct(self.formula_allcorrect),
            pct(self.certainty_acc),
            pct(self.certainty_allcorrect),
            pct(self.certainty_macro_f1),
            pct(self.overall_allcorrect),
        ];
        let widths: Vec<usize> = head.iter().map(|h| h.chars().count().max(5)).collect();

        let mut out = String::new();
        let _ = writeln!(out, "{}", row(&head, &widths));
        let _ = writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"));
        let _ = writeln!(out, "{}", row(&body, &widths));
        out.push('\n');

        let mut head2: Vec<String> = ["Support F1", "All", "Rebut F1", "All"].map(String::from).to_vec();
        let mut body2 = vec![
            opt(self.support_f1),
            opt(self.support_allcorrect),
            opt(self.rebut_f1),
            opt(self.rebut_allcorrect),
        ];
        for k in OperatorKey::ALL {
            head2.push(k.symbol().to_string());
            body2.push(opt(self.per_operator_f1.get(&k).copied()));
        }
        let widths2: Vec<usize> = head2.iter().map(|h| h.chars().count().max(5)).collect();
        let _ = writeln!(out, "{}", row(&head2, &widths2));
        let _ = writeln!(out, "{}", widths2.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"));
        let _ = writeln!(out, "{}", row(&body2, &widths2));
        let _ = writeln!(out, "\nsamples: {} (scored {}, errors {})", self.samples, self.scored, self.errors.len());
        out
    }
}
