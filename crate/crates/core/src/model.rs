//! Passages, metagraphs, node formulae and certainty degrees.
//!
//! A [`LogicMetagraph`] ties a pre-segmented [`Passage`] to three layers of
//! annotation: support/rebut edges between sentences, per-sentence formulae
//! built from [`LogicalTriple`]s, and a [`CanonicalDegree`] per sentence.
//! All values are immutable data; the checks live in [`validate_graph`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;
use serde::Serialize;

use crate::error::{Error, Result};

pub type SentenceId = String;
pub type VariableId = String;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Passage {
    pub id: String,
    pub sentences: Vec<Sentence>,
}

impl Passage {
    pub fn new(id: impl Into<String>, sentences: Vec<Sentence>) -> Self {
        Passage {
            id: id.into(),
            sentences,
        }
    }

    pub fn sentence(&self, id: &str) -> Option<&Sentence> {
        self.sentences.iter().find(|s| s.id == id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.sentence(id).is_some()
    }

    /// Position of the sentence in document order.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.sentences.iter().position(|s| s.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub id: SentenceId,
    pub text: String,
    pub variables: Vec<VariableSpan>,
}

impl Sentence {
    pub fn new(id: impl Into<String>, text: impl Into<String>, variables: Vec<VariableSpan>) -> Self {
        Sentence {
            id: id.into(),
            text: text.into(),
            variables,
        }
    }

    pub fn variable(&self, id: &str) -> Option<&VariableSpan> {
        self.variables.iter().find(|v| v.id == id)
    }
}

/// A logical variable. `span` holds character (not byte) offsets into the
/// owning sentence's text, end-exclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSpan {
    pub id: VariableId,
    pub span: Option<(usize, usize)>,
}

impl VariableSpan {
    pub fn new(id: impl Into<String>, span: Option<(usize, usize)>) -> Self {
        VariableSpan { id: id.into(), span }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeType {
    Support,
    Rebut,
}

impl EdgeType {
    pub fn arrow(self) -> &'static str {
        match self {
            EdgeType::Support => "->",
            EdgeType::Rebut => "=>",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeType::Support => "support",
            EdgeType::Rebut => "rebut",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetaEdge {
    pub premise: SentenceId,
    pub conclusion: SentenceId,
    pub kind: EdgeType,
}

impl MetaEdge {
    pub fn new(premise: impl Into<String>, conclusion: impl Into<String>, kind: EdgeType) -> Self {
        MetaEdge {
            premise: premise.into(),
            conclusion: conclusion.into(),
            kind,
        }
    }

    pub fn support(premise: impl Into<String>, conclusion: impl Into<String>) -> Self {
        Self::new(premise, conclusion, EdgeType::Support)
    }

    pub fn rebut(premise: impl Into<String>, conclusion: impl Into<String>) -> Self {
        Self::new(premise, conclusion, EdgeType::Rebut)
    }
}

impl fmt::Display for MetaEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.premise, self.kind.arrow(), self.conclusion)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum UnaryOp {
    Negation,
    Box,
    Diamond,
}

impl UnaryOp {
    pub const ALL: [UnaryOp; 3] = [UnaryOp::Negation, UnaryOp::Box, UnaryOp::Diamond];

    pub fn symbol(self) -> char {
        match self {
            UnaryOp::Negation => '¬',
            UnaryOp::Box => '□',
            UnaryOp::Diamond => '◇',
        }
    }
}

/// A string of unary operators, outermost first: `[Box, Negation]` is □¬p.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModalPrefix(pub Vec<UnaryOp>);

impl ModalPrefix {
    pub fn empty() -> Self {
        ModalPrefix(Vec::new())
    }

    pub fn ops(&self) -> &[UnaryOp] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<UnaryOp>> for ModalPrefix {
    fn from(ops: Vec<UnaryOp>) -> Self {
        ModalPrefix(ops)
    }
}

impl<const N: usize> From<[UnaryOp; N]> for ModalPrefix {
    fn from(ops: [UnaryOp; N]) -> Self {
        ModalPrefix(ops.to_vec())
    }
}

impl fmt::Display for ModalPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|op| write!(f, "{}", op.symbol()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BinaryOp {
    Implication,
    Conjunction,
    Disjunction,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 3] = [
        BinaryOp::Implication,
        BinaryOp::Conjunction,
        BinaryOp::Disjunction,
    ];

    pub fn is_symmetric(self) -> bool {
        !matches!(self, BinaryOp::Implication)
    }

    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Implication => '→',
            BinaryOp::Conjunction => '∧',
            BinaryOp::Disjunction => '∨',
        }
    }
}

/// One side of a triple: a variable and its local modal prefix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Operand {
    pub var: VariableId,
    pub prefix: ModalPrefix,
}

impl Operand {
    pub fn new(var: impl Into<String>, prefix: impl Into<ModalPrefix>) -> Self {
        Operand {
            var: var.into(),
            prefix: prefix.into(),
        }
    }

    pub fn bare(var: impl Into<String>) -> Self {
        Self::new(var, ModalPrefix::empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogicalTriple {
    pub left: Operand,
    pub op: BinaryOp,
    pub right: Operand,
}

impl LogicalTriple {
    pub fn new(left: Operand, op: BinaryOp, right: Operand) -> Self {
        LogicalTriple { left, op, right }
    }
}

impl fmt::Display for LogicalTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{} {} {}{}",
            self.left.prefix,
            self.left.var,
            self.op.symbol(),
            self.right.prefix,
            self.right.var
        )
    }
}

/// The formula of one sentence: its triples, implicitly conjoined, under a
/// statement-wide prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub sentence: SentenceId,
    pub triples: Vec<LogicalTriple>,
    pub global: ModalPrefix,
}

impl Formula {
    pub fn new(sentence: impl Into<String>, triples: Vec<LogicalTriple>) -> Self {
        Formula {
            sentence: sentence.into(),
            triples,
            global: ModalPrefix::empty(),
        }
    }

    pub fn with_global(mut self, global: impl Into<ModalPrefix>) -> Self {
        self.global = global.into();
        self
    }
}

/// Five-way certainty classification, numerically 4 (necessary) down to
/// 0 (impossible).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CanonicalDegree {
    Impossible = 0,
    Unnecessary = 1,
    Contingent = 2,
    Possible = 3,
    Necessary = 4,
}

impl CanonicalDegree {
    pub const ALL: [CanonicalDegree; 5] = [
        CanonicalDegree::Necessary,
        CanonicalDegree::Possible,
        CanonicalDegree::Contingent,
        CanonicalDegree::Unnecessary,
        CanonicalDegree::Impossible,
    ];

    pub fn value(self) -> u8 {
        self as u8
    }

    pub fn from_value(value: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.value() == value)
    }

    pub fn word(self) -> &'static str {
        match self {
            CanonicalDegree::Necessary => "necessary",
            CanonicalDegree::Possible => "possible",
            CanonicalDegree::Contingent => "contingent",
            CanonicalDegree::Unnecessary => "unnecessary",
            CanonicalDegree::Impossible => "impossible",
        }
    }

    pub fn from_word(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.word() == word)
    }
}

impl fmt::Display for CanonicalDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.word())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicMetagraph {
    pub passage: Passage,
    pub edges: Vec<MetaEdge>,
    pub formulae: Vec<Formula>,
    pub degrees: BTreeMap<SentenceId, CanonicalDegree>,
}

impl LogicMetagraph {
    /// A graph with no edges, formulae or degrees over `passage`.
    pub fn empty(passage: Passage) -> Self {
        LogicMetagraph {
            passage,
            edges: Vec::new(),
            formulae: Vec::new(),
            degrees: BTreeMap::new(),
        }
    }

    pub fn formula(&self, sentence: &str) -> Option<&Formula> {
        self.formulae.iter().find(|f| f.sentence == sentence)
    }

    /// Sentence ids that take part in at least one edge.
    pub fn used_sentences(&self) -> BTreeSet<&str> {
        self.edges
            .iter()
            .flat_map(|e| [e.premise.as_str(), e.conclusion.as_str()])
            .collect()
    }

    /// Equality that ignores the order of edges and formulae.
    pub fn structurally_equal(&self, other: &LogicMetagraph) -> bool {
        let edges = |g: &LogicMetagraph| {
            let mut e = g.edges.clone();
            e.sort();
            e
        };
        let formulae = |g: &LogicMetagraph| {
            g.formulae
                .iter()
                .map(|f| (f.sentence.clone(), (f.triples.clone(), f.global.clone())))
                .collect::<BTreeMap<_, _>>()
        };
        self.passage == other.passage
            && self.formulae.len() == other.formulae.len()
            && edges(self) == edges(other)
            && formulae(self) == formulae(other)
            && self.degrees == other.degrees
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    Cycle,
    DanglingEdge,
    DupFormula,
    BadSpan,
    SelfLoop,
    MissingDegree,
    DupEdge,
    DupId,
    EmptyPassage,
    UnknownReference,
    BadTriple,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::Cycle => "CYCLE",
            ViolationCode::DanglingEdge => "DANGLING_EDGE",
            ViolationCode::DupFormula => "DUP_FORMULA",
            ViolationCode::BadSpan => "BAD_SPAN",
            ViolationCode::SelfLoop => "SELF_LOOP",
            ViolationCode::MissingDegree => "MISSING_DEGREE",
            ViolationCode::DupEdge => "DUP_EDGE",
            ViolationCode::DupId => "DUP_ID",
            ViolationCode::EmptyPassage => "EMPTY_PASSAGE",
            ViolationCode::UnknownReference => "UNKNOWN_REFERENCE",
            ViolationCode::BadTriple => "BAD_TRIPLE",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
}

impl Violation {
    fn new(code: ViolationCode, message: impl Into<String>) -> Self {
        Violation {
            code,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn codes(&self) -> Vec<ViolationCode> {
        self.violations.iter().map(|v| v.code).collect()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{}: {}", v.code, v.message))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks every structural invariant of the metagraph. Violations are
/// returned as data, sorted, so the report does not depend on the order of
/// the input lists.
pub fn validate_graph(graph: &LogicMetagraph) -> ValidationReport {
    let mut out = Vec::new();
    let passage = &graph.passage;

    if passage.sentences.is_empty() {
        out.push(Violation::new(ViolationCode::EmptyPassage, "passage has no sentences"));
    }

    let mut seen = HashSet::new();
    for s in &passage.sentences {
        if !seen.insert(s.id.as_str()) {
            out.push(Violation::new(ViolationCode::DupId, format!("sentence {}", s.id)));
        }
        check_sentence(s, &mut out);
    }

    let mut seen_edges = HashSet::new();
    let mut dag = DiGraphMap::<&str, ()>::new();
    for e in &graph.edges {
        if e.premise == e.conclusion {
            out.push(Violation::new(ViolationCode::SelfLoop, e.to_string()));
            continue;
        }
        let missing: Vec<&str> = [e.premise.as_str(), e.conclusion.as_str()]
            .into_iter()
            .filter(|id| !passage.contains(id))
            .collect();
        if !missing.is_empty() {
            out.push(Violation::new(
                ViolationCode::DanglingEdge,
                format!("{} (unknown {})", e, missing.join(", ")),
            ));
            continue;
        }
        if !seen_edges.insert(e) {
            out.push(Violation::new(ViolationCode::DupEdge, e.to_string()));
        }
        dag.add_edge(e.premise.as_str(), e.conclusion.as_str(), ());
    }
    for component in tarjan_scc(&dag) {
        if component.len() > 1 {
            let mut members: Vec<&str> = component;
            members.sort_unstable();
            out.push(Violation::new(ViolationCode::Cycle, members.join(", ")));
        }
    }

    let mut with_formula = HashSet::new();
    for f in &graph.formulae {
        if !with_formula.insert(f.sentence.as_str()) {
            out.push(Violation::new(ViolationCode::DupFormula, f.sentence.clone()));
        }
        match passage.sentence(&f.sentence) {
            None => out.push(Violation::new(
                ViolationCode::UnknownReference,
                format!("formula for unknown sentence {}", f.sentence),
            )),
            Some(sentence) => check_triples(sentence, f, &mut out),
        }
    }

    for id in graph.degrees.keys() {
        if !passage.contains(id) {
            out.push(Violation::new(
                ViolationCode::UnknownReference,
                format!("degree for unknown sentence {id}"),
            ));
        }
    }
    for id in graph.used_sentences() {
        if passage.contains(id) && !graph.degrees.contains_key(id) {
            out.push(Violation::new(ViolationCode::MissingDegree, id));
        }
    }

    out.sort();
    ValidationReport { violations: out }
}

fn check_sentence(s: &Sentence, out: &mut Vec<Violation>) {
    let len = s.text.chars().count();
    let mut seen = HashSet::new();
    let mut last_end = 0;
    for v in &s.variables {
        if !seen.insert(v.id.as_str()) {
            out.push(Violation::new(
                ViolationCode::DupId,
                format!("variable {} in {}", v.id, s.id),
            ));
        }
        let Some((start, end)) = v.span else { continue };
        let problem = if start >= end {
            Some("empty or reversed")
        } else if end > len {
            Some("out of range")
        } else if start < last_end {
            Some("overlaps or out of order")
        } else {
            None
        };
        if let Some(problem) = problem {
            out.push(Violation::new(
                ViolationCode::BadSpan,
                format!("{}/{} [{start}, {end}) {problem}", s.id, v.id),
            ));
        }
        last_end = last_end.max(end);
    }
}

fn check_triples(sentence: &Sentence, f: &Formula, out: &mut Vec<Violation>) {
    for t in &f.triples {
        if t.left.var == t.right.var {
            out.push(Violation::new(
                ViolationCode::BadTriple,
                format!("{}: {} relates a variable to itself", f.sentence, t),
            ));
        }
        for var in [&t.left.var, &t.right.var] {
            if sentence.variable(var).is_none() {
                out.push(Violation::new(
                    ViolationCode::UnknownReference,
                    format!("{}: unknown variable {}", f.sentence, var),
                ));
            }
        }
    }
}

/// The logical character of a sentence within its metagraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Role {
    Conclusion,
    Rebuttal,
    ChainBeginning,
    Intermediate,
    Irrelevant,
}

impl Role {
    pub const ALL: [Role; 5] = [
        Role::Conclusion,
        Role::Rebuttal,
        Role::ChainBeginning,
        Role::Intermediate,
        Role::Irrelevant,
    ];
}

/// Assigns one [`Role`] to every sentence of a valid graph.
///
/// Precedence is Rebuttal > Conclusion > Intermediate > ChainBeginning.
/// A node counts as incoming-connected through either edge kind, so a
/// support premise that is itself rebutted is Intermediate, and a node that
/// is only ever rebutted is a Conclusion.
pub fn derive_roles(graph: &LogicMetagraph) -> Result<BTreeMap<SentenceId, Role>> {
    validate_graph(graph).into_result()?;
    Ok(roles_unchecked(graph))
}

pub(crate) fn roles_unchecked(graph: &LogicMetagraph) -> BTreeMap<SentenceId, Role> {
    #[derive(Default)]
    struct Degree {
        incoming: usize,
        support_out: usize,
        rebut_out: usize,
    }
    let mut degrees: HashMap<&str, Degree> = HashMap::new();
    for e in &graph.edges {
        let src = degrees.entry(e.premise.as_str()).or_default();
        match e.kind {
            EdgeType::Support => src.support_out += 1,
            EdgeType::Rebut => src.rebut_out += 1,
        }
        degrees.entry(e.conclusion.as_str()).or_default().incoming += 1;
    }

    graph
        .passage
        .sentences
        .iter()
        .map(|s| {
            let role = match degrees.get(s.id.as_str()) {
                None => Role::Irrelevant,
                Some(d) if d.rebut_out > 0 => Role::Rebuttal,
                Some(d) if d.support_out == 0 => Role::Conclusion,
                Some(d) if d.incoming > 0 => Role::Intermediate,
                Some(_) => Role::ChainBeginning,
            };
            (s.id.clone(), role)
        })
        .collect()
}

/// A one-premise inference step.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub premise: SentenceId,
    pub conclusion: SentenceId,
    pub kind: EdgeType,
}

impl From<&MetaEdge> for Step {
    fn from(e: &MetaEdge) -> Self {
        Step {
            premise: e.premise.clone(),
            conclusion: e.conclusion.clone(),
            kind: e.kind,
        }
    }
}

impl From<&Step> for MetaEdge {
    fn from(s: &Step) -> Self {
        MetaEdge::new(s.premise.clone(), s.conclusion.clone(), s.kind)
    }
}

/// Breaks the graph into one-premise steps. A multi-premise inference
/// becomes one step per premise, all sharing the conclusion.
pub fn decompose_steps(graph: &LogicMetagraph) -> Result<BTreeSet<Step>> {
    validate_graph(graph).into_result()?;
    Ok(steps_unchecked(&graph.edges))
}

pub(crate) fn steps_unchecked(edges: &[MetaEdge]) -> BTreeSet<Step> {
    edges.iter().map(Step::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn passage(n: usize) -> Passage {
        Passage::new(
            "p",
            (1..=n)
                .map(|i| Sentence::new(format!("sent{i}"), format!("sentence {i}"), vec![]))
                .collect(),
        )
    }

    fn graph(n: usize, edges: Vec<MetaEdge>) -> LogicMetagraph {
        let mut g = LogicMetagraph::empty(passage(n));
        for id in g.passage.sentences.iter().map(|s| s.id.clone()).collect::<Vec<_>>() {
            g.degrees.insert(id, CanonicalDegree::Contingent);
        }
        g.edges = edges;
        g
    }

    fn example() -> LogicMetagraph {
        graph(
            4,
            vec![
                MetaEdge::support("sent1", "sent3"),
                MetaEdge::support("sent2", "sent3"),
                MetaEdge::rebut("sent4", "sent2"),
            ],
        )
    }

    #[test]
    fn worked_example_is_valid() {
        assert!(validate_graph(&example()).is_valid());
    }

    #[test]
    fn self_loop() {
        let g = graph(2, vec![MetaEdge::support("sent1", "sent1")]);
        assert_eq!(validate_graph(&g).codes(), vec![ViolationCode::SelfLoop]);
    }

    #[test]
    fn two_cycle() {
        let g = graph(
            2,
            vec![MetaEdge::support("sent1", "sent2"), MetaEdge::support("sent2", "sent1")],
        );
        assert_eq!(validate_graph(&g).codes(), vec![ViolationCode::Cycle]);
    }

    #[test]
    fn mixed_kind_cycle_is_rejected() {
        let g = graph(
            3,
            vec![
                MetaEdge::support("sent1", "sent2"),
                MetaEdge::support("sent2", "sent3"),
                MetaEdge::rebut("sent3", "sent1"),
            ],
        );
        assert_eq!(validate_graph(&g).codes(), vec![ViolationCode::Cycle]);
    }

    #[test]
    fn dangling_and_missing_degree() {
        let mut g = graph(2, vec![MetaEdge::support("sent1", "sent9")]);
        assert_eq!(validate_graph(&g).codes(), vec![ViolationCode::DanglingEdge]);
        g.edges = vec![MetaEdge::support("sent1", "sent2")];
        g.degrees.remove("sent2");
        assert_eq!(validate_graph(&g).codes(), vec![ViolationCode::MissingDegree]);
    }

    #[test]
    fn degree_without_formula_is_fine() {
        let mut g = example();
        g.formulae.clear();
        assert!(validate_graph(&g).is_valid());
    }

    #[test]
    fn duplicate_formula_and_bad_triple() {
        let mut g = example();
        g.passage.sentences[2].variables = vec![VariableSpan::new("v1", None), VariableSpan::new("v2", None)];
        let t = LogicalTriple::new(Operand::bare("v1"), BinaryOp::Conjunction, Operand::bare("v1"));
        g.formulae = vec![Formula::new("sent3", vec![t]), Formula::new("sent3", vec![])];
        let codes = validate_graph(&g).codes();
        assert_eq!(codes, vec![ViolationCode::DupFormula, ViolationCode::BadTriple]);
    }

    #[test]
    fn bad_spans() {
        let mut g = example();
        g.passage.sentences[0].text = "abcdefghij".into();
        g.passage.sentences[0].variables = vec![
            VariableSpan::new("v1", Some((0, 4))),
            VariableSpan::new("v2", Some((3, 6))),
            VariableSpan::new("v3", Some((7, 7))),
            VariableSpan::new("v4", Some((8, 11))),
        ];
        let codes = validate_graph(&g).codes();
        assert_eq!(codes, vec![ViolationCode::BadSpan; 3]);
    }

    #[test]
    fn roles_of_worked_example() {
        let roles = derive_roles(&example()).unwrap();
        assert_eq!(roles["sent1"], Role::ChainBeginning);
        assert_eq!(roles["sent2"], Role::Intermediate);
        assert_eq!(roles["sent3"], Role::Conclusion);
        assert_eq!(roles["sent4"], Role::Rebuttal);
    }

    #[test]
    fn roles_without_edges() {
        let roles = derive_roles(&graph(3, vec![])).unwrap();
        assert!(roles.values().all(|r| *r == Role::Irrelevant));
    }

    #[test]
    fn roles_single_edge() {
        let roles = derive_roles(&graph(2, vec![MetaEdge::support("sent1", "sent2")])).unwrap();
        assert_eq!(roles["sent1"], Role::ChainBeginning);
        assert_eq!(roles["sent2"], Role::Conclusion);
    }

    #[test]
    fn rebuttal_wins_over_support() {
        let g = graph(
            3,
            vec![MetaEdge::support("sent1", "sent2"), MetaEdge::rebut("sent1", "sent3")],
        );
        let roles = derive_roles(&g).unwrap();
        assert_eq!(roles["sent1"], Role::Rebuttal);
        assert_eq!(roles["sent3"], Role::Conclusion);
    }

    #[test]
    fn roles_reject_invalid_graph() {
        let err = derive_roles(&graph(1, vec![MetaEdge::support("sent1", "sent1")])).unwrap_err();
        assert_eq!(err.code(), "INVALID_GRAPH");
    }

    #[test]
    fn steps() {
        let g = graph(
            3,
            vec![MetaEdge::support("sent1", "sent3"), MetaEdge::support("sent2", "sent3")],
        );
        let steps = decompose_steps(&g).unwrap();
        assert_eq!(steps.len(), 2);
        assert!(steps.iter().all(|s| s.conclusion == "sent3" && s.kind == EdgeType::Support));
        assert!(decompose_steps(&graph(2, vec![])).unwrap().is_empty());
        let rebut = decompose_steps(&graph(4, vec![MetaEdge::rebut("sent4", "sent2")])).unwrap();
        assert_eq!(
            rebut.into_iter().collect::<Vec<_>>(),
            vec![Step {
                premise: "sent4".into(),
                conclusion: "sent2".into(),
                kind: EdgeType::Rebut
            }]
        );
    }
}
