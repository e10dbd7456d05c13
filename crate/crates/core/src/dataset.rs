//! Corpus statistics, seeded splits and validation sweeps.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;
use walkdir::WalkDir;

use crate::codec::{adapter_for, load_corpus};
use crate::error::{Error, Result};
use crate::model::{validate_graph, EdgeType, LogicMetagraph, ValidationReport, Violation};
use crate::modal::CanonicalPrefix;

/// Raw counts; these add up across any partition of a corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CorpusTotals {
    pub passages: usize,
    pub graphs: usize,
    pub nodes: usize,
    pub formulae: usize,
    pub variables: usize,
    pub binary_ops: usize,
    pub global_unary_ops: usize,
    pub local_unary_ops: usize,
    pub rebuttal_graphs: usize,
    pub multi_step_graphs: usize,
    pub multi_premise_graphs: usize,
    /// Graphs that are rebuttal, multi-step and multi-premise at once.
    pub intersection: usize,
}

impl CorpusTotals {
    pub fn merge(&mut self, o: &CorpusTotals) {
        self.passages += o.passages;
        self.graphs += o.graphs;
        self.nodes += o.nodes;
        self.formulae += o.formulae;
        self.variables += o.variables;
        self.binary_ops += o.binary_ops;
        self.global_unary_ops += o.global_unary_ops;
        self.local_unary_ops += o.local_unary_ops;
        self.rebuttal_graphs += o.rebuttal_graphs;
        self.multi_step_graphs += o.multi_step_graphs;
        self.multi_premise_graphs += o.multi_premise_graphs;
        self.intersection += o.intersection;
    }

    /// Counts for one graph, which is assumed valid.
    pub fn of_graph(g: &LogicMetagraph) -> Self {
        let rebuttal = g.edges.iter().any(|e| e.kind == EdgeType::Rebut);

        let supports = g.edges.iter().filter(|e| e.kind == EdgeType::Support);
        let support_sources: HashSet<&str> = supports.clone().map(|e| e.premise.as_str()).collect();
        let multi_step = supports.clone().any(|e| support_sources.contains(e.conclusion.as_str()));
        let mut incoming: HashMap<&str, usize> = HashMap::new();
        for e in supports {
            *incoming.entry(e.conclusion.as_str()).or_default() += 1;
        }
        let multi_premise = incoming.values().any(|n| *n >= 2);

        // A sentence's global operators: its formula's global prefix when one
        // is written out, else the canonical form of its degree.
        let global_unary_ops = g
            .passage
            .sentences
            .iter()
            .map(|s| match g.formula(&s.id) {
                Some(f) if !f.global.is_empty() => f.global.len(),
                _ => g
                    .degrees
                    .get(&s.id)
                    .map_or(0, |d| CanonicalPrefix::from(*d).ops().len()),
            })
            .sum();

        let triples = g.formulae.iter().flat_map(|f| &f.triples);
        CorpusTotals {
            passages: 1,
            graphs: 1,
            nodes: g.passage.sentences.len(),
            formulae: g.formulae.len(),
            variables: g.passage.sentences.iter().map(|s| s.variables.len()).sum(),
            binary_ops: triples.clone().count(),
            global_unary_ops,
            local_unary_ops: triples.map(|t| t.left.prefix.len() + t.right.prefix.len()).sum(),
            rebuttal_graphs: usize::from(rebuttal),
            multi_step_graphs: usize::from(multi_step),
            multi_premise_graphs: usize::from(multi_premise),
            intersection: usize::from(rebuttal && multi_step && multi_premise),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct CorpusAverages {
    pub nodes: f64,
    pub formulae: f64,
    pub variables: f64,
    pub binary_ops: f64,
    pub global_unary_ops: f64,
    pub local_unary_ops: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorpusStats {
    pub totals: CorpusTotals,
    /// Per-passage averages; all zero when `averages_defined` is false.
    pub averages: CorpusAverages,
    pub averages_defined: bool,
}

impl From<CorpusTotals> for CorpusStats {
    fn from(t: CorpusTotals) -> Self {
        let n = t.passages;
        let avg = |x: usize| if n == 0 { 0.0 } else { x as f64 / n as f64 };
        CorpusStats {
            totals: t,
            averages: CorpusAverages {
                nodes: avg(t.nodes),
                formulae: avg(t.formulae),
                variables: avg(t.variables),
                binary_ops: avg(t.binary_ops),
                global_unary_ops: avg(t.global_unary_ops),
                local_unary_ops: avg(t.local_unary_ops),
            },
            averages_defined: n > 0,
        }
    }
}

impl CorpusStats {
    /// Two-decimal text summary.
    pub fn to_table(&self) -> String {
        let t = &self.totals;
        let a = &self.averages;
        let mut rows = vec![
            ("passages", t.passages.to_string()),
            ("graphs", t.graphs.to_string()),
            ("nodes", t.nodes.to_string()),
            ("formulae", t.formulae.to_string()),
            ("rebuttal graphs", t.rebuttal_graphs.to_string()),
            ("multi-step graphs", t.multi_step_graphs.to_string()),
            ("multi-premise graphs", t.multi_premise_graphs.to_string()),
            ("rebuttal ∩ step ∩ premise", t.intersection.to_string()),
        ];
        if self.averages_defined {
            rows.extend([
                ("avg nodes", format!("{:.2}", a.nodes)),
                ("avg formulae", format!("{:.2}", a.formulae)),
                ("avg variables", format!("{:.2}", a.variables)),
                ("avg binary ops", format!("{:.2}", a.binary_ops)),
                ("avg global unary ops", format!("{:.2}", a.global_unary_ops)),
                ("avg local unary ops", format!("{:.2}", a.local_unary_ops)),
            ]);
        } else {
            rows.push(("averages", "undefined (empty corpus)".into()));
        }
        let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        rows.iter()
            .map(|(k, v)| format!("{k:<width$}  {v}\n"))
            .collect()
    }
}

/// Statistics over valid graphs. Any invalid graph fails the whole call,
/// with every violation prefixed by its passage id.
pub fn compute_stats(corpus: &[LogicMetagraph]) -> Result<CorpusStats> {
    let mut bad = Vec::new();
    for g in corpus {
        for v in validate_graph(g).violations {
            bad.push(Violation {
                code: v.code,
                message: format!("{}: {}", g.passage.id, v.message),
            });
        }
    }
    if !bad.is_empty() {
        return Err(Error::InvalidGraph(ValidationReport { violations: bad }));
    }
    let mut totals = CorpusTotals::default();
    for g in corpus {
        totals.merge(&CorpusTotals::of_graph(g));
    }
    Ok(totals.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Split<T> {
    pub train: Vec<T>,
    pub dev: Vec<T>,
    pub test: Vec<T>,
}

/// Seeded permutation of `0..n`: ChaCha8 seeded from `seed` as a `u64`,
/// then Fisher-Yates from the last position down, drawing `next_u64() %
/// (i + 1)` for position `i`.
pub fn shuffled_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        idx.swap(i, j);
    }
    idx
}

/// Sizes ⌊0.6n⌋, ⌊0.2n⌋ and the rest.
pub fn split_sizes(n: usize) -> (usize, usize, usize) {
    let train = n * 3 / 5;
    let dev = n / 5;
    (train, dev, n - train - dev)
}

pub fn split_indices(n: usize, seed: u64) -> Result<Split<usize>> {
    if n == 0 {
        return Err(Error::EmptyCorpus);
    }
    let idx = shuffled_indices(n, seed);
    let (train, dev, _) = split_sizes(n);
    Ok(Split {
        train: idx[..train].to_vec(),
        dev: idx[train..train + dev].to_vec(),
        test: idx[train + dev..].to_vec(),
    })
}

pub fn split<T: Clone>(corpus: &[T], seed: u64) -> Result<Split<T>> {
    let s = split_indices(corpus.len(), seed)?;
    let pick = |ix: &[usize]| ix.iter().map(|i| corpus[*i].clone()).collect();
    Ok(Split {
        train: pick(&s.train),
        dev: pick(&s.dev),
        test: pick(&s.test),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileError {
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphViolation {
    pub passage: String,
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileOutcome {
    pub path: PathBuf,
    pub format: Option<&'static str>,
    pub graphs: usize,
    pub violations: Vec<GraphViolation>,
    pub error: Option<FileError>,
}

impl FileOutcome {
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub files: Vec<FileOutcome>,
    /// Occurrences of each violation or file error code.
    pub histogram: BTreeMap<&'static str, usize>,
    pub ok: bool,
}

/// Files named directly, plus every readable corpus file under a named
/// directory, sorted.
pub fn expand_paths(paths: &[PathBuf]) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = WalkDir::new(p)
                .into_iter()
                .filter_map(|e| e.ok())
                .filter(|e| e.file_type().is_file() && adapter_for(e.path()).is_some())
                .map(|e| e.into_path())
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    out
}

pub fn validate_file(path: &Path) -> FileOutcome {
    let format = adapter_for(path).map(|a| a.name());
    let mut outcome = FileOutcome {
        path: path.to_path_buf(),
        format,
        graphs: 0,
        violations: Vec::new(),
        error: None,
    };
    match load_corpus(path) {
        Err(e) => {
            outcome.error = Some(FileError {
                code: e.code(),
                message: e.to_string(),
            })
        }
        Ok(graphs) => {
            outcome.graphs = graphs.len();
            for g in &graphs {
                for v in validate_graph(g).violations {
                    outcome.violations.push(GraphViolation {
                        passage: g.passage.id.clone(),
                        code: v.code.as_str(),
                        message: v.message,
                    });
                }
            }
        }
    }
    outcome
}

/// Validates every file; a bad file is reported and the sweep continues.
pub fn validate_corpus(paths: &[PathBuf]) -> CorpusReport {
    let files: Vec<FileOutcome> = expand_paths(paths).iter().map(|p| validate_file(p)).collect();
    let mut histogram = BTreeMap::new();
    for f in &files {
        for code in f.violations.iter().map(|v| v.code).chain(f.error.as_ref().map(|e| e.code)) {
            *histogram.entry(code).or_default() += 1;
        }
    }
    CorpusReport {
        ok: files.iter().all(FileOutcome::ok),
        files,
        histogram,
    }
}
