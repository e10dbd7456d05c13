//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a domain violation (invalid graph, unresolvable
//! pairing, parse failure), 2 an IO or usage error. Reports go to stdout
//! (or `--out`); diagnostics go to stderr.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use metalogic::agreement::{agreement_report, kappa_logical_relation, AnnotationPair};
use metalogic::codec::adapter::{read_prediction_lines, write_corpus_as};
use metalogic::codec::words::prefix_words;
use metalogic::codec::{load_corpus, parse_linearized, parse_triples, read_json_corpus, ParseMode};
use metalogic::dataset::{compute_stats, expand_paths, split_indices, validate_corpus};
use metalogic::extractor::{extract, ingest_conllu, DependencyParse, IndicatorLexicon, Scope};
use metalogic::formula::canonicalize_triple;
use metalogic::model::{validate_graph, Sentence, VariableSpan};
use metalogic::scorer::{Prediction, ScoreAccumulator};
use metalogic::{Error, LogicMetagraph};

const ENV_LEXICON: &str = "METALOGIC_LEXICON";
const ENV_PARSE_MODE: &str = "METALOGIC_PARSE_MODE";

#[derive(Parser)]
#[command(name = "metalogic", version, about = "Validate, score and analyse logic metagraphs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Report format [default: table for canonicalize, json otherwise]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Parse predictions strictly (any diagnostic rejects the sample).
    #[arg(long, global = true, conflicts_with = "lenient")]
    strict: bool,
    /// Parse predictions leniently (the default).
    #[arg(long, global = true)]
    lenient: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Json,
    Linearized,
}

#[derive(Subcommand)]
enum Command {
    /// Check corpus files or directories for graph violations.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Score predictions against gold graphs.
    Score {
        /// Gold corpus (.json, .lin or .tsv).
        #[arg(long)]
        gold: PathBuf,
        /// Predictions: `id<TAB>linearized` lines, or a JSON corpus.
        #[arg(long)]
        pred: PathBuf,
    },
    /// Inter-annotator agreement over `<stem>.a.json` / `<stem>.b.json` pairs.
    Kappa { dir: PathBuf },
    /// Reduce a bracket-word formula to canonical triples.
    Canonicalize { formula: String },
    /// Corpus statistics.
    Stats {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Seeded 60/20/20 split manifest of passage ids.
    Split {
        path: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Extract unary operators from dependency parses.
    ExtractOps {
        conllu: PathBuf,
        /// Indicator lexicon (.txt sections or .json); overrides METALOGIC_LEXICON.
        #[arg(long)]
        lexicon: Option<PathBuf>,
    },
    /// Convert a corpus between JSON and linearized records.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
}

/// A failed command: exit status and what to print on stderr.
struct Failure {
    status: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if matches!(e, Error::Io { .. }) { 2 } else { 1 };
        Failure {
            status,
            message: format!("{}: {e}", e.code()),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        status: 2,
        message: message.into(),
    }
}

type CmdResult = Result<u8, Failure>;

struct Ctx {
    format: Format,
    out: Option<PathBuf>,
}

impl Ctx {
    fn emit(&self, payload: &str) -> Result<(), Failure> {
        let mut text = payload.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &self.out {
            Some(path) => fs::write(path, text).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?,
            None => {
                let _ = std::io::stdout().write_all(text.as_bytes());
            }
        }
        Ok(())
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> Result<(), Failure> {
        self.emit(&serde_json::to_string_pretty(value).expect("reports serialize"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let default_format = match cli.command {
        Command::Canonicalize { .. } => Format::Table,
        _ => Format::Json,
    };
    let ctx = Ctx {
        format: cli.common.format.unwrap_or(default_format),
        out: cli.common.out.clone(),
    };
    let result = match parse_mode(&cli.common) {
        Err(f) => Err(f),
        Ok(mode) => run(cli.command, mode, &ctx),
    };
    match result {
        Ok(status) => ExitCode::from(status),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}

fn parse_mode(c: &Common) -> Result<ParseMode, Failure> {
    if c.strict {
        return Ok(ParseMode::Strict);
    }
    if c.lenient {
        return Ok(ParseMode::Lenient);
    }
    match std::env::var(ENV_PARSE_MODE) {
        Ok(v) if !v.trim().is_empty() => v.trim().parse().map_err(|e| usage(format!("{ENV_PARSE_MODE}: {e}"))),
        _ => Ok(ParseMode::Lenient),
    }
}

fn run(command: Command, mode: ParseMode, ctx: &Ctx) -> CmdResult {
    match command {
        Command::Validate { paths } => cmd_validate(&paths, ctx),
        Command::Score { gold, pred } => cmd_score(&gold, &pred, mode, ctx),
        Command::Kappa { dir } => cmd_kappa(&dir, ctx),
        Command::Canonicalize { formula } => cmd_canonicalize(&formula, ctx),
        Command::Stats { paths } => cmd_stats(&paths, ctx),
        Command::Split { path, seed } => cmd_split(&path, seed, ctx),
        Command::ExtractOps { conllu, lexicon } => cmd_extract_ops(&conllu, lexicon, ctx),
        Command::Convert { input, to } => cmd_convert(&input, to, ctx),
    }
}

fn require_exists(paths: &[PathBuf]) -> Result<(), Failure> {
    match paths.iter().find(|p| !p.exists()) {
        Some(p) => Err(Error::Io {
            path: p.clone(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory"),
        }
        .into()),
        None => Ok(()),
    }
}

fn cmd_validate(paths: &[PathBuf], ctx: &Ctx) -> CmdResult {
    require_exists(paths)?;
    let report = validate_corpus(paths);
    match ctx.format {
        Format::Json => ctx.emit_json(&report)?,
        Format::Table => {
            let mut out = String::new();
            for f in &report.files {
                let status = match (&f.error, f.violations.len()) {
                    (Some(e), _) => format!("{} {}", e.code, e.message),
                    (None, 0) => format!("ok ({} graphs)", f.graphs),
                    (None, n) => format!("{n} violations"),
                };
                out.push_str(&format!("{}: {status}\n", f.path.display()));
                for v in &f.violations {
                    out.push_str(&format!("  {} {} {}\n", v.passage, v.code, v.message));
                }
            }
            for (code, n) in &report.histogram {
                out.push_str(&format!("{code}: {n}\n"));
            }
            ctx.emit(&out)?;
        }
    }
    let io_failure = report
        .files
        .iter()
        .any(|f| f.error.as_ref().is_some_and(|e| e.code == "IO"));
    Ok(if io_failure {
        2
    } else if report.ok {
        0
    } else {
        1
    })
}

/// Loads a corpus and rejects it if any graph is invalid.
fn load_valid(path: &Path) -> Result<Vec<LogicMetagraph>, Failure> {
    require_exists(&[path.to_path_buf()])?;
    let graphs = load_corpus(path)?;
    let mut bad = false;
    for g in &graphs {
        for v in validate_graph(g).violations {
            eprintln!("{}: {}: {} {}", path.display(), g.passage.id, v.code, v.message);
            bad = true;
        }
    }
    if bad {
        return Err(Failure {
            status: 1,
            message: format!("{} contains invalid graphs", path.display()),
        });
    }
    Ok(graphs)
}

fn cmd_score(gold_path: &Path, pred_path: &Path, mode: ParseMode, ctx: &Ctx) -> CmdResult {
    let gold = load_valid(gold_path)?;
    require_exists(&[pred_path.to_path_buf()])?;
    let content = fs::read_to_string(pred_path).map_err(|e| Error::Io {
        path: pred_path.to_path_buf(),
        source: e,
    })?;

    let known: BTreeSet<&str> = gold.iter().map(|g| g.passage.id.as_str()).collect();
    let mut preds: BTreeMap<String, Prediction> = BTreeMap::new();
    let is_json = pred_path.extension().is_some_and(|e| e == "json");
    if is_json {
        for g in read_json_corpus(&content)? {
            preds.insert(g.passage.id.clone(), Prediction::Graph(g));
        }
    } else {
        let lines = read_prediction_lines(&content)?;
        let by_id: BTreeMap<&str, &LogicMetagraph> = gold.iter().map(|g| (g.passage.id.as_str(), g)).collect();
        for (id, text) in lines {
            let Some(g) = by_id.get(id.as_str()) else {
                eprintln!("{id}: no gold passage with this id; prediction ignored");
                continue;
            };
            let outcome = parse_linearized(&text, &g.passage, mode);
            for d in &outcome.diagnostics {
                eprintln!("{id}: {d}");
            }
            preds.insert(id, Prediction::Parsed(outcome));
        }
    }
    for id in preds.keys().filter(|id| !known.contains(id.as_str())) {
        eprintln!("{id}: no gold passage with this id; prediction ignored");
    }

    let mut acc = ScoreAccumulator::new();
    for g in &gold {
        let pred = preds.remove(&g.passage.id).unwrap_or_else(|| {
            eprintln!("{}: no prediction; scored as empty", g.passage.id);
            Prediction::Graph(LogicMetagraph::empty(g.passage.clone()))
        });
        acc.add(g, &pred);
    }
    let report = acc.finish();
    for e in &report.errors {
        eprintln!("{}: {} {}", e.passage, e.code, e.message);
    }
    match ctx.format {
        Format::Json => ctx.emit(&report.to_json())?,
        Format::Table => ctx.emit(&report.to_table())?,
    }
    Ok(0)
}

/// Pairs `<stem>.a.json` with `<stem>.b.json`; each file holds one graph or
/// an array of graphs, matched by passage id.
fn load_pairs(dir: &Path) -> Result<Vec<AnnotationPair>, Failure> {
    require_exists(&[dir.to_path_buf()])?;
    let entries = fs::read_dir(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let mut sides: BTreeMap<String, [Option<PathBuf>; 2]> = BTreeMap::new();
    for entry in entries.flatten() {
        let name = entry.file_name().to_string_lossy().into_owned();
        for (i, suffix) in [".a.json", ".b.json"].iter().enumerate() {
            if let Some(stem) = name.strip_suffix(suffix) {
                sides.entry(stem.to_string()).or_default()[i] = Some(entry.path());
            }
        }
    }
    if sides.is_empty() {
        return Err(Error::PairMismatch(format!("no annotation pairs in {}", dir.display())).into());
    }

    let mut pairs = Vec::new();
    for (stem, [a, b]) in sides {
        let (Some(a), Some(b)) = (a, b) else {
            return Err(Error::PairMismatch(format!("{stem}: missing partner file")).into());
        };
        let ga = load_corpus(&a)?;
        let mut gb: BTreeMap<String, LogicMetagraph> =
            load_corpus(&b)?.into_iter().map(|g| (g.passage.id.clone(), g)).collect();
        for g in ga {
            let other = gb.remove(&g.passage.id).ok_or_else(|| {
                Error::PairMismatch(format!("{stem}: passage {} has no second annotation", g.passage.id))
            })?;
            pairs.push(AnnotationPair::new(g, other)?);
        }
        if let Some(id) = gb.keys().next() {
            return Err(Error::PairMismatch(format!("{stem}: passage {id} has no first annotation")).into());
        }
    }
    Ok(pairs)
}

fn cmd_kappa(dir: &Path, ctx: &Ctx) -> CmdResult {
    let pairs = load_pairs(dir)?;
    let failures: Vec<_> = pairs
        .iter()
        .filter_map(|p| kappa_logical_relation(std::slice::from_ref(p)).err().map(|e| (p, e)))
        .filter(|(_, e)| e.code() == "VARIABLE_ALIGNMENT_FAILURE")
        .collect();
    for (p, e) in &failures {
        eprintln!("{}: {} {e}", p.passage().id, e.code());
    }
    if !failures.is_empty() {
        return Ok(1);
    }
    let report = agreement_report(&pairs)?;
    match ctx.format {
        Format::Json => ctx.emit_json(&report)?,
        Format::Table => {
            let rows = [
                ("meta node", report.meta_node),
                ("meta edge", report.meta_edge),
                ("logical variable", report.logical_variable),
                ("logical relation", report.logical_relation),
            ];
            let mut out = format!("{:<17} | {:>6} | {:>6} | {:>6}\n", "dimension", "kappa", "labels", "items");
            for (name, d) in rows {
                out.push_str(&format!(
                    "{name:<17} | {:>6.2} | {:>6} | {:>6}\n",
                    100.0 * d.kappa,
                    d.label_space,
                    d.items
                ));
            }
            ctx.emit(&out)?;
        }
    }
    Ok(0)
}

fn cmd_canonicalize(formula: &str, ctx: &Ctx) -> CmdResult {
    let triples = parse_triples(formula)?;
    let canonical: Vec<_> = triples.iter().map(canonicalize_triple).collect();
    let text = canonical.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; ");
    let operands: Vec<_> = canonical
        .iter()
        .flat_map(|c| [&c.left, &c.right])
        .map(|o| (o.var.clone(), prefix_words(o.prefix.ops()), o.prefix.degree()))
        .collect();
    match ctx.format {
        Format::Json => ctx.emit_json(&json!({
            "canonical": text,
            "triples": canonical.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "operands": operands
                .iter()
                .map(|(v, p, d)| json!({"variable": v, "prefix": p, "degree": d.word()}))
                .collect::<Vec<_>>(),
        }))?,
        Format::Table => {
            let mut out = format!("{text}\n");
            for (v, _, d) in &operands {
                out.push_str(&format!("{v}: {d}\n"));
            }
            ctx.emit(&out)?;
        }
    }
    Ok(0)
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<LogicMetagraph>, Failure> {
    require_exists(paths)?;
    let mut graphs = Vec::new();
    for p in expand_paths(paths) {
        graphs.extend(load_corpus(&p)?);
    }
    Ok(graphs)
}

fn cmd_stats(paths: &[PathBuf], ctx: &Ctx) -> CmdResult {
    let graphs = load_all(paths)?;
    let stats = match compute_stats(&graphs) {
        Ok(s) => s,
        Err(Error::InvalidGraph(report)) => {
            for v in &report.violations {
                eprintln!("{} {}", v.code, v.message);
            }
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    match ctx.format {
        Format::Json => ctx.emit_json(&stats)?,
        Format::Table => ctx.emit(&stats.to_table())?,
    }
    Ok(0)
}

fn cmd_split(path: &Path, seed: u64, ctx: &Ctx) -> CmdResult {
    let graphs = load_all(&[path.to_path_buf()])?;
    let s = split_indices(graphs.len(), seed)?;
    let ids = |ix: &[usize]| ix.iter().map(|i| graphs[*i].passage.id.clone()).collect::<Vec<_>>();
    let manifest = json!({
        "seed": seed,
        "sizes": {"train": s.train.len(), "dev": s.dev.len(), "test": s.test.len()},
        "train": ids(&s.train),
        "dev": ids(&s.dev),
        "test": ids(&s.test),
    });
    match ctx.format {
        Format::Json => ctx.emit_json(&manifest)?,
        Format::Table => ctx.emit(&format!(
            "train {}\ndev {}\ntest {}\n",
            s.train.len(),
            s.dev.len(),
            s.test.len()
        ))?,
    }
    Ok(0)
}

/// `# variables = v1:1-4 v2:6-9`: 1-based inclusive token ranges.
fn variables_of(parse: &DependencyParse, offsets: &[(usize, usize)]) -> Result<Vec<VariableSpan>, Failure> {
    let Some(spec) = parse.metadata.get("variables") else {
        return Ok(Vec::new());
    };
    spec.split_whitespace()
        .map(|item| {
            let bad = || Error::MalformedRow {
                line: 0,
                message: format!("variables comment entry `{item}` is not `id:first-last`"),
            };
            let (id, range) = item.split_once(':').ok_or_else(bad)?;
            let (a, b) = range.split_once('-').unwrap_or((range, range));
            let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if a == 0 || b < a || b > offsets.len() {
                return Err(bad().into());
            }
            Ok(VariableSpan::new(id, Some((offsets[a - 1].0, offsets[b - 1].1))))
        })
        .collect()
}

fn cmd_extract_ops(path: &Path, lexicon: Option<PathBuf>, ctx: &Ctx) -> CmdResult {
    let lexicon_path = lexicon.or_else(|| std::env::var_os(ENV_LEXICON).filter(|v| !v.is_empty()).map(PathBuf::from));
    let lexicon = match lexicon_path {
        Some(p) => {
            require_exists(std::slice::from_ref(&p))?;
            IndicatorLexicon::load(&p)?
        }
        None => IndicatorLexicon::default(),
    };
    require_exists(&[path.to_path_buf()])?;
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;

    let mut records = Vec::new();
    let mut lines = String::new();
    for (i, parse) in ingest_conllu(&text)?.iter().enumerate() {
        let id = parse.metadata.get("sent_id").cloned().unwrap_or_else(|| format!("sent{}", i + 1));
        let forms: Vec<&str> = parse.forms().collect();
        let text = forms.join(" ");
        let mut offsets = Vec::new();
        let mut pos = 0;
        for f in &forms {
            let len = f.chars().count();
            offsets.push((pos, pos + len));
            pos += len + 1;
        }
        let sentence = Sentence::new(id.clone(), text, variables_of(parse, &offsets)?);
        let r = extract(&sentence, parse, &lexicon)?;

        let local: BTreeMap<_, _> = r.local.iter().map(|(v, p)| (v.clone(), prefix_words(p.ops()))).collect();
        lines.push_str(&format!("{id}: global={}", prefix_words(r.global.ops())));
        for (v, p) in &local {
            lines.push_str(&format!(" {v}={p}"));
        }
        lines.push('\n');
        records.push(json!({
            "sentence": id,
            "global": prefix_words(r.global.ops()),
            "local": local,
            "matched": r.matched.iter().map(|m| json!({
                "token": m.token + 1,
                "form": parse.tokens()[m.token].form,
                "op": metalogic::codec::words::unary_word(m.op).trim_matches(['[', ']']),
                "hops": m.hops,
                "scope": match &m.scope { Scope::Global => "global".to_string(), Scope::Local(v) => v.clone() },
            })).collect::<Vec<_>>(),
        }));
    }
    match ctx.format {
        Format::Json => ctx.emit_json(&records)?,
        Format::Table => ctx.emit(&lines)?,
    }
    Ok(0)
}

fn cmd_convert(input: &Path, to: Target, ctx: &Ctx) -> CmdResult {
    let graphs = load_valid(input)?;
    ctx.emit(&write_corpus_as(&graphs, to == Target::Linearized)?)?;
    Ok(0)
}
