//! C ABI over the metalogic crate.
//!
//! Graphs and scorers are opaque handles owned by the caller and released
//! with their `_free` function. Strings returned through out-pointers are
//! heap-allocated and must be released with [`ml_string_free`]. Every
//! function returns an [`MlStatus`]; on failure the message is available
//! from [`ml_last_error`] on the same thread.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use metalogic::agreement::kappa;
use metalogic::codec::words::{prefix_words, unary_word};
use metalogic::codec::{self, parse_linearized, parse_source, ParseMode};
use metalogic::model::validate_graph;
use metalogic::scorer::{Prediction, ScoreAccumulator};
use metalogic::{normalize, Error, LogicMetagraph, ModalPrefix, UnaryOp};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    InvalidGraph = 10,
    SentenceMismatch = 11,
    PassageMismatch = 12,
    Syntax = 13,
    UnknownId = 14,
    UnknownOperator = 15,
    UnresolvedDegree = 16,
    SchemaViolation = 17,
    LengthMismatch = 18,
    UnknownLabel = 19,
    EmptyInput = 20,
    MissingSpans = 21,
    VariableAlignment = 22,
    Pairing = 23,
    ParseMismatch = 24,
    MalformedRow = 25,
    MultipleRoots = 26,
    InvalidTree = 27,
    LexiconOverlap = 28,
    MalformedLexicon = 29,
    EmptyCorpus = 30,
    Io = 31,
}

impl From<&Error> for MlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidGraph(_) => MlStatus::InvalidGraph,
            Error::SentenceMismatch { .. } => MlStatus::SentenceMismatch,
            Error::PassageMismatch { .. } => MlStatus::PassageMismatch,
            Error::Syntax { .. } => MlStatus::Syntax,
            Error::UnknownId { .. } => MlStatus::UnknownId,
            Error::UnknownOperator { .. } => MlStatus::UnknownOperator,
            Error::UnresolvedDegree { .. } => MlStatus::UnresolvedDegree,
            Error::SchemaViolation { .. } => MlStatus::SchemaViolation,
            Error::LengthMismatch { .. } => MlStatus::LengthMismatch,
            Error::UnknownLabel(_) => MlStatus::UnknownLabel,
            Error::EmptyInput => MlStatus::EmptyInput,
            Error::MissingSpans(_) => MlStatus::MissingSpans,
            Error::VariableAlignment { .. } => MlStatus::VariableAlignment,
            Error::PairMismatch(_) => MlStatus::Pairing,
            Error::ParseMismatch { .. } => MlStatus::ParseMismatch,
            Error::MalformedRow { .. } => MlStatus::MalformedRow,
            Error::MultipleRoots { .. } => MlStatus::MultipleRoots,
            Error::InvalidTree(_) => MlStatus::InvalidTree,
            Error::LexiconOverlap { .. } => MlStatus::LexiconOverlap,
            Error::MalformedLexicon(_) => MlStatus::MalformedLexicon,
            Error::EmptyCorpus => MlStatus::EmptyCorpus,
            Error::Io { .. } => MlStatus::Io,
        }
    }
}

/// Opaque metagraph handle.
pub struct MlGraph(LogicMetagraph);

/// Opaque running scorer.
pub struct MlScorer(ScoreAccumulator);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(MlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(MlStatus::from(&e), format!("{}: {e}", e.code()))
    }
}

fn null(name: &str) -> Fail {
    Fail(MlStatus::NullArgument, format!("`{name}` is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MlStatus::Ok
        }
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MlStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(MlStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

/// # Safety
/// `out` must be null or writable.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| Fail(MlStatus::InvalidUtf8, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// # Safety
/// `out` must be null or writable.
unsafe fn put_graph(out: *mut *mut MlGraph, g: LogicMetagraph) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(MlGraph(g)));
    Ok(())
}

/// # Safety
/// `g` must be null or a live handle.
unsafe fn graph<'a>(g: *const MlGraph, name: &str) -> Result<&'a LogicMetagraph, Fail> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| null(name))
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ml_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string produced by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ml_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reads one graph in canonical JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_graph_from_json(json: *const c_char, out: *mut *mut MlGraph) -> MlStatus {
    guard(|| put_graph(out, codec::read_json(text(json, "json")?)?))
}

/// Reads a linearized graph. `source` is the passage in labelled form
/// (`sent1: v1: ... sent2: ...`); `strict` rejects any diagnostic, while
/// lenient parsing keeps whatever could be recovered.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_graph_from_linearized(
    passage_id: *const c_char,
    source: *const c_char,
    linearized: *const c_char,
    strict: bool,
    out: *mut *mut MlGraph,
) -> MlStatus {
    guard(|| {
        let passage = parse_source(text(passage_id, "passage_id")?, text(source, "source")?)?;
        let mode = if strict { ParseMode::Strict } else { ParseMode::Lenient };
        let outcome = parse_linearized(text(linearized, "linearized")?, &passage, mode);
        let g = match outcome.graph {
            Some(g) if !strict || outcome.diagnostics.is_empty() => g,
            _ => return Err(outcome.into_result().unwrap_err().into()),
        };
        put_graph(out, g)
    })
}

/// # Safety
/// `g` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ml_graph_free(g: *mut MlGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_graph_to_json(g: *const MlGraph, out: *mut *mut c_char) -> MlStatus {
    guard(|| put_string(out, codec::write_json(graph(g, "graph")?)))
}

/// Fails with `InvalidGraph` if the graph does not validate.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_graph_to_linearized(g: *const MlGraph, out: *mut *mut c_char) -> MlStatus {
    guard(|| put_string(out, codec::serialize_linearized(graph(g, "graph")?)?))
}

/// Writes the violation list as a JSON array to `out` (empty when valid)
/// and returns `InvalidGraph` if it is non-empty.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_graph_validate(g: *const MlGraph, out: *mut *mut c_char) -> MlStatus {
    guard(|| {
        let report = validate_graph(graph(g, "graph")?);
        let json = serde_json::to_string(&report.violations).expect("violations serialize");
        put_string(out, json)?;
        report.into_result().map_err(Fail::from)
    })
}

fn parse_prefix(s: &str) -> Result<ModalPrefix, Fail> {
    s.split_whitespace()
        .map(|w| {
            UnaryOp::ALL
                .into_iter()
                .find(|op| unary_word(*op) == w || op.symbol().to_string() == w)
                .ok_or_else(|| Fail(MlStatus::UnknownOperator, format!("unknown unary operator `{w}`")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(ModalPrefix)
}

/// Normalizes a whitespace-separated operator string (`[necessary]
/// [negative]` or `□ ¬`), outermost first. `out` receives the normal
/// form in bracket words, empty for the identity.
///
/// # Safety
/// `prefix` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_modal_normalize(prefix: *const c_char, out: *mut *mut c_char) -> MlStatus {
    guard(|| {
        let p = parse_prefix(text(prefix, "prefix")?)?;
        put_string(out, prefix_words(normalize(&p).ops()))
    })
}

/// Degree of certainty of an operator string: 0 impossible .. 4 necessary.
///
/// # Safety
/// `prefix` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_modal_degree(prefix: *const c_char, out: *mut u8) -> MlStatus {
    guard(|| {
        let p = parse_prefix(text(prefix, "prefix")?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = metalogic::reduce_to_degree(&p).value();
        Ok(())
    })
}

/// Cohen's kappa of two integer label sequences of length `len` over the
/// `space_len` labels in `space`.
///
/// # Safety
/// `a` and `b` must point to `len` values, `space` to `space_len` values
/// (each may be null when its length is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_kappa(
    a: *const i32,
    b: *const i32,
    len: usize,
    space: *const i32,
    space_len: usize,
    out: *mut f64,
) -> MlStatus {
    guard(|| {
        let slice = |p: *const i32, n: usize, name: &str| -> Result<&[i32], Fail> {
            match (p.is_null(), n) {
                (_, 0) => Ok(&[]),
                (true, _) => Err(null(name)),
                (false, n) => Ok(std::slice::from_raw_parts(p, n)),
            }
        };
        let labels: BTreeSet<i32> = slice(space, space_len, "space")?.iter().copied().collect();
        let k = kappa(slice(a, len, "a")?, slice(b, len, "b")?, &labels)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = k;
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn ml_scorer_new() -> *mut MlScorer {
    Box::into_raw(Box::new(MlScorer(ScoreAccumulator::new())))
}

/// # Safety
/// `s` must be null or a handle from [`ml_scorer_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ml_scorer_free(s: *mut MlScorer) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Adds one sample. A passage mismatch is recorded in the report rather
/// than returned.
///
/// # Safety
/// All handles must be live.
#[no_mangle]
pub unsafe extern "C" fn ml_scorer_add(s: *mut MlScorer, gold: *const MlGraph, pred: *const MlGraph) -> MlStatus {
    guard(|| {
        let s = s.as_mut().ok_or_else(|| null("scorer"))?;
        let gold = graph(gold, "gold")?;
        s.0.add(gold, &Prediction::Graph(graph(pred, "pred")?.clone()));
        Ok(())
    })
}

/// Adds one sample whose prediction is linearized text, parsed against the
/// gold passage. Parse problems lower the score instead of failing.
///
/// # Safety
/// `s` and `gold` must be live handles; `linearized` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ml_scorer_add_linearized(
    s: *mut MlScorer,
    gold: *const MlGraph,
    linearized: *const c_char,
    strict: bool,
) -> MlStatus {
    guard(|| {
        let s = s.as_mut().ok_or_else(|| null("scorer"))?;
        let gold = graph(gold, "gold")?;
        let mode = if strict { ParseMode::Strict } else { ParseMode::Lenient };
        let outcome = parse_linearized(text(linearized, "linearized")?, &gold.passage, mode);
        s.0.add(gold, &Prediction::Parsed(outcome));
        Ok(())
    })
}

/// Dataset report as JSON. The scorer stays usable.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_scorer_report(s: *const MlScorer, out: *mut *mut c_char) -> MlStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("scorer"))?;
        put_string(out, s.0.clone().finish().to_json())
    })
}
