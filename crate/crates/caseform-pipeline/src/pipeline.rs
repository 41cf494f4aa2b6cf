//! The two-stage generation protocol: one factor-extraction call, then one
//! causal-verification call per candidate node pair, with a running list of
//! accepted edges fed into every verification prompt.
//!
//! # Concurrency semantics
//!
//! Pairs are evaluated in canonical `(source.id, target.id)` order and the
//! running list a pair's prompt sees is exactly the accepted edges among
//! earlier pairs. With `parallelism > 1` the verifier speculates: it issues
//! a window of requests assuming no acceptance inside the window, commits
//! the prefix of verdicts whose assumption held, and re-issues the rest
//! after the first acceptance. Output is therefore identical to a strictly
//! sequential run for any deterministic backend, at the cost of extra
//! transport calls on re-issued pairs. With `parallelism = 1` the loop is
//! exactly sequential and makes one call (plus retries) per pair.

use std::sync::Mutex;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use caseform_core::graph::{CausalEdge, CausalGraph, FactorCategory, FactorNode, IdAllocator, Origin};
use caseform_core::transcript::Transcript;

use crate::backend::{BackendConfig, ChatBackend};
use crate::payload::scan_json_objects;
use crate::prompt::{build_edge_prompt, build_extraction_prompt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("no parsable JSON object in response")]
    NoParsablePayload,
    #[error("payload key `{key}` is not a list of strings: {detail}")]
    WrongPayloadShape { key: String, detail: String },
    #[error("no TRUE/FALSE verdict found in a structured payload")]
    UnparsableVerdict,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("transcript has no turns")]
    EmptyTranscript,
    #[error("backend unavailable after {attempts} attempts: {message}")]
    BackendUnavailable { attempts: u32, message: String },
    #[error("factor extraction failed after {attempts} attempts: {last_error}")]
    ExtractionFailed { attempts: u32, last_error: String },
    #[error(transparent)]
    Graph(#[from] caseform_core::GraphError),
}

/// Non-fatal events from a generation run, in deterministic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub kind: WarningKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WarningKind {
    DuplicateFactor,
    EdgeVerdictDefaulted,
}

/// Thread-safe warning collector shared with verification workers.
#[derive(Debug, Default)]
pub struct WarningLog {
    entries: Mutex<Vec<Warning>>,
}

impl WarningLog {
    pub fn new() -> WarningLog {
        WarningLog::default()
    }

    pub fn push(&self, kind: WarningKind, message: impl Into<String>) {
        self.entries.lock().expect("warning lock").push(Warning {
            kind,
            message: message.into(),
        });
    }

    pub fn drain(&self) -> Vec<Warning> {
        std::mem::take(&mut *self.entries.lock().expect("warning lock"))
    }
}

/// Factor phrases per category, deduplicated case-insensitively within each
/// category.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtractionResult {
    pub presenting: Vec<String>,
    pub predisposing: Vec<String>,
    pub precipitating: Vec<String>,
    pub perpetuating: Vec<String>,
}

impl ExtractionResult {
    /// `(category, phrases)` in canonical category order.
    pub fn by_category(&self) -> [(FactorCategory, &[String]); 4] {
        [
            (FactorCategory::Presenting, self.presenting.as_slice()),
            (FactorCategory::Predisposing, self.predisposing.as_slice()),
            (FactorCategory::Precipitating, self.precipitating.as_slice()),
            (FactorCategory::Perpetuating, self.perpetuating.as_slice()),
        ]
    }
}

const KEY_ALIASES: [(&str, &str); 4] = [
    ("presenting_problems", "presenting"),
    ("predisposing_factors", "predisposing"),
    ("precipitating_factors", "precipitating"),
    ("perpetuating_factors", "perpetuating"),
];

/// Parses the extraction payload out of a model response.
///
/// The first JSON object containing at least one expected key wins; if no
/// object has an expected key, the first object is used with every category
/// defaulting to empty. Missing keys mean empty lists; a key bound to
/// anything but a list of strings is an error.
pub fn parse_extraction_response(response: &str) -> Result<ExtractionResult, ParseError> {
    let objects = scan_json_objects(response);
    if objects.is_empty() {
        return Err(ParseError::NoParsablePayload);
    }
    let payload = objects
        .iter()
        .find(|obj| {
            KEY_ALIASES
                .iter()
                .any(|(full, short)| obj.get(*full).is_some() || obj.get(*short).is_some())
        })
        .unwrap_or(&objects[0]);

    let mut lists: [Vec<String>; 4] = Default::default();
    for (slot, (full, short)) in lists.iter_mut().zip(KEY_ALIASES) {
        let value = payload.get(full).or_else(|| payload.get(short));
        let Some(value) = value else { continue };
        let Value::Array(items) = value else {
            return Err(ParseError::WrongPayloadShape {
                key: full.to_string(),
                detail: format!("expected an array, got {value}"),
            });
        };
        let mut seen = std::collections::HashSet::new();
        for item in items {
            let Value::String(phrase) = item else {
                return Err(ParseError::WrongPayloadShape {
                    key: full.to_string(),
                    detail: format!("expected strings, got {item}"),
                });
            };
            let phrase = phrase.trim();
            if phrase.is_empty() {
                continue;
            }
            if seen.insert(phrase.to_lowercase()) {
                slot.push(phrase.to_string());
            }
        }
    }
    let [presenting, predisposing, precipitating, perpetuating] = lists;
    Ok(ExtractionResult {
        presenting,
        predisposing,
        precipitating,
        perpetuating,
    })
}

/// Extracts a TRUE/FALSE verdict from a model response.
///
/// Scans for JSON objects; within one, an `answer` key wins, otherwise any
/// unambiguous boolean-like value (case-insensitive "true"/"false" strings
/// or JSON booleans) counts.
pub fn parse_edge_response(response: &str) -> Result<bool, ParseError> {
    let objects = scan_json_objects(response);
    for object in &objects {
        if let Some(answer) = object.get("answer") {
            if let Some(verdict) = as_verdict(answer) {
                return Ok(verdict);
            }
            continue;
        }
        let mut found: Option<bool> = None;
        let mut ambiguous = false;
        collect_verdicts(object, &mut found, &mut ambiguous);
        if !ambiguous {
            if let Some(verdict) = found {
                return Ok(verdict);
            }
        }
    }
    Err(ParseError::UnparsableVerdict)
}

fn as_verdict(value: &Value) -> Option<bool> {
    match value {
        Value::Bool(b) => Some(*b),
        Value::String(s) => match s.trim().to_ascii_uppercase().as_str() {
            "TRUE" => Some(true),
            "FALSE" => Some(false),
            _ => None,
        },
        _ => None,
    }
}

fn collect_verdicts(value: &Value, found: &mut Option<bool>, ambiguous: &mut bool) {
    if let Some(verdict) = as_verdict(value) {
        match found {
            Some(existing) if *existing != verdict => *ambiguous = true,
            _ => *found = Some(verdict),
        }
        return;
    }
    match value {
        Value::Object(map) => {
            for nested in map.values() {
                collect_verdicts(nested, found, ambiguous);
            }
        }
        Value::Array(items) => {
            for nested in items {
                collect_verdicts(nested, found, ambiguous);
            }
        }
        _ => {}
    }
}

/// One candidate pair with its outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeQuery {
    pub source: FactorNode,
    pub target: FactorNode,
    pub verdict: Option<bool>,
    pub attempts: u32,
}

/// All ordered candidate pairs, canonically sorted by `(source.id,
/// target.id)`. With `include_within_category = false` (the default
/// protocol), pairs whose endpoints share a category are skipped.
pub fn enumerate_candidate_pairs(
    nodes: &[FactorNode],
    include_within_category: bool,
) -> Vec<(FactorNode, FactorNode)> {
    let mut pairs = Vec::new();
    for source in nodes {
        for target in nodes {
            if source.id == target.id {
                continue;
            }
            if !include_within_category && source.category == target.category {
                continue;
            }
            pairs.push((source.clone(), target.clone()));
        }
    }
    pairs.sort_by(|a, b| (&a.0.id, &a.1.id).cmp(&(&b.0.id, &b.1.id)));
    pairs
}

/// Stage one: a single extraction call (retried on failure), phrases turned
/// into id-allocated factor nodes. Duplicate phrases across categories are
/// dropped with a warning; the first category in canonical order wins.
pub fn extract_nodes(
    t: &Transcript,
    backend: &dyn ChatBackend,
    cfg: &BackendConfig,
    log: &WarningLog,
) -> Result<Vec<FactorNode>, PipelineError> {
    if t.is_empty() {
        return Err(PipelineError::EmptyTranscript);
    }
    let prompt = build_extraction_prompt(t);
    let extraction = request_with_retries(
        backend,
        cfg,
        &prompt,
        parse_extraction_response,
        |attempts, last_error| PipelineError::ExtractionFailed {
            attempts,
            last_error,
        },
    )?;

    let mut nodes = Vec::new();
    let mut seen_labels: std::collections::HashMap<String, (String, FactorCategory)> =
        std::collections::HashMap::new();
    let mut ids = IdAllocator::new();
    for (category, phrases) in extraction.by_category() {
        for phrase in phrases {
            let key = phrase.trim().to_lowercase();
            if let Some((kept_id, kept_category)) = seen_labels.get(&key) {
                log.push(
                    WarningKind::DuplicateFactor,
                    format!(
                        "factor `{phrase}` listed under {category} duplicates node `{kept_id}` ({kept_category}); keeping the first"
                    ),
                );
                continue;
            }
            let id = ids.allocate(phrase);
            seen_labels.insert(key, (id.clone(), category));
            nodes.push(FactorNode::new(id, phrase.trim(), category));
        }
    }
    Ok(nodes)
}

fn request_with_retries<T>(
    backend: &dyn ChatBackend,
    cfg: &BackendConfig,
    prompt: &str,
    parse: impl Fn(&str) -> Result<T, ParseError>,
    on_parse_exhausted: impl Fn(u32, String) -> PipelineError,
) -> Result<T, PipelineError> {
    let mut attempts = 0;
    loop {
        attempts += 1;
        match backend.complete(prompt) {
            Err(err) => {
                if attempts > cfg.max_retries {
                    return Err(PipelineError::BackendUnavailable {
                        attempts,
                        message: err.to_string(),
                    });
                }
            }
            Ok(response) => match parse(&response) {
                Ok(value) => return Ok(value),
                Err(err) => {
                    if attempts > cfg.max_retries {
                        return Err(on_parse_exhausted(attempts, err.to_string()));
                    }
                }
            },
        }
    }
}

enum PairOutcome {
    Verdict(bool, u32, Option<Warning>),
    Unavailable(PipelineError),
}

/// Judges one pair against a fixed running list, applying the retry policy:
/// transport failures end in `BackendUnavailable`, parse failures end in a
/// defaulted FALSE with a warning.
fn judge_pair(
    source: &FactorNode,
    target: &FactorNode,
    t: &Transcript,
    known_edges: &[(String, String)],
    backend: &dyn ChatBackend,
    cfg: &BackendConfig,
) -> PairOutcome {
    let prompt = build_edge_prompt(&source.label, &target.label, t, known_edges);
    let mut attempts = 0;
    loop {
        attempts += 1;
        match backend.complete(&prompt) {
            Err(err) => {
                if attempts > cfg.max_retries {
                    return PairOutcome::Unavailable(PipelineError::BackendUnavailable {
                        attempts,
                        message: err.to_string(),
                    });
                }
            }
            Ok(response) => match parse_edge_response(&response) {
                Ok(verdict) => return PairOutcome::Verdict(verdict, attempts, None),
                Err(err) => {
                    if attempts > cfg.max_retries {
                        let warning = Warning {
                            kind: WarningKind::EdgeVerdictDefaulted,
                            message: format!(
                                "verdict for `{}` -> `{}` unparsable after {attempts} attempts ({err}); defaulting to FALSE",
                                source.id, target.id
                            ),
                        };
                        return PairOutcome::Verdict(false, attempts, Some(warning));
                    }
                }
            },
        }
    }
}

/// Stage two: evaluates every candidate pair in canonical order, feeding
/// accepted edges into later prompts. See the module docs for how
/// `cfg.parallelism` interacts with the running list.
pub fn verify_edges(
    nodes: &[FactorNode],
    t: &Transcript,
    backend: &dyn ChatBackend,
    cfg: &BackendConfig,
    include_within_category: bool,
    log: &WarningLog,
) -> Result<Vec<CausalEdge>, PipelineError> {
    Ok(
        verify_edges_detailed(nodes, t, backend, cfg, include_within_category, log)?
            .into_iter()
            .filter(|q| q.verdict == Some(true))
            .map(|q| CausalEdge::new(q.source.id, q.target.id))
            .collect(),
    )
}

/// Like [`verify_edges`] but returns the full per-pair trace.
pub fn verify_edges_detailed(
    nodes: &[FactorNode],
    t: &Transcript,
    backend: &dyn ChatBackend,
    cfg: &BackendConfig,
    include_within_category: bool,
    log: &WarningLog,
) -> Result<Vec<EdgeQuery>, PipelineError> {
    let pairs = enumerate_candidate_pairs(nodes, include_within_category);
    let mut queries: Vec<EdgeQuery> = pairs
        .iter()
        .map(|(source, target)| EdgeQuery {
            source: source.clone(),
            target: target.clone(),
            verdict: None,
            attempts: 0,
        })
        .collect();
    // running list rendered into prompts: accepted (source label, target label)
    let mut accepted: Vec<(String, String)> = Vec::new();
    let parallelism = cfg.parallelism.max(1);
    let mut committed = 0;
    while committed < queries.len() {
        let window = parallelism.min(queries.len() - committed);
        let outcomes: Vec<PairOutcome> = if window == 1 {
            let q = &queries[committed];
            vec![judge_pair(&q.source, &q.target, t, &accepted, backend, cfg)]
        } else {
            // speculate: every prompt in the window sees the current list
            std::thread::scope(|scope| {
                let accepted = &accepted;
                let handles: Vec<_> = queries[committed..committed + window]
                    .iter()
                    .map(|q| {
                        scope.spawn(move || {
                            judge_pair(&q.source, &q.target, t, accepted, backend, cfg)
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("verifier thread")).collect()
            })
        };
        // commit the prefix whose speculation basis held; stop after the
        // first acceptance, which invalidates later prompts in the window
        for outcome in outcomes {
            let query = &mut queries[committed];
            match outcome {
                PairOutcome::Unavailable(err) => return Err(err),
                PairOutcome::Verdict(verdict, attempts, warning) => {
                    query.verdict = Some(verdict);
                    query.attempts = attempts;
                    if let Some(w) = warning {
                        log.push(w.kind, w.message);
                    }
                    committed += 1;
                    if verdict {
                        accepted.push((query.source.label.clone(), query.target.label.clone()));
                        break;
                    }
                }
            }
        }
    }
    Ok(queries)
}

/// Full protocol: extraction, verification, then graph assembly with
/// `origin = automated`. Deterministic for a deterministic backend,
/// regardless of `cfg.parallelism`.
pub fn generate_graph(
    t: &Transcript,
    backend: &dyn ChatBackend,
    cfg: &BackendConfig,
    include_within_category: bool,
    log: &WarningLog,
) -> Result<CausalGraph, PipelineError> {
    if t.is_empty() {
        return Err(PipelineError::EmptyTranscript);
    }
    let nodes = extract_nodes(t, backend, cfg, log)?;
    let edges = if nodes.is_empty() {
        Vec::new()
    } else {
        verify_edges(&nodes, t, backend, cfg, include_within_category, log)?
    };
    Ok(CausalGraph::build(
        t.session_id(),
        Origin::Automated,
        None,
        nodes,
        edges,
    )?)
}
