//! Embedding-based semantic comparison of graphs, independent of surface
//! wording.
//!
//! Edge similarity verbalizes each edge ("X causes Y"), embeds the phrases,
//! and averages best-match cosines in both directions so the score is
//! symmetric. Node-set similarity compares mean node-label embeddings;
//! node-centrality similarity best-matches the labels of the most prominent
//! (highest total degree) nodes.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{CausalEdge, CausalGraph};

/// Default connector for edge verbalization.
pub const DEFAULT_EDGE_CONNECTOR: &str = "causes";

/// Default number of prominent nodes compared by
/// [`node_centrality_similarity`] when unspecified.
pub const DEFAULT_PROMINENCE_K: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemanticError {
    #[error("edge `{0}` -> `{1}` is not in the graph")]
    UnknownEdge(String, String),
    #[error("graph `{0}` has no nodes")]
    EmptyGraph(String),
    #[error("graph `{0}` has no edges")]
    EdgelessGraph(String),
    #[error("mean embedding vector is numerically zero")]
    ZeroMeanVector,
    #[error("embedding failed for `{text}`: {message}")]
    ProviderFailure { text: String, message: String },
    #[error("provider returned a {actual}-dimensional vector, expected {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
}

/// Anything that can embed text into unit-norm vectors of a fixed dimension.
/// Implementations must be deterministic per input and tolerate concurrent
/// calls.
pub trait EmbeddingProvider: Sync {
    fn dimension(&self) -> usize;
    fn embed(&self, text: &str) -> Result<Vec<f64>, SemanticError>;
}

/// Deterministic test provider: a unit vector drawn from a generator seeded
/// by a stable 64-bit hash of the text. Repeated runs are bit-identical.
pub struct HashEmbedder {
    dimension: usize,
}

impl HashEmbedder {
    pub fn new(dimension: usize) -> HashEmbedder {
        assert!(dimension >= 2, "embedding dimension must be at least 2");
        HashEmbedder { dimension }
    }
}

impl Default for HashEmbedder {
    fn default() -> Self {
        HashEmbedder::new(16)
    }
}

fn fnv1a(text: &str) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for byte in text.as_bytes() {
        hash ^= *byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

impl EmbeddingProvider for HashEmbedder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed(&self, text: &str) -> Result<Vec<f64>, SemanticError> {
        // xorshift* stream keyed by the text hash; components uniform in [-1, 1)
        let mut state = fnv1a(text) | 1;
        let mut next = || {
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            let bits = state.wrapping_mul(0x2545_f491_4f6c_dd1d);
            (bits >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        loop {
            let v: Vec<f64> = (0..self.dimension).map(|_| next()).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-6 {
                return Ok(v.into_iter().map(|x| x / norm).collect());
            }
        }
    }
}

/// Table-backed provider for hand-checkable fixtures. Vectors are
/// normalized to unit length on load.
pub struct FixtureEmbedder {
    dimension: usize,
    table: HashMap<String, Vec<f64>>,
}

impl FixtureEmbedder {
    /// Parses lines of `text <TAB> v1,v2,...,vd`.
    pub fn parse(text: &str) -> Result<FixtureEmbedder, String> {
        let mut table = HashMap::new();
        let mut dimension = None;
        for (line_no, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, values) = line
                .split_once('\t')
                .ok_or_else(|| format!("line {}: expected TAB separator", line_no + 1))?;
            let mut vector = Vec::new();
            for part in values.split(',') {
                let value: f64 = part
                    .trim()
                    .parse()
                    .map_err(|_| format!("line {}: bad number `{part}`", line_no + 1))?;
                vector.push(value);
            }
            match dimension {
                None => dimension = Some(vector.len()),
                Some(d) if d != vector.len() => {
                    return Err(format!(
                        "line {}: dimension {} does not match {}",
                        line_no + 1,
                        vector.len(),
                        d
                    ))
                }
                _ => {}
            }
            let norm = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm <= 1e-12 {
                return Err(format!("line {}: zero vector", line_no + 1));
            }
            for x in &mut vector {
                *x /= norm;
            }
            table.insert(key.to_string(), vector);
        }
        let dimension = dimension.ok_or("fixture table has no entries")?;
        Ok(FixtureEmbedder { dimension, table })
    }
}

impl EmbeddingProvider for FixtureEmbedder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed(&self, text: &str) -> Result<Vec<f64>, SemanticError> {
        self.table
            .get(text)
            .cloned()
            .ok_or_else(|| SemanticError::ProviderFailure {
                text: text.to_string(),
                message: "text not in fixture table".into(),
            })
    }
}

/// Memoizes embeddings by exact text for the duration of a run.
pub struct CachedProvider<'a> {
    inner: &'a dyn EmbeddingProvider,
    cache: Mutex<HashMap<String, Vec<f64>>>,
}

impl<'a> CachedProvider<'a> {
    pub fn new(inner: &'a dyn EmbeddingProvider) -> CachedProvider<'a> {
        CachedProvider {
            inner,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl EmbeddingProvider for CachedProvider<'_> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn embed(&self, text: &str) -> Result<Vec<f64>, SemanticError> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(text) {
            return Ok(hit.clone());
        }
        let vector = self.inner.embed(text)?;
        if vector.len() != self.inner.dimension() {
            return Err(SemanticError::DimensionMismatch {
                expected: self.inner.dimension(),
                actual: vector.len(),
            });
        }
        self.cache
            .lock()
            .expect("cache lock")
            .insert(text.to_string(), vector.clone());
        Ok(vector)
    }
}

/// Verbalizes an edge as `<source label> causes <target label>`.
pub fn edge_text(g: &CausalGraph, e: &CausalEdge) -> Result<String, SemanticError> {
    edge_text_with(g, e, DEFAULT_EDGE_CONNECTOR)
}

pub fn edge_text_with(
    g: &CausalGraph,
    e: &CausalEdge,
    connector: &str,
) -> Result<String, SemanticError> {
    if !g.contains_edge(&e.source, &e.target) {
        return Err(SemanticError::UnknownEdge(e.source.clone(), e.target.clone()));
    }
    let source = g.node(&e.source).expect("edge endpoint");
    let target = g.node(&e.target).expect("edge endpoint");
    Ok(format!("{} {} {}", source.label, connector, target.label))
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// One row of a best-match table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestMatch {
    pub text: String,
    pub matched_text: String,
    pub cosine: f64,
}

fn best_matches(
    from: &[(String, Vec<f64>)],
    against: &[(String, Vec<f64>)],
) -> Vec<BestMatch> {
    from.iter()
        .map(|(text, vector)| {
            let mut best: Option<(usize, f64)> = None;
            for (idx, (_, other)) in against.iter().enumerate() {
                let c = cosine(vector, other);
                if best.is_none_or(|(_, bc)| c > bc) {
                    best = Some((idx, c));
                }
            }
            let (idx, c) = best.expect("non-empty comparison side");
            BestMatch {
                text: text.clone(),
                matched_text: against[idx].0.clone(),
                cosine: c,
            }
        })
        .collect()
}

fn mean_cosine(rows: &[BestMatch]) -> f64 {
    rows.iter().map(|r| r.cosine).sum::<f64>() / rows.len() as f64
}

fn embed_all(
    texts: Vec<String>,
    provider: &dyn EmbeddingProvider,
) -> Result<Vec<(String, Vec<f64>)>, SemanticError> {
    texts
        .into_iter()
        .map(|text| {
            let vector = provider.embed(&text)?;
            if vector.len() != provider.dimension() {
                return Err(SemanticError::DimensionMismatch {
                    expected: provider.dimension(),
                    actual: vector.len(),
                });
            }
            Ok((text, vector))
        })
        .collect()
}

fn edge_vectors(
    g: &CausalGraph,
    provider: &dyn EmbeddingProvider,
) -> Result<Vec<(String, Vec<f64>)>, SemanticError> {
    let texts = g
        .edges()
        .iter()
        .map(|e| edge_text(g, e))
        .collect::<Result<Vec<_>, _>>()?;
    embed_all(texts, provider)
}

fn node_vectors(
    g: &CausalGraph,
    provider: &dyn EmbeddingProvider,
) -> Result<Vec<(String, Vec<f64>)>, SemanticError> {
    embed_all(g.nodes().iter().map(|n| n.label.clone()).collect(), provider)
}

/// Symmetric mean of directional best-match cosines over edge phrases.
pub fn edge_similarity(
    g1: &CausalGraph,
    g2: &CausalGraph,
    provider: &dyn EmbeddingProvider,
) -> Result<f64, SemanticError> {
    Ok(edge_similarity_detailed(g1, g2, provider)?.0)
}

/// Edge similarity plus the per-edge best-match tables for both directions.
/// Each directional mean equals the mean of its table's cosines.
pub fn edge_similarity_detailed(
    g1: &CausalGraph,
    g2: &CausalGraph,
    provider: &dyn EmbeddingProvider,
) -> Result<(f64, Vec<BestMatch>, Vec<BestMatch>), SemanticError> {
    for g in [g1, g2] {
        if g.edge_count() == 0 {
            return Err(SemanticError::EdgelessGraph(g.session_id().to_string()));
        }
    }
    let v1 = edge_vectors(g1, provider)?;
    let v2 = edge_vectors(g2, provider)?;
    let forward = best_matches(&v1, &v2);
    let backward = best_matches(&v2, &v1);
    let score = (mean_cosine(&forward) + mean_cosine(&backward)) / 2.0;
    Ok((score, forward, backward))
}

/// Cosine between the mean node-label embeddings of the two graphs.
pub fn node_set_similarity(
    g1: &CausalGraph,
    g2: &CausalGraph,
    provider: &dyn EmbeddingProvider,
) -> Result<f64, SemanticError> {
    for g in [g1, g2] {
        if g.node_count() == 0 {
            return Err(SemanticError::EmptyGraph(g.session_id().to_string()));
        }
    }
    let mut means = Vec::with_capacity(2);
    for g in [g1, g2] {
        let vectors = node_vectors(g, provider)?;
        let mut mean = vec![0.0; provider.dimension()];
        for (_, v) in &vectors {
            for (slot, x) in mean.iter_mut().zip(v) {
                *slot += x;
            }
        }
        for slot in &mut mean {
            *slot /= vectors.len() as f64;
        }
        if mean.iter().map(|x| x * x).sum::<f64>().sqrt() <= 1e-12 {
            return Err(SemanticError::ZeroMeanVector);
        }
        means.push(mean);
    }
    Ok(cosine(&means[0], &means[1]))
}

/// Symmetric best-match cosine over the labels of each graph's
/// `min(k, n)` highest-total-degree nodes (ties broken by node id).
pub fn node_centrality_similarity(
    g1: &CausalGraph,
    g2: &CausalGraph,
    provider: &dyn EmbeddingProvider,
    k: usize,
) -> Result<f64, SemanticError> {
    assert!(k >= 1, "prominence k must be at least 1");
    for g in [g1, g2] {
        if g.node_count() == 0 {
            return Err(SemanticError::EmptyGraph(g.session_id().to_string()));
        }
    }
    let top = |g: &CausalGraph| -> Vec<String> {
        let degrees = g.degree_sequences();
        let mut order: Vec<usize> = (0..g.node_count()).collect();
        // ids are already sorted ascending, so a stable sort by descending
        // degree leaves ties in id order
        order.sort_by_key(|&i| std::cmp::Reverse(degrees[i].total_degree));
        order
            .into_iter()
            .take(k.min(g.node_count()))
            .map(|i| g.nodes()[i].label.clone())
            .collect()
    };
    let v1 = embed_all(top(g1), provider)?;
    let v2 = embed_all(top(g2), provider)?;
    let forward = best_matches(&v1, &v2);
    let backward = best_matches(&v2, &v1);
    Ok((mean_cosine(&forward) + mean_cosine(&backward)) / 2.0)
}

/// All three semantic measures plus the edge best-match tables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityBreakdown {
    pub edge_similarity: Option<f64>,
    pub node_set_similarity: f64,
    pub node_centrality_similarity: f64,
    pub forward_matches: Vec<BestMatch>,
    pub backward_matches: Vec<BestMatch>,
    /// Set when edge similarity could not be computed (an edgeless side).
    pub edge_similarity_error: Option<String>,
}

/// Runs every measure, caching embeddings across them. An edgeless side
/// downgrades only the edge measure; the node measures are still computed.
pub fn compare_graphs(
    g1: &CausalGraph,
    g2: &CausalGraph,
    provider: &dyn EmbeddingProvider,
    k: usize,
) -> Result<SimilarityBreakdown, SemanticError> {
    let cached = CachedProvider::new(provider);
    let (edge_sim, forward, backward, edge_err) =
        match edge_similarity_detailed(g1, g2, &cached) {
            Ok((score, f, b)) => (Some(score), f, b, None),
            Err(err @ SemanticError::EdgelessGraph(_)) => {
                (None, Vec::new(), Vec::new(), Some(err.to_string()))
            }
            Err(other) => return Err(other),
        };
    Ok(SimilarityBreakdown {
        edge_similarity: edge_sim,
        node_set_similarity: node_set_similarity(g1, g2, &cached)?,
        node_centrality_similarity: node_centrality_similarity(g1, g2, &cached, k)?,
        forward_matches: forward,
        backward_matches: backward,
        edge_similarity_error: edge_err,
    })
}
