//! Causal-graph data model for 5P case formulations.
//!
//! A [`CausalGraph`] is a validated directed graph of [`FactorNode`]s with
//! [`CausalEdge`]s asserting cause -> effect relations. Construction rejects
//! self-loops, parallel edges, dangling endpoints, duplicate ids, and empty
//! labels. Node and edge iteration order is canonical (sorted by id, then by
//! `(source, target)`), so every downstream output is reproducible.

mod document;
mod export;
mod simple;

pub use document::DocumentError;
pub use export::ExportFormat;
pub use simple::SimpleGraph;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The five factor categories of the 5P case-formulation framework.
///
/// `Protective` is representable for forward compatibility, but the
/// generation pipeline only ever emits the other four.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorCategory {
    Presenting,
    Predisposing,
    Precipitating,
    Perpetuating,
    Protective,
}

impl FactorCategory {
    /// All five categories, in canonical enum order.
    pub const ALL: [FactorCategory; 5] = [
        FactorCategory::Presenting,
        FactorCategory::Predisposing,
        FactorCategory::Precipitating,
        FactorCategory::Perpetuating,
        FactorCategory::Protective,
    ];

    /// The four categories the generation pipeline extracts.
    pub const GENERATED: [FactorCategory; 4] = [
        FactorCategory::Presenting,
        FactorCategory::Predisposing,
        FactorCategory::Precipitating,
        FactorCategory::Perpetuating,
    ];

    /// Lowercase name used in all serialized documents.
    pub fn as_str(&self) -> &'static str {
        match self {
            FactorCategory::Presenting => "presenting",
            FactorCategory::Predisposing => "predisposing",
            FactorCategory::Precipitating => "precipitating",
            FactorCategory::Perpetuating => "perpetuating",
            FactorCategory::Protective => "protective",
        }
    }
}

impl std::fmt::Display for FactorCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether a graph was produced by a human annotator or the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Human,
    Automated,
}

/// A psychological factor: one node of a causal graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorNode {
    /// Stable identifier, unique within a graph.
    pub id: String,
    /// Non-empty text phrase describing the factor.
    pub label: String,
    pub category: FactorCategory,
    /// Transcript turn indices supporting this node (may be empty).
    #[serde(default)]
    pub provenance: Vec<usize>,
}

impl FactorNode {
    pub fn new(id: impl Into<String>, label: impl Into<String>, category: FactorCategory) -> Self {
        FactorNode {
            id: id.into(),
            label: label.into(),
            category,
            provenance: Vec::new(),
        }
    }
}

/// A directed cause -> effect relation between two factor nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalEdge {
    pub source: String,
    pub target: String,
    /// Transcript turn indices supporting this edge (may be empty).
    #[serde(default)]
    pub provenance: Vec<usize>,
}

impl CausalEdge {
    pub fn new(source: impl Into<String>, target: impl Into<String>) -> Self {
        CausalEdge {
            source: source.into(),
            target: target.into(),
            provenance: Vec::new(),
        }
    }
}

/// Validation errors raised when assembling a [`CausalGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate node id `{0}`")]
    DuplicateNodeId(String),
    #[error("self-loop on node `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge `{0}` -> `{1}`")]
    DuplicateEdge(String, String),
    #[error("edge endpoint `{0}` does not name a node in the graph")]
    DanglingEdgeEndpoint(String),
    #[error("node `{0}` has an empty label")]
    EmptyLabel(String),
}

/// In/out/total degree of one node in a directed graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NodeDegrees {
    pub in_degree: usize,
    pub out_degree: usize,
    pub total_degree: usize,
}

/// A validated, immutable 5P causal graph for one session.
///
/// Nodes are held sorted by id and edges sorted by `(source, target)`;
/// iteration over either is canonical. Cycles are permitted; only
/// self-loops and parallel edges are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CausalGraph {
    session_id: String,
    origin: Origin,
    annotator_id: Option<String>,
    nodes: Vec<FactorNode>,
    edges: Vec<CausalEdge>,
}

impl CausalGraph {
    /// Validates and assembles a graph. Empty node and edge lists are fine.
    ///
    /// Input order does not matter; elements are stored canonically sorted.
    pub fn build(
        session_id: impl Into<String>,
        origin: Origin,
        annotator_id: Option<String>,
        nodes: Vec<FactorNode>,
        edges: Vec<CausalEdge>,
    ) -> Result<CausalGraph, GraphError> {
        let mut nodes = nodes;
        for node in &nodes {
            if node.label.trim().is_empty() {
                return Err(GraphError::EmptyLabel(node.id.clone()));
            }
        }
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in nodes.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(GraphError::DuplicateNodeId(pair[0].id.clone()));
            }
        }

        let mut edges = edges;
        edges.sort_by(|a, b| (&a.source, &a.target).cmp(&(&b.source, &b.target)));
        for edge in &edges {
            if edge.source == edge.target {
                return Err(GraphError::SelfLoop(edge.source.clone()));
            }
            for endpoint in [&edge.source, &edge.target] {
                if nodes.binary_search_by(|n| n.id.as_str().cmp(endpoint)).is_err() {
                    return Err(GraphError::DanglingEdgeEndpoint(endpoint.clone()));
                }
            }
        }
        for pair in edges.windows(2) {
            if pair[0].source == pair[1].source && pair[0].target == pair[1].target {
                return Err(GraphError::DuplicateEdge(
                    pair[0].source.clone(),
                    pair[0].target.clone(),
                ));
            }
        }

        Ok(CausalGraph {
            session_id: session_id.into(),
            origin,
            annotator_id,
            nodes,
            edges,
        })
    }

    pub fn session_id(&self) -> &str {
        &self.session_id
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn annotator_id(&self) -> Option<&str> {
        self.annotator_id.as_deref()
    }

    /// Nodes in canonical order (sorted by id).
    pub fn nodes(&self) -> &[FactorNode] {
        &self.nodes
    }

    /// Edges in canonical order (sorted by `(source, target)`).
    pub fn edges(&self) -> &[CausalEdge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Looks up a node by id.
    pub fn node(&self, id: &str) -> Option<&FactorNode> {
        self.node_position(id).map(|i| &self.nodes[i])
    }

    /// Index of a node in canonical order.
    pub fn node_position(&self, id: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.id.as_str().cmp(id)).ok()
    }

    pub fn contains_edge(&self, source: &str, target: &str) -> bool {
        self.edges
            .binary_search_by(|e| (e.source.as_str(), e.target.as_str()).cmp(&(source, target)))
            .is_ok()
    }

    /// Per-node `(in, out, total)` degrees, aligned with [`CausalGraph::nodes`].
    ///
    /// Sums of in-degrees and of out-degrees each equal the edge count.
    pub fn degree_sequences(&self) -> Vec<NodeDegrees> {
        let mut degrees = vec![
            NodeDegrees {
                in_degree: 0,
                out_degree: 0,
                total_degree: 0,
            };
            self.nodes.len()
        ];
        for edge in &self.edges {
            let s = self.node_position(&edge.source).expect("validated endpoint");
            let t = self.node_position(&edge.target).expect("validated endpoint");
            degrees[s].out_degree += 1;
            degrees[t].in_degree += 1;
        }
        for d in &mut degrees {
            d.total_degree = d.in_degree + d.out_degree;
        }
        degrees
    }

    /// Collapses direction: each directed edge becomes an undirected pair and
    /// antiparallel pairs merge into one edge. Nodes are preserved.
    pub fn undirected_projection(&self) -> SimpleGraph {
        let ids: Vec<String> = self.nodes.iter().map(|n| n.id.clone()).collect();
        let mut pairs: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|e| {
                let s = self.node_position(&e.source).expect("validated endpoint");
                let t = self.node_position(&e.target).expect("validated endpoint");
                (s.min(t), s.max(t))
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        SimpleGraph::from_indexed(ids, pairs)
    }

    /// True when the directed graph contains a cycle.
    pub fn has_cycle(&self) -> bool {
        // Kahn's algorithm: leftover nodes after peeling in-degree-0 nodes lie on cycles.
        let n = self.nodes.len();
        let mut in_degree = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for edge in &self.edges {
            let s = self.node_position(&edge.source).expect("validated endpoint");
            let t = self.node_position(&edge.target).expect("validated endpoint");
            out[s].push(t);
            in_degree[t] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| in_degree[v] == 0).collect();
        let mut peeled = 0;
        while let Some(v) = queue.pop() {
            peeled += 1;
            for &w in &out[v] {
                in_degree[w] -= 1;
                if in_degree[w] == 0 {
                    queue.push(w);
                }
            }
        }
        peeled < n
    }
}

/// Derives a stable node id from a label: lowercase, with every run of
/// non-alphanumeric characters collapsed to a single `-`.
///
/// Returns `"node"` when nothing alphanumeric survives, so ids are never
/// empty. Callers needing uniqueness should disambiguate via [`IdAllocator`].
pub fn slugify(label: &str) -> String {
    let mut slug = String::with_capacity(label.len());
    let mut pending_dash = false;
    for ch in label.chars() {
        if ch.is_alphanumeric() {
            if pending_dash && !slug.is_empty() {
                slug.push('-');
            }
            pending_dash = false;
            for lower in ch.to_lowercase() {
                slug.push(lower);
            }
        } else {
            pending_dash = true;
        }
    }
    if slug.is_empty() {
        "node".to_string()
    } else {
        slug
    }
}

/// Hands out slug-based ids, appending `-2`, `-3`, ... on collision.
#[derive(Debug, Default)]
pub struct IdAllocator {
    taken: std::collections::HashSet<String>,
}

impl IdAllocator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn allocate(&mut self, label: &str) -> String {
        let base = slugify(label);
        let mut candidate = base.clone();
        let mut suffix = 2;
        while !self.taken.insert(candidate.clone()) {
            candidate = format!("{base}-{suffix}");
            suffix += 1;
        }
        candidate
    }
}
