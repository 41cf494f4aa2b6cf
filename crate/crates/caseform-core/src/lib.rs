//! Core library for 5P case-formulation graphs.
//!
//! Provides the causal-graph data model with canonical serialization and
//! exports, transcript parsing and corpus statistics, NetSimile structural
//! similarity, embedding-based semantic similarity, graph-theory metrics,
//! community detection, and rater-agreement statistics. Everything here is
//! deterministic: graphs iterate in canonical order, stochastic algorithms
//! take explicit seeds, and serialized output is byte-stable.

pub mod agreement;
pub mod community;
pub mod graph;
pub mod netsimile;
pub mod semantic;
pub mod topology;
pub mod transcript;

pub use graph::{
    CausalEdge, CausalGraph, DocumentError, ExportFormat, FactorCategory, FactorNode, GraphError,
    Origin, SimpleGraph,
};
pub use transcript::{CorpusStats, Speaker, Transcript, TranscriptError, Turn};
