//! Two-stage LLM generation of 5P causal graphs from therapy transcripts.
//!
//! Stage one asks a chat backend to extract factor phrases for the four
//! generated 5P categories in a single call; stage two asks, for every
//! candidate node pair, whether the first factor causes the second, keeping
//! a running list of accepted edges that later prompts can see. The backend
//! is pluggable: a scripted mock for reproducible runs and tests, or an
//! HTTP endpoint for a live model.

pub mod backend;
pub mod http;
pub mod payload;
pub mod pipeline;
pub mod prompt;
pub mod scripted;

pub use backend::{BackendConfig, BackendError, ChatBackend};
pub use http::{EmbedderConfig, HttpChatBackend, HttpEmbedder};
pub use pipeline::{
    enumerate_candidate_pairs, extract_nodes, generate_graph, parse_edge_response,
    parse_extraction_response, verify_edges, verify_edges_detailed, EdgeQuery, ExtractionResult,
    ParseError, PipelineError, Warning, WarningKind, WarningLog,
};
pub use prompt::{build_edge_prompt, build_extraction_prompt, render_conversation};
pub use scripted::{ScriptRule, ScriptedBackend};
