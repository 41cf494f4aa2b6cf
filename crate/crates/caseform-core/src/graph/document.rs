//! JSON graph documents.
//!
//! Schema: top-level keys `session_id`, `origin` ("human"|"automated"),
//! `annotator_id` (string|null), `nodes` (array of `{id, label, category,
//! provenance[]}`), `edges` (array of `{source, target, provenance[]}`).
//! Categories are serialized lowercase. Output is byte-stable: fixed key
//! order, canonical element order, two-space indentation, trailing newline.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{CausalEdge, CausalGraph, FactorNode, GraphError, Origin};

#[derive(Debug, Error)]
pub enum DocumentError {
    /// The document is not syntactically valid JSON.
    #[error("malformed document at line {line}, column {column}: {message}")]
    MalformedDocument {
        line: usize,
        column: usize,
        message: String,
    },
    /// Valid JSON that does not match the graph schema (missing field,
    /// unknown category, wrong type).
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    /// The document decoded but the graph it describes is invalid.
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Serialize, Deserialize)]
struct GraphDocument {
    session_id: String,
    origin: Origin,
    annotator_id: Option<String>,
    nodes: Vec<FactorNode>,
    edges: Vec<CausalEdge>,
}

impl CausalGraph {
    /// Canonical JSON serialization. `from_json(to_json(g))` reproduces `g`
    /// exactly, and repeated calls are byte-identical.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("graph serialization is total");
        out.push('\n');
        out
    }

    /// Parses and fully re-validates a graph document.
    pub fn from_json(document: &str) -> Result<CausalGraph, DocumentError> {
        let doc: GraphDocument = serde_json::from_str(document).map_err(|err| {
            if err.classify() == serde_json::error::Category::Data {
                DocumentError::SchemaViolation(err.to_string())
            } else {
                DocumentError::MalformedDocument {
                    line: err.line(),
                    column: err.column(),
                    message: err.to_string(),
                }
            }
        })?;
        Ok(CausalGraph::build(
            doc.session_id,
            doc.origin,
            doc.annotator_id,
            doc.nodes,
            doc.edges,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FactorCategory;

    fn sample() -> CausalGraph {
        let nodes = vec![
            FactorNode::new("insomnia", "insomnia", FactorCategory::Presenting),
            FactorNode {
                id: "job-loss".into(),
                label: "job loss".into(),
                category: FactorCategory::Precipitating,
                provenance: vec![3, 7],
            },
        ];
        let edges = vec![CausalEdge::new("job-loss", "insomnia")];
        CausalGraph::build("s01", Origin::Automated, None, nodes, edges).unwrap()
    }

    #[test]
    fn round_trip_is_identity() {
        let g = sample();
        let doc = g.to_json();
        let back = CausalGraph::from_json(&doc).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), doc);
    }

    #[test]
    fn serialization_is_byte_stable() {
        let g = sample();
        assert_eq!(g.to_json(), g.to_json());
        assert!(g.to_json().ends_with('\n'));
    }

    #[test]
    fn unknown_category_is_schema_violation() {
        let doc = r#"{
          "session_id": "s",
          "origin": "human",
          "annotator_id": null,
          "nodes": [{"id": "a", "label": "a", "category": "Percipitating", "provenance": []}],
          "edges": []
        }"#;
        match CausalGraph::from_json(doc) {
            Err(DocumentError::SchemaViolation(msg)) => assert!(msg.contains("Percipitating")),
            other => panic!("expected SchemaViolation, got {other:?}"),
        }
    }

    #[test]
    fn missing_field_is_schema_violation() {
        let doc = r#"{"session_id": "s", "nodes": [], "edges": []}"#;
        match CausalGraph::from_json(doc) {
            Err(DocumentError::SchemaViolation(msg)) => assert!(msg.contains("origin")),
            other => panic!("expected SchemaViolation, got {other:?}"),
        }
    }

    #[test]
    fn omitted_annotator_id_defaults_to_none() {
        let doc = r#"{"session_id": "s", "origin": "human", "nodes": [], "edges": []}"#;
        assert_eq!(CausalGraph::from_json(doc).unwrap().annotator_id(), None);
    }

    #[test]
    fn syntax_error_reports_location() {
        match CausalGraph::from_json("{ not json") {
            Err(DocumentError::MalformedDocument { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected MalformedDocument, got {other:?}"),
        }
    }

    #[test]
    fn graph_errors_reraised_on_load() {
        let doc = r#"{
          "session_id": "s",
          "origin": "human",
          "annotator_id": null,
          "nodes": [{"id": "a", "label": "a", "category": "presenting", "provenance": []}],
          "edges": [{"source": "a", "target": "a", "provenance": []}]
        }"#;
        assert!(matches!(
            CausalGraph::from_json(doc),
            Err(DocumentError::Graph(GraphError::SelfLoop(_)))
        ));
    }

    #[test]
    fn provenance_defaults_to_empty() {
        let doc = r#"{
          "session_id": "s",
          "origin": "human",
          "annotator_id": null,
          "nodes": [{"id": "a", "label": "a", "category": "presenting"}],
          "edges": []
        }"#;
        let g = CausalGraph::from_json(doc).unwrap();
        assert!(g.nodes()[0].provenance.is_empty());
    }
}
