//! Frozen edge verbalizations for the golden addiction-case graph.

use caseform_core::semantic::edge_text;
use caseform_core::CausalGraph;

fn fixture(name: &str) -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

#[test]
fn golden_graph_edge_texts_match_frozen_file() {
    let graph = CausalGraph::from_json(
        &std::fs::read_to_string(fixture("addiction_case_graph.golden.json")).unwrap(),
    )
    .unwrap();
    let rendered: String = graph
        .edges()
        .iter()
        .map(|e| edge_text(&graph, e).unwrap() + "\n")
        .collect();
    let path = fixture("addiction_case_edge_texts.golden.txt");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &rendered).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).expect("golden file present");
    assert_eq!(rendered, expected);
}
