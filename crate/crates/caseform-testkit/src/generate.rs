//! Seeded random graph generators.

use caseform_core::graph::{
    CausalEdge, CausalGraph, FactorCategory, FactorNode, Origin, SimpleGraph,
};
use rand::prelude::*;
use rand_pcg::Pcg64;

const LABEL_WORDS: [&str; 12] = [
    "insomnia",
    "rumination",
    "job loss",
    "social isolation",
    "family conflict",
    "low mood",
    "panic episodes",
    "alcohol use",
    "perfectionism",
    "chronic pain",
    "bereavement",
    "financial strain",
];

/// Random directed causal graph: `n` nodes with random categories, each
/// ordered pair present with probability `edge_prob`.
pub fn random_causal_graph(seed: u64, n: usize, edge_prob: f64) -> CausalGraph {
    let mut rng = Pcg64::seed_from_u64(seed);
    let nodes: Vec<FactorNode> = (0..n)
        .map(|i| {
            let category = FactorCategory::GENERATED[rng.gen_range(0..4)];
            let word = LABEL_WORDS[rng.gen_range(0..LABEL_WORDS.len())];
            FactorNode::new(format!("n{i:02}"), format!("{word} {i}"), category)
        })
        .collect();
    let mut edges = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if s != t && rng.gen_bool(edge_prob) {
                edges.push(CausalEdge::new(format!("n{s:02}"), format!("n{t:02}")));
            }
        }
    }
    CausalGraph::build(format!("random-{seed}"), Origin::Automated, None, nodes, edges)
        .expect("generated graphs are valid by construction")
}

/// Random undirected simple graph on `n` nodes.
pub fn random_simple_graph(seed: u64, n: usize, edge_prob: f64) -> SimpleGraph {
    let mut rng = Pcg64::seed_from_u64(seed);
    let ids: Vec<String> = (0..n).map(|i| format!("n{i:02}")).collect();
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(edge_prob) {
                pairs.push((format!("n{u:02}"), format!("n{v:02}")));
            }
        }
    }
    SimpleGraph::new(ids, pairs).expect("generated graphs are valid by construction")
}

/// Isomorphic copy of a causal graph under a seeded random id relabeling.
/// Labels, categories, and adjacency are preserved.
pub fn relabeled_copy(g: &CausalGraph, seed: u64) -> CausalGraph {
    let mut rng = Pcg64::seed_from_u64(seed);
    let n = g.node_count();
    let mut permutation: Vec<usize> = (0..n).collect();
    permutation.shuffle(&mut rng);
    let new_id = |old_idx: usize| format!("m{:02}", permutation[old_idx]);
    let nodes: Vec<FactorNode> = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let mut renamed = FactorNode::new(new_id(i), node.label.clone(), node.category);
            renamed.provenance = node.provenance.clone();
            renamed
        })
        .collect();
    let edges: Vec<CausalEdge> = g
        .edges()
        .iter()
        .map(|e| {
            let s = g.node_position(&e.source).expect("endpoint");
            let t = g.node_position(&e.target).expect("endpoint");
            CausalEdge::new(new_id(s), new_id(t))
        })
        .collect();
    CausalGraph::build(g.session_id(), g.origin(), None, nodes, edges)
        .expect("relabeling preserves validity")
}
