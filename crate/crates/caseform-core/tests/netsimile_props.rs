//! NetSimile verification: brute-force egonet equivalence, identity and
//! symmetry of the similarity score, isomorphism invariance, and the
//! hand-derived K3-versus-path value.

use caseform_core::netsimile::{
    canberra_distance, graph_signature, netsimile_similarity, node_features,
};
use caseform_testkit::{oracle, random_causal_graph, random_simple_graph, relabeled_copy};

#[test]
fn node_features_match_brute_force_enumeration() {
    for seed in 0..120 {
        let n = 1 + (seed as usize % 8);
        let g = random_simple_graph(seed, n, 0.35);
        for v in 0..g.node_count() {
            let got = node_features(&g, v).unwrap().as_array();
            let want = oracle::egonet_features(&g, v);
            assert_eq!(got, want, "seed {seed}, node {v}");
        }
    }
}

#[test]
fn similarity_identity_and_symmetry() {
    for seed in 0..100 {
        let g = random_causal_graph(seed, 2 + (seed as usize % 8), 0.3);
        let h = random_causal_graph(seed + 5000, 2 + ((seed + 3) as usize % 8), 0.3);
        let self_sim = netsimile_similarity(&g, &g).unwrap();
        assert!((self_sim - 1.0).abs() <= 1e-9, "seed {seed}: self {self_sim}");
        let gh = netsimile_similarity(&g, &h).unwrap();
        let hg = netsimile_similarity(&h, &g).unwrap();
        assert!((gh - hg).abs() <= 1e-12, "seed {seed}: {gh} vs {hg}");
        assert!((0.0..=1.0).contains(&gh), "seed {seed}: out of range {gh}");
    }
}

#[test]
fn signatures_are_isomorphism_invariant() {
    for seed in 0..50 {
        let g = random_causal_graph(seed, 7, 0.35);
        let relabeled = relabeled_copy(&g, seed + 99);
        let sig_a = graph_signature(&g.undirected_projection()).unwrap();
        let sig_b = graph_signature(&relabeled.undirected_projection()).unwrap();
        assert_eq!(sig_a.as_slice(), sig_b.as_slice(), "seed {seed}");
        assert!((netsimile_similarity(&g, &relabeled).unwrap() - 1.0).abs() <= 1e-12);
    }
}

/// K3 vs the 3-node path, both signatures derived by hand.
///
/// K3 columns are constant: degree 2, clustering 1, neighbor degree 2,
/// neighbor clustering 1, egonet edges 3, outgoing 0, outside 0.
/// Path columns (nodes a-b-c): degree [1,2,1], clustering 0, neighbor degree
/// [2,1,2], neighbor clustering 0, egonet edges [1,2,1], outgoing [1,0,1],
/// outside [1,0,1].
#[test]
fn k3_versus_path_matches_hand_signatures() {
    let k3 = simple(3, &[(0, 1), (0, 2), (1, 2)]);
    let path = simple(3, &[(0, 1), (1, 2)]);

    let constant = |v: f64| [v, v, 0.0, 0.0, 0.0];
    let mut k3_expected = Vec::new();
    for v in [2.0, 1.0, 2.0, 1.0, 3.0, 0.0, 0.0] {
        k3_expected.extend(constant(v));
    }
    assert_eq!(graph_signature(&k3).unwrap().as_slice(), &k3_expected[..]);

    // population moments of [1,1,2]: mean 4/3, var 2/9, m3 = 2/27
    let var: f64 = 2.0 / 9.0;
    let std = var.sqrt();
    let skew_112 = (2.0 / 27.0) / (var * std);
    let kurt = -1.5; // m4/var^2 - 3 with m4 = 2/27
    let low_heavy = [1.0, 4.0 / 3.0, std, skew_112, kurt]; // column [1,1,2]
    let high_heavy = [2.0, 5.0 / 3.0, std, -skew_112, kurt]; // column [1,2,2]
    let zero_one = [1.0, 2.0 / 3.0, std, -skew_112, kurt]; // column [0,1,1]
    let zeros = [0.0; 5];
    let mut path_expected = Vec::new();
    path_expected.extend(low_heavy); // degree
    path_expected.extend(zeros); // clustering
    path_expected.extend(high_heavy); // mean neighbor degree
    path_expected.extend(zeros); // mean neighbor clustering
    path_expected.extend(low_heavy); // egonet internal edges
    path_expected.extend(zero_one); // egonet outgoing
    path_expected.extend(zero_one); // egonet outside nodes
    let got = graph_signature(&path).unwrap();
    for (i, (&a, &b)) in got.as_slice().iter().zip(&path_expected).enumerate() {
        assert!((a - b).abs() <= 1e-12, "entry {i}: got {a}, want {b}");
    }

    // similarity equals the hand-computed Canberra mapping and is interior
    let d = canberra_distance(&k3_expected, &path_expected).unwrap();
    let expected_similarity = 1.0 - d / 35.0;
    let g_k3 = as_causal(&[(0, 1), (0, 2), (1, 2)], 3);
    let g_path = as_causal(&[(0, 1), (1, 2)], 3);
    let got_similarity = netsimile_similarity(&g_k3, &g_path).unwrap();
    assert!((got_similarity - expected_similarity).abs() <= 1e-12);
    assert!(got_similarity > 0.0 && got_similarity < 1.0);
}

#[test]
fn identical_isolated_node_additions_keep_identity() {
    let with_isolated = as_causal(&[(0, 1), (0, 2), (1, 2)], 4);
    assert!((netsimile_similarity(&with_isolated, &with_isolated).unwrap() - 1.0).abs() <= 1e-12);
}

fn simple(n: usize, pairs: &[(usize, usize)]) -> caseform_core::SimpleGraph {
    let ids: Vec<String> = (0..n).map(|i| format!("n{i:02}")).collect();
    let pairs: Vec<(String, String)> = pairs
        .iter()
        .map(|&(a, b)| (format!("n{a:02}"), format!("n{b:02}")))
        .collect();
    caseform_core::SimpleGraph::new(ids, pairs).unwrap()
}

fn as_causal(pairs: &[(usize, usize)], n: usize) -> caseform_core::CausalGraph {
    let nodes = (0..n)
        .map(|i| {
            caseform_core::FactorNode::new(
                format!("n{i:02}"),
                format!("factor {i}"),
                caseform_core::FactorCategory::Presenting,
            )
        })
        .collect();
    let edges = pairs
        .iter()
        .map(|&(a, b)| caseform_core::CausalEdge::new(format!("n{a:02}"), format!("n{b:02}")))
        .collect();
    caseform_core::CausalGraph::build("t", caseform_core::Origin::Human, None, nodes, edges).unwrap()
}
