//! Planted-partition recovery and structural guarantees for the four
//! community algorithms.

use caseform_core::community::{
    category_alignment, girvan_newman_on, infomap_two_level_on, label_propagation_on, leiden_on,
    map_equation, modularity, girvan_newman_dendrogram, Partition,
};
use caseform_core::{CausalEdge, CausalGraph, FactorCategory, FactorNode, Origin, SimpleGraph};

/// `k` disjoint cliques with the given sizes.
fn disjoint_cliques(sizes: &[usize]) -> (SimpleGraph, Vec<usize>) {
    let total: usize = sizes.iter().sum();
    let ids: Vec<String> = (0..total).map(|i| format!("n{i:02}")).collect();
    let mut pairs = Vec::new();
    let mut truth = Vec::new();
    let mut base = 0;
    for (c, &size) in sizes.iter().enumerate() {
        for u in 0..size {
            truth.push(c);
            for v in (u + 1)..size {
                pairs.push((format!("n{:02}", base + u), format!("n{:02}", base + v)));
            }
        }
        base += size;
    }
    (SimpleGraph::new(ids, pairs).unwrap(), truth)
}

fn matches_planted(p: &Partition, truth: &[usize]) -> bool {
    if p.community_count() != truth.iter().max().map_or(0, |m| m + 1) {
        return false;
    }
    // same-community relation must match exactly
    for i in 0..truth.len() {
        for j in (i + 1)..truth.len() {
            if (p.community_of(i) == p.community_of(j)) != (truth[i] == truth[j]) {
                return false;
            }
        }
    }
    true
}

fn planted_cases() -> Vec<Vec<usize>> {
    vec![
        vec![3, 3],
        vec![4, 6],
        vec![5, 5],
        vec![3, 4, 5],
        vec![4, 4, 4],
        vec![6, 3, 4],
        vec![3, 3, 3, 3],
        vec![4, 5, 3, 6],
        vec![5, 4, 4, 3],
    ]
}

#[test]
fn leiden_recovers_planted_cliques() {
    for sizes in planted_cases() {
        let (g, truth) = disjoint_cliques(&sizes);
        for seed in 0..5 {
            let p = leiden_on(&g, 1.0, seed);
            assert!(matches_planted(&p, &truth), "leiden failed on {sizes:?} seed {seed}");
        }
    }
}

#[test]
fn girvan_newman_recovers_planted_cliques() {
    for sizes in planted_cases() {
        let (g, truth) = disjoint_cliques(&sizes);
        let p = girvan_newman_on(&g);
        assert!(matches_planted(&p, &truth), "girvan-newman failed on {sizes:?}");
    }
}

#[test]
fn infomap_recovers_planted_cliques() {
    for sizes in planted_cases() {
        let (g, truth) = disjoint_cliques(&sizes);
        for seed in 0..5 {
            let p = infomap_two_level_on(&g, seed).unwrap();
            assert!(matches_planted(&p, &truth), "infomap failed on {sizes:?} seed {seed}");
        }
    }
}

#[test]
fn label_propagation_recovers_planted_cliques() {
    for sizes in planted_cases() {
        let (g, truth) = disjoint_cliques(&sizes);
        for seed in 0..5 {
            let p = label_propagation_on(&g, seed);
            assert!(
                matches_planted(&p, &truth),
                "label propagation failed on {sizes:?} seed {seed}"
            );
        }
    }
}

#[test]
fn partitions_are_total_and_contiguous() {
    for seed in 0..30 {
        let g = caseform_testkit::random_simple_graph(seed, 3 + (seed as usize % 8), 0.3);
        let mut partitions = vec![
            girvan_newman_on(&g),
            leiden_on(&g, 1.0, seed),
            label_propagation_on(&g, seed),
        ];
        if g.edge_count() > 0 {
            partitions.push(infomap_two_level_on(&g, seed).unwrap());
        }
        for p in partitions {
            assert_eq!(p.len(), g.node_count());
            let count = p.community_count();
            let mut seen = vec![false; count];
            for &c in p.assignments() {
                assert!(c < count);
                seen[c] = true;
            }
            assert!(seen.into_iter().all(|s| s), "non-contiguous labels, seed {seed}");
        }
    }
}

#[test]
fn algorithms_are_deterministic_per_seed() {
    for seed in [0u64, 7, 42] {
        let g = caseform_testkit::random_simple_graph(900 + seed, 10, 0.35);
        assert_eq!(leiden_on(&g, 1.0, seed), leiden_on(&g, 1.0, seed));
        assert_eq!(label_propagation_on(&g, seed), label_propagation_on(&g, seed));
        if g.edge_count() > 0 {
            assert_eq!(
                infomap_two_level_on(&g, seed).unwrap(),
                infomap_two_level_on(&g, seed).unwrap()
            );
        }
        assert_eq!(girvan_newman_on(&g), girvan_newman_on(&g));
    }
}

#[test]
fn girvan_newman_selection_is_dendrogram_optimal() {
    for seed in 0..20 {
        let g = caseform_testkit::random_simple_graph(200 + seed, 9, 0.3);
        if g.edge_count() == 0 {
            continue;
        }
        let chosen = girvan_newman_on(&g);
        let chosen_q = modularity(&g, &chosen, 1.0).unwrap();
        for recorded in girvan_newman_dendrogram(&g) {
            let q = modularity(&g, &recorded, 1.0).unwrap();
            assert!(q <= chosen_q + 1e-12, "seed {seed}: {q} beats {chosen_q}");
        }
    }
}

#[test]
fn leiden_positive_modularity_when_planted_structure_exists() {
    for sizes in planted_cases() {
        let (g, _) = disjoint_cliques(&sizes);
        for seed in 0..3 {
            let q = modularity(&g, &leiden_on(&g, 1.0, seed), 1.0).unwrap();
            assert!(q > 0.0, "{sizes:?} seed {seed}: modularity {q}");
        }
    }
}

#[test]
fn leiden_communities_induce_connected_subgraphs() {
    for seed in 0..40 {
        let g = caseform_testkit::random_simple_graph(500 + seed, 10, 0.25);
        let p = leiden_on(&g, 1.0, seed);
        for members in p.groups() {
            assert!(induced_connected(&g, &members), "seed {seed}: {members:?}");
        }
    }
}

fn induced_connected(g: &SimpleGraph, members: &[usize]) -> bool {
    if members.len() <= 1 {
        return true;
    }
    let inside: std::collections::HashSet<usize> = members.iter().copied().collect();
    let mut seen = std::collections::HashSet::from([members[0]]);
    let mut stack = vec![members[0]];
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if inside.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == members.len()
}

#[test]
fn map_equation_prefers_split_on_two_cliques_with_bridge() {
    let ids: Vec<String> = (0..8).map(|i| format!("n{i:02}")).collect();
    let mut pairs = Vec::new();
    for base in [0, 4] {
        for u in 0..4 {
            for v in (u + 1)..4 {
                pairs.push((format!("n{:02}", base + u), format!("n{:02}", base + v)));
            }
        }
    }
    pairs.push(("n03".into(), "n04".into()));
    let g = SimpleGraph::new(ids, pairs).unwrap();
    let found = infomap_two_level_on(&g, 42).unwrap();
    let all_in_one = Partition::from_labels(vec![0; 8]);
    let l_found = map_equation(&g, &found).unwrap();
    let l_one = map_equation(&g, &all_in_one).unwrap();
    assert!(l_found <= l_one);
}

#[test]
fn alignment_mirrors_categories_on_a_planted_graph() {
    // one presenting+perpetuating cluster and one precipitating cluster
    let nodes = vec![
        FactorNode::new("a", "a", FactorCategory::Presenting),
        FactorNode::new("b", "b", FactorCategory::Presenting),
        FactorNode::new("c", "c", FactorCategory::Perpetuating),
        FactorNode::new("x", "x", FactorCategory::Precipitating),
        FactorNode::new("y", "y", FactorCategory::Precipitating),
        FactorNode::new("z", "z", FactorCategory::Precipitating),
    ];
    let edges = vec![
        CausalEdge::new("a", "b"),
        CausalEdge::new("b", "c"),
        CausalEdge::new("c", "a"),
        CausalEdge::new("x", "y"),
        CausalEdge::new("y", "z"),
        CausalEdge::new("z", "x"),
    ];
    let g = CausalGraph::build("planted", Origin::Human, None, nodes, edges).unwrap();
    let p = leiden_on(&g.undirected_projection(), 1.0, 42);
    let report = category_alignment(&g, &p).unwrap();
    assert_eq!(report.communities.len(), 2);
    assert!((report.purity - 5.0 / 6.0).abs() < 1e-12);
    let majorities: std::collections::BTreeSet<_> = report
        .communities
        .iter()
        .map(|c| c.majority_category)
        .collect();
    assert!(majorities.contains(&FactorCategory::Presenting));
    assert!(majorities.contains(&FactorCategory::Precipitating));
}
