//! Asynchronous label propagation with seeded visit order.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_pcg::Pcg64;
use std::collections::BTreeMap;

use super::Partition;
use crate::graph::{CausalGraph, SimpleGraph};

const MAX_SWEEPS: usize = 100;

pub fn label_propagation(g: &CausalGraph, seed: u64) -> Partition {
    label_propagation_on(&g.undirected_projection(), seed)
}

/// Each node repeatedly adopts the most frequent label among its neighbors
/// (ties: smallest label), in a freshly shuffled order per sweep, until a
/// sweep changes nothing or [`MAX_SWEEPS`] is reached. Isolated nodes keep
/// their own label.
pub fn label_propagation_on(g: &SimpleGraph, seed: u64) -> Partition {
    let n = g.node_count();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for _sweep in 0..MAX_SWEEPS {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &v in &order {
            if g.neighbors(v).is_empty() {
                continue;
            }
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for &u in g.neighbors(v) {
                *counts.entry(labels[u]).or_insert(0) += 1;
            }
            // ascending-key iteration makes the first max the smallest label
            let (&best_label, _) = counts
                .iter()
                .max_by_key(|&(&label, &count)| (count, std::cmp::Reverse(label)))
                .expect("nonempty neighbor set");
            if labels[v] != best_label {
                labels[v] = best_label;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Partition::from_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::simple_for_tests;

    #[test]
    fn two_disjoint_cliques_any_seed() {
        let g = simple_for_tests(
            8,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (4, 5),
                (4, 6),
                (4, 7),
                (5, 6),
                (5, 7),
                (6, 7),
            ],
        );
        for seed in 0..10 {
            let p = label_propagation_on(&g, seed);
            assert_eq!(p.community_count(), 2, "seed {seed}");
        }
    }

    #[test]
    fn edgeless_graph_keeps_singletons() {
        let g = simple_for_tests(4, &[]);
        let p = label_propagation_on(&g, 3);
        assert_eq!(p.community_count(), 4);
    }

    #[test]
    fn isolated_node_keeps_its_label() {
        let g = simple_for_tests(4, &[(0, 1), (1, 2), (0, 2)]);
        let p = label_propagation_on(&g, 5);
        assert_eq!(p.community_count(), 2);
        let triangle = p.community_of(0);
        assert_eq!(p.community_of(1), triangle);
        assert_ne!(p.community_of(3), triangle);
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let g = simple_for_tests(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let a = label_propagation_on(&g, 11);
        let b = label_propagation_on(&g, 11);
        assert_eq!(a, b);
    }
}
