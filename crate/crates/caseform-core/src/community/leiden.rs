//! Leiden community detection: seeded local moving, a refinement phase that
//! keeps communities connected, and aggregation, repeated to convergence.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_pcg::Pcg64;
use std::collections::BTreeMap;

use super::level::LevelGraph;
use super::Partition;
use crate::graph::{CausalGraph, SimpleGraph};

pub fn leiden(g: &CausalGraph, resolution: f64, seed: u64) -> Partition {
    leiden_on(&g.undirected_projection(), resolution, seed)
}

/// Modularity-optimizing Leiden on the undirected projection. Every
/// returned community induces a connected subgraph; a fixed seed gives
/// identical output.
pub fn leiden_on(g: &SimpleGraph, resolution: f64, seed: u64) -> Partition {
    let n = g.node_count();
    if n == 0 {
        return Partition::from_labels(Vec::new());
    }
    if g.edge_count() == 0 {
        return Partition::singletons(n);
    }
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut level = LevelGraph::from_simple(g);
    let total_m = level.total_weight();
    // original node -> community of the most recent refined partition
    let mut assign: Vec<usize> = (0..n).collect();
    loop {
        let mut labels: Vec<usize> = (0..level.len()).collect();
        let moved = local_move(&level, &mut labels, resolution, total_m, &mut rng);
        if !moved {
            // stable: current supernodes are the final communities
            for (super_node, members) in level.members.iter().enumerate() {
                for &orig in members {
                    assign[orig] = super_node;
                }
            }
            return Partition::from_labels(assign);
        }
        let labels = normalize(labels);
        let refined = normalize(refine(&level, &labels, resolution, total_m, &mut rng));
        for (super_node, members) in level.members.iter().enumerate() {
            for &orig in members {
                assign[orig] = refined[super_node];
            }
        }
        let next = level.aggregate(&refined);
        if next.len() == level.len() {
            // refinement found nothing to merge; the refined partition stands
            return Partition::from_labels(assign);
        }
        level = next;
    }
}

/// Modularity gain of placing isolated `v` (strength `k_v`) into a community
/// with total strength `sigma_tot`, given `k_vc` weight from `v` into it.
fn gain(k_vc: f64, k_v: f64, sigma_tot: f64, resolution: f64, m: f64) -> f64 {
    k_vc / m - resolution * k_v * sigma_tot / (2.0 * m * m)
}

/// Repeated seeded passes moving each node to its best community until a
/// full pass changes nothing. Returns whether anything moved at all.
fn local_move(
    level: &LevelGraph,
    labels: &mut [usize],
    resolution: f64,
    m: f64,
    rng: &mut Pcg64,
) -> bool {
    let n = level.len();
    let mut sigma_tot = vec![0.0; 2 * n + 1];
    for v in 0..n {
        sigma_tot[labels[v]] += level.strength[v];
    }
    let mut next_free = n;
    let mut order: Vec<usize> = (0..n).collect();
    let mut moved_any = false;
    for _pass in 0..100 {
        order.shuffle(rng);
        let mut moved_this_pass = false;
        for &v in &order {
            let current = labels[v];
            sigma_tot[current] -= level.strength[v];
            let mut weight_to: BTreeMap<usize, f64> = BTreeMap::new();
            for &(u, w) in &level.neighbors[v] {
                *weight_to.entry(labels[u]).or_insert(0.0) += w;
            }
            let k_v = level.strength[v];
            let current_gain = gain(
                weight_to.get(&current).copied().unwrap_or(0.0),
                k_v,
                sigma_tot[current],
                resolution,
                m,
            );
            // candidates: stay, leave for a fresh singleton (gain 0), or join
            // a neighbor community; ties keep the current assignment
            let fresh = usize::MAX;
            let mut best_c = current;
            let mut best_gain = current_gain;
            if 0.0 > best_gain + 1e-12 {
                best_c = fresh;
                best_gain = 0.0;
            }
            for (&c, &k_vc) in &weight_to {
                if c == current {
                    continue;
                }
                let g = gain(k_vc, k_v, sigma_tot[c], resolution, m);
                if g > best_gain + 1e-12 {
                    best_c = c;
                    best_gain = g;
                }
            }
            let target = if best_c == fresh {
                let t = next_free;
                next_free += 1;
                if t >= sigma_tot.len() {
                    sigma_tot.resize(t + 1, 0.0);
                }
                t
            } else {
                best_c
            };
            labels[v] = target;
            sigma_tot[target] += level.strength[v];
            if target != current {
                moved_this_pass = true;
                moved_any = true;
            }
        }
        if !moved_this_pass {
            break;
        }
    }
    moved_any
}

/// Leiden refinement: within each community of `parent`, grow connected
/// subcommunities by merging still-singleton nodes into adjacent ones when
/// the modularity gain is nonnegative.
fn refine(
    level: &LevelGraph,
    parent: &[usize],
    resolution: f64,
    m: f64,
    rng: &mut Pcg64,
) -> Vec<usize> {
    let n = level.len();
    let mut refined: Vec<usize> = (0..n).collect();
    let mut sigma_tot: Vec<f64> = level.strength.clone();
    let mut community_size = vec![1usize; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for &v in &order {
        if community_size[refined[v]] > 1 {
            continue; // only nodes still alone may move
        }
        let mut weight_to: BTreeMap<usize, f64> = BTreeMap::new();
        for &(u, w) in &level.neighbors[v] {
            if parent[u] == parent[v] {
                *weight_to.entry(refined[u]).or_insert(0.0) += w;
            }
        }
        sigma_tot[refined[v]] -= level.strength[v];
        let mut best: Option<(usize, f64)> = None;
        for (&c, &k_vc) in &weight_to {
            if c == refined[v] {
                continue;
            }
            let g = gain(k_vc, level.strength[v], sigma_tot[c], resolution, m);
            if g >= 0.0 && best.is_none_or(|(_, bg)| g > bg + 1e-12) {
                best = Some((c, g));
            }
        }
        match best {
            Some((c, _)) => {
                community_size[refined[v]] -= 1;
                refined[v] = c;
                community_size[c] += 1;
                sigma_tot[c] += level.strength[v];
            }
            None => {
                sigma_tot[refined[v]] += level.strength[v];
            }
        }
    }
    refined
}

fn normalize(labels: Vec<usize>) -> Vec<usize> {
    let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = Vec::with_capacity(labels.len());
    for label in labels {
        let next = remap.len();
        out.push(*remap.entry(label).or_insert(next));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::{modularity, simple_for_tests};

    #[test]
    fn two_disjoint_cliques_recovered() {
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
        for seed in [0, 1, 42] {
            let p = leiden_on(&g, 1.0, seed);
            assert_eq!(p.community_count(), 2, "seed {seed}");
            assert_eq!(p.community_of(0), p.community_of(3));
            assert_eq!(p.community_of(4), p.community_of(7));
            assert_ne!(p.community_of(0), p.community_of(4));
        }
    }

    #[test]
    fn single_node_is_one_community() {
        let g = simple_for_tests(1, &[]);
        let p = leiden_on(&g, 1.0, 42);
        assert_eq!(p.community_count(), 1);
    }

    #[test]
    fn ring_of_cliques_beats_one_block() {
        // 4 triangles joined in a ring by single bridges
        let mut edges = Vec::new();
        for c in 0..4usize {
            let base = 3 * c;
            edges.extend([(base, base + 1), (base, base + 2), (base + 1, base + 2)]);
        }
        edges.extend([(2, 3), (5, 6), (8, 9), (11, 0)]);
        let g = simple_for_tests(12, &edges);
        let p = leiden_on(&g, 1.0, 7);
        assert_eq!(p.community_count(), 4);
        let q = modularity(&g, &p, 1.0).unwrap();
        assert!(q > 0.0);
        let gn = crate::community::girvan_newman_on(&g);
        assert!(q >= modularity(&g, &gn, 1.0).unwrap() - 1e-12);
    }

    #[test]
    fn communities_are_connected() {
        // path plus a far-flung chord that modularity may want to group
        let g = simple_for_tests(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]);
        for seed in 0..10 {
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
        let set: std::collections::HashSet<usize> = members.iter().copied().collect();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![members[0]];
        seen.insert(members[0]);
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if set.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == members.len()
    }
}
