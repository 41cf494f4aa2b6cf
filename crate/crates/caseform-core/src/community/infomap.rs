//! Two-level Infomap: greedy minimization of the map equation with seeded
//! local moving and aggregation.
//!
//! The random walk is the teleportation-free stationary walk on the
//! undirected graph, so node visit rates are proportional to degree and a
//! module's exit probability is its cut weight over `2m`. Code lengths are
//! in bits (base-2 logarithms).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_pcg::Pcg64;
use std::collections::BTreeMap;

use super::level::LevelGraph;
use super::{CommunityError, Partition};
use crate::graph::{CausalGraph, SimpleGraph};

pub fn infomap_two_level(g: &CausalGraph, seed: u64) -> Result<Partition, CommunityError> {
    infomap_two_level_on(&g.undirected_projection(), seed)
}

pub fn infomap_two_level_on(g: &SimpleGraph, seed: u64) -> Result<Partition, CommunityError> {
    if g.edge_count() == 0 {
        return Err(CommunityError::NoEdges);
    }
    let n = g.node_count();
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut level = LevelGraph::from_simple(g);
    let two_m = 2.0 * level.total_weight();
    // node-codebook entropy term over original nodes; constant under
    // repartitioning, so it is computed once
    let node_entropy: f64 = level
        .strength
        .iter()
        .map(|&s| plogp(s / two_m))
        .sum();
    let mut assign: Vec<usize> = (0..n).collect();
    loop {
        let mut labels: Vec<usize> = (0..level.len()).collect();
        let moved = local_move(&level, &mut labels, two_m, node_entropy, &mut rng);
        if !moved {
            for (super_node, members) in level.members.iter().enumerate() {
                for &orig in members {
                    assign[orig] = super_node;
                }
            }
            return Ok(Partition::from_labels(assign));
        }
        let labels = normalize(labels);
        for (super_node, members) in level.members.iter().enumerate() {
            for &orig in members {
                assign[orig] = labels[super_node];
            }
        }
        let next = level.aggregate(&labels);
        if next.len() == level.len() {
            return Ok(Partition::from_labels(assign));
        }
        level = next;
    }
}

/// Two-level map-equation code length (bits) of a partition.
pub fn map_equation(g: &SimpleGraph, p: &Partition) -> Result<f64, CommunityError> {
    if g.edge_count() == 0 {
        return Err(CommunityError::NoEdges);
    }
    if p.len() != g.node_count() {
        return Err(CommunityError::PartitionMismatch(format!(
            "partition labels {} nodes, graph has {}",
            p.len(),
            g.node_count()
        )));
    }
    let two_m = 2.0 * g.edge_count() as f64;
    let node_entropy: f64 = (0..g.node_count())
        .map(|v| plogp(g.degree(v) as f64 / two_m))
        .sum();
    let mut visit = vec![0.0; p.community_count()];
    let mut cut = vec![0.0; p.community_count()];
    for v in 0..g.node_count() {
        visit[p.community_of(v)] += g.degree(v) as f64 / two_m;
    }
    for &(u, v) in g.edges() {
        if p.community_of(u) != p.community_of(v) {
            cut[p.community_of(u)] += 1.0;
            cut[p.community_of(v)] += 1.0;
        }
    }
    let exit: Vec<f64> = cut.iter().map(|c| c / two_m).collect();
    Ok(codelength(&exit, &visit, node_entropy))
}

fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// `L = plogp(q) - 2 sum plogp(q_c) + sum plogp(q_c + p_c) - sum plogp(p_v)`,
/// the standard expansion of the two-level map equation.
fn codelength(exit: &[f64], visit: &[f64], node_entropy: f64) -> f64 {
    let q: f64 = exit.iter().sum();
    let mut length = plogp(q) - node_entropy;
    for (&qc, &pc) in exit.iter().zip(visit) {
        length += plogp(qc + pc) - 2.0 * plogp(qc);
    }
    length
}

fn local_move(
    level: &LevelGraph,
    labels: &mut [usize],
    two_m: f64,
    node_entropy: f64,
    rng: &mut Pcg64,
) -> bool {
    let n = level.len();
    let mut visit = vec![0.0; n];
    let mut cut = vec![0.0; n];
    for v in 0..n {
        visit[labels[v]] += level.strength[v] / two_m;
        for &(u, w) in &level.neighbors[v] {
            if labels[u] != labels[v] {
                cut[labels[v]] += w;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut moved_any = false;
    for _pass in 0..100 {
        order.shuffle(rng);
        let mut moved_this_pass = false;
        for &v in &order {
            let current = labels[v];
            let mut weight_to: BTreeMap<usize, f64> = BTreeMap::new();
            for &(u, w) in &level.neighbors[v] {
                *weight_to.entry(labels[u]).or_insert(0.0) += w;
            }
            let external = level.external_strength(v);
            let p_v = level.strength[v] / two_m;
            let baseline = score(&cut, &visit, node_entropy, two_m);
            let mut best = (current, baseline);
            for (&c, &k_vc) in &weight_to {
                if c == current {
                    continue;
                }
                // apply the move virtually: v leaves `current`, joins `c`
                let k_cur = weight_to.get(&current).copied().unwrap_or(0.0);
                let old = (cut[current], cut[c], visit[current], visit[c]);
                cut[current] = cut[current] - (external - k_cur) + k_cur;
                cut[c] = cut[c] + (external - k_vc) - k_vc;
                visit[current] -= p_v;
                visit[c] += p_v;
                let candidate = score(&cut, &visit, node_entropy, two_m);
                cut[current] = old.0;
                cut[c] = old.1;
                visit[current] = old.2;
                visit[c] = old.3;
                if candidate < best.1 - 1e-12 {
                    best = (c, candidate);
                }
            }
            if best.0 != current {
                let c = best.0;
                let k_cur = weight_to.get(&current).copied().unwrap_or(0.0);
                let k_vc = weight_to.get(&c).copied().unwrap_or(0.0);
                cut[current] = cut[current] - (external - k_cur) + k_cur;
                cut[c] = cut[c] + (external - k_vc) - k_vc;
                visit[current] -= p_v;
                visit[c] += p_v;
                labels[v] = c;
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

fn score(cut: &[f64], visit: &[f64], node_entropy: f64, two_m: f64) -> f64 {
    let exit: Vec<f64> = cut.iter().map(|c| c / two_m).collect();
    codelength(&exit, visit, node_entropy)
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
