//! Girvan-Newman: iterative removal of the highest-betweenness edge,
//! returning the dendrogram partition with maximum modularity.

use super::{modularity, Partition};
use crate::graph::{CausalGraph, SimpleGraph};

pub fn girvan_newman(g: &CausalGraph) -> Partition {
    girvan_newman_on(&g.undirected_projection())
}

/// Runs the full dendrogram and returns its best partition by modularity
/// (ties: fewest communities, then earliest). An edgeless graph yields
/// singleton communities.
pub fn girvan_newman_on(g: &SimpleGraph) -> Partition {
    let dendrogram = girvan_newman_dendrogram(g);
    select_best(g, &dendrogram)
}

/// Every partition recorded along the removal sequence: the initial
/// component partition, then one entry per removed edge.
pub fn girvan_newman_dendrogram(g: &SimpleGraph) -> Vec<Partition> {
    let n = g.node_count();
    let mut alive: Vec<(usize, usize)> = g.edges().to_vec();
    let mut recorded = vec![component_partition(n, &alive)];
    while !alive.is_empty() {
        let betweenness = edge_betweenness(n, &alive);
        // alive is kept sorted, so strict comparison picks the
        // lexicographically smallest endpoint pair among ties
        let mut best = 0;
        for i in 1..alive.len() {
            if betweenness[i] > betweenness[best] {
                best = i;
            }
        }
        alive.remove(best);
        recorded.push(component_partition(n, &alive));
    }
    recorded
}

fn select_best(g: &SimpleGraph, dendrogram: &[Partition]) -> Partition {
    if g.edge_count() == 0 {
        return Partition::singletons(g.node_count());
    }
    let mut best: Option<(f64, &Partition)> = None;
    for p in dendrogram {
        let q = modularity(g, p, 1.0).expect("edge count checked above");
        best = match best {
            None => Some((q, p)),
            Some((bq, bp)) => {
                if q > bq || (q == bq && p.community_count() < bp.community_count()) {
                    Some((q, p))
                } else {
                    Some((bq, bp))
                }
            }
        };
    }
    best.expect("dendrogram is non-empty").1.clone()
}

fn component_partition(n: usize, edges: &[(usize, usize)]) -> Partition {
    let mut adjacency = vec![Vec::new(); n];
    for &(u, v) in edges {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = next;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if labels[w] == usize::MAX {
                    labels[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    Partition::from_labels(labels)
}

/// Brandes-style edge betweenness accumulated over all ordered source
/// pairs; values are aligned with the `edges` slice.
fn edge_betweenness(n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (idx, &(u, v)) in edges.iter().enumerate() {
        adjacency[u].push((v, idx));
        adjacency[v].push((u, idx));
    }
    let mut betweenness = vec![0.0; edges.len()];
    for s in 0..n {
        let mut stack = Vec::new();
        let mut pred: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist: Vec<isize> = vec![-1; n];
        sigma[s] = 1.0;
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &(w, edge_idx) in &adjacency[v] {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    pred[w].push((v, edge_idx));
                }
            }
        }
        let mut delta = vec![0.0f64; n];
        while let Some(w) = stack.pop() {
            for &(v, edge_idx) in &pred[w] {
                let contribution = sigma[v] / sigma[w] * (1.0 + delta[w]);
                betweenness[edge_idx] += contribution;
                delta[v] += contribution;
            }
        }
    }
    betweenness
}
