//! Brute-force reference computations.

// matrix-style indexed loops are the point here: the oracle mirrors the
// textbook definitions as literally as possible
#![allow(clippy::needless_range_loop)]

use caseform_core::graph::SimpleGraph;

pub const INFINITE: usize = usize::MAX / 4;

/// All-pairs shortest distances by Floyd-Warshall.
pub fn floyd_warshall(g: &SimpleGraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut dist = vec![vec![INFINITE; n]; n];
    for v in 0..n {
        dist[v][v] = 0;
    }
    for &(u, v) in g.edges() {
        dist[u][v] = 1;
        dist[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = dist[i][k].saturating_add(dist[k][j]);
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    dist
}

/// Every shortest path between every ordered pair, found by bounded DFS
/// enumeration. Returns, per node, the count of shortest paths it sits
/// strictly inside, and per pair the total shortest-path count.
fn enumerate_shortest_paths(g: &SimpleGraph, dist: &[Vec<usize>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = g.node_count();
    let mut interior = vec![0.0; n];
    let mut counts = vec![vec![0.0; n]; n];
    let mut through = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || dist[s][t] >= INFINITE {
                continue;
            }
            through.iter_mut().for_each(|x| *x = 0.0);
            let mut path = vec![s];
            let mut total = 0.0;
            dfs_paths(g, dist, t, &mut path, &mut total, &mut through);
            counts[s][t] = total;
            if total > 0.0 {
                for v in 0..n {
                    if v != s && v != t {
                        interior[v] += through[v] / total;
                    }
                }
            }
        }
    }
    (interior, counts)
}

fn dfs_paths(
    g: &SimpleGraph,
    dist: &[Vec<usize>],
    target: usize,
    path: &mut Vec<usize>,
    total: &mut f64,
    through: &mut [f64],
) {
    let current = *path.last().expect("path is non-empty");
    if current == target {
        *total += 1.0;
        for &v in &path[1..path.len() - 1] {
            through[v] += 1.0;
        }
        return;
    }
    for &w in g.neighbors(current) {
        // staying on a shortest path means each hop reduces distance to target
        if dist[w][target].saturating_add(1) == dist[current][target] {
            path.push(w);
            dfs_paths(g, dist, target, path, total, through);
            path.pop();
        }
    }
}

/// Betweenness by path enumeration, normalized like the production metric:
/// interior pair fractions over ordered pairs divided by `(n-1)(n-2)`.
pub fn betweenness(g: &SimpleGraph) -> Vec<f64> {
    let n = g.node_count();
    if n < 3 {
        return vec![0.0; n];
    }
    let dist = floyd_warshall(g);
    let (interior, _) = enumerate_shortest_paths(g, &dist);
    let norm = (n - 1) as f64 * (n - 2) as f64;
    interior.into_iter().map(|x| x / norm).collect()
}

pub fn degree_centrality(g: &SimpleGraph) -> Vec<f64> {
    let n = g.node_count();
    (0..n).map(|v| g.degree(v) as f64 / (n - 1) as f64).collect()
}

/// Wasserman-Faust closeness from Floyd-Warshall distances.
pub fn closeness(g: &SimpleGraph) -> Vec<f64> {
    let n = g.node_count();
    let dist = floyd_warshall(g);
    (0..n)
        .map(|v| {
            let mut reachable = 0usize;
            let mut total = 0usize;
            for w in 0..n {
                if dist[v][w] < INFINITE {
                    reachable += 1;
                    total += dist[v][w];
                }
            }
            if reachable < 2 || total == 0 {
                0.0
            } else {
                let r = reachable as f64;
                ((r - 1.0) / (n as f64 - 1.0)) * ((r - 1.0) / total as f64)
            }
        })
        .collect()
}

/// Triangle count by exhaustive triple scan.
pub fn triangles(g: &SimpleGraph) -> usize {
    let n = g.node_count();
    let mut count = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Connected (open or closed) triples: unordered `{u, w}` adjacent to a
/// shared center `v`, counted by exhaustive scan.
pub fn connected_triples(g: &SimpleGraph) -> usize {
    let n = g.node_count();
    let mut count = 0;
    for center in 0..n {
        for u in 0..n {
            for w in (u + 1)..n {
                if u != center && w != center && g.has_edge(center, u) && g.has_edge(center, w) {
                    count += 1;
                }
            }
        }
    }
    count
}

pub fn transitivity(g: &SimpleGraph) -> f64 {
    let triples = connected_triples(g);
    if triples == 0 {
        0.0
    } else {
        3.0 * triangles(g) as f64 / triples as f64
    }
}

/// Local clustering per node, straight from the definition.
pub fn local_clustering(g: &SimpleGraph) -> Vec<f64> {
    let n = g.node_count();
    (0..n)
        .map(|v| {
            let neighbors = g.neighbors(v);
            let k = neighbors.len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0;
            for i in 0..k {
                for j in (i + 1)..k {
                    if g.has_edge(neighbors[i], neighbors[j]) {
                        links += 1;
                    }
                }
            }
            2.0 * links as f64 / (k * (k - 1)) as f64
        })
        .collect()
}

/// `(diameter, mean shortest path, fully connected)` over reachable ordered
/// pairs; `None` if no finite pair exists.
pub fn path_stats(g: &SimpleGraph) -> Option<(usize, f64, bool)> {
    let n = g.node_count();
    let dist = floyd_warshall(g);
    let mut finite = 0usize;
    let mut total = 0usize;
    let mut diameter = 0usize;
    for s in 0..n {
        for t in 0..n {
            if s != t && dist[s][t] < INFINITE {
                finite += 1;
                total += dist[s][t];
                diameter = diameter.max(dist[s][t]);
            }
        }
    }
    if finite == 0 {
        return None;
    }
    Some((
        diameter,
        total as f64 / finite as f64,
        finite == n * (n - 1),
    ))
}

/// Degree assortativity via direct Pearson on the endpoint-degree lists;
/// `None` when either variance vanishes.
pub fn assortativity(g: &SimpleGraph) -> Option<f64> {
    if g.edge_count() == 0 {
        return None;
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(u, v) in g.edges() {
        xs.push(g.degree(u) as f64);
        ys.push(g.degree(v) as f64);
        xs.push(g.degree(v) as f64);
        ys.push(g.degree(u) as f64);
    }
    pearson(&xs, &ys)
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0f64;
    let mut vx = 0.0f64;
    let mut vy = 0.0f64;
    for (&x, &y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    if vx == 0.0 || vy == 0.0 {
        None
    } else {
        Some(cov / (vx.sqrt() * vy.sqrt()))
    }
}

/// Egonet features of `v` by explicit set construction: degree, clustering,
/// neighbor means, internal edges, outgoing edges, egonet neighbor count.
///
/// Means follow the crate's canonical arithmetic (summands sorted by value
/// before adding) so exact-equality comparison is meaningful.
pub fn egonet_features(g: &SimpleGraph, v: usize) -> [f64; 7] {
    let clustering = local_clustering(g);
    let neighbors: Vec<usize> = g.neighbors(v).to_vec();
    let degree = neighbors.len() as f64;
    let sorted_mean = |mut values: Vec<f64>| -> f64 {
        if values.is_empty() {
            return 0.0;
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        values.iter().sum::<f64>() / degree
    };
    let mean_nbr_degree = sorted_mean(neighbors.iter().map(|&u| g.degree(u) as f64).collect());
    let mean_nbr_clustering = sorted_mean(neighbors.iter().map(|&u| clustering[u]).collect());
    let egonet: std::collections::BTreeSet<usize> =
        neighbors.iter().copied().chain([v]).collect();
    let mut internal = 0usize;
    let mut outgoing = 0usize;
    let mut outside = std::collections::BTreeSet::new();
    for &(a, b) in g.edges() {
        let ina = egonet.contains(&a);
        let inb = egonet.contains(&b);
        if ina && inb {
            internal += 1;
        } else if ina || inb {
            outgoing += 1;
            outside.insert(if ina { b } else { a });
        }
    }
    [
        degree,
        clustering[v],
        mean_nbr_degree,
        mean_nbr_clustering,
        internal as f64,
        outgoing as f64,
        outside.len() as f64,
    ]
}

/// Fleiss' kappa by agreeing-pair counting: per subject, the fraction of
/// ordered rater pairs that agree; chance agreement from category shares.
pub fn fleiss_kappa_pairwise(counts: &[Vec<u32>], raters: u32) -> Option<f64> {
    let subjects = counts.len() as f64;
    let n = raters as f64;
    let categories = counts[0].len();
    let mut observed = 0.0;
    for row in counts {
        let mut agreeing_ordered_pairs = 0.0;
        for &c in row {
            // each pair of distinct raters who chose this category agrees
            agreeing_ordered_pairs += c as f64 * (c as f64 - 1.0);
        }
        observed += agreeing_ordered_pairs / (n * (n - 1.0));
    }
    observed /= subjects;
    let mut expected = 0.0;
    for j in 0..categories {
        let share: f64 = counts.iter().map(|row| row[j] as f64).sum::<f64>() / (subjects * n);
        expected += share * share;
    }
    if (1.0 - expected).abs() < 1e-12 {
        return None;
    }
    Some((observed - expected) / (1.0 - expected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::random_simple_graph;

    #[test]
    fn oracle_self_consistency_on_a_known_graph() {
        // two triangles joined by a bridge
        let g = crate_test_graph();
        assert_eq!(triangles(&g), 2);
        assert_eq!(connected_triples(&g), 10);
        let (diameter, _, connected) = path_stats(&g).unwrap();
        assert_eq!(diameter, 3);
        assert!(connected);
    }

    fn crate_test_graph() -> SimpleGraph {
        let ids: Vec<String> = (0..6).map(|i| format!("n{i:02}")).collect();
        let pairs = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]
            .iter()
            .map(|&(a, b)| (format!("n{a:02}"), format!("n{b:02}")))
            .collect();
        SimpleGraph::new(ids, pairs).unwrap()
    }

    #[test]
    fn floyd_warshall_matches_bfs() {
        for seed in 0..20 {
            let g = random_simple_graph(seed, 8, 0.3);
            let fw = floyd_warshall(&g);
            for v in 0..g.node_count() {
                let bfs = g.bfs_distances(v);
                for w in 0..g.node_count() {
                    match bfs[w] {
                        Some(d) => assert_eq!(fw[v][w], d),
                        None => assert!(fw[v][w] >= INFINITE),
                    }
                }
            }
        }
    }
}
