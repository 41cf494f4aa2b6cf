//! Graph-theory statistics: density, centralities, clustering, paths,
//! assortativity, degree-distribution distances, and 5P inter-category
//! connectivity.
//!
//! Density and category connectivity are computed on the directed graph;
//! centralities, clustering, paths, and assortativity on the undirected
//! projection, matching the conventions of the underlying metric
//! literature. Disconnected graphs are handled with Wasserman-Faust
//! closeness and reachable-pair path statistics rather than errors.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{CausalGraph, FactorCategory, SimpleGraph};
use crate::netsimile::local_clustering;

/// Smoothing added to every bin of `q` before KL divergence.
pub const KL_EPSILON: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("metric requires at least {needed} nodes, graph has {actual}")]
    TooFewNodes { needed: usize, actual: usize },
    #[error("no finite node pair exists (graph has no edges)")]
    NoEdges,
    #[error("endpoint degrees have zero variance; assortativity is undefined")]
    ZeroVariance,
}

/// Directed edge density `m / (n * (n - 1))`.
pub fn edge_density(g: &CausalGraph) -> Result<f64, TopologyError> {
    let n = g.node_count();
    if n < 2 {
        return Err(TopologyError::TooFewNodes { needed: 2, actual: n });
    }
    Ok(g.edge_count() as f64 / (n as f64 * (n as f64 - 1.0)))
}

/// One centrality column: per-node values (canonical node order) plus mean
/// and max.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityColumn {
    pub per_node: Vec<f64>,
    pub mean: f64,
    pub max: f64,
}

impl CentralityColumn {
    fn from_values(per_node: Vec<f64>) -> CentralityColumn {
        let n = per_node.len() as f64;
        let mean = per_node.iter().sum::<f64>() / n;
        let max = per_node.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        CentralityColumn { per_node, mean, max }
    }
}

/// Degree, betweenness, and closeness centrality on the undirected
/// projection, all normalized to `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Centralities {
    pub degree: CentralityColumn,
    pub betweenness: CentralityColumn,
    pub closeness: CentralityColumn,
}

pub fn centralities(g: &CausalGraph) -> Result<Centralities, TopologyError> {
    let simple = g.undirected_projection();
    centralities_on(&simple)
}

pub fn centralities_on(g: &SimpleGraph) -> Result<Centralities, TopologyError> {
    let n = g.node_count();
    if n < 2 {
        return Err(TopologyError::TooFewNodes { needed: 2, actual: n });
    }
    let degree: Vec<f64> = (0..n).map(|v| g.degree(v) as f64 / (n - 1) as f64).collect();

    let raw = brandes_betweenness(g);
    // raw counts ordered pairs; halve for unordered, normalize by (n-1)(n-2)/2
    let betweenness: Vec<f64> = if n < 3 {
        vec![0.0; n]
    } else {
        let norm = (n - 1) as f64 * (n - 2) as f64;
        raw.iter().map(|b| b / norm).collect()
    };

    let closeness: Vec<f64> = (0..n).map(|v| wasserman_faust_closeness(g, v)).collect();

    Ok(Centralities {
        degree: CentralityColumn::from_values(degree),
        betweenness: CentralityColumn::from_values(betweenness),
        closeness: CentralityColumn::from_values(closeness),
    })
}

/// Brandes' accumulation over ordered source/target pairs on an unweighted
/// undirected graph. Unreachable pairs contribute nothing.
fn brandes_betweenness(g: &SimpleGraph) -> Vec<f64> {
    let n = g.node_count();
    let mut betweenness = vec![0.0; n];
    for s in 0..n {
        let mut stack = Vec::new();
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist: Vec<isize> = vec![-1; n];
        sigma[s] = 1.0;
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    pred[w].push(v);
                }
            }
        }
        let mut delta = vec![0.0f64; n];
        while let Some(w) = stack.pop() {
            for &v in &pred[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                betweenness[w] += delta[w];
            }
        }
    }
    betweenness
}

/// Wasserman-Faust composite closeness:
/// `((r - 1) / (n - 1)) * ((r - 1) / sum_of_distances)` where `r` counts the
/// nodes reachable from `v` (including `v`). Well-defined on disconnected
/// graphs; isolated nodes score 0.
fn wasserman_faust_closeness(g: &SimpleGraph, v: usize) -> f64 {
    let n = g.node_count();
    let dist = g.bfs_distances(v);
    let mut reachable = 0usize;
    let mut total = 0usize;
    for d in dist.into_iter().flatten() {
        reachable += 1;
        total += d;
    }
    if reachable < 2 || total == 0 {
        return 0.0;
    }
    let r = reachable as f64;
    ((r - 1.0) / (n as f64 - 1.0)) * ((r - 1.0) / total as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusteringStats {
    /// Local coefficient per node, canonical order; 0 where degree < 2.
    pub per_node: Vec<f64>,
    pub mean_local: f64,
    /// Global transitivity: `3 * triangles / connected triples` (0 when no
    /// triples exist).
    pub transitivity: f64,
    pub triangle_count: usize,
}

pub fn clustering_stats(g: &CausalGraph) -> ClusteringStats {
    clustering_stats_on(&g.undirected_projection())
}

pub fn clustering_stats_on(g: &SimpleGraph) -> ClusteringStats {
    let n = g.node_count();
    let per_node: Vec<f64> = (0..n).map(|v| local_clustering(g, v)).collect();
    let mean_local = if n == 0 { 0.0 } else { per_node.iter().sum::<f64>() / n as f64 };
    let mut triangles = 0usize;
    for &(u, v) in g.edges() {
        // count common neighbors above v to hit each triangle once
        for &w in g.neighbors(u) {
            if w > v && g.has_edge(v, w) {
                triangles += 1;
            }
        }
    }
    let triples: usize = (0..n).map(|v| g.degree(v) * g.degree(v).saturating_sub(1) / 2).sum();
    let transitivity = if triples == 0 { 0.0 } else { 3.0 * triangles as f64 / triples as f64 };
    ClusteringStats {
        per_node,
        mean_local,
        transitivity,
        triangle_count: triangles,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathStats {
    /// Longest finite shortest-path distance.
    pub diameter: usize,
    /// Mean over finite ordered pairs.
    pub mean_shortest_path: f64,
    /// True when every ordered node pair is reachable.
    pub fully_connected: bool,
}

pub fn path_stats(g: &CausalGraph) -> Result<PathStats, TopologyError> {
    path_stats_on(&g.undirected_projection())
}

pub fn path_stats_on(g: &SimpleGraph) -> Result<PathStats, TopologyError> {
    let n = g.node_count();
    if n < 2 {
        return Err(TopologyError::TooFewNodes { needed: 2, actual: n });
    }
    let mut finite_pairs = 0usize;
    let mut total = 0usize;
    let mut diameter = 0usize;
    for v in 0..n {
        for (w, d) in g.bfs_distances(v).into_iter().enumerate() {
            if w == v {
                continue;
            }
            if let Some(d) = d {
                finite_pairs += 1;
                total += d;
                diameter = diameter.max(d);
            }
        }
    }
    if finite_pairs == 0 {
        return Err(TopologyError::NoEdges);
    }
    Ok(PathStats {
        diameter,
        mean_shortest_path: total as f64 / finite_pairs as f64,
        fully_connected: finite_pairs == n * (n - 1),
    })
}

/// Pearson correlation of endpoint degrees over the undirected edges (each
/// edge contributes both orientations). Errors with `ZeroVariance` when all
/// endpoint degrees are equal, e.g. on regular graphs.
pub fn degree_assortativity(g: &CausalGraph) -> Result<f64, TopologyError> {
    degree_assortativity_on(&g.undirected_projection())
}

pub fn degree_assortativity_on(g: &SimpleGraph) -> Result<f64, TopologyError> {
    if g.edge_count() == 0 {
        return Err(TopologyError::NoEdges);
    }
    let mut xs = Vec::with_capacity(2 * g.edge_count());
    let mut ys = Vec::with_capacity(2 * g.edge_count());
    for &(u, v) in g.edges() {
        let (du, dv) = (g.degree(u) as f64, g.degree(v) as f64);
        xs.push(du);
        ys.push(dv);
        xs.push(dv);
        ys.push(du);
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0f64;
    let mut var_x = 0.0f64;
    let mut var_y = 0.0f64;
    for (&x, &y) in xs.iter().zip(&ys) {
        cov += (x - mean_x) * (y - mean_y);
        var_x += (x - mean_x) * (x - mean_x);
        var_y += (y - mean_y) * (y - mean_y);
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(TopologyError::ZeroVariance);
    }
    Ok(cov / (var_x.sqrt() * var_y.sqrt()))
}

/// Empirical probability mass over total-degree values `0..=max_degree`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeHistogram {
    mass: Vec<f64>,
}

impl DegreeHistogram {
    /// Normalizes raw masses to unit sum. Intended for tests and synthetic
    /// distributions; panics on negative or all-zero input.
    pub fn from_masses(raw: &[f64]) -> DegreeHistogram {
        assert!(raw.iter().all(|&x| x >= 0.0), "histogram mass must be nonnegative");
        let total: f64 = raw.iter().sum();
        assert!(total > 0.0, "histogram needs positive total mass");
        DegreeHistogram {
            mass: raw.iter().map(|&x| x / total).collect(),
        }
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Mass vector padded with zeros to `len`.
    fn aligned(&self, len: usize) -> Vec<f64> {
        let mut out = self.mass.clone();
        out.resize(len, 0.0);
        out
    }
}

/// Distribution of total degree (in + out) over the directed graph.
pub fn degree_distribution(g: &CausalGraph) -> DegreeHistogram {
    let degrees = g.degree_sequences();
    let max_degree = degrees.iter().map(|d| d.total_degree).max().unwrap_or(0);
    let mut counts = vec![0usize; max_degree + 1];
    for d in &degrees {
        counts[d.total_degree] += 1;
    }
    let n = degrees.len().max(1) as f64;
    DegreeHistogram {
        mass: counts.iter().map(|&c| c as f64 / n).collect(),
    }
}

/// `KL(p || q)` in nats over supports aligned to their union. `q` is
/// smoothed by adding [`KL_EPSILON`] to every bin and renormalizing, so the
/// divergence stays finite when `p` has mass outside `q`'s support.
pub fn kl_divergence(p: &DegreeHistogram, q: &DegreeHistogram) -> f64 {
    let len = p.mass.len().max(q.mass.len());
    let p = p.aligned(len);
    let mut q = q.aligned(len);
    for bin in &mut q {
        *bin += KL_EPSILON;
    }
    let q_total: f64 = q.iter().sum();
    let mut kl = 0.0;
    for (&pi, &qi) in p.iter().zip(&q) {
        if pi > 0.0 {
            kl += pi * (pi / (qi / q_total)).ln();
        }
    }
    kl
}

/// 1-D Earth Mover's Distance with unit ground distance between adjacent
/// degree values: the L1 distance between CDFs. Symmetric.
pub fn emd_1d(p: &DegreeHistogram, q: &DegreeHistogram) -> f64 {
    let len = p.mass.len().max(q.mass.len());
    let p = p.aligned(len);
    let q = q.aligned(len);
    let mut cdf_gap = 0.0;
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(&q) {
        cdf_gap += pi - qi;
        total += cdf_gap.abs();
    }
    total
}

/// Directed edge counts and densities between ordered pairs of the four
/// generated 5P categories.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryConnectivity {
    /// Row/column order.
    pub categories: [FactorCategory; 4],
    /// Node count per category.
    pub sizes: [usize; 4],
    /// `counts[i][j]` = edges with source in category `i`, target in `j`.
    pub counts: [[usize; 4]; 4],
    /// `count / (|A| * |B|)` off-diagonal, `count / (|A| * (|A| - 1))` on the
    /// diagonal; `None` where the normalizer is zero.
    pub densities: [[Option<f64>; 4]; 4],
}

pub fn inter_category_connectivity(g: &CausalGraph) -> CategoryConnectivity {
    let categories = FactorCategory::GENERATED;
    let index_of = |c: FactorCategory| categories.iter().position(|&x| x == c);

    let mut sizes = [0usize; 4];
    let mut node_cat: BTreeMap<&str, usize> = BTreeMap::new();
    for node in g.nodes() {
        if let Some(i) = index_of(node.category) {
            sizes[i] += 1;
            node_cat.insert(node.id.as_str(), i);
        }
    }
    let mut counts = [[0usize; 4]; 4];
    for edge in g.edges() {
        if let (Some(&s), Some(&t)) = (
            node_cat.get(edge.source.as_str()),
            node_cat.get(edge.target.as_str()),
        ) {
            counts[s][t] += 1;
        }
    }
    let mut densities = [[None; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let pairs = if i == j {
                sizes[i] * sizes[i].saturating_sub(1)
            } else {
                sizes[i] * sizes[j]
            };
            if pairs > 0 {
                densities[i][j] = Some(counts[i][j] as f64 / pairs as f64);
            }
        }
    }
    CategoryConnectivity {
        categories,
        sizes,
        counts,
        densities,
    }
}

/// Conventions baked into the metric definitions, emitted alongside reports
/// so downstream consumers can audit comparability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricConventions {
    pub kl_smoothing_epsilon: f64,
    pub moments: &'static str,
    pub closeness: &'static str,
    pub projection: &'static str,
}

impl Default for MetricConventions {
    fn default() -> Self {
        MetricConventions {
            kl_smoothing_epsilon: KL_EPSILON,
            moments: "population moments; zero-variance skewness/kurtosis defined as 0; kurtosis is excess",
            closeness: "Wasserman-Faust composite over reachable nodes",
            projection: "centrality/clustering/path/assortativity on the undirected simple projection; density and category connectivity on the directed graph",
        }
    }
}

/// Bundle of every per-graph metric, mirroring the topology / clustering /
/// centrality report groups.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub session_id: String,
    pub node_count: usize,
    pub edge_count: usize,
    pub edge_density: f64,
    pub node_ids: Vec<String>,
    pub centrality: Centralities,
    pub clustering: ClusteringStats,
    /// `None` when no finite pair exists (edgeless graph).
    pub diameter: Option<usize>,
    pub mean_shortest_path: Option<f64>,
    pub fully_connected: bool,
    /// `None` when undefined (regular graph or no edges).
    pub degree_assortativity: Option<f64>,
    pub cycle_present: bool,
    pub degree_distribution: Vec<f64>,
    pub category_connectivity: CategoryConnectivity,
    pub conventions: MetricConventions,
}

/// Computes the full metric report for a graph with at least 2 nodes.
pub fn metrics_report(g: &CausalGraph) -> Result<MetricsReport, TopologyError> {
    let density = edge_density(g)?;
    let centrality = centralities(g)?;
    let clustering = clustering_stats(g);
    let paths = match path_stats(g) {
        Ok(stats) => Some(stats),
        Err(TopologyError::NoEdges) => None,
        Err(other) => return Err(other),
    };
    let assortativity = match degree_assortativity(g) {
        Ok(value) => Some(value),
        Err(TopologyError::ZeroVariance) | Err(TopologyError::NoEdges) => None,
        Err(other) => return Err(other),
    };
    Ok(MetricsReport {
        session_id: g.session_id().to_string(),
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        edge_density: density,
        node_ids: g.nodes().iter().map(|n| n.id.clone()).collect(),
        centrality,
        clustering,
        diameter: paths.as_ref().map(|p| p.diameter),
        mean_shortest_path: paths.as_ref().map(|p| p.mean_shortest_path),
        fully_connected: paths.map(|p| p.fully_connected).unwrap_or(false),
        degree_assortativity: assortativity,
        cycle_present: g.has_cycle(),
        degree_distribution: degree_distribution(g).mass().to_vec(),
        category_connectivity: inter_category_connectivity(g),
        conventions: MetricConventions::default(),
    })
}
