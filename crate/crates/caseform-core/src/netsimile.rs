//! NetSimile structural signatures and similarity.
//!
//! Each node gets a 7-feature structural description; the graph signature
//! aggregates every feature column with five moments (median, mean,
//! population standard deviation, skewness, excess kurtosis), giving a
//! 35-number vector. Two graphs are compared by Canberra distance between
//! signatures, mapped onto `[0, 1]` as `1 - d/35` (each Canberra term is
//! bounded by 1, so 35 is the tight normalizer).
//!
//! Signatures are computed on the undirected simple projection.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{CausalGraph, SimpleGraph};

/// Per-node features, in signature order.
pub const FEATURE_NAMES: [&str; 7] = [
    "degree",
    "clustering_coefficient",
    "mean_neighbor_degree",
    "mean_neighbor_clustering",
    "egonet_internal_edges",
    "egonet_outgoing_edges",
    "egonet_neighbor_count",
];

/// Aggregates applied to each feature column, in signature order.
pub const AGGREGATE_NAMES: [&str; 5] = ["median", "mean", "std", "skewness", "kurtosis"];

pub const SIGNATURE_LEN: usize = 35;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetSimileError {
    #[error("node `{0}` is not in the graph")]
    UnknownNode(String),
    #[error("signature requires a non-empty graph")]
    EmptyGraph,
    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// The 7 structural features of a single node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeFeatureVector {
    pub degree: f64,
    pub clustering: f64,
    pub mean_neighbor_degree: f64,
    pub mean_neighbor_clustering: f64,
    pub egonet_internal_edges: f64,
    pub egonet_outgoing_edges: f64,
    pub egonet_neighbor_count: f64,
}

impl NodeFeatureVector {
    pub fn as_array(&self) -> [f64; 7] {
        [
            self.degree,
            self.clustering,
            self.mean_neighbor_degree,
            self.mean_neighbor_clustering,
            self.egonet_internal_edges,
            self.egonet_outgoing_edges,
            self.egonet_neighbor_count,
        ]
    }
}

/// 35-entry aggregated signature; layout is feature-major
/// (`FEATURE_NAMES[i]` occupies entries `5i..5i+5` in `AGGREGATE_NAMES`
/// order).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetSimileSignature(pub Vec<f64>);

impl NetSimileSignature {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Structural features of `v`'s egonet (`v` plus its neighbors).
///
/// Means over empty neighbor sets are 0. Internal edges have both endpoints
/// in the egonet; outgoing edges have exactly one; the neighbor count is the
/// number of distinct outside nodes adjacent to the egonet.
pub fn node_features(g: &SimpleGraph, v: usize) -> Result<NodeFeatureVector, NetSimileError> {
    if v >= g.node_count() {
        return Err(NetSimileError::UnknownNode(format!("#{v}")));
    }
    let clustering = local_clustering(g, v);
    let neighbors = g.neighbors(v);
    let degree = neighbors.len() as f64;

    // sum in value order so isomorphic graphs get bit-identical features
    let sorted_mean = |values: Vec<f64>| -> f64 {
        if values.is_empty() {
            return 0.0;
        }
        let mut values = values;
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite features"));
        values.iter().sum::<f64>() / degree
    };
    let mean_neighbor_degree =
        sorted_mean(neighbors.iter().map(|&u| g.degree(u) as f64).collect());
    let mean_neighbor_clustering =
        sorted_mean(neighbors.iter().map(|&u| local_clustering(g, u)).collect());

    let mut egonet = vec![false; g.node_count()];
    egonet[v] = true;
    for &u in neighbors {
        egonet[u] = true;
    }
    let mut internal = 0usize;
    let mut outgoing = 0usize;
    let mut outside: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
    for &(a, b) in g.edges() {
        match (egonet[a], egonet[b]) {
            (true, true) => internal += 1,
            (true, false) => {
                outgoing += 1;
                outside.insert(b);
            }
            (false, true) => {
                outgoing += 1;
                outside.insert(a);
            }
            (false, false) => {}
        }
    }

    Ok(NodeFeatureVector {
        degree,
        clustering,
        mean_neighbor_degree,
        mean_neighbor_clustering,
        egonet_internal_edges: internal as f64,
        egonet_outgoing_edges: outgoing as f64,
        egonet_neighbor_count: outside.len() as f64,
    })
}

/// Local clustering coefficient: fraction of neighbor pairs that are linked.
/// Zero for degree < 2.
pub(crate) fn local_clustering(g: &SimpleGraph, v: usize) -> f64 {
    let neighbors = g.neighbors(v);
    let k = neighbors.len();
    if k < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for i in 0..k {
        for j in (i + 1)..k {
            if g.has_edge(neighbors[i], neighbors[j]) {
                links += 1;
            }
        }
    }
    2.0 * links as f64 / (k as f64 * (k - 1) as f64)
}

/// Full 35-entry signature of a non-empty graph.
pub fn graph_signature(g: &SimpleGraph) -> Result<NetSimileSignature, NetSimileError> {
    if g.node_count() == 0 {
        return Err(NetSimileError::EmptyGraph);
    }
    let mut columns: [Vec<f64>; 7] = Default::default();
    for v in 0..g.node_count() {
        let features = node_features(g, v)?.as_array();
        for (column, value) in columns.iter_mut().zip(features) {
            column.push(value);
        }
    }
    let mut signature = Vec::with_capacity(SIGNATURE_LEN);
    for column in &mut columns {
        // sorting makes aggregation independent of node order, so isomorphic
        // graphs produce bit-identical signatures
        column.sort_by(|a, b| a.partial_cmp(b).expect("features are finite"));
        signature.extend(aggregate(column));
    }
    Ok(NetSimileSignature(signature))
}

/// `[median, mean, std, skewness, excess kurtosis]` of a sorted column.
/// Population moments; zero-variance columns define skew and kurtosis as 0.
fn aggregate(sorted: &[f64]) -> [f64; 5] {
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let nf = n as f64;
    let mean = sorted.iter().sum::<f64>() / nf;
    let spread = sorted[n - 1] - sorted[0];
    // exact-constant guard: deviations of a constant column are pure rounding noise
    if spread <= 1e-12 * (1.0 + mean.abs()) {
        return [median, mean, 0.0, 0.0, 0.0];
    }
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in sorted {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    let std = m2.sqrt();
    let skewness = m3 / (m2 * std);
    let kurtosis = m4 / (m2 * m2) - 3.0;
    [median, mean, std, skewness, kurtosis]
}

/// Canberra distance: sum of `|x_i - y_i| / (|x_i| + |y_i|)`; `0/0` terms
/// contribute 0, so the result lies in `[0, len]`.
pub fn canberra_distance(x: &[f64], y: &[f64]) -> Result<f64, NetSimileError> {
    if x.len() != y.len() {
        return Err(NetSimileError::LengthMismatch(x.len(), y.len()));
    }
    let mut total = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let denom = a.abs() + b.abs();
        if denom > 0.0 {
            total += (a - b).abs() / denom;
        }
    }
    Ok(total)
}

/// NetSimile similarity between two causal graphs:
/// `1 - canberra(sig(proj(g1)), sig(proj(g2))) / 35`, in `[0, 1]`.
pub fn netsimile_similarity(g1: &CausalGraph, g2: &CausalGraph) -> Result<f64, NetSimileError> {
    let s1 = graph_signature(&g1.undirected_projection())?;
    let s2 = graph_signature(&g2.undirected_projection())?;
    let d = canberra_distance(s1.as_slice(), s2.as_slice())?;
    Ok(1.0 - d / SIGNATURE_LEN as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple(n: usize, pairs: &[(usize, usize)]) -> SimpleGraph {
        let ids: Vec<String> = (0..n).map(|i| format!("n{i:02}")).collect();
        let pairs: Vec<(String, String)> = pairs
            .iter()
            .map(|&(a, b)| (format!("n{a:02}"), format!("n{b:02}")))
            .collect();
        SimpleGraph::new(ids, pairs).unwrap()
    }

    #[test]
    fn isolated_node_features_are_zero() {
        let g = simple(1, &[]);
        let f = node_features(&g, 0).unwrap();
        assert_eq!(f.as_array(), [0.0; 7]);
    }

    #[test]
    fn triangle_node_features() {
        let g = simple(3, &[(0, 1), (0, 2), (1, 2)]);
        let f = node_features(&g, 0).unwrap();
        assert_eq!(
            f.as_array(),
            [2.0, 1.0, 2.0, 1.0, 3.0, 0.0, 0.0]
        );
    }

    #[test]
    fn star_center_features() {
        let g = simple(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let f = node_features(&g, 0).unwrap();
        assert_eq!(f.degree, 4.0);
        assert_eq!(f.clustering, 0.0);
        assert_eq!(f.mean_neighbor_degree, 1.0);
        assert_eq!(f.egonet_internal_edges, 4.0);
        assert_eq!(f.egonet_outgoing_edges, 0.0);
        assert_eq!(f.egonet_neighbor_count, 0.0);
    }

    #[test]
    fn unknown_node_rejected() {
        let g = simple(1, &[]);
        assert!(matches!(node_features(&g, 5), Err(NetSimileError::UnknownNode(_))));
    }

    #[test]
    fn single_node_signature_is_all_zero() {
        let g = simple(1, &[]);
        let sig = graph_signature(&g).unwrap();
        assert_eq!(sig.as_slice(), &[0.0; 35][..]);
    }

    #[test]
    fn triangle_signature_degree_block() {
        let g = simple(3, &[(0, 1), (0, 2), (1, 2)]);
        let sig = graph_signature(&g).unwrap();
        assert_eq!(&sig.as_slice()[0..5], &[2.0, 2.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn empty_graph_has_no_signature() {
        let g = simple(0, &[]);
        assert!(matches!(graph_signature(&g), Err(NetSimileError::EmptyGraph)));
    }

    #[test]
    fn canberra_identity_and_hand_values() {
        assert_eq!(canberra_distance(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(canberra_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 2.0);
        assert_eq!(canberra_distance(&[0.0, 0.0], &[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn canberra_length_mismatch() {
        assert!(matches!(
            canberra_distance(&[1.0], &[1.0, 2.0]),
            Err(NetSimileError::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn signature_exports_as_a_35_entry_array() {
        assert_eq!(FEATURE_NAMES.len() * AGGREGATE_NAMES.len(), SIGNATURE_LEN);
        let g = simple(3, &[(0, 1)]);
        let json = serde_json::to_value(graph_signature(&g).unwrap()).unwrap();
        assert_eq!(json.as_array().unwrap().len(), SIGNATURE_LEN);
    }
}
