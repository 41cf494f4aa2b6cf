//! Community detection over the undirected projection, partition quality,
//! and 5P-category alignment.
//!
//! Four algorithms are provided: Girvan-Newman (edge-betweenness dendrogram
//! with modularity selection), Leiden (modularity with a refinement phase
//! guaranteeing connected communities), two-level Infomap (map-equation
//! minimization), and asynchronous label propagation. All are deterministic
//! for a fixed seed.

mod girvan_newman;
mod infomap;
mod label_propagation;
mod leiden;
mod level;

pub use girvan_newman::{girvan_newman, girvan_newman_dendrogram, girvan_newman_on};
pub use infomap::{infomap_two_level, infomap_two_level_on, map_equation};
pub use label_propagation::{label_propagation, label_propagation_on};
pub use leiden::{leiden, leiden_on};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{CausalGraph, FactorCategory, SimpleGraph};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CommunityError {
    #[error("operation requires a graph with at least one edge")]
    NoEdges,
    #[error("partition does not cover the graph: {0}")]
    PartitionMismatch(String),
}

/// A node-to-community assignment with 0-based contiguous community indices.
///
/// Assignments are positional: entry `i` labels the node at index `i` of the
/// graph's canonical (sorted-by-id) node order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    assignments: Vec<usize>,
    community_count: usize,
}

impl Partition {
    /// Builds from raw labels, renumbering them contiguously from 0 in
    /// first-appearance order.
    pub fn from_labels(labels: Vec<usize>) -> Partition {
        let mut remap: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        let mut assignments = Vec::with_capacity(labels.len());
        for label in labels {
            let next = remap.len();
            let idx = *remap.entry(label).or_insert(next);
            assignments.push(idx);
        }
        Partition {
            community_count: remap.len(),
            assignments,
        }
    }

    pub fn singletons(n: usize) -> Partition {
        Partition {
            assignments: (0..n).collect(),
            community_count: n,
        }
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    pub fn community_of(&self, node: usize) -> usize {
        self.assignments[node]
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Node indices grouped by community.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.community_count];
        for (node, &c) in self.assignments.iter().enumerate() {
            groups[c].push(node);
        }
        groups
    }

    fn check_covers(&self, g: &SimpleGraph) -> Result<(), CommunityError> {
        if self.assignments.len() != g.node_count() {
            return Err(CommunityError::PartitionMismatch(format!(
                "partition labels {} nodes, graph has {}",
                self.assignments.len(),
                g.node_count()
            )));
        }
        Ok(())
    }
}

/// Newman modularity with a resolution parameter:
/// `Q = sum_c [ e_c/m - resolution * (d_c / 2m)^2 ]`.
pub fn modularity(
    g: &SimpleGraph,
    p: &Partition,
    resolution: f64,
) -> Result<f64, CommunityError> {
    p.check_covers(g)?;
    let m = g.edge_count() as f64;
    if g.edge_count() == 0 {
        return Err(CommunityError::NoEdges);
    }
    let mut intra = vec![0.0f64; p.community_count()];
    let mut degree_total = vec![0.0f64; p.community_count()];
    for &(u, v) in g.edges() {
        if p.community_of(u) == p.community_of(v) {
            intra[p.community_of(u)] += 1.0;
        }
    }
    for v in 0..g.node_count() {
        degree_total[p.community_of(v)] += g.degree(v) as f64;
    }
    let mut q = 0.0;
    for c in 0..p.community_count() {
        let frac = degree_total[c] / (2.0 * m);
        q += intra[c] / m - resolution * frac * frac;
    }
    Ok(q)
}

/// Per-community composition against the 5P categories.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunityAlignment {
    pub community: usize,
    pub size: usize,
    pub majority_category: FactorCategory,
    pub majority_fraction: f64,
    pub member_ids: Vec<String>,
}

/// How well a partition lines up with the 5P categories.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignmentReport {
    pub communities: Vec<CommunityAlignment>,
    /// `sum_c max-category count / n`.
    pub purity: f64,
}

/// Majority category and purity per community. Ties break toward the
/// earlier category in enum order.
pub fn category_alignment(
    g: &CausalGraph,
    p: &Partition,
) -> Result<AlignmentReport, CommunityError> {
    if p.len() != g.node_count() {
        return Err(CommunityError::PartitionMismatch(format!(
            "partition labels {} nodes, graph has {}",
            p.len(),
            g.node_count()
        )));
    }
    if g.node_count() == 0 {
        return Err(CommunityError::PartitionMismatch(
            "graph has no nodes; alignment needs at least one".into(),
        ));
    }
    let nodes = g.nodes();
    let mut communities = Vec::with_capacity(p.community_count());
    let mut majority_total = 0usize;
    for (c, members) in p.groups().into_iter().enumerate() {
        let mut counts = [0usize; 5];
        for &v in &members {
            let cat_idx = FactorCategory::ALL
                .iter()
                .position(|&x| x == nodes[v].category)
                .expect("category in enum");
            counts[cat_idx] += 1;
        }
        let (best_idx, &best_count) = counts
            .iter()
            .enumerate()
            .max_by_key(|&(i, &count)| (count, std::cmp::Reverse(i)))
            .expect("five categories");
        majority_total += best_count;
        communities.push(CommunityAlignment {
            community: c,
            size: members.len(),
            majority_category: FactorCategory::ALL[best_idx],
            majority_fraction: best_count as f64 / members.len() as f64,
            member_ids: members.iter().map(|&v| nodes[v].id.clone()).collect(),
        });
    }
    Ok(AlignmentReport {
        purity: majority_total as f64 / g.node_count() as f64,
        communities,
    })
}

#[cfg(test)]
pub(crate) fn simple_for_tests(n: usize, pairs: &[(usize, usize)]) -> SimpleGraph {
    let ids: Vec<String> = (0..n).map(|i| format!("n{i:02}")).collect();
    let pairs: Vec<(String, String)> = pairs
        .iter()
        .map(|&(a, b)| (format!("n{a:02}"), format!("n{b:02}")))
        .collect();
    SimpleGraph::new(ids, pairs).unwrap()
}
