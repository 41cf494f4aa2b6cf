//! Weighted aggregate graph shared by the Leiden and Infomap optimizers.

use crate::graph::SimpleGraph;

/// A weighted undirected multigraph produced by collapsing communities.
/// Intra-community edges become self-loops; `members` tracks which original
/// nodes each supernode covers.
#[derive(Debug, Clone)]
pub(crate) struct LevelGraph {
    /// Per node: `(neighbor, weight)` pairs, sorted by neighbor, no self entries.
    pub neighbors: Vec<Vec<(usize, f64)>>,
    /// Self-loop weight per node (intra edge weight, counted once).
    pub self_loop: Vec<f64>,
    /// `sum of incident weights + 2 * self_loop`; equals original degree sums.
    pub strength: Vec<f64>,
    /// Original node indices per supernode, sorted.
    pub members: Vec<Vec<usize>>,
}

impl LevelGraph {
    pub fn from_simple(g: &SimpleGraph) -> LevelGraph {
        let n = g.node_count();
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in g.edges() {
            neighbors[u].push((v, 1.0));
            neighbors[v].push((u, 1.0));
        }
        for list in &mut neighbors {
            list.sort_by_key(|&(w, _)| w);
        }
        LevelGraph {
            self_loop: vec![0.0; n],
            strength: (0..n).map(|v| g.degree(v) as f64).collect(),
            members: (0..n).map(|v| vec![v]).collect(),
            neighbors,
        }
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    /// Total edge weight `m` (self-loops included once); constant across
    /// aggregation levels.
    pub fn total_weight(&self) -> f64 {
        self.strength.iter().sum::<f64>() / 2.0
    }

    /// Weight from `v` to other nodes, excluding its self-loop.
    pub fn external_strength(&self, v: usize) -> f64 {
        self.strength[v] - 2.0 * self.self_loop[v]
    }

    /// Collapses nodes by `labels` (must be contiguous from 0).
    pub fn aggregate(&self, labels: &[usize]) -> LevelGraph {
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut self_loop = vec![0.0; count];
        let mut strength = vec![0.0; count];
        let mut members = vec![Vec::new(); count];
        let mut weight_maps: Vec<std::collections::BTreeMap<usize, f64>> =
            vec![std::collections::BTreeMap::new(); count];
        for v in 0..self.len() {
            let c = labels[v];
            self_loop[c] += self.self_loop[v];
            strength[c] += self.strength[v];
            members[c].extend(self.members[v].iter().copied());
            for &(u, w) in &self.neighbors[v] {
                let cu = labels[u];
                if cu == c {
                    // each intra edge visits twice (v->u and u->v)
                    self_loop[c] += w / 2.0;
                } else {
                    *weight_maps[c].entry(cu).or_insert(0.0) += w;
                }
            }
        }
        for m in &mut members {
            m.sort_unstable();
        }
        let neighbors = weight_maps
            .into_iter()
            .map(|map| map.into_iter().collect())
            .collect();
        LevelGraph {
            neighbors,
            self_loop,
            strength,
            members,
        }
    }
}
