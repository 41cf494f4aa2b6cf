//! Undirected simple-graph projection used by the structural metrics.

use super::GraphError;

/// An undirected simple graph over string node ids: no self-loops, no
/// duplicate edges. Nodes are indexed in sorted-id order, which matches the
/// canonical node order of the [`CausalGraph`](super::CausalGraph) it was
/// projected from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    ids: Vec<String>,
    /// Sorted `(u, v)` index pairs with `u < v`.
    edges: Vec<(usize, usize)>,
    /// Sorted neighbor lists per node index.
    adjacency: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Builds from node ids and unordered id pairs, validating the
    /// no-self-loop / no-duplicate invariants.
    pub fn new(
        node_ids: Vec<String>,
        edge_pairs: Vec<(String, String)>,
    ) -> Result<SimpleGraph, GraphError> {
        let mut ids = node_ids;
        ids.sort();
        for pair in ids.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateNodeId(pair[0].clone()));
            }
        }
        let index_of = |id: &str| ids.binary_search_by(|x| x.as_str().cmp(id));
        let mut pairs = Vec::with_capacity(edge_pairs.len());
        for (a, b) in &edge_pairs {
            if a == b {
                return Err(GraphError::SelfLoop(a.clone()));
            }
            let u = index_of(a).map_err(|_| GraphError::DanglingEdgeEndpoint(a.clone()))?;
            let v = index_of(b).map_err(|_| GraphError::DanglingEdgeEndpoint(b.clone()))?;
            pairs.push((u.min(v), u.max(v)));
        }
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(
                    ids[w[0].0].clone(),
                    ids[w[0].1].clone(),
                ));
            }
        }
        Ok(Self::from_indexed(ids, pairs))
    }

    /// Internal constructor: `ids` sorted and unique, `pairs` sorted, deduped,
    /// each `(u, v)` with `u < v` and in range.
    pub(crate) fn from_indexed(ids: Vec<String>, pairs: Vec<(usize, usize)>) -> SimpleGraph {
        let mut adjacency = vec![Vec::new(); ids.len()];
        for &(u, v) in &pairs {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        SimpleGraph {
            ids,
            edges: pairs,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Node ids in canonical (sorted) order; position = node index.
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.binary_search_by(|x| x.as_str().cmp(id)).ok()
    }

    /// Edges as sorted `(u, v)` index pairs with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbor indices of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// BFS distances from `source`; `None` marks unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.ids.len()];
        dist[source] = Some(0);
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].expect("visited");
            for &w in self.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected-component label per node, labels contiguous from 0 in
    /// first-seen (node index) order.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.ids.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = next;
            while let Some(v) = stack.pop() {
                for &w in self.neighbors(v) {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        (label, next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rejects_self_loop_and_duplicates() {
        let err = SimpleGraph::new(ids(&["a"]), vec![("a".into(), "a".into())]).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop("a".into()));
        let err = SimpleGraph::new(
            ids(&["a", "b"]),
            vec![("a".into(), "b".into()), ("b".into(), "a".into())],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge("a".into(), "b".into()));
    }

    #[test]
    fn bfs_distances_on_path() {
        let g = SimpleGraph::new(
            ids(&["a", "b", "c"]),
            vec![("a".into(), "b".into()), ("b".into(), "c".into())],
        )
        .unwrap();
        let d = g.bfs_distances(0);
        assert_eq!(d, vec![Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn components_of_two_disjoint_edges() {
        let g = SimpleGraph::new(
            ids(&["a", "b", "c", "d"]),
            vec![("a".into(), "b".into()), ("c".into(), "d".into())],
        )
        .unwrap();
        let (labels, count) = g.components();
        assert_eq!(count, 2);
        assert_eq!(labels, vec![0, 0, 1, 1]);
    }
}
