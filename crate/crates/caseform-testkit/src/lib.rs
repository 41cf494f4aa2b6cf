//! Independent reference implementations used to verify the production
//! metrics.
//!
//! Everything here is deliberately naive: Floyd-Warshall instead of BFS,
//! explicit path enumeration instead of Brandes accumulation, exhaustive
//! triple scans instead of neighbor intersection. None of it calls the
//! production algorithm paths; the only shared code is the graph data
//! model itself.

pub mod generate;
pub mod oracle;

pub use generate::{random_causal_graph, random_simple_graph, relabeled_copy};
