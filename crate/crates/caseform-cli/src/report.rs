//! Pairwise comparison reports and their aggregation into the summary
//! table: one row per (group, pair label) plus TOTAL rows, each carrying
//! mean and sample standard deviation per metric.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use caseform_core::netsimile::netsimile_similarity;
use caseform_core::semantic::{compare_graphs, EmbeddingProvider};
use caseform_core::CausalGraph;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("graph `{0}` has no nodes; nothing to compare")]
    EmptyGraph(String),
    #[error("no reports to aggregate")]
    EmptyInput,
    #[error(transparent)]
    Semantic(#[from] caseform_core::semantic::SemanticError),
}

pub const METRIC_NAMES: [&str; 4] = [
    "netsimile",
    "mean_edge_similarity",
    "node_set_similarity",
    "node_centrality_similarity",
];

/// All four similarity results for one graph pair. Metrics that could not
/// be computed are `None`, with the reason recorded under `errors`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub session_id: String,
    pub pair_label: String,
    pub group: Option<String>,
    pub netsimile: Option<f64>,
    pub mean_edge_similarity: Option<f64>,
    pub node_set_similarity: Option<f64>,
    pub node_centrality_similarity: Option<f64>,
    pub errors: BTreeMap<String, String>,
}

impl ComparisonReport {
    pub fn metric(&self, name: &str) -> Option<f64> {
        match name {
            "netsimile" => self.netsimile,
            "mean_edge_similarity" => self.mean_edge_similarity,
            "node_set_similarity" => self.node_set_similarity,
            "node_centrality_similarity" => self.node_centrality_similarity,
            _ => None,
        }
    }
}

/// Runs NetSimile plus the three semantic measures on a graph pair.
///
/// Both graphs must be non-empty. An edgeless side leaves
/// `mean_edge_similarity` unset (with the cause under `errors`) while the
/// other metrics are still computed.
pub fn compare(
    g1: &CausalGraph,
    g2: &CausalGraph,
    provider: &dyn EmbeddingProvider,
    prominence_k: usize,
    pair_label: impl Into<String>,
) -> Result<ComparisonReport, ReportError> {
    for g in [g1, g2] {
        if g.node_count() == 0 {
            return Err(ReportError::EmptyGraph(g.session_id().to_string()));
        }
    }
    let structural = netsimile_similarity(g1, g2).expect("non-empty graphs checked");
    let semantic = compare_graphs(g1, g2, provider, prominence_k)?;
    let mut errors = BTreeMap::new();
    if let Some(reason) = &semantic.edge_similarity_error {
        errors.insert("mean_edge_similarity".to_string(), reason.clone());
    }
    Ok(ComparisonReport {
        session_id: g1.session_id().to_string(),
        pair_label: pair_label.into(),
        group: None,
        netsimile: Some(structural),
        mean_edge_similarity: semantic.edge_similarity,
        node_set_similarity: Some(semantic.node_set_similarity),
        node_centrality_similarity: Some(semantic.node_centrality_similarity),
        errors,
    })
}

/// Mean and sample SD of one metric within one summary cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricAggregate {
    pub mean: Option<f64>,
    /// Sample (n-1) SD; absent for singleton cells.
    pub std: Option<f64>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub group: String,
    pub pair_label: String,
    pub session_count: usize,
    pub metrics: BTreeMap<String, MetricAggregate>,
}

/// Summary table: per-group rows (groups sorted, pair labels sorted within
/// each) followed by TOTAL rows over all groups.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateSummary {
    pub rows: Vec<AggregateRow>,
}

pub fn aggregate(
    reports: &[ComparisonReport],
    grouping: &dyn Fn(&ComparisonReport) -> String,
) -> Result<AggregateSummary, ReportError> {
    if reports.is_empty() {
        return Err(ReportError::EmptyInput);
    }
    let mut cells: BTreeMap<(String, String), Vec<&ComparisonReport>> = BTreeMap::new();
    for report in reports {
        cells
            .entry((grouping(report), report.pair_label.clone()))
            .or_default()
            .push(report);
        cells
            .entry(("TOTAL".to_string(), report.pair_label.clone()))
            .or_default()
            .push(report);
    }
    let mut rows = Vec::with_capacity(cells.len());
    let (totals, groups): (Vec<_>, Vec<_>) = cells.into_iter().partition(|((g, _), _)| g == "TOTAL");
    for ((group, pair_label), members) in groups.into_iter().chain(totals) {
        let mut metrics = BTreeMap::new();
        for name in METRIC_NAMES {
            let values: Vec<f64> = members.iter().filter_map(|r| r.metric(name)).collect();
            metrics.insert(name.to_string(), summarize(&values));
        }
        rows.push(AggregateRow {
            group,
            pair_label,
            session_count: members.len(),
            metrics,
        });
    }
    Ok(AggregateSummary { rows })
}

fn summarize(values: &[f64]) -> MetricAggregate {
    if values.is_empty() {
        return MetricAggregate {
            mean: None,
            std: None,
            count: 0,
        };
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let std = if values.len() < 2 {
        None
    } else {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        Some((ss / (values.len() as f64 - 1.0)).sqrt())
    };
    MetricAggregate {
        mean: Some(mean),
        std,
        count: values.len(),
    }
}

/// Group a report by its own `group` field, falling back to `"ALL"`.
pub fn group_of(report: &ComparisonReport) -> String {
    report.group.clone().unwrap_or_else(|| "ALL".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use caseform_core::semantic::HashEmbedder;
    use caseform_core::{CausalEdge, FactorCategory, FactorNode, Origin};

    fn graph(id: &str) -> CausalGraph {
        let nodes = vec![
            FactorNode::new("insomnia", "insomnia", FactorCategory::Presenting),
            FactorNode::new("worry", "worry", FactorCategory::Perpetuating),
        ];
        let edges = vec![CausalEdge::new("worry", "insomnia")];
        CausalGraph::build(id, Origin::Human, None, nodes, edges).unwrap()
    }

    #[test]
    fn self_comparison_is_all_ones() {
        let g = graph("s1");
        let provider = HashEmbedder::default();
        let report = compare(&g, &g, &provider, 5, "Auto vs A").unwrap();
        for name in METRIC_NAMES {
            let value = report.metric(name).unwrap();
            assert!((value - 1.0).abs() < 1e-6, "{name} = {value}");
        }
        assert!(report.errors.is_empty());
    }

    #[test]
    fn comparison_is_symmetric_per_field() {
        let g = graph("s1");
        let mut other_nodes = vec![
            FactorNode::new("fatigue", "daytime fatigue", FactorCategory::Presenting),
            FactorNode::new("rumination", "rumination", FactorCategory::Perpetuating),
            FactorNode::new("tension", "tension", FactorCategory::Precipitating),
        ];
        other_nodes[0].provenance = vec![1];
        let h = CausalGraph::build(
            "s2",
            Origin::Automated,
            None,
            other_nodes,
            vec![
                CausalEdge::new("rumination", "fatigue"),
                CausalEdge::new("tension", "rumination"),
            ],
        )
        .unwrap();
        let provider = HashEmbedder::default();
        let ab = compare(&g, &h, &provider, 5, "x").unwrap();
        let ba = compare(&h, &g, &provider, 5, "x").unwrap();
        for name in METRIC_NAMES {
            let fwd = ab.metric(name).unwrap();
            let bwd = ba.metric(name).unwrap();
            assert!((fwd - bwd).abs() < 1e-12, "{name}: {fwd} vs {bwd}");
        }
    }

    #[test]
    fn empty_graph_is_rejected() {
        let empty = CausalGraph::build("e", Origin::Human, None, vec![], vec![]).unwrap();
        let provider = HashEmbedder::default();
        assert!(matches!(
            compare(&empty, &graph("s"), &provider, 5, "x"),
            Err(ReportError::EmptyGraph(_))
        ));
    }

    #[test]
    fn edgeless_side_reports_per_field_error() {
        let edgeless = CausalGraph::build(
            "e",
            Origin::Human,
            None,
            vec![FactorNode::new("a", "a", FactorCategory::Presenting)],
            vec![],
        )
        .unwrap();
        let provider = HashEmbedder::default();
        let report = compare(&edgeless, &graph("s"), &provider, 5, "x").unwrap();
        assert!(report.mean_edge_similarity.is_none());
        assert!(report.errors.contains_key("mean_edge_similarity"));
        assert!(report.netsimile.is_some());
        assert!(report.node_set_similarity.is_some());
    }

    fn hand_report(session: &str, group: &str, values: [f64; 4]) -> ComparisonReport {
        ComparisonReport {
            session_id: session.into(),
            pair_label: "Auto vs A".into(),
            group: Some(group.into()),
            netsimile: Some(values[0]),
            mean_edge_similarity: Some(values[1]),
            node_set_similarity: Some(values[2]),
            node_centrality_similarity: Some(values[3]),
            errors: BTreeMap::new(),
        }
    }

    #[test]
    fn single_report_aggregates_to_itself_with_no_sd() {
        let report = hand_report("s1", "GROUP 1", [0.4, 0.7, 0.8, 0.2]);
        let summary = aggregate(std::slice::from_ref(&report), &group_of).unwrap();
        assert_eq!(summary.rows.len(), 2); // group row + TOTAL row
        let row = &summary.rows[0];
        assert_eq!(row.group, "GROUP 1");
        assert_eq!(row.metrics["netsimile"].mean, Some(0.4));
        assert_eq!(row.metrics["netsimile"].std, None);
    }

    #[test]
    fn identical_reports_have_zero_sd() {
        let a = hand_report("s1", "GROUP 1", [0.4, 0.7, 0.8, 0.2]);
        let b = hand_report("s2", "GROUP 1", [0.4, 0.7, 0.8, 0.2]);
        let summary = aggregate(&[a, b], &group_of).unwrap();
        let row = &summary.rows[0];
        assert_eq!(row.metrics["mean_edge_similarity"].std, Some(0.0));
    }

    #[test]
    fn hand_computed_three_report_cell() {
        let reports = vec![
            hand_report("s1", "G", [0.2, 0.5, 0.9, 0.1]),
            hand_report("s2", "G", [0.4, 0.6, 0.7, 0.3]),
            hand_report("s3", "G", [0.6, 0.7, 0.8, 0.2]),
        ];
        let summary = aggregate(&reports, &group_of).unwrap();
        let row = &summary.rows[0];
        // spreadsheet: mean 0.4, sample sd 0.2
        assert!((row.metrics["netsimile"].mean.unwrap() - 0.4).abs() < 1e-12);
        assert!((row.metrics["netsimile"].std.unwrap() - 0.2).abs() < 1e-12);
        // mean stays within [min, max]
        for name in METRIC_NAMES {
            let values: Vec<f64> = reports.iter().map(|r| r.metric(name).unwrap()).collect();
            let mean = row.metrics[name].mean.unwrap();
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(mean >= min - 1e-12 && mean <= max + 1e-12);
        }
    }

    #[test]
    fn totals_cover_all_groups_and_come_last() {
        let reports = vec![
            hand_report("s1", "GROUP 1", [0.2, 0.5, 0.9, 0.1]),
            hand_report("s2", "GROUP 2", [0.4, 0.6, 0.7, 0.3]),
        ];
        let summary = aggregate(&reports, &group_of).unwrap();
        let groups: Vec<&str> = summary.rows.iter().map(|r| r.group.as_str()).collect();
        assert_eq!(groups, ["GROUP 1", "GROUP 2", "TOTAL"]);
        assert_eq!(summary.rows[2].session_count, 2);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(aggregate(&[], &group_of), Err(ReportError::EmptyInput)));
    }
}
