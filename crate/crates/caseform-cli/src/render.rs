//! Plain-text renderings for `--human` output. The JSON documents stay the
//! canonical interface; these are convenience views only.

use caseform_core::topology::MetricsReport;
use caseform_core::{CausalGraph, CorpusStats};

use crate::commands::{AgreementDocument, PartitionDocument};
use crate::report::{AggregateSummary, ComparisonReport, METRIC_NAMES};

fn fmt(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.4}"),
        None => "-".to_string(),
    }
}

pub fn graph_summary(g: &CausalGraph) -> String {
    let mut by_category = std::collections::BTreeMap::new();
    for node in g.nodes() {
        *by_category.entry(node.category.as_str()).or_insert(0usize) += 1;
    }
    let categories: Vec<String> = by_category
        .iter()
        .map(|(category, count)| format!("{category}: {count}"))
        .collect();
    format!(
        "graph {}: {} nodes, {} edges ({})",
        g.session_id(),
        g.node_count(),
        g.edge_count(),
        categories.join(", ")
    )
}

pub fn comparison(report: &ComparisonReport) -> String {
    let mut lines = vec![format!(
        "comparison {} [{}]",
        report.session_id, report.pair_label
    )];
    for name in METRIC_NAMES {
        lines.push(format!("  {name:<28} {}", fmt(report.metric(name))));
    }
    for (field, reason) in &report.errors {
        lines.push(format!("  ({field} unavailable: {reason})"));
    }
    lines.join("\n")
}

pub fn metrics(report: &MetricsReport) -> String {
    let mut lines = vec![format!(
        "metrics {}: n={}, m={}",
        report.session_id, report.node_count, report.edge_count
    )];
    lines.push(format!("  edge density        {:.4}", report.edge_density));
    lines.push(format!("  mean degree c.      {:.4}", report.centrality.degree.mean));
    lines.push(format!("  mean betweenness    {:.4}", report.centrality.betweenness.mean));
    lines.push(format!("  mean closeness      {:.4}", report.centrality.closeness.mean));
    lines.push(format!("  mean local clust.   {:.4}", report.clustering.mean_local));
    lines.push(format!("  transitivity        {:.4}", report.clustering.transitivity));
    lines.push(format!("  triangles           {}", report.clustering.triangle_count));
    lines.push(format!(
        "  diameter            {}",
        report.diameter.map_or("-".to_string(), |d| d.to_string())
    ));
    lines.push(format!("  mean shortest path  {}", fmt(report.mean_shortest_path)));
    lines.push(format!("  assortativity       {}", fmt(report.degree_assortativity)));
    lines.push(format!("  cycle present       {}", report.cycle_present));
    lines.join("\n")
}

pub fn communities(document: &PartitionDocument) -> String {
    let mut lines = vec![format!(
        "{}: {} communities (seed {})",
        document.algorithm, document.community_count, document.seed
    )];
    if let Some(q) = document.quality.modularity {
        lines.push(format!("  modularity    {q:.4}"));
    }
    if let Some(l) = document.quality.map_equation {
        lines.push(format!("  map equation  {l:.4} bits"));
    }
    for community in &document.alignment.communities {
        lines.push(format!(
            "  community {}: {} nodes, majority {} ({:.0}%)",
            community.community,
            community.size,
            community.majority_category,
            community.majority_fraction * 100.0
        ));
    }
    lines.push(format!("  purity        {:.4}", document.alignment.purity));
    lines.join("\n")
}

pub fn agreement(document: &AgreementDocument) -> String {
    let mut lines = vec!["fleiss' kappa per dimension".to_string()];
    for (dimension, entry) in &document.dimensions {
        match (&entry.kappa, &entry.error) {
            (Some(kappa), _) => lines.push(format!("  {dimension:<20} {kappa:.4}")),
            (None, Some(reason)) => lines.push(format!("  {dimension:<20} undefined ({reason})")),
            _ => {}
        }
    }
    lines.push(format!(
        "rater totals: mean {:.2}, sd {}",
        document.summary.mean_rater_total,
        fmt(document.summary.sd_rater_total)
    ));
    lines.join("\n")
}

pub fn stats(stats: &CorpusStats) -> String {
    format!(
        "{} session(s): {:.1} words, {:.1} sentences, {:.1} therapist / {:.1} patient turns, {:.2} words per utterance",
        stats.session_count,
        stats.mean_words_per_session,
        stats.mean_sentences_per_session,
        stats.mean_therapist_turns,
        stats.mean_patient_turns,
        stats.mean_utterance_length_words
    )
}

pub fn summary(summary: &AggregateSummary) -> String {
    let mut lines = vec![format!(
        "{:<10} {:<10} {:>4}  {}",
        "group",
        "pair",
        "n",
        METRIC_NAMES
            .iter()
            .map(|m| format!("{m:>28}"))
            .collect::<Vec<_>>()
            .join(" ")
    )];
    for row in &summary.rows {
        let cells: Vec<String> = METRIC_NAMES
            .iter()
            .map(|name| {
                let aggregate = &row.metrics[*name];
                format!(
                    "{:>13}/{:>14}",
                    fmt(aggregate.mean),
                    fmt(aggregate.std)
                )
            })
            .collect();
        lines.push(format!(
            "{:<10} {:<10} {:>4}  {}",
            row.group,
            row.pair_label,
            row.session_count,
            cells.join(" ")
        ));
    }
    lines.join("\n")
}
