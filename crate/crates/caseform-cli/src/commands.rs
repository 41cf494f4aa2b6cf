//! Subcommand definitions and drivers.
//!
//! Every subcommand writes a canonical JSON document (fixed key order,
//! two-space indentation, trailing newline), so rerunning with identical
//! inputs and seeds is byte-identical. Warnings go to stderr as JSON
//! lines. `--human` additionally prints a readable rendering to stdout.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use caseform_core::agreement::{self, Dimension, RubricScores};
use caseform_core::community::{
    category_alignment, girvan_newman, infomap_two_level, label_propagation, leiden, map_equation,
    modularity, AlignmentReport, Partition,
};
use caseform_core::topology::metrics_report;
use caseform_core::transcript::{corpus_stats, parse_transcript, Transcript};
use caseform_core::{CausalGraph, ExportFormat};
use caseform_pipeline::{generate_graph, WarningLog};

use crate::config::{
    build_backend, build_embedder, parse_backend_spec, session_id_from_path,
};
use crate::render;
use crate::report::{aggregate, compare, group_of, AggregateSummary, ComparisonReport};

#[derive(Parser)]
#[command(
    name = "caseform",
    version,
    about = "Generate, evaluate, and analyze 5P case-formulation causal graphs"
)]
pub struct Cli {
    /// Also print a human-readable rendering to stdout.
    #[arg(long, global = true)]
    pub human: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate a causal graph from a transcript via the two-stage protocol.
    Generate {
        #[arg(long)]
        transcript: PathBuf,
        /// `mock:<script-file>` or a backend config JSON path.
        #[arg(long)]
        backend: String,
        /// Also evaluate candidate pairs whose endpoints share a category.
        #[arg(long)]
        include_within_category: bool,
        /// Overrides the config's request parallelism.
        #[arg(long)]
        parallelism: Option<usize>,
        /// Session id; defaults to the transcript file stem.
        #[arg(long)]
        session_id: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two graphs with NetSimile and the semantic measures.
    Compare {
        #[arg(long)]
        graph_a: PathBuf,
        #[arg(long)]
        graph_b: PathBuf,
        /// `mock`, `fixture:<table>`, or an embedder config JSON path.
        #[arg(long, default_value = "mock")]
        embedder: String,
        /// Prominent-node count for the centrality measure.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        top_k: u64,
        #[arg(long)]
        pair_label: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the full topology metric report for one graph.
    Metrics {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a community detection algorithm and report the partition.
    Communities {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        algo: Algorithm,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        resolution: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fleiss' kappa per rubric dimension plus rating summaries.
    Agreement {
        /// Delimited table: rater_id,session_id,dimension,score.
        #[arg(long)]
        ratings: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Corpus statistics over one or more transcripts.
    Stats {
        #[arg(long, required = true)]
        transcript: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a graph as Dot or GraphML.
    Export {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare every session in a directory and aggregate the results.
    ///
    /// The directory holds `<session>.auto.json`, `<session>.a.json`,
    /// `<session>.b.json` graph documents; available pairs per session are
    /// compared as "A vs B", "Auto vs A", and "Auto vs B".
    Report {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value = "mock")]
        embedder: String,
        /// Optional JSON object mapping session ids to group labels.
        #[arg(long)]
        groups: Option<PathBuf>,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        top_k: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Leiden,
    GirvanNewman,
    Infomap,
    LabelPropagation,
}

impl Algorithm {
    fn name(&self) -> &'static str {
        match self {
            Algorithm::Leiden => "leiden",
            Algorithm::GirvanNewman => "girvan-newman",
            Algorithm::Infomap => "infomap",
            Algorithm::LabelPropagation => "label-propagation",
        }
    }
}

/// Domain failure: maps to exit code 1.
#[derive(Debug)]
pub struct CommandError(pub String);

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CommandError {}

fn fail<E: std::fmt::Display>(context: &str) -> impl Fn(E) -> CommandError + '_ {
    move |e| CommandError(format!("{context}: {e}"))
}

pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CommandError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CommandError(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn log_warnings(log: &WarningLog) {
    for warning in log.drain() {
        eprintln!(
            "{}",
            serde_json::json!({
                "level": "warning",
                "kind": warning.kind,
                "message": warning.message,
            })
        );
    }
}

fn load_graph(path: &Path) -> Result<CausalGraph, CommandError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CommandError(format!("cannot read graph {}: {e}", path.display())))?;
    CausalGraph::from_json(&text)
        .map_err(|e| CommandError(format!("invalid graph {}: {e}", path.display())))
}

fn load_transcript(path: &Path, session_id: Option<&str>) -> Result<Transcript, CommandError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CommandError(format!("cannot read transcript {}: {e}", path.display())))?;
    let session = session_id
        .map(str::to_string)
        .unwrap_or_else(|| session_id_from_path(path));
    parse_transcript(&text, &session)
        .map_err(|e| CommandError(format!("cannot parse transcript {}: {e}", path.display())))
}

pub fn execute(cli: Cli) -> Result<(), CommandError> {
    match cli.command {
        Command::Generate {
            transcript,
            backend,
            include_within_category,
            parallelism,
            session_id,
            out,
        } => {
            let transcript = load_transcript(&transcript, session_id.as_deref())?;
            let spec = parse_backend_spec(&backend).map_err(CommandError)?;
            let (backend, config) = build_backend(&spec, parallelism).map_err(CommandError)?;
            let log = WarningLog::new();
            let graph = generate_graph(
                &transcript,
                backend.as_ref(),
                &config,
                include_within_category,
                &log,
            )
            .map_err(fail("generation failed"))?;
            log_warnings(&log);
            emit(Some(&out), &graph.to_json())?;
            if cli.human {
                println!("{}", render::graph_summary(&graph));
            }
            Ok(())
        }
        Command::Compare {
            graph_a,
            graph_b,
            embedder,
            top_k,
            pair_label,
            out,
        } => {
            let a = load_graph(&graph_a)?;
            let b = load_graph(&graph_b)?;
            let provider = build_embedder(&embedder).map_err(CommandError)?;
            let label = pair_label.unwrap_or_else(|| "A vs B".to_string());
            let report =
                compare(&a, &b, provider.as_ref(), top_k as usize, label).map_err(fail("comparison failed"))?;
            emit(out.as_deref(), &to_canonical_json(&report))?;
            if cli.human {
                println!("{}", render::comparison(&report));
            }
            Ok(())
        }
        Command::Metrics { graph, out } => {
            let g = load_graph(&graph)?;
            let report = metrics_report(&g).map_err(fail("metrics failed"))?;
            emit(out.as_deref(), &to_canonical_json(&report))?;
            if cli.human {
                println!("{}", render::metrics(&report));
            }
            Ok(())
        }
        Command::Communities {
            graph,
            algo,
            seed,
            resolution,
            out,
        } => {
            let g = load_graph(&graph)?;
            let document = run_communities(&g, algo, seed, resolution)?;
            emit(out.as_deref(), &to_canonical_json(&document))?;
            if cli.human {
                println!("{}", render::communities(&document));
            }
            Ok(())
        }
        Command::Agreement { ratings, out } => {
            let text = std::fs::read_to_string(&ratings)
                .map_err(|e| CommandError(format!("cannot read ratings {}: {e}", ratings.display())))?;
            let scores = RubricScores::from_table(&text).map_err(fail("bad ratings table"))?;
            let document = run_agreement(&scores)?;
            emit(out.as_deref(), &to_canonical_json(&document))?;
            if cli.human {
                println!("{}", render::agreement(&document));
            }
            Ok(())
        }
        Command::Stats { transcript, out } => {
            let mut transcripts = Vec::with_capacity(transcript.len());
            for path in &transcript {
                transcripts.push(load_transcript(path, None)?);
            }
            let stats = corpus_stats(&transcripts).map_err(fail("stats failed"))?;
            let document = StatsDocument {
                sessions: transcripts.iter().map(|t| t.session_id().to_string()).collect(),
                stats,
            };
            emit(out.as_deref(), &to_canonical_json(&document))?;
            if cli.human {
                println!("{}", render::stats(&document.stats));
            }
            Ok(())
        }
        Command::Export { graph, format, out } => {
            let g = load_graph(&graph)?;
            let format: ExportFormat = format.parse().map_err(CommandError)?;
            emit(out.as_deref(), &g.export(format))
        }
        Command::Report {
            dir,
            embedder,
            groups,
            top_k,
            out,
        } => {
            let document = run_report(&dir, &embedder, groups.as_deref(), top_k as usize)?;
            emit(Some(&out), &to_canonical_json(&document))?;
            if cli.human {
                println!("{}", render::summary(&document.summary));
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
pub struct StatsDocument {
    pub sessions: Vec<String>,
    pub stats: caseform_core::CorpusStats,
}

#[derive(Serialize)]
pub struct PartitionQuality {
    pub modularity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map_equation: Option<f64>,
}

#[derive(Serialize)]
pub struct NodeAssignment {
    pub node: String,
    pub community: usize,
}

#[derive(Serialize)]
pub struct PartitionDocument {
    pub algorithm: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    pub community_count: usize,
    pub assignments: Vec<NodeAssignment>,
    pub quality: PartitionQuality,
    pub alignment: AlignmentReport,
}

fn run_communities(
    g: &CausalGraph,
    algo: Algorithm,
    seed: u64,
    resolution: f64,
) -> Result<PartitionDocument, CommandError> {
    let partition: Partition = match algo {
        Algorithm::Leiden => leiden(g, resolution, seed),
        Algorithm::GirvanNewman => girvan_newman(g),
        Algorithm::Infomap => infomap_two_level(g, seed).map_err(fail("infomap failed"))?,
        Algorithm::LabelPropagation => label_propagation(g, seed),
    };
    let simple = g.undirected_projection();
    let quality = PartitionQuality {
        modularity: modularity(&simple, &partition, resolution).ok(),
        map_equation: match algo {
            Algorithm::Infomap => map_equation(&simple, &partition).ok(),
            _ => None,
        },
    };
    let alignment = category_alignment(g, &partition).map_err(fail("alignment failed"))?;
    Ok(PartitionDocument {
        algorithm: algo.name().to_string(),
        seed,
        resolution: matches!(algo, Algorithm::Leiden).then_some(resolution),
        community_count: partition.community_count(),
        assignments: g
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, node)| NodeAssignment {
                node: node.id.clone(),
                community: partition.community_of(i),
            })
            .collect(),
        quality,
        alignment,
    })
}

#[derive(Serialize)]
pub struct DimensionAgreement {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Serialize)]
pub struct AgreementDocument {
    pub dimensions: BTreeMap<String, DimensionAgreement>,
    pub summary: agreement::RatingSummary,
}

fn run_agreement(scores: &RubricScores) -> Result<AgreementDocument, CommandError> {
    let mut dimensions = BTreeMap::new();
    for dimension in Dimension::ALL {
        let entry = match agreement::scores_to_matrix(scores, dimension)
            .and_then(|m| agreement::fleiss_kappa(&m))
        {
            Ok(kappa) => DimensionAgreement {
                kappa: Some(kappa),
                error: None,
            },
            Err(e) => DimensionAgreement {
                kappa: None,
                error: Some(e.to_string()),
            },
        };
        dimensions.insert(dimension.as_str().to_string(), entry);
    }
    let summary = agreement::rating_summary(scores).map_err(fail("rating summary failed"))?;
    Ok(AgreementDocument { dimensions, summary })
}

#[derive(Serialize)]
pub struct ReportDocument {
    pub reports: Vec<ComparisonReport>,
    pub summary: AggregateSummary,
}

fn run_report(
    dir: &Path,
    embedder: &str,
    groups: Option<&Path>,
    top_k: usize,
) -> Result<ReportDocument, CommandError> {
    let group_map: BTreeMap<String, String> = match groups {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CommandError(format!("cannot read groups {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CommandError(format!("bad groups file {}: {e}", path.display())))?
        }
        None => BTreeMap::new(),
    };

    // collect sessions from "<session>.<role>.json" filenames
    let mut sessions: BTreeMap<String, BTreeMap<String, PathBuf>> = BTreeMap::new();
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CommandError(format!("cannot read directory {}: {e}", dir.display())))?;
    for entry in entries {
        let path = entry.map_err(fail("directory walk failed"))?.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        let Some(base) = name.strip_suffix(".json") else {
            continue;
        };
        let Some((session, role)) = base.rsplit_once('.') else {
            continue;
        };
        if ["auto", "a", "b"].contains(&role) {
            sessions
                .entry(session.to_string())
                .or_default()
                .insert(role.to_string(), path);
        }
    }
    if sessions.is_empty() {
        return Err(CommandError(format!(
            "no `<session>.{{auto,a,b}}.json` graph documents found in {}",
            dir.display()
        )));
    }

    let provider = build_embedder(embedder).map_err(CommandError)?;
    let session_list: Vec<(String, BTreeMap<String, PathBuf>)> = sessions.into_iter().collect();
    // sessions compared concurrently; aggregation stays in session-id order
    let results: Vec<Result<Vec<ComparisonReport>, CommandError>> = std::thread::scope(|scope| {
        let provider = provider.as_ref();
        let handles: Vec<_> = session_list
            .iter()
            .map(|(session, files)| {
                let group = group_map.get(session).cloned();
                scope.spawn(move || compare_session(session, files, provider, top_k, group))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("comparison thread"))
            .collect()
    });
    let mut reports = Vec::new();
    for result in results {
        reports.extend(result?);
    }
    let summary = aggregate(&reports, &group_of).map_err(fail("aggregation failed"))?;
    Ok(ReportDocument { reports, summary })
}

fn compare_session(
    session: &str,
    files: &BTreeMap<String, PathBuf>,
    provider: &dyn caseform_core::semantic::EmbeddingProvider,
    top_k: usize,
    group: Option<String>,
) -> Result<Vec<ComparisonReport>, CommandError> {
    let mut graphs: BTreeMap<&str, CausalGraph> = BTreeMap::new();
    for (role, path) in files {
        graphs.insert(role.as_str(), load_graph(path)?);
    }
    let mut reports = Vec::new();
    let pairs: [(&str, &str, &str); 3] = [
        ("a", "b", "A vs B"),
        ("auto", "a", "Auto vs A"),
        ("auto", "b", "Auto vs B"),
    ];
    for (left, right, label) in pairs {
        if let (Some(g1), Some(g2)) = (graphs.get(left), graphs.get(right)) {
            let mut report = compare(g1, g2, provider, top_k, label)
                .map_err(|e| CommandError(format!("session {session} ({label}): {e}")))?;
            report.session_id = session.to_string();
            report.group = group.clone();
            reports.push(report);
        }
    }
    Ok(reports)
}
