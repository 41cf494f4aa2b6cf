//! Fleiss' kappa over categorical ratings and summary statistics for the
//! six-dimension expert rubric.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AgreementError {
    #[error("invalid rating matrix: {0}")]
    InvalidMatrix(String),
    #[error("expected agreement is 1 (all ratings in one category); kappa is undefined")]
    DegenerateExpectedAgreement,
    #[error("missing rating from rater `{rater}` for session `{session}`")]
    MissingRating { rater: String, session: String },
    #[error("no scores provided")]
    EmptyScores,
    #[error("score {0} outside the 1..=5 rubric range")]
    ScoreOutOfRange(u8),
    #[error("ratings table: {0}")]
    MalformedTable(String),
}

/// Subjects-by-categories count matrix: cell `(i, j)` holds how many raters
/// assigned subject `i` to category `j`. Every row sums to the rater count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatingMatrix {
    counts: Vec<Vec<u32>>,
    raters: u32,
}

impl RatingMatrix {
    pub fn new(counts: Vec<Vec<u32>>, raters: u32) -> Result<RatingMatrix, AgreementError> {
        if counts.len() < 2 {
            return Err(AgreementError::InvalidMatrix(format!(
                "need at least 2 subjects, got {}",
                counts.len()
            )));
        }
        let k = counts[0].len();
        if k < 2 {
            return Err(AgreementError::InvalidMatrix(format!(
                "need at least 2 categories, got {k}"
            )));
        }
        if raters < 2 {
            return Err(AgreementError::InvalidMatrix(format!(
                "need at least 2 raters, got {raters}"
            )));
        }
        for (i, row) in counts.iter().enumerate() {
            if row.len() != k {
                return Err(AgreementError::InvalidMatrix(format!(
                    "row {i} has {} categories, expected {k}",
                    row.len()
                )));
            }
            let sum: u32 = row.iter().sum();
            if sum != raters {
                return Err(AgreementError::InvalidMatrix(format!(
                    "row {i} sums to {sum}, expected {raters}"
                )));
            }
        }
        Ok(RatingMatrix { counts, raters })
    }

    pub fn subjects(&self) -> usize {
        self.counts.len()
    }

    pub fn categories(&self) -> usize {
        self.counts[0].len()
    }

    pub fn raters(&self) -> u32 {
        self.raters
    }

    pub fn counts(&self) -> &[Vec<u32>] {
        &self.counts
    }
}

/// Fleiss' kappa: `(P_bar - P_e) / (1 - P_e)` with per-subject agreement
/// `P_i = (sum_j n_ij^2 - n) / (n (n - 1))` and expected agreement
/// `P_e = sum_j p_j^2`.
pub fn fleiss_kappa(m: &RatingMatrix) -> Result<f64, AgreementError> {
    let n = m.raters() as f64;
    let subjects = m.subjects() as f64;

    let mut p_bar = 0.0;
    let mut category_share = vec![0.0; m.categories()];
    for row in m.counts() {
        let mut sq = 0.0;
        for (j, &count) in row.iter().enumerate() {
            let c = count as f64;
            sq += c * c;
            category_share[j] += c;
        }
        p_bar += (sq - n) / (n * (n - 1.0));
    }
    p_bar /= subjects;

    let mut p_e = 0.0;
    for share in &mut category_share {
        *share /= subjects * n;
        p_e += *share * *share;
    }

    if (1.0 - p_e).abs() < 1e-12 {
        return Err(AgreementError::DegenerateExpectedAgreement);
    }
    Ok((p_bar - p_e) / (1.0 - p_e))
}

/// The six expert-review dimensions, each scored 1-5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Completeness,
    Consistency,
    Specificity,
    PlausibilityNodes,
    PlausibilityEdges,
    Utility,
}

impl Dimension {
    pub const ALL: [Dimension; 6] = [
        Dimension::Completeness,
        Dimension::Consistency,
        Dimension::Specificity,
        Dimension::PlausibilityNodes,
        Dimension::PlausibilityEdges,
        Dimension::Utility,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Dimension::Completeness => "completeness",
            Dimension::Consistency => "consistency",
            Dimension::Specificity => "specificity",
            Dimension::PlausibilityNodes => "plausibility_nodes",
            Dimension::PlausibilityEdges => "plausibility_edges",
            Dimension::Utility => "utility",
        }
    }

    pub fn parse(s: &str) -> Option<Dimension> {
        let lowered = s.trim().to_ascii_lowercase();
        Dimension::ALL
            .iter()
            .copied()
            .find(|d| d.as_str() == lowered)
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-(rater, session, dimension) rubric scores in `1..=5`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RubricScores {
    entries: BTreeMap<(String, String, Dimension), u8>,
}

impl RubricScores {
    pub fn new() -> RubricScores {
        RubricScores::default()
    }

    pub fn add(
        &mut self,
        rater: impl Into<String>,
        session: impl Into<String>,
        dimension: Dimension,
        score: u8,
    ) -> Result<(), AgreementError> {
        if !(1..=5).contains(&score) {
            return Err(AgreementError::ScoreOutOfRange(score));
        }
        self.entries
            .insert((rater.into(), session.into(), dimension), score);
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, rater: &str, session: &str, dimension: Dimension) -> Option<u8> {
        self.entries
            .get(&(rater.to_string(), session.to_string(), dimension))
            .copied()
    }

    pub fn raters(&self) -> BTreeSet<&str> {
        self.entries.keys().map(|(r, _, _)| r.as_str()).collect()
    }

    pub fn sessions(&self) -> BTreeSet<&str> {
        self.entries.keys().map(|(_, s, _)| s.as_str()).collect()
    }

    /// Loads a delimited table with header `rater_id,session_id,dimension,score`.
    /// Fields are comma-separated; no quoting is supported.
    pub fn from_table(text: &str) -> Result<RubricScores, AgreementError> {
        let mut scores = RubricScores::new();
        let mut lines = text.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((_, line)) if line.trim().is_empty() => continue,
                Some((_, line)) => break line,
                None => return Err(AgreementError::MalformedTable("empty table".into())),
            }
        };
        let columns: Vec<&str> = header.split(',').map(str::trim).collect();
        if columns != ["rater_id", "session_id", "dimension", "score"] {
            return Err(AgreementError::MalformedTable(format!(
                "unexpected header `{header}`"
            )));
        }
        for (line_no, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(AgreementError::MalformedTable(format!(
                    "line {}: expected 4 fields, got {}",
                    line_no + 1,
                    fields.len()
                )));
            }
            let dimension = Dimension::parse(fields[2]).ok_or_else(|| {
                AgreementError::MalformedTable(format!(
                    "line {}: unknown dimension `{}`",
                    line_no + 1,
                    fields[2]
                ))
            })?;
            let score: u8 = fields[3].parse().map_err(|_| {
                AgreementError::MalformedTable(format!(
                    "line {}: score `{}` is not an integer",
                    line_no + 1,
                    fields[3]
                ))
            })?;
            scores.add(fields[0], fields[1], dimension, score)?;
        }
        Ok(scores)
    }
}

/// Tabulates one dimension into a [`RatingMatrix`]: subjects are sessions,
/// categories are the five score values. Every (rater, session) pair must
/// be present.
pub fn scores_to_matrix(
    scores: &RubricScores,
    dimension: Dimension,
) -> Result<RatingMatrix, AgreementError> {
    let raters: Vec<&str> = scores.raters().into_iter().collect();
    let sessions: Vec<&str> = scores.sessions().into_iter().collect();
    let mut counts = Vec::with_capacity(sessions.len());
    for session in &sessions {
        let mut row = vec![0u32; 5];
        for rater in &raters {
            let score = scores
                .get(rater, session, dimension)
                .ok_or(AgreementError::MissingRating {
                    rater: rater.to_string(),
                    session: session.to_string(),
                })?;
            row[(score - 1) as usize] += 1;
        }
        counts.push(row);
    }
    RatingMatrix::new(counts, raters.len() as u32)
}

/// Summary statistics for rubric scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatingSummary {
    /// Mean score per dimension over all (rater, session) pairs.
    pub per_dimension_means: BTreeMap<String, f64>,
    /// Per rater: six-dimension total, averaged over that rater's sessions.
    pub per_rater_totals: BTreeMap<String, f64>,
    pub mean_rater_total: f64,
    /// Sample (n-1) SD of rater totals; absent with fewer than 2 raters.
    pub sd_rater_total: Option<f64>,
    /// Per session: six-dimension total, averaged over raters.
    pub per_session_totals: BTreeMap<String, f64>,
    pub sd_session_total: Option<f64>,
    /// Convention notes that affect comparability of the SD figures.
    pub notes: Vec<String>,
}

/// Per-dimension means plus rater/session total statistics.
///
/// Both the rater-level and session-level SDs are reported because the two
/// groupings can differ substantially; the notes field spells out the
/// conventions used.
pub fn rating_summary(scores: &RubricScores) -> Result<RatingSummary, AgreementError> {
    if scores.is_empty() {
        return Err(AgreementError::EmptyScores);
    }
    let raters: Vec<&str> = scores.raters().into_iter().collect();
    let sessions: Vec<&str> = scores.sessions().into_iter().collect();

    let mut per_dimension_means = BTreeMap::new();
    for dimension in Dimension::ALL {
        let mut total = 0u64;
        let mut count = 0u64;
        for rater in &raters {
            for session in &sessions {
                if let Some(score) = scores.get(rater, session, dimension) {
                    total += score as u64;
                    count += 1;
                }
            }
        }
        if count > 0 {
            per_dimension_means.insert(dimension.as_str().to_string(), total as f64 / count as f64);
        }
    }

    // total per (rater, session) = sum over the dimensions present
    let totals_for = |fix_rater: Option<&str>, fix_session: Option<&str>| -> Vec<f64> {
        let mut totals = Vec::new();
        for rater in &raters {
            if fix_rater.is_some_and(|r| r != *rater) {
                continue;
            }
            for session in &sessions {
                if fix_session.is_some_and(|s| s != *session) {
                    continue;
                }
                let mut sum = 0u64;
                let mut any = false;
                for dimension in Dimension::ALL {
                    if let Some(score) = scores.get(rater, session, dimension) {
                        sum += score as u64;
                        any = true;
                    }
                }
                if any {
                    totals.push(sum as f64);
                }
            }
        }
        totals
    };

    let mut per_rater_totals = BTreeMap::new();
    for rater in &raters {
        let totals = totals_for(Some(rater), None);
        if !totals.is_empty() {
            per_rater_totals.insert(rater.to_string(), mean(&totals));
        }
    }
    let mut per_session_totals = BTreeMap::new();
    for session in &sessions {
        let totals = totals_for(None, Some(session));
        if !totals.is_empty() {
            per_session_totals.insert(session.to_string(), mean(&totals));
        }
    }

    let rater_values: Vec<f64> = per_rater_totals.values().copied().collect();
    let session_values: Vec<f64> = per_session_totals.values().copied().collect();
    Ok(RatingSummary {
        per_dimension_means,
        mean_rater_total: mean(&rater_values),
        sd_rater_total: sample_sd(&rater_values),
        per_rater_totals,
        sd_session_total: sample_sd(&session_values),
        per_session_totals,
        notes: vec![
            "totals are six-dimension sums (range 6..=30) per rater-session, averaged over sessions (rater totals) or raters (session totals)".into(),
            "SDs are sample (n-1) and reported over both rater totals and session totals; the two groupings can disagree, so both are labeled".into(),
        ],
    })
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_sd(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    Some((ss / (values.len() as f64 - 1.0)).sqrt())
}
