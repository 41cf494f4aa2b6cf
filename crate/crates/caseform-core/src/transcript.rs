//! Session transcripts: parsing and corpus statistics.
//!
//! Two input formats are accepted. The structured variant is a JSON array of
//! `{speaker, text}` objects and takes precedence whenever the document
//! parses as one. The plain-text variant uses `Therapist:` / `Patient:` line
//! prefixes (case-insensitive); lines without a speaker prefix continue the
//! current turn and are joined with single spaces.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Speaker {
    Therapist,
    Patient,
}

impl Speaker {
    fn from_label(label: &str) -> Option<Speaker> {
        match label.to_ascii_lowercase().as_str() {
            "therapist" => Some(Speaker::Therapist),
            "patient" => Some(Speaker::Patient),
            _ => None,
        }
    }
}

/// One utterance by one speaker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Turn {
    /// 0-based position in the session; contiguous.
    pub index: usize,
    pub speaker: Speaker,
    pub text: String,
}

/// An ordered sequence of turns for one session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    session_id: String,
    turns: Vec<Turn>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranscriptError {
    #[error("no speaker turns found in document")]
    NoTurnsFound,
    #[error("unknown speaker label `{label}` at line {line}")]
    UnknownSpeakerLabel { label: String, line: usize },
    #[error("turn opened at line {line} has no text")]
    EmptyTurnText { line: usize },
    #[error("corpus statistics require at least one transcript")]
    EmptyCorpus,
}

impl Transcript {
    /// Wraps pre-built turns, reassigning contiguous indices from 0.
    pub fn new(session_id: impl Into<String>, turns: Vec<(Speaker, String)>) -> Transcript {
        let turns = turns
            .into_iter()
            .enumerate()
            .map(|(index, (speaker, text))| Turn {
                index,
                speaker,
                text,
            })
            .collect();
        Transcript {
            session_id: session_id.into(),
            turns,
        }
    }

    pub fn session_id(&self) -> &str {
        &self.session_id
    }

    pub fn turns(&self) -> &[Turn] {
        &self.turns
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty()
    }
}

#[derive(Deserialize)]
struct StructuredTurn {
    speaker: String,
    text: String,
}

/// Parses a transcript document into structured turns.
///
/// A JSON array of `{speaker, text}` objects is tried first; otherwise the
/// document is read line by line. A line whose first colon is preceded by a
/// single word opens a new turn when that word names a known speaker and is
/// an error otherwise. Anything else continues the current turn.
pub fn parse_transcript(document: &str, session_id: &str) -> Result<Transcript, TranscriptError> {
    if let Ok(structured) = serde_json::from_str::<Vec<StructuredTurn>>(document) {
        let mut turns = Vec::with_capacity(structured.len());
        for (position, item) in structured.into_iter().enumerate() {
            let speaker =
                Speaker::from_label(item.speaker.trim()).ok_or(TranscriptError::UnknownSpeakerLabel {
                    label: item.speaker.trim().to_string(),
                    line: position + 1,
                })?;
            let text = item.text.trim().to_string();
            if text.is_empty() {
                return Err(TranscriptError::EmptyTurnText { line: position + 1 });
            }
            turns.push((speaker, text));
        }
        if turns.is_empty() {
            return Err(TranscriptError::NoTurnsFound);
        }
        return Ok(Transcript::new(session_id, turns));
    }

    let mut turns: Vec<(Speaker, String)> = Vec::new();
    let mut current: Option<(Speaker, Vec<String>, usize)> = None;
    for (line_no, raw) in document.lines().enumerate() {
        let line_no = line_no + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some((speaker, rest)) = split_speaker_line(line) {
            let speaker = Speaker::from_label(speaker).ok_or(TranscriptError::UnknownSpeakerLabel {
                label: speaker.to_string(),
                line: line_no,
            })?;
            if let Some((prev_speaker, parts, opened_at)) = current.take() {
                finish_turn(&mut turns, prev_speaker, parts, opened_at)?;
            }
            let mut parts = Vec::new();
            if !rest.is_empty() {
                parts.push(rest.to_string());
            }
            current = Some((speaker, parts, line_no));
        } else {
            match &mut current {
                Some((_, parts, _)) => parts.push(line.to_string()),
                // text before any speaker label cannot be attributed to a turn
                None => {
                    let label = line.split_whitespace().next().unwrap_or(line).to_string();
                    return Err(TranscriptError::UnknownSpeakerLabel {
                        label,
                        line: line_no,
                    });
                }
            }
        }
    }
    if let Some((speaker, parts, opened_at)) = current {
        finish_turn(&mut turns, speaker, parts, opened_at)?;
    }
    if turns.is_empty() {
        return Err(TranscriptError::NoTurnsFound);
    }
    Ok(Transcript::new(session_id, turns))
}

fn split_speaker_line(line: &str) -> Option<(&str, &str)> {
    let (prefix, rest) = line.split_once(':')?;
    let prefix = prefix.trim();
    if !prefix.is_empty() && prefix.chars().all(|c| c.is_alphabetic()) {
        Some((prefix, rest.trim()))
    } else {
        None
    }
}

fn finish_turn(
    turns: &mut Vec<(Speaker, String)>,
    speaker: Speaker,
    parts: Vec<String>,
    opened_at: usize,
) -> Result<(), TranscriptError> {
    let text = parts.join(" ");
    if text.trim().is_empty() {
        return Err(TranscriptError::EmptyTurnText { line: opened_at });
    }
    turns.push((speaker, text));
    Ok(())
}

/// Descriptive statistics over a set of transcripts.
///
/// A word is a maximal whitespace-free token; a sentence is a maximal run of
/// terminal punctuation (`.`, `!`, `?`). These local definitions are the
/// simplest ones consistent with descriptive corpus statistics and are
/// documented so counts can be reconciled against other conventions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub session_count: usize,
    pub mean_words_per_session: f64,
    pub mean_sentences_per_session: f64,
    pub mean_therapist_turns: f64,
    pub mean_patient_turns: f64,
    /// Total words divided by total turns, over the whole corpus.
    pub mean_utterance_length_words: f64,
}

pub fn corpus_stats(transcripts: &[Transcript]) -> Result<CorpusStats, TranscriptError> {
    if transcripts.is_empty() {
        return Err(TranscriptError::EmptyCorpus);
    }
    let sessions = transcripts.len() as f64;
    let mut total_words = 0usize;
    let mut total_sentences = 0usize;
    let mut total_turns = 0usize;
    let mut therapist_turns = 0usize;
    let mut patient_turns = 0usize;
    for transcript in transcripts {
        for turn in transcript.turns() {
            total_words += word_count(&turn.text);
            total_sentences += sentence_count(&turn.text);
            total_turns += 1;
            match turn.speaker {
                Speaker::Therapist => therapist_turns += 1,
                Speaker::Patient => patient_turns += 1,
            }
        }
    }
    Ok(CorpusStats {
        session_count: transcripts.len(),
        mean_words_per_session: total_words as f64 / sessions,
        mean_sentences_per_session: total_sentences as f64 / sessions,
        mean_therapist_turns: therapist_turns as f64 / sessions,
        mean_patient_turns: patient_turns as f64 / sessions,
        mean_utterance_length_words: if total_turns == 0 {
            0.0
        } else {
            total_words as f64 / total_turns as f64
        },
    })
}

pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}

pub fn sentence_count(text: &str) -> usize {
    let mut count = 0;
    let mut in_run = false;
    for ch in text.chars() {
        let terminal = matches!(ch, '.' | '!' | '?');
        if terminal && !in_run {
            count += 1;
        }
        in_run = terminal;
    }
    count
}
