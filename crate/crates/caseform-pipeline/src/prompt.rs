//! Prompt construction for the two generation stages.
//!
//! Both prompts frame the model as a clinical psychologist, embed the full
//! rendered conversation, and demand JSON output. They are pure functions
//! of their inputs, so a given transcript always produces the same text.

use caseform_core::transcript::{Speaker, Transcript};

/// The four JSON keys the extraction stage must return.
pub const EXTRACTION_KEYS: [&str; 4] = [
    "presenting_problems",
    "predisposing_factors",
    "precipitating_factors",
    "perpetuating_factors",
];

pub fn render_conversation(t: &Transcript) -> String {
    let mut out = String::new();
    for turn in t.turns() {
        let speaker = match turn.speaker {
            Speaker::Therapist => "Therapist",
            Speaker::Patient => "Patient",
        };
        out.push_str(speaker);
        out.push_str(": ");
        out.push_str(&turn.text);
        out.push('\n');
    }
    out
}

/// Stage-one prompt: extract the four factor categories in one call.
pub fn build_extraction_prompt(t: &Transcript) -> String {
    format!(
        "You are a clinical psychologist reviewing a psychotherapy intake session.\n\
         \n\
         Identify the patient's presenting problems, predisposing factors, precipitating factors, and perpetuating factors from the conversation below.\n\
         \n\
         Respond in JSON format with exactly these keys: \"presenting_problems\", \"predisposing_factors\", \"precipitating_factors\", \"perpetuating_factors\". \
         Each key must map to a list of short factor phrases taken from the conversation. Use an empty list when a category does not apply.\n\
         \n\
         Conversation:\n{}",
        render_conversation(t)
    )
}

/// Stage-two prompt: judge one candidate causal link, given the running
/// list of already-accepted edges.
pub fn build_edge_prompt(
    source_label: &str,
    target_label: &str,
    t: &Transcript,
    known_edges: &[(String, String)],
) -> String {
    let mut known = String::new();
    if known_edges.is_empty() {
        known.push_str("- none so far\n");
    } else {
        for (from, to) in known_edges {
            known.push_str(&format!("- \"{from}\" causes \"{to}\"\n"));
        }
    }
    format!(
        "You are a clinical psychologist assessing causal links for a case formulation.\n\
         \n\
         Conversation:\n{}\
         \n\
         Causal links identified so far:\n{}\
         \n\
         Question: Does \"{}\" cause \"{}\"?\n\
         \n\
         Answer in JSON format with a single key, exactly {{\"answer\": \"TRUE\"}} or {{\"answer\": \"FALSE\"}}.",
        render_conversation(t),
        known,
        source_label,
        target_label
    )
}
