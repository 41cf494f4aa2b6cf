//! Scripted mock backend driven by a text fixture file.
//!
//! Two modes share one JSON schema. Keyed mode lists substring-match rules
//! (first match wins) with an optional default, and is stateless, so it is
//! safe and deterministic under concurrent calls. Ordered mode replays
//! responses in call order and suits sequential tests only.
//!
//! ```json
//! {
//!   "rules": [{"contains": "...", "response": "..."}],
//!   "default": "...",
//!   "ordered": ["first response", "second response"]
//! }
//! ```

use std::collections::VecDeque;
use std::sync::Mutex;

use serde::Deserialize;

use crate::backend::{BackendError, ChatBackend};

#[derive(Debug, Clone, Deserialize)]
pub struct ScriptRule {
    /// Substring that must occur in the prompt for this rule to fire.
    pub contains: String,
    pub response: String,
}

#[derive(Debug, Default, Deserialize)]
struct ScriptFile {
    #[serde(default)]
    rules: Vec<ScriptRule>,
    #[serde(default)]
    default: Option<String>,
    #[serde(default)]
    ordered: Vec<String>,
}

pub struct ScriptedBackend {
    rules: Vec<ScriptRule>,
    default: Option<String>,
    ordered: Option<Mutex<VecDeque<String>>>,
}

impl ScriptedBackend {
    pub fn keyed(rules: Vec<ScriptRule>, default: Option<String>) -> ScriptedBackend {
        ScriptedBackend {
            rules,
            default,
            ordered: None,
        }
    }

    pub fn ordered(responses: Vec<String>) -> ScriptedBackend {
        ScriptedBackend {
            rules: Vec::new(),
            default: None,
            ordered: Some(Mutex::new(responses.into())),
        }
    }

    pub fn from_json(text: &str) -> Result<ScriptedBackend, String> {
        let file: ScriptFile =
            serde_json::from_str(text).map_err(|e| format!("bad script file: {e}"))?;
        if !file.ordered.is_empty() && (!file.rules.is_empty() || file.default.is_some()) {
            return Err("script file mixes ordered and keyed modes".into());
        }
        if file.ordered.is_empty() {
            Ok(ScriptedBackend::keyed(file.rules, file.default))
        } else {
            Ok(ScriptedBackend::ordered(file.ordered))
        }
    }

    pub fn from_file(path: &std::path::Path) -> Result<ScriptedBackend, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read script {}: {e}", path.display()))?;
        ScriptedBackend::from_json(&text)
    }
}

impl ChatBackend for ScriptedBackend {
    fn complete(&self, prompt: &str) -> Result<String, BackendError> {
        if let Some(queue) = &self.ordered {
            return queue
                .lock()
                .expect("script queue lock")
                .pop_front()
                .ok_or_else(|| BackendError::Transport("ordered script exhausted".into()));
        }
        for rule in &self.rules {
            if prompt.contains(&rule.contains) {
                return Ok(rule.response.clone());
            }
        }
        self.default
            .clone()
            .ok_or_else(|| BackendError::Transport("no scripted response matches prompt".into()))
    }
}
