//! HTTP implementations of the chat backend and the embedding provider.
//!
//! Wire protocol (both endpoints are plain `POST` with JSON bodies):
//!
//! - Completion: request `{"model", "prompt", "temperature"}`; response
//!   `{"completion": "..."}`.
//! - Embedding: request `{"text": "..."}`; response
//!   `{"embedding": [f64; d]}` (normalized on receipt).
//!
//! When `api_key_env_var` names an environment variable that is set, its
//! value is sent as a `Bearer` token. Keys are never read from config
//! files.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use caseform_core::semantic::{EmbeddingProvider, SemanticError};

use crate::backend::{BackendConfig, BackendError, ChatBackend};

#[derive(Serialize)]
struct CompletionRequest<'a> {
    model: &'a str,
    prompt: &'a str,
    temperature: f64,
}

#[derive(Deserialize)]
struct CompletionResponse {
    completion: String,
}

pub struct HttpChatBackend {
    agent: ureq::Agent,
    config: BackendConfig,
}

impl HttpChatBackend {
    pub fn new(config: BackendConfig) -> HttpChatBackend {
        let timeout = Duration::from_secs_f64(config.request_timeout);
        let agent = ureq::AgentBuilder::new()
            .timeout_read(timeout)
            .timeout_write(timeout)
            .timeout_connect(timeout.min(Duration::from_secs(10)))
            .build();
        HttpChatBackend { agent, config }
    }

    fn api_key(&self) -> Option<String> {
        self.config
            .api_key_env_var
            .as_deref()
            .and_then(|var| std::env::var(var).ok())
            .filter(|key| !key.is_empty())
    }
}

impl ChatBackend for HttpChatBackend {
    fn complete(&self, prompt: &str) -> Result<String, BackendError> {
        let body = CompletionRequest {
            model: &self.config.model_name,
            prompt,
            temperature: self.config.temperature,
        };
        let mut request = self.agent.post(&self.config.endpoint);
        if let Some(key) = self.api_key() {
            request = request.set("Authorization", &format!("Bearer {key}"));
        }
        let response = request
            .send_json(&body)
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        let parsed: CompletionResponse = response
            .into_json()
            .map_err(|e| BackendError::Transport(format!("bad completion payload: {e}")))?;
        Ok(parsed.completion)
    }
}

/// Configuration for a remote embedding endpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbedderConfig {
    pub endpoint: String,
    pub dimension: usize,
    #[serde(default = "default_embed_timeout")]
    pub request_timeout: f64,
    #[serde(default)]
    pub api_key_env_var: Option<String>,
}

fn default_embed_timeout() -> f64 {
    30.0
}

#[derive(Serialize)]
struct EmbeddingRequest<'a> {
    text: &'a str,
}

#[derive(Deserialize)]
struct EmbeddingResponse {
    embedding: Vec<f64>,
}

pub struct HttpEmbedder {
    agent: ureq::Agent,
    config: EmbedderConfig,
}

impl HttpEmbedder {
    pub fn new(config: EmbedderConfig) -> HttpEmbedder {
        let timeout = Duration::from_secs_f64(config.request_timeout);
        let agent = ureq::AgentBuilder::new()
            .timeout_read(timeout)
            .timeout_write(timeout)
            .timeout_connect(timeout.min(Duration::from_secs(10)))
            .build();
        HttpEmbedder { agent, config }
    }
}

impl EmbeddingProvider for HttpEmbedder {
    fn dimension(&self) -> usize {
        self.config.dimension
    }

    fn embed(&self, text: &str) -> Result<Vec<f64>, SemanticError> {
        let failure = |message: String| SemanticError::ProviderFailure {
            text: text.to_string(),
            message,
        };
        let mut request = self.agent.post(&self.config.endpoint);
        if let Some(var) = self.config.api_key_env_var.as_deref() {
            if let Ok(key) = std::env::var(var) {
                if !key.is_empty() {
                    request = request.set("Authorization", &format!("Bearer {key}"));
                }
            }
        }
        let response = request
            .send_json(&EmbeddingRequest { text })
            .map_err(|e| failure(e.to_string()))?;
        let parsed: EmbeddingResponse = response
            .into_json()
            .map_err(|e| failure(format!("bad embedding payload: {e}")))?;
        if parsed.embedding.len() != self.config.dimension {
            return Err(SemanticError::DimensionMismatch {
                expected: self.config.dimension,
                actual: parsed.embedding.len(),
            });
        }
        let norm = parsed.embedding.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= 1e-12 {
            return Err(failure("embedding endpoint returned a zero vector".into()));
        }
        Ok(parsed.embedding.into_iter().map(|x| x / norm).collect())
    }
}
