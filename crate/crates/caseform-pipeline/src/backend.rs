//! Chat-completion backend contract and configuration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendError {
    /// Transport-level failure: connection refused, timeout, bad status,
    /// exhausted script. Retried up to the configured limit.
    #[error("backend transport failure: {0}")]
    Transport(String),
}

/// A text-in/text-out completion backend.
///
/// Implementations must tolerate concurrent calls. Scripted (mock)
/// implementations are deterministic: identical prompt sequences yield
/// identical responses.
pub trait ChatBackend: Sync {
    fn complete(&self, prompt: &str) -> Result<String, BackendError>;
}

fn default_max_retries() -> u32 {
    2
}

fn default_timeout() -> f64 {
    30.0
}

fn default_parallelism() -> usize {
    1
}

/// Backend configuration, usually loaded from a JSON file:
/// `{endpoint, model_name, temperature, max_retries, request_timeout,
/// parallelism, api_key_env_var}`.
///
/// The decoding temperature defaults to 0 so runs are reproducible. The API
/// key is never stored in the file; `api_key_env_var` names the environment
/// variable to read it from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendConfig {
    pub endpoint: String,
    pub model_name: String,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
    /// Seconds per request.
    #[serde(default = "default_timeout")]
    pub request_timeout: f64,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default)]
    pub api_key_env_var: Option<String>,
}

impl BackendConfig {
    /// Configuration for tests and mock runs.
    pub fn mock() -> BackendConfig {
        BackendConfig {
            endpoint: "mock".into(),
            model_name: "scripted".into(),
            temperature: 0.0,
            max_retries: 2,
            request_timeout: 30.0,
            parallelism: 1,
            api_key_env_var: None,
        }
    }

    pub fn with_parallelism(mut self, parallelism: usize) -> BackendConfig {
        self.parallelism = parallelism;
        self
    }

    pub fn with_max_retries(mut self, max_retries: u32) -> BackendConfig {
        self.max_retries = max_retries;
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.parallelism < 1 {
            return Err("parallelism must be at least 1".into());
        }
        if self.max_retries > 10 {
            return Err(format!("max_retries {} exceeds the limit of 10", self.max_retries));
        }
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return Err(format!("temperature {} must be nonnegative", self.temperature));
        }
        if self.request_timeout.is_nan() || self.request_timeout <= 0.0 {
            return Err(format!("request_timeout {} must be positive", self.request_timeout));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_apply() {
        let cfg: BackendConfig =
            serde_json::from_str(r#"{"endpoint": "http://localhost:1", "model_name": "m"}"#)
                .unwrap();
        assert_eq!(cfg.temperature, 0.0);
        assert_eq!(cfg.max_retries, 2);
        assert_eq!(cfg.parallelism, 1);
        assert_eq!(cfg.request_timeout, 30.0);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut cfg = BackendConfig::mock();
        cfg.parallelism = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = BackendConfig::mock();
        cfg.max_retries = 11;
        assert!(cfg.validate().is_err());
        let mut cfg = BackendConfig::mock();
        cfg.temperature = -1.0;
        assert!(cfg.validate().is_err());
    }
}
