//! Backend and embedder specification parsing.
//!
//! A backend spec is either `mock:<script-file>` or the path of a JSON
//! config file (`{endpoint, model_name, temperature, max_retries,
//! request_timeout, parallelism, api_key_env_var}`). An embedder spec is
//! `mock` (deterministic hash vectors), `fixture:<table-file>`, or the path
//! of a JSON config for a remote endpoint. Secrets travel only through the
//! environment variable named in the config, never the file itself.

use std::path::{Path, PathBuf};

use caseform_core::semantic::{EmbeddingProvider, FixtureEmbedder, HashEmbedder};
use caseform_pipeline::{
    BackendConfig, ChatBackend, EmbedderConfig, HttpChatBackend, HttpEmbedder, ScriptedBackend,
};

pub enum BackendSpec {
    Mock(PathBuf),
    Http(BackendConfig),
}

pub fn parse_backend_spec(spec: &str) -> Result<BackendSpec, String> {
    if let Some(path) = spec.strip_prefix("mock:") {
        return Ok(BackendSpec::Mock(PathBuf::from(path)));
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| format!("cannot read backend config `{spec}`: {e}"))?;
    let config: BackendConfig =
        serde_json::from_str(&text).map_err(|e| format!("bad backend config `{spec}`: {e}"))?;
    config.validate()?;
    Ok(BackendSpec::Http(config))
}

/// Materializes a backend; mock runs use a default [`BackendConfig`] whose
/// parallelism/retries can still be overridden by flags.
pub fn build_backend(
    spec: &BackendSpec,
    parallelism_override: Option<usize>,
) -> Result<(Box<dyn ChatBackend>, BackendConfig), String> {
    match spec {
        BackendSpec::Mock(path) => {
            let backend = ScriptedBackend::from_file(path)?;
            let mut config = BackendConfig::mock();
            if let Some(p) = parallelism_override {
                config.parallelism = p;
            }
            config.validate()?;
            Ok((Box::new(backend), config))
        }
        BackendSpec::Http(config) => {
            let mut config = config.clone();
            if let Some(p) = parallelism_override {
                config.parallelism = p;
            }
            config.validate()?;
            Ok((Box::new(HttpChatBackend::new(config.clone())), config))
        }
    }
}

pub fn build_embedder(spec: &str) -> Result<Box<dyn EmbeddingProvider>, String> {
    match spec {
        "mock" | "hash" => Ok(Box::new(HashEmbedder::default())),
        other => {
            if let Some(path) = other.strip_prefix("fixture:") {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read embedding fixture `{path}`: {e}"))?;
                return Ok(Box::new(FixtureEmbedder::parse(&text)?));
            }
            let text = std::fs::read_to_string(other)
                .map_err(|e| format!("cannot read embedder config `{other}`: {e}"))?;
            let config: EmbedderConfig = serde_json::from_str(&text)
                .map_err(|e| format!("bad embedder config `{other}`: {e}"))?;
            Ok(Box::new(HttpEmbedder::new(config)))
        }
    }
}

pub fn session_id_from_path(path: &Path) -> String {
    path.file_stem()
        .map(|stem| stem.to_string_lossy().into_owned())
        .unwrap_or_else(|| "session".to_string())
}
