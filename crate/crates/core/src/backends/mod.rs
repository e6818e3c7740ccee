//! Model capabilities behind a small JSON wire protocol.
//!
//! | capability | path         | request              | response                                   |
//! |------------|--------------|----------------------|--------------------------------------------|
//! | fill-mask  | `/fill-mask` | `{"text","top_k"}`   | `{"predictions":[{"token","logprob"}]}`    |
//! | embed      | `/embed`     | `{"texts":[...]}`    | `{"vectors":[[...]]}`                      |
//! | score      | `/score`     | `{"text"}`           | `{"nll_sum","token_count"}`                |
//!
//! Both [`HttpBackend`] and [`FixtureBackend`] decode responses through the
//! same validation in [`wire`], so a fixture exercises the same contract as a
//! live sidecar.

mod fixture;
mod http;
pub mod wire;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fixture::{FixtureBackend, FixtureRecord, UniformScorer};
pub use http::{HttpBackend, RetryPolicy};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackendError {
    #[error("backend unavailable: {0}")]
    Unavailable(String),
    #[error("malformed backend response: {0}")]
    Malformed(String),
    #[error("expected exactly one mask marker {marker:?}, found {found}")]
    MaskCount { marker: String, found: usize },
    #[error("text has no tokens to score")]
    ZeroTokens,
    #[error("fixture has no {capability} entry for {key:?}")]
    FixtureMiss { capability: Capability, key: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Capability {
    FillMask,
    Embed,
    Score,
}

impl std::fmt::Display for Capability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Capability::FillMask => "fill_mask",
            Capability::Embed => "embed",
            Capability::Score => "score",
        })
    }
}

/// Records which model backs a run; echoed into run manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendDescriptor {
    pub capability: Capability,
    pub endpoint: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask_marker: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separator: Option<String>,
    pub model_id: String,
}

impl BackendDescriptor {
    pub fn validate(&self) -> Result<(), String> {
        if self.capability == Capability::FillMask {
            let ok = |v: &Option<String>| v.as_deref().is_some_and(|s| !s.is_empty());
            if !ok(&self.mask_marker) || !ok(&self.separator) {
                return Err("fill-mask backends must declare a mask marker and separator".into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenPrediction {
    pub token: String,
    pub logprob: f64,
}

impl TokenPrediction {
    pub fn new(token: impl Into<String>, logprob: f64) -> Self {
        TokenPrediction {
            token: token.into(),
            logprob,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentenceScore {
    pub nll_sum: f64,
    pub token_count: u64,
}

impl SentenceScore {
    pub fn perplexity(&self) -> f64 {
        (self.nll_sum / self.token_count as f64).exp()
    }
}

pub trait FillMask: Send + Sync {
    fn mask_marker(&self) -> &str;
    fn separator(&self) -> &str;
    /// Top `top_k` predictions for the single masked slot in `text`.
    fn fill_mask(&self, text: &str, top_k: usize) -> Result<Vec<TokenPrediction>, BackendError>;
}

pub trait Embedder: Send + Sync {
    fn model_id(&self) -> &str;
    /// Unit-length vectors, one per input text.
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, BackendError>;
}

pub trait Scorer: Send + Sync {
    fn score(&self, text: &str) -> Result<SentenceScore, BackendError>;
}

pub(crate) fn check_mask_count(text: &str, marker: &str) -> Result<(), BackendError> {
    let found = text.matches(marker).count();
    if found != 1 {
        return Err(BackendError::MaskCount {
            marker: marker.to_string(),
            found,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_needs_marker_for_fill_mask() {
        let mut d = BackendDescriptor {
            capability: Capability::FillMask,
            endpoint: "http://localhost:8000".into(),
            mask_marker: Some("<mask>".into()),
            separator: None,
            model_id: "roberta-base".into(),
        };
        assert!(d.validate().is_err());
        d.separator = Some(" </s></s> ".into());
        assert!(d.validate().is_ok());
        d.capability = Capability::Score;
        d.mask_marker = None;
        assert!(d.validate().is_ok());
    }

    #[test]
    fn perplexity_of_uniform_score() {
        let s = SentenceScore {
            nll_sum: 5.0 * 50f64.ln(),
            token_count: 5,
        };
        assert!((s.perplexity() - 50.0).abs() < 1e-9);
    }
}
