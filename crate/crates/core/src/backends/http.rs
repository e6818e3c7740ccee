use std::sync::OnceLock;
use std::thread;
use std::time::Duration;

use reqwest::blocking::Client;
use reqwest::StatusCode;
use serde::Serialize;
use serde_json::Value;

use super::wire::{self, EmbedRequest, FillMaskRequest, ScoreRequest};
use super::{
    check_mask_count, BackendError, Embedder, FillMask, Scorer, SentenceScore, TokenPrediction,
};

/// Bounded exponential backoff; only HTTP 503 and transport failures retry.
#[derive(Debug, Clone, Copy)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            attempts: 3,
            base_delay: Duration::from_millis(200),
        }
    }
}

/// Client for a model sidecar speaking the JSON protocol on `base_url`.
pub struct HttpBackend {
    base_url: String,
    client: Client,
    retry: RetryPolicy,
    model_id: String,
    mask_marker: String,
    separator: String,
    dim: OnceLock<usize>,
}

impl HttpBackend {
    pub fn new(base_url: impl Into<String>) -> Result<Self, BackendError> {
        let client = Client::builder()
            .timeout(Duration::from_secs(120))
            .build()
            .map_err(|e| BackendError::Unavailable(e.to_string()))?;
        Ok(HttpBackend {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            client,
            retry: RetryPolicy::default(),
            model_id: "remote".into(),
            mask_marker: "<mask>".into(),
            separator: " </s></s> ".into(),
            dim: OnceLock::new(),
        })
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn with_model_id(mut self, model_id: impl Into<String>) -> Self {
        self.model_id = model_id.into();
        self
    }

    pub fn with_prompt_tokens(
        mut self,
        mask_marker: impl Into<String>,
        separator: impl Into<String>,
    ) -> Self {
        self.mask_marker = mask_marker.into();
        self.separator = separator.into();
        self
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    fn post<B: Serialize>(&self, path: &str, body: &B) -> Result<Value, BackendError> {
        let url = format!("{}{path}", self.base_url);
        let mut last = BackendError::Unavailable(format!("no attempt made against {url}"));
        for attempt in 0..self.retry.attempts.max(1) {
            if attempt > 0 {
                thread::sleep(self.retry.base_delay * 2u32.pow(attempt - 1));
            }
            match self.client.post(&url).json(body).send() {
                Ok(resp) if resp.status() == StatusCode::SERVICE_UNAVAILABLE => {
                    last = BackendError::Unavailable(format!("{url} answered 503"));
                }
                Ok(resp) if !resp.status().is_success() => {
                    return Err(BackendError::Unavailable(format!(
                        "{url} answered {}",
                        resp.status()
                    )));
                }
                Ok(resp) => {
                    let bytes = resp
                        .bytes()
                        .map_err(|e| BackendError::Unavailable(e.to_string()))?;
                    return serde_json::from_slice(&bytes)
                        .map_err(|e| BackendError::Malformed(format!("{url}: {e}")));
                }
                Err(e) if e.is_connect() || e.is_timeout() || e.is_request() => {
                    last = BackendError::Unavailable(format!("{url}: {e}"));
                }
                Err(e) => return Err(BackendError::Unavailable(format!("{url}: {e}"))),
            }
        }
        Err(last)
    }
}

impl FillMask for HttpBackend {
    fn mask_marker(&self) -> &str {
        &self.mask_marker
    }

    fn separator(&self) -> &str {
        &self.separator
    }

    fn fill_mask(&self, text: &str, top_k: usize) -> Result<Vec<TokenPrediction>, BackendError> {
        check_mask_count(text, &self.mask_marker)?;
        let body = self.post("/fill-mask", &FillMaskRequest { text, top_k })?;
        wire::decode_fill_mask(body, top_k)
    }
}

impl Embedder for HttpBackend {
    fn model_id(&self) -> &str {
        &self.model_id
    }

    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, BackendError> {
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let body = self.post("/embed", &EmbedRequest { texts })?;
        let vectors = wire::decode_embed(body, texts.len(), self.dim.get().copied())?;
        if let Some(first) = vectors.first() {
            let dim = *self.dim.get_or_init(|| first.len());
            if first.len() != dim {
                return Err(BackendError::Malformed(format!(
                    "dimension changed from {dim} to {}",
                    first.len()
                )));
            }
        }
        Ok(vectors)
    }
}

impl Scorer for HttpBackend {
    fn score(&self, text: &str) -> Result<SentenceScore, BackendError> {
        if text.trim().is_empty() {
            return Err(BackendError::ZeroTokens);
        }
        let body = self.post("/score", &ScoreRequest { text })?;
        wire::decode_score(body)
    }
}
