//! Request/response bodies and response validation.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{BackendError, SentenceScore, TokenPrediction};

pub const UNIT_NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Serialize)]
pub struct FillMaskRequest<'a> {
    pub text: &'a str,
    pub top_k: usize,
}

#[derive(Debug, Serialize)]
pub struct EmbedRequest<'a> {
    pub texts: &'a [String],
}

#[derive(Debug, Serialize)]
pub struct ScoreRequest<'a> {
    pub text: &'a str,
}

#[derive(Debug, Deserialize)]
struct FillMaskResponse {
    predictions: Vec<TokenPrediction>,
}

#[derive(Debug, Deserialize)]
struct EmbedResponse {
    vectors: Vec<Vec<f64>>,
}

fn malformed(e: impl std::fmt::Display) -> BackendError {
    BackendError::Malformed(e.to_string())
}

pub fn decode_fill_mask(body: Value, top_k: usize) -> Result<Vec<TokenPrediction>, BackendError> {
    let resp: FillMaskResponse = serde_json::from_value(body).map_err(malformed)?;
    validate_predictions(&resp.predictions, top_k)?;
    Ok(resp.predictions)
}

pub fn validate_predictions(preds: &[TokenPrediction], top_k: usize) -> Result<(), BackendError> {
    if preds.len() > top_k {
        return Err(malformed(format!(
            "{} predictions returned for top_k={top_k}",
            preds.len()
        )));
    }
    for p in preds {
        if !p.logprob.is_finite() || p.logprob > 0.0 {
            return Err(malformed(format!(
                "logprob {} for {:?} is not a finite value <= 0",
                p.logprob, p.token
            )));
        }
    }
    if preds.windows(2).any(|w| w[1].logprob > w[0].logprob) {
        return Err(malformed("predictions not sorted by non-increasing logprob"));
    }
    Ok(())
}

pub fn decode_embed(
    body: Value,
    n_texts: usize,
    dim: Option<usize>,
) -> Result<Vec<Vec<f64>>, BackendError> {
    let resp: EmbedResponse = serde_json::from_value(body).map_err(malformed)?;
    if resp.vectors.len() != n_texts {
        return Err(malformed(format!(
            "{} vectors returned for {n_texts} texts",
            resp.vectors.len()
        )));
    }
    let dim = dim.or_else(|| resp.vectors.first().map(Vec::len));
    for v in &resp.vectors {
        validate_vector(v, dim)?;
    }
    Ok(resp.vectors)
}

pub fn validate_vector(v: &[f64], dim: Option<usize>) -> Result<(), BackendError> {
    if let Some(dim) = dim {
        if v.len() != dim {
            return Err(malformed(format!("vector of dimension {} where {dim} declared", v.len())));
        }
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(malformed("non-finite vector component"));
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
        return Err(malformed(format!("vector norm {norm} is not 1")));
    }
    Ok(())
}

pub fn decode_score(body: Value) -> Result<SentenceScore, BackendError> {
    let score: SentenceScore = serde_json::from_value(body).map_err(malformed)?;
    if !score.nll_sum.is_finite() || score.nll_sum < 0.0 {
        return Err(malformed(format!("nll_sum {} must be finite and >= 0", score.nll_sum)));
    }
    if score.token_count == 0 {
        return Err(BackendError::ZeroTokens);
    }
    Ok(score)
}
