//! Perplexity of original, gold-substituted and system-substituted sentences.

use std::collections::HashMap;

use serde::Serialize;

use super::{substitute_in_sentence, QualityError};
use crate::backends::{BackendError, Scorer};
use crate::corpus::{CanonicalRecord, PredictionFile, MAX_PREDICTIONS};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstancePerplexity {
    pub id: String,
    pub baseline: f64,
    pub gold: f64,
    /// `None` when the instance has no predictions.
    pub top10: Option<f64>,
    pub topmatch: Option<f64>,
    pub top10_sentences: Vec<String>,
    pub topmatch_sentences: Vec<String>,
}

/// Column means over instances; each instance first averages its own
/// sentences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerplexityReport {
    pub baseline_ppl: f64,
    pub gold_ppl: f64,
    pub top10_ppl: f64,
    pub topmatch_ppl: f64,
    pub n_instances: usize,
    pub n_predicted: usize,
    pub n_sentences_baseline: usize,
    pub n_sentences_gold: usize,
    pub n_sentences_top10: usize,
    pub n_sentences_topmatch: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub per_instance: Vec<InstancePerplexity>,
}

struct CachedScorer<'a> {
    scorer: &'a dyn Scorer,
    cache: HashMap<String, f64>,
}

impl CachedScorer<'_> {
    fn ppl(&mut self, text: &str) -> Result<f64, BackendError> {
        if let Some(&p) = self.cache.get(text) {
            return Ok(p);
        }
        let score = self.scorer.score(text)?;
        if score.token_count == 0 {
            return Err(BackendError::ZeroTokens);
        }
        let p = score.perplexity();
        self.cache.insert(text.to_string(), p);
        Ok(p)
    }

    fn mean(&mut self, texts: &[String]) -> Result<f64, BackendError> {
        let mut sum = 0.0;
        for t in texts {
            sum += self.ppl(t)?;
        }
        Ok(sum / texts.len() as f64)
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Scores every record. Top-10 uses all (at most ten) predictions; Top-Match
/// uses the first `min(|gold|, |predictions|)`. Records without predictions
/// still count towards the baseline and gold columns.
pub fn perplexity_report(
    records: &[CanonicalRecord],
    predictions: &PredictionFile,
    scorer: &dyn Scorer,
    keep_per_instance: bool,
) -> Result<PerplexityReport, QualityError> {
    let mut cached = CachedScorer {
        scorer,
        cache: HashMap::new(),
    };
    let mut rows = Vec::with_capacity(records.len());
    for record in records {
        let inst = &record.instance;
        let baseline = cached.ppl(&inst.sentence)?;
        let gold_sentences: Vec<String> = record
            .gold
            .entries()
            .iter()
            .map(|e| substitute_in_sentence(inst, &e.sub))
            .collect();
        let gold = cached.mean(&gold_sentences)?;
        let preds = predictions.get(record.id()).unwrap_or(&[]);
        let preds = &preds[..preds.len().min(MAX_PREDICTIONS)];
        let top10_sentences: Vec<String> = preds
            .iter()
            .map(|p| substitute_in_sentence(inst, p))
            .collect();
        let k = record.gold.len().min(top10_sentences.len());
        let topmatch_sentences = top10_sentences[..k].to_vec();
        let (top10, topmatch) = if top10_sentences.is_empty() {
            (None, None)
        } else {
            (
                Some(cached.mean(&top10_sentences)?),
                Some(cached.mean(&topmatch_sentences)?),
            )
        };
        rows.push(InstancePerplexity {
            id: record.id().to_string(),
            baseline,
            gold,
            top10,
            topmatch,
            top10_sentences,
            topmatch_sentences,
        });
    }
    Ok(PerplexityReport {
        baseline_ppl: mean(rows.iter().map(|r| r.baseline)),
        gold_ppl: mean(rows.iter().map(|r| r.gold)),
        top10_ppl: mean(rows.iter().filter_map(|r| r.top10)),
        topmatch_ppl: mean(rows.iter().filter_map(|r| r.topmatch)),
        n_instances: rows.len(),
        n_predicted: rows.iter().filter(|r| r.top10.is_some()).count(),
        n_sentences_baseline: rows.len(),
        n_sentences_gold: records.iter().map(|r| r.gold.len()).sum(),
        n_sentences_top10: rows.iter().map(|r| r.top10_sentences.len()).sum(),
        n_sentences_topmatch: rows.iter().map(|r| r.topmatch_sentences.len()).sum(),
        per_instance: if keep_per_instance { rows } else { Vec::new() },
    })
}
