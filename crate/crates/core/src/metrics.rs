//! Benchmark scores: best, best-mode, oot, oot-mode, P@k, top-3 coverage
//! (T3C) and mismatch percentage (MMP). Matching is exact string equality
//! after case-folding.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CanonicalRecord, GoldSet, PredictionFile, MAX_PREDICTIONS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("no guesses to score")]
    EmptyGuesses,
    #[error("{0} guesses given; oot accepts at most 10")]
    TooManyGuesses(usize),
}

/// Σ weight(guess) / (|guesses| · total weight).
pub fn best_score<S: AsRef<str>>(gold: &GoldSet, guesses: &[S]) -> Result<f64, MetricError> {
    if guesses.is_empty() {
        return Err(MetricError::EmptyGuesses);
    }
    let credit: u32 = guesses.iter().map(|g| gold.weight(g.as_ref())).sum();
    Ok(credit as f64 / (guesses.len() as f64 * gold.total_weight() as f64))
}

/// `None` when the gold has no unique mode (excluded from the denominator).
pub fn best_mode_score<S: AsRef<str>>(
    gold: &GoldSet,
    guesses: &[S],
) -> Result<Option<f64>, MetricError> {
    let first = guesses.first().ok_or(MetricError::EmptyGuesses)?;
    Ok(gold
        .mode()
        .map(|m| f64::from(u8::from(first.as_ref().to_lowercase() == m))))
}

/// Σ weight(guess) / total weight over at most ten guesses.
pub fn oot_score<S: AsRef<str>>(gold: &GoldSet, top10: &[S]) -> Result<f64, MetricError> {
    if top10.len() > MAX_PREDICTIONS {
        return Err(MetricError::TooManyGuesses(top10.len()));
    }
    let credit: u32 = top10.iter().map(|g| gold.weight(g.as_ref())).sum();
    Ok(credit as f64 / gold.total_weight() as f64)
}

pub fn oot_mode_score<S: AsRef<str>>(
    gold: &GoldSet,
    top10: &[S],
) -> Result<Option<f64>, MetricError> {
    if top10.len() > MAX_PREDICTIONS {
        return Err(MetricError::TooManyGuesses(top10.len()));
    }
    Ok(gold.mode().map(|m| {
        f64::from(u8::from(
            top10.iter().any(|g| g.as_ref().to_lowercase() == m),
        ))
    }))
}

/// 1 when any of the first `k` predictions is a gold substitute.
pub fn precision_at_k<S: AsRef<str>>(gold: &GoldSet, predictions: &[S], k: usize) -> f64 {
    let hit = predictions
        .iter()
        .take(k)
        .any(|p| gold.contains(p.as_ref()));
    f64::from(u8::from(hit))
}

/// Gold hits among the first three predictions, and how many were looked at.
pub fn top3_hits<S: AsRef<str>>(gold: &GoldSet, predictions: &[S]) -> (usize, usize) {
    let considered = predictions.len().min(3);
    let hits = predictions[..considered]
        .iter()
        .filter(|p| gold.contains(p.as_ref()))
        .count();
    (hits, considered)
}

/// T3C and MMP in percent over a dataset.
pub fn t3c_mmp<S: AsRef<str>>(items: &[(&GoldSet, &[S])]) -> (f64, f64) {
    if items.is_empty() {
        return (0.0, 0.0);
    }
    let mut hits = 0;
    let mut considered = 0;
    let mut misses = 0;
    for (gold, preds) in items {
        let (h, c) = top3_hits(gold, preds);
        hits += h;
        considered += c;
        if h == 0 {
            misses += 1;
        }
    }
    let t3c = if considered == 0 {
        0.0
    } else {
        100.0 * hits as f64 / considered as f64
    };
    (t3c, 100.0 * misses as f64 / items.len() as f64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoringOptions {
    /// Drop multiword gold entries before scoring; instances left with no
    /// gold are skipped entirely.
    pub exclude_multiword_gold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceScore {
    pub id: String,
    pub answered: bool,
    pub best: f64,
    pub best_mode: Option<f64>,
    pub oot: f64,
    pub oot_mode: Option<f64>,
    pub p_at_1: f64,
    pub p_at_3: f64,
    pub top3_hits: usize,
    pub top3_considered: usize,
}

/// All benchmark scores for one (system, dataset) pair, in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub best: f64,
    pub best_mode: f64,
    pub oot: f64,
    pub oot_mode: f64,
    pub p_at_1: f64,
    pub p_at_3: f64,
    pub t3c: f64,
    pub mmp: f64,
    pub n_instances: usize,
    pub n_with_mode: usize,
    pub n_unanswered: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_instance: Vec<InstanceScore>,
}

impl MetricReport {
    /// Stable key order used for the machine-readable report.
    pub const KEYS: [&'static str; 8] =
        ["best", "best_mode", "oot", "oot_mode", "p1", "p3", "t3c", "mmp"];

    pub fn values(&self) -> [f64; 8] {
        [
            self.best,
            self.best_mode,
            self.oot,
            self.oot_mode,
            self.p_at_1,
            self.p_at_3,
            self.t3c,
            self.mmp,
        ]
    }

    /// `key=value` lines with two decimals, plus the instance counts.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        for (k, v) in Self::KEYS.iter().zip(self.values()) {
            out.push_str(&format!("{k}={v:.2}\n"));
        }
        out.push_str(&format!("n_instances={}\n", self.n_instances));
        out.push_str(&format!("n_with_mode={}\n", self.n_with_mode));
        out.push_str(&format!("n_unanswered={}\n", self.n_unanswered));
        out
    }
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header = ["best", "best-mode", "oot", "oot-mode", "P@1", "P@3", "T3C", "MMP"];
        for h in header {
            write!(f, "{h:>10}")?;
        }
        writeln!(f)?;
        for v in self.values() {
            write!(f, "{v:>10.2}")?;
        }
        writeln!(f)?;
        write!(
            f,
            "instances: {} (with mode: {}, unanswered: {})",
            self.n_instances, self.n_with_mode, self.n_unanswered
        )
    }
}

fn score_instance(id: &str, gold: &GoldSet, preds: Option<&[String]>) -> InstanceScore {
    let preds = preds.unwrap_or(&[]);
    let preds = &preds[..preds.len().min(MAX_PREDICTIONS)];
    let answered = !preds.is_empty();
    let zero_if_mode = gold.mode().map(|_| 0.0);
    let (top3_hits, top3_considered) = top3_hits(gold, preds);
    InstanceScore {
        id: id.to_string(),
        answered,
        best: if answered { best_score(gold, &preds[..1]).unwrap() } else { 0.0 },
        best_mode: if answered {
            best_mode_score(gold, &preds[..1]).unwrap()
        } else {
            zero_if_mode
        },
        oot: if answered { oot_score(gold, preds).unwrap() } else { 0.0 },
        oot_mode: if answered {
            oot_mode_score(gold, preds).unwrap()
        } else {
            zero_if_mode
        },
        p_at_1: precision_at_k(gold, preds, 1),
        p_at_3: precision_at_k(gold, preds, 3),
        top3_hits,
        top3_considered,
    }
}

pub fn evaluate(records: &[CanonicalRecord], predictions: &PredictionFile) -> MetricReport {
    evaluate_with(records, predictions, ScoringOptions::default(), false)
}

/// Averages per-instance scores. Missing predictions count as unanswered
/// (zero credit, still in every denominator).
pub fn evaluate_with(
    records: &[CanonicalRecord],
    predictions: &PredictionFile,
    options: ScoringOptions,
    keep_per_instance: bool,
) -> MetricReport {
    let scores: Vec<InstanceScore> = records
        .iter()
        .filter_map(|r| {
            let gold = if options.exclude_multiword_gold {
                r.gold.single_words()?
            } else {
                r.gold.clone()
            };
            Some(score_instance(r.id(), &gold, predictions.get(r.id())))
        })
        .collect();
    let n = scores.len();
    let pct_mean = |vals: &mut dyn Iterator<Item = f64>, denom: usize| {
        if denom == 0 {
            0.0
        } else {
            100.0 * vals.sum::<f64>() / denom as f64
        }
    };
    let n_with_mode = scores.iter().filter(|s| s.best_mode.is_some()).count();
    let hits: usize = scores.iter().map(|s| s.top3_hits).sum();
    let considered: usize = scores.iter().map(|s| s.top3_considered).sum();
    let p_at_3 = pct_mean(&mut scores.iter().map(|s| s.p_at_3), n);
    MetricReport {
        best: pct_mean(&mut scores.iter().map(|s| s.best), n),
        best_mode: pct_mean(&mut scores.iter().filter_map(|s| s.best_mode), n_with_mode),
        oot: pct_mean(&mut scores.iter().map(|s| s.oot), n),
        oot_mode: pct_mean(&mut scores.iter().filter_map(|s| s.oot_mode), n_with_mode),
        p_at_1: pct_mean(&mut scores.iter().map(|s| s.p_at_1), n),
        p_at_3,
        t3c: if considered == 0 {
            0.0
        } else {
            100.0 * hits as f64 / considered as f64
        },
        // an instance misses exactly when it has no hit in its top three
        mmp: if n == 0 { 0.0 } else { 100.0 - p_at_3 },
        n_instances: n,
        n_with_mode,
        n_unanswered: scores.iter().filter(|s| !s.answered).count(),
        per_instance: if keep_per_instance { scores } else { Vec::new() },
    }
}
