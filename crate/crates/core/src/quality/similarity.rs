//! Cosine similarity between original and substituted sentences.

use std::collections::HashMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{substitute_in_sentence, QualityError};
use crate::backends::Embedder;
use crate::corpus::{CanonicalRecord, PredictionFile};

/// Texts per embed request.
const EMBED_BATCH: usize = 64;

/// Mean cosine per embedding backend and their average.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityReport {
    pub per_backend: Vec<(String, f64)>,
    pub average: f64,
    pub n_pairs: usize,
}

/// Top-1 and Random-1 reports for both the gold and the system substitutes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityEvaluation {
    pub seed: u64,
    pub top1_gold: SimilarityReport,
    pub top1_system: SimilarityReport,
    pub random1_gold: SimilarityReport,
    pub random1_system: SimilarityReport,
    /// Records without predictions, left out of every column.
    pub n_skipped: usize,
}

/// Dot product of unit vectors, clamped to [-1, 1].
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    dot.clamp(-1.0, 1.0)
}

struct Pairs {
    original: Vec<usize>,
    top1_gold: Vec<usize>,
    top1_system: Vec<usize>,
    random1_gold: Vec<usize>,
    random1_system: Vec<usize>,
}

/// Runs Top-1 and Random-1 over every record that has predictions. Top-1
/// pairs the highest-weight gold substitute with the first prediction.
/// Random-1 draws one `u64` per record in order from a ChaCha8 stream seeded
/// with `seed` and uses it modulo each list's length, so gold and system
/// share the index.
pub fn similarity_top1_random1(
    records: &[CanonicalRecord],
    predictions: &PredictionFile,
    embedders: &[&dyn Embedder],
    seed: u64,
) -> Result<SimilarityEvaluation, QualityError> {
    let mut texts: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut intern = |s: String| -> usize {
        if let Some(&i) = index.get(&s) {
            return i;
        }
        texts.push(s.clone());
        index.insert(s, texts.len() - 1);
        texts.len() - 1
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Pairs {
        original: Vec::new(),
        top1_gold: Vec::new(),
        top1_system: Vec::new(),
        random1_gold: Vec::new(),
        random1_system: Vec::new(),
    };
    let mut n_skipped = 0;
    for record in records {
        let preds = match predictions.get(record.id()) {
            Some(p) if !p.is_empty() => p,
            _ => {
                n_skipped += 1;
                continue;
            }
        };
        let ranked = record.gold.ranked();
        let draw = rng.next_u64();
        let gold_random = &ranked[(draw % ranked.len() as u64) as usize].sub;
        let system_random = &preds[(draw % preds.len() as u64) as usize];
        let inst = &record.instance;
        pairs.original.push(intern(inst.sentence.clone()));
        pairs
            .top1_gold
            .push(intern(substitute_in_sentence(inst, record.gold.top())));
        pairs
            .top1_system
            .push(intern(substitute_in_sentence(inst, &preds[0])));
        pairs
            .random1_gold
            .push(intern(substitute_in_sentence(inst, gold_random)));
        pairs
            .random1_system
            .push(intern(substitute_in_sentence(inst, system_random)));
    }

    let mut columns: [Vec<(String, f64)>; 4] = Default::default();
    for embedder in embedders {
        let vectors = embed_all(*embedder, &texts)?;
        let targets = [
            &pairs.top1_gold,
            &pairs.top1_system,
            &pairs.random1_gold,
            &pairs.random1_system,
        ];
        for (column, target) in columns.iter_mut().zip(targets) {
            let sum: f64 = pairs
                .original
                .iter()
                .zip(target)
                .map(|(&o, &t)| cosine(&vectors[o], &vectors[t]))
                .sum();
            let mean = if target.is_empty() {
                0.0
            } else {
                sum / target.len() as f64
            };
            column.push((embedder.model_id().to_string(), mean));
        }
    }
    let n_pairs = pairs.original.len();
    let [a, b, c, d] = columns.map(|per_backend| {
        let average = if per_backend.is_empty() {
            0.0
        } else {
            per_backend.iter().map(|(_, m)| m).sum::<f64>() / per_backend.len() as f64
        };
        SimilarityReport {
            per_backend,
            average,
            n_pairs,
        }
    });
    Ok(SimilarityEvaluation {
        seed,
        top1_gold: a,
        top1_system: b,
        random1_gold: c,
        random1_system: d,
        n_skipped,
    })
}

fn embed_all(embedder: &dyn Embedder, texts: &[String]) -> Result<Vec<Vec<f64>>, QualityError> {
    let mut out = Vec::with_capacity(texts.len());
    for chunk in texts.chunks(EMBED_BATCH) {
        let vectors = embedder.embed(chunk)?;
        if vectors.len() != chunk.len() {
            return Err(QualityError::VectorCount {
                model: embedder.model_id().to_string(),
                expected: chunk.len(),
                got: vectors.len(),
            });
        }
        out.extend(vectors);
    }
    Ok(out)
}
