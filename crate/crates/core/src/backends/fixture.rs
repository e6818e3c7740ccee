use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::wire;
use super::{
    check_mask_count, BackendError, Capability, Embedder, FillMask, Scorer, SentenceScore,
    TokenPrediction,
};

/// One line of a fixture file. Responses are stored as raw wire bodies and
/// decoded on every call, exactly as a live response would be.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixtureRecord {
    Meta {
        #[serde(default)]
        model_id: Option<String>,
        #[serde(default)]
        mask_marker: Option<String>,
        #[serde(default)]
        separator: Option<String>,
        #[serde(default)]
        embed_dim: Option<usize>,
    },
    FillMask {
        text: String,
        response: Value,
    },
    Embed {
        text: String,
        vector: Value,
    },
    Score {
        text: String,
        response: Value,
    },
}

/// Canned backend keyed by exact request text. Unknown keys are an error.
#[derive(Debug, Clone)]
pub struct FixtureBackend {
    model_id: String,
    mask_marker: String,
    separator: String,
    embed_dim: Option<usize>,
    fill: HashMap<String, Value>,
    embed: HashMap<String, Value>,
    score: HashMap<String, Value>,
}

impl Default for FixtureBackend {
    fn default() -> Self {
        FixtureBackend {
            model_id: "fixture".into(),
            mask_marker: "<mask>".into(),
            separator: " </s></s> ".into(),
            embed_dim: None,
            fill: HashMap::new(),
            embed: HashMap::new(),
            score: HashMap::new(),
        }
    }
}

impl FixtureBackend {
    pub fn new() -> Self {
        Self::default()
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

    pub fn with_embed_dim(mut self, dim: usize) -> Self {
        self.embed_dim = Some(dim);
        self
    }

    pub fn with_model_id(mut self, model_id: impl Into<String>) -> Self {
        self.model_id = model_id.into();
        self
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, String> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut backend = FixtureBackend::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: FixtureRecord = serde_json::from_str(line)
                .map_err(|e| format!("{}:{}: {e}", path.display(), i + 1))?;
            backend.insert(record);
        }
        Ok(backend)
    }

    pub fn insert(&mut self, record: FixtureRecord) {
        match record {
            FixtureRecord::Meta {
                model_id,
                mask_marker,
                separator,
                embed_dim,
            } => {
                if let Some(m) = model_id {
                    self.model_id = m;
                }
                if let Some(m) = mask_marker {
                    self.mask_marker = m;
                }
                if let Some(s) = separator {
                    self.separator = s;
                }
                if embed_dim.is_some() {
                    self.embed_dim = embed_dim;
                }
            }
            FixtureRecord::FillMask { text, response } => {
                self.fill.insert(text, response);
            }
            FixtureRecord::Embed { text, vector } => {
                self.embed.insert(text, vector);
            }
            FixtureRecord::Score { text, response } => {
                self.score.insert(text, response);
            }
        }
    }

    pub fn add_fill_mask(&mut self, text: impl Into<String>, preds: &[(&str, f64)]) {
        let predictions: Vec<Value> = preds
            .iter()
            .map(|(t, lp)| json!({"token": t, "logprob": lp}))
            .collect();
        self.fill
            .insert(text.into(), json!({ "predictions": predictions }));
    }

    pub fn add_embedding(&mut self, text: impl Into<String>, vector: Vec<f64>) {
        self.embed.insert(text.into(), json!(vector));
    }

    pub fn add_score(&mut self, text: impl Into<String>, nll_sum: f64, token_count: u64) {
        self.score.insert(
            text.into(),
            json!({"nll_sum": nll_sum, "token_count": token_count}),
        );
    }

    /// All records, meta first, each group sorted by key.
    pub fn records(&self) -> Vec<FixtureRecord> {
        let mut out = vec![FixtureRecord::Meta {
            model_id: Some(self.model_id.clone()),
            mask_marker: Some(self.mask_marker.clone()),
            separator: Some(self.separator.clone()),
            embed_dim: self.embed_dim,
        }];
        let sorted = |m: &HashMap<String, Value>| {
            let mut v: Vec<(String, Value)> =
                m.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            v.sort_by(|a, b| a.0.cmp(&b.0));
            v
        };
        for (text, response) in sorted(&self.fill) {
            out.push(FixtureRecord::FillMask { text, response });
        }
        for (text, vector) in sorted(&self.embed) {
            out.push(FixtureRecord::Embed { text, vector });
        }
        for (text, response) in sorted(&self.score) {
            out.push(FixtureRecord::Score { text, response });
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        let mut file = fs::File::create(path)?;
        for record in self.records() {
            writeln!(file, "{}", serde_json::to_string(&record)?)?;
        }
        Ok(())
    }

    fn miss(capability: Capability, key: &str) -> BackendError {
        BackendError::FixtureMiss {
            capability,
            key: key.to_string(),
        }
    }
}

impl FillMask for FixtureBackend {
    fn mask_marker(&self) -> &str {
        &self.mask_marker
    }

    fn separator(&self) -> &str {
        &self.separator
    }

    fn fill_mask(&self, text: &str, top_k: usize) -> Result<Vec<TokenPrediction>, BackendError> {
        check_mask_count(text, &self.mask_marker)?;
        let body = self
            .fill
            .get(text)
            .ok_or_else(|| Self::miss(Capability::FillMask, text))?;
        // the canned list is complete; a live backend would cut it at top_k
        let mut preds = wire::decode_fill_mask(body.clone(), usize::MAX)?;
        preds.truncate(top_k);
        Ok(preds)
    }
}

impl Embedder for FixtureBackend {
    fn model_id(&self) -> &str {
        &self.model_id
    }

    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, BackendError> {
        let mut vectors = Vec::with_capacity(texts.len());
        for text in texts {
            let raw = self
                .embed
                .get(text)
                .ok_or_else(|| Self::miss(Capability::Embed, text))?;
            vectors.push(raw.clone());
        }
        wire::decode_embed(json!({ "vectors": vectors }), texts.len(), self.embed_dim)
    }
}

impl Scorer for FixtureBackend {
    fn score(&self, text: &str) -> Result<SentenceScore, BackendError> {
        if text.trim().is_empty() {
            return Err(BackendError::ZeroTokens);
        }
        let body = self
            .score
            .get(text)
            .ok_or_else(|| Self::miss(Capability::Score, text))?;
        wire::decode_score(body.clone())
    }
}

/// Scores every whitespace token at `ln(vocab_size)`, so every sentence has
/// perplexity exactly `vocab_size`.
#[derive(Debug, Clone, Copy)]
pub struct UniformScorer {
    pub vocab_size: u64,
}

impl Scorer for UniformScorer {
    fn score(&self, text: &str) -> Result<SentenceScore, BackendError> {
        let tokens = text.split_whitespace().count() as u64;
        if tokens == 0 {
            return Err(BackendError::ZeroTokens);
        }
        Ok(SentenceScore {
            nll_sum: tokens as f64 * (self.vocab_size as f64).ln(),
            token_count: tokens,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canned_list_verbatim_and_unknown_key_fails() {
        let mut f = FixtureBackend::new();
        f.add_fill_mask("a <mask> b", &[("good", -0.1), ("fine", -0.5)]);
        let preds = f.fill_mask("a <mask> b", 10).unwrap();
        assert_eq!(
            preds,
            vec![TokenPrediction::new("good", -0.1), TokenPrediction::new("fine", -0.5)]
        );
        assert_eq!(f.fill_mask("a <mask> b", 1).unwrap().len(), 1);
        assert!(matches!(
            f.fill_mask("x <mask>", 10),
            Err(BackendError::FixtureMiss { .. })
        ));
    }

    #[test]
    fn two_markers_rejected() {
        let f = FixtureBackend::new();
        assert_eq!(
            f.fill_mask("<mask> and <mask>", 3),
            Err(BackendError::MaskCount {
                marker: "<mask>".into(),
                found: 2
            })
        );
    }

    #[test]
    fn declared_dimension_enforced() {
        let mut f = FixtureBackend::new().with_embed_dim(4);
        f.add_embedding("a", vec![1.0, 0.0, 0.0]);
        assert!(matches!(f.embed(&["a".into()]), Err(BackendError::Malformed(_))));
        assert_eq!(f.embed(&[]).unwrap(), Vec::<Vec<f64>>::new());
        let mut f = FixtureBackend::new().with_embed_dim(4);
        f.add_embedding("a", vec![0.0, 1.0, 0.0, 0.0]);
        let once = f.embed(&["a".into(), "a".into()]).unwrap();
        assert_eq!(once[0], once[1]);
    }

    #[test]
    fn uniform_scorer_identity() {
        let s = UniformScorer { vocab_size: 1000 };
        let score = s.score("one two three four five").unwrap();
        assert_eq!(score.token_count, 5);
        assert!((score.nll_sum - 5.0 * 1000f64.ln()).abs() < 1e-12);
        assert_eq!(s.score("   "), Err(BackendError::ZeroTokens));
        assert_eq!(s.score("a b"), s.score("a b"));
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fx.jsonl");
        let mut f = FixtureBackend::new()
            .with_prompt_tokens("[MASK]", " [SEP] ")
            .with_embed_dim(2);
        f.add_fill_mask("[MASK] x", &[("y", -1.0)]);
        f.add_embedding("x", vec![1.0, 0.0]);
        f.add_score("x", 2.0, 1);
        f.save(&path).unwrap();
        let g = FixtureBackend::load(&path).unwrap();
        assert_eq!(g.mask_marker(), "[MASK]");
        assert_eq!(g.separator(), " [SEP] ");
        assert_eq!(g.fill_mask("[MASK] x", 5).unwrap().len(), 1);
        assert_eq!(g.embed(&["x".into()]).unwrap(), vec![vec![1.0, 0.0]]);
        assert_eq!(g.score("x").unwrap().token_count, 1);
    }
}
