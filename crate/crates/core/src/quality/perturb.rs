//! Seeded replacement of a fraction of the tokens in each document.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::QualityError;
use crate::engine::Engine;
use crate::instance::{Pos, TargetInstance};
use crate::text::{capitalize_first, char_len, word_regex};

pub const STOPWORDS_VERSION: &str = "v1";

/// English function words never picked under [`Eligibility::Content`].
pub const STOPWORDS_V1: &[&str] = &[
    "about", "above", "after", "again", "against", "all", "also", "although", "among", "and",
    "another", "any", "are", "aren't", "around", "because", "been", "before", "being", "below",
    "between", "both", "but", "can", "cannot", "could", "couldn't", "did", "didn't", "does",
    "doesn't", "doing", "don't", "down", "during", "each", "either", "else", "ever", "every",
    "few", "for", "from", "further", "had", "hadn't", "has", "hasn't", "have", "haven't",
    "having", "her", "here", "hers", "herself", "him", "himself", "his", "how", "however",
    "into", "isn't", "its", "itself", "just", "let", "many", "may", "might", "more", "most",
    "much", "must", "myself", "neither", "nor", "not", "now", "off", "once", "one", "only",
    "onto", "other", "ought", "our", "ours", "ourselves", "out", "over", "own", "per", "same",
    "shall", "she", "should", "shouldn't", "since", "some", "such", "than", "that", "the",
    "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those",
    "though", "through", "thus", "too", "toward", "towards", "under", "until", "upon", "very",
    "was", "wasn't", "were", "weren't", "what", "when", "where", "whether", "which", "while",
    "who", "whom", "whose", "why", "will", "with", "within", "without", "won't", "would",
    "wouldn't", "yet", "you", "your", "yours", "yourself", "yourselves",
];

/// Which word tokens may be sampled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Eligibility {
    /// Alphabetic, at least three characters, not a stopword.
    #[default]
    Content,
    /// Every word token.
    AllTokens,
}

impl Eligibility {
    pub fn accepts(self, token: &str) -> bool {
        match self {
            Eligibility::AllTokens => true,
            Eligibility::Content => {
                char_len(token) >= 3
                    && token.chars().all(char::is_alphabetic)
                    && !STOPWORDS_V1.contains(&token.to_lowercase().as_str())
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Eligibility::Content => "content",
            Eligibility::AllTokens => "all_tokens",
        }
    }
}

impl fmt::Display for Eligibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Eligibility {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "content" => Ok(Eligibility::Content),
            "all_tokens" | "all" => Ok(Eligibility::AllTokens),
            other => Err(format!("unknown eligibility rule {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationConfig {
    pub fraction: f64,
    pub seed: u64,
    #[serde(default)]
    pub eligibility: Eligibility,
}

impl PerturbationConfig {
    pub fn new(fraction: f64, seed: u64) -> Self {
        PerturbationConfig {
            fraction,
            seed,
            eligibility: Eligibility::default(),
        }
    }

    pub fn validate(&self) -> Result<(), QualityError> {
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(QualityError::Config(format!(
                "fraction must be in (0, 1], got {}",
                self.fraction
            )));
        }
        Ok(())
    }

    /// ⌈fraction · n⌉, forgiving float noise just above an integer.
    pub fn sample_size(&self, n_eligible: usize) -> usize {
        let exact = self.fraction * n_eligible as f64;
        let k = (exact - 1e-9).ceil().max(0.0) as usize;
        k.min(n_eligible)
    }
}

/// One sampled position. `new == old` when the engine had no survivor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replacement {
    pub doc: usize,
    /// Index among the document's word tokens.
    pub token: usize,
    pub old: String,
    pub new: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationOutput {
    pub config: PerturbationConfig,
    pub documents: Vec<String>,
    pub manifest: Vec<Replacement>,
    pub n_eligible: Vec<usize>,
}

impl PerturbationOutput {
    pub fn attempts(&self, doc: usize) -> usize {
        self.manifest.iter().filter(|r| r.doc == doc).count()
    }

    pub fn changed(&self) -> usize {
        self.manifest.iter().filter(|r| r.old != r.new).count()
    }
}

/// Perturbs one document. Sampling uses stream `doc_idx` of a ChaCha8
/// generator seeded with `config.seed`, so documents are independent of
/// each other and of processing order. Every prompt sees the original text.
pub fn perturb_document(
    doc_idx: usize,
    document: &str,
    engine: &Engine,
    config: &PerturbationConfig,
) -> Result<(String, Vec<Replacement>, usize), QualityError> {
    config.validate()?;
    let tokens: Vec<regex::Match> = word_regex().find_iter(document).collect();
    let eligible: Vec<usize> = (0..tokens.len())
        .filter(|&i| config.eligibility.accepts(tokens[i].as_str()))
        .collect();
    let k = config.sample_size(eligible.len());
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(doc_idx as u64);
    let mut picked: Vec<usize> = sample(&mut rng, eligible.len(), k)
        .into_iter()
        .map(|i| eligible[i])
        .collect();
    picked.sort_unstable();

    let mut replacements = Vec::with_capacity(picked.len());
    for &ti in &picked {
        let m = tokens[ti];
        let old = m.as_str();
        let start = char_len(&document[..m.start()]);
        let instance = TargetInstance::new(
            format!("{doc_idx}:{ti}"),
            document,
            start,
            start + char_len(old),
            old,
            old.to_lowercase(),
            Pos::Other,
        )
        .map_err(crate::engine::EngineError::from)?;
        let top = engine.top_substitutes(&instance)?;
        let new = match top.first() {
            Some(s) if old.chars().next().is_some_and(char::is_uppercase) => capitalize_first(s),
            Some(s) => s.clone(),
            None => old.to_string(),
        };
        replacements.push(Replacement {
            doc: doc_idx,
            token: ti,
            old: old.to_string(),
            new,
        });
    }

    let mut out = String::with_capacity(document.len());
    let mut last = 0;
    for r in &replacements {
        let m = tokens[r.token];
        out.push_str(&document[last..m.start()]);
        out.push_str(&r.new);
        last = m.end();
    }
    out.push_str(&document[last..]);
    Ok((out, replacements, eligible.len()))
}

pub fn perturb_corpus(
    documents: &[String],
    engine: &Engine,
    config: &PerturbationConfig,
) -> Result<PerturbationOutput, QualityError> {
    config.validate()?;
    let mut out = PerturbationOutput {
        config: *config,
        documents: Vec::with_capacity(documents.len()),
        manifest: Vec::new(),
        n_eligible: Vec::with_capacity(documents.len()),
    };
    for (i, doc) in documents.iter().enumerate() {
        let (text, reps, n) = perturb_document(i, doc, engine, config)?;
        out.documents.push(text);
        out.manifest.extend(reps);
        out.n_eligible.push(n);
    }
    Ok(out)
}

/// Tab-separated `doc token old new` lines after a `#` header naming the
/// seed, fraction and eligibility rule.
pub fn write_manifest(
    mut w: impl Write,
    config: &PerturbationConfig,
    manifest: &[Replacement],
) -> io::Result<()> {
    writeln!(
        w,
        "# seed={} fraction={} eligibility={} stopwords={}",
        config.seed, config.fraction, config.eligibility, STOPWORDS_VERSION
    )?;
    writeln!(w, "doc\ttoken\told\tnew")?;
    for r in manifest {
        writeln!(w, "{}\t{}\t{}\t{}", r.doc, r.token, r.old, r.new)?;
    }
    Ok(())
}
