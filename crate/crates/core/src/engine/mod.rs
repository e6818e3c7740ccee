//! Prompt construction, candidate generation and candidate filtering.

mod morph;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backends::{BackendError, FillMask};
use crate::instance::{InstanceError, TargetInstance};
use crate::lexicon::{Lexicon, Relation};

pub use morph::{inflects, is_morph_variant};

pub const DEFAULT_K_RAW: usize = 30;
pub const DEFAULT_MAX_OUT: usize = 10;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("mask marker and separator must be non-empty")]
    EmptyPromptToken,
    #[error("k_raw must be at least 1")]
    ZeroK,
    #[error(transparent)]
    Backend(#[from] BackendError),
}

impl EngineError {
    pub fn is_backend(&self) -> bool {
        matches!(self, EngineError::Backend(_))
    }
}

/// The masked sentence followed by the separator and the untouched sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prompt {
    pub text: String,
    pub mask_marker: String,
    pub separator: String,
}

pub fn masked_sentence(instance: &TargetInstance, mask_marker: &str) -> String {
    format!(
        "{}{}{}",
        instance.left_context(),
        mask_marker,
        instance.right_context()
    )
}

pub fn build_prompt(
    instance: &TargetInstance,
    mask_marker: &str,
    separator: &str,
) -> Result<Prompt, EngineError> {
    if mask_marker.is_empty() || separator.is_empty() {
        return Err(EngineError::EmptyPromptToken);
    }
    instance.validate()?;
    let masked = masked_sentence(instance, mask_marker);
    Ok(Prompt {
        text: format!("{masked}{separator}{}", instance.sentence),
        mask_marker: mask_marker.to_string(),
        separator: separator.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalReason {
    Subword,
    NonAlpha,
    Duplicate,
    SameAsTarget,
    MorphVariant,
    LexiconRelation,
}

impl RemovalReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RemovalReason::Subword => "subword",
            RemovalReason::NonAlpha => "non_alpha",
            RemovalReason::Duplicate => "duplicate",
            RemovalReason::SameAsTarget => "same_as_target",
            RemovalReason::MorphVariant => "morph_variant",
            RemovalReason::LexiconRelation => "lexicon_relation",
        }
    }
}

/// A scored prediction. Survivors are ranked 1..n; removed candidates keep
/// their backend rank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub surface: String,
    pub score: f64,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub removed_by: Option<RemovalReason>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateList {
    pub instance_id: String,
    pub candidates: Vec<Candidate>,
}

impl CandidateList {
    pub fn survivors(&self) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(|c| c.removed_by.is_none())
    }

    pub fn removed(&self) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(|c| c.removed_by.is_some())
    }

    pub fn surfaces(&self) -> Vec<String> {
        self.survivors().map(|c| c.surface.clone()).collect()
    }
}

const WHITESPACE_MARKERS: [char; 2] = ['Ġ', '▁'];

fn clean_token(token: &str) -> String {
    token
        .trim_start_matches(|c: char| c.is_whitespace() || WHITESPACE_MARKERS.contains(&c))
        .trim_end()
        .to_string()
}

/// Queries the backend with the concatenated prompt; returns the raw top
/// `k_raw` predictions in backend order.
pub fn generate_candidates(
    instance: &TargetInstance,
    backend: &dyn FillMask,
    k_raw: usize,
) -> Result<CandidateList, EngineError> {
    if k_raw == 0 {
        return Err(EngineError::ZeroK);
    }
    let prompt = build_prompt(instance, backend.mask_marker(), backend.separator())?;
    let preds = backend.fill_mask(&prompt.text, k_raw)?;
    let candidates = preds
        .into_iter()
        .take(k_raw)
        .enumerate()
        .map(|(i, p)| Candidate {
            surface: clean_token(&p.token),
            score: p.logprob,
            rank: i + 1,
            removed_by: None,
        })
        .collect();
    Ok(CandidateList {
        instance_id: instance.id.clone(),
        candidates,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterConfig {
    pub max_out: usize,
    pub excluded_relations: BTreeSet<Relation>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            max_out: DEFAULT_MAX_OUT,
            excluded_relations: BTreeSet::from([Relation::Antonym]),
        }
    }
}

fn is_subword(surface: &str) -> bool {
    surface.is_empty() || surface.starts_with("##") || surface.ends_with("@@")
}

fn is_non_alpha(surface: &str) -> bool {
    let inner_ok = surface
        .chars()
        .all(|c| c.is_alphabetic() || c == '-' || c == '\'' || c == '’');
    let ends_ok = surface.chars().next().is_some_and(char::is_alphabetic)
        && surface.chars().next_back().is_some_and(char::is_alphabetic);
    !(inner_ok && ends_ok)
}

/// Applies the filters in order (subword/non-alphabetic, case-folded
/// dedup, same-as-target, morphological variant, lexicon relation), then
/// keeps the first `max_out` survivors, lowercased and re-ranked 1..n.
/// Candidates removed by a filter stay in the list with their reason;
/// survivors past `max_out` are dropped.
pub fn postprocess(
    list: &CandidateList,
    instance: &TargetInstance,
    lexicon: &Lexicon,
    config: &FilterConfig,
) -> CandidateList {
    let mut candidates = list.candidates.clone();
    let target_surface = instance.target_surface.to_lowercase();
    let target_lemma = instance.target_lemma.to_lowercase();

    for c in candidates.iter_mut().filter(|c| c.removed_by.is_none()) {
        if is_subword(&c.surface) {
            c.removed_by = Some(RemovalReason::Subword);
        } else if is_non_alpha(&c.surface) {
            c.removed_by = Some(RemovalReason::NonAlpha);
        }
    }

    // keep the highest score per folded surface; ties go to the earlier one
    let mut best: HashMap<String, usize> = HashMap::new();
    for (i, c) in candidates.iter().enumerate() {
        if c.removed_by.is_some() {
            continue;
        }
        let folded = c.surface.to_lowercase();
        match best.get(&folded) {
            Some(&j) if candidates[j].score >= c.score => {}
            _ => {
                best.insert(folded, i);
            }
        }
    }
    for (i, c) in candidates.iter_mut().enumerate() {
        if c.removed_by.is_none() && best.get(&c.surface.to_lowercase()) != Some(&i) {
            c.removed_by = Some(RemovalReason::Duplicate);
        }
    }

    for c in candidates.iter_mut().filter(|c| c.removed_by.is_none()) {
        let folded = c.surface.to_lowercase();
        if folded == target_surface || folded == target_lemma {
            c.removed_by = Some(RemovalReason::SameAsTarget);
        } else if is_morph_variant(lexicon, &folded, &target_surface)
            || is_morph_variant(lexicon, &folded, &target_lemma)
        {
            c.removed_by = Some(RemovalReason::MorphVariant);
        }
    }

    let survivors: Vec<String> = candidates
        .iter()
        .filter(|c| c.removed_by.is_none())
        .map(|c| c.surface.to_lowercase())
        .collect();
    let outcome = lexicon.filter_candidates(instance, &survivors, &config.excluded_relations);
    let removed: BTreeSet<&str> = outcome.removed.iter().map(|r| r.surface.as_str()).collect();
    for c in candidates.iter_mut().filter(|c| c.removed_by.is_none()) {
        if removed.contains(c.surface.to_lowercase().as_str()) {
            c.removed_by = Some(RemovalReason::LexiconRelation);
        }
    }

    let mut rank = 0;
    candidates.retain_mut(|c| {
        if c.removed_by.is_some() {
            return true;
        }
        if rank >= config.max_out {
            return false;
        }
        rank += 1;
        c.rank = rank;
        c.surface = c.surface.to_lowercase();
        true
    });
    CandidateList {
        instance_id: list.instance_id.clone(),
        candidates,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub k_raw: usize,
    pub filter: FilterConfig,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            k_raw: DEFAULT_K_RAW,
            filter: FilterConfig::default(),
        }
    }
}

/// Generation plus filtering against one backend and lexicon. Immutable and
/// shareable across threads.
#[derive(Clone)]
pub struct Engine {
    backend: Arc<dyn FillMask>,
    lexicon: Arc<Lexicon>,
    config: EngineConfig,
}

impl Engine {
    pub fn new(backend: Arc<dyn FillMask>, lexicon: Arc<Lexicon>, config: EngineConfig) -> Self {
        Engine {
            backend,
            lexicon,
            config,
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn prompt(&self, instance: &TargetInstance) -> Result<Prompt, EngineError> {
        build_prompt(instance, self.backend.mask_marker(), self.backend.separator())
    }

    /// Full candidate list including removed candidates (audit view).
    pub fn substitute(&self, instance: &TargetInstance) -> Result<CandidateList, EngineError> {
        let raw = generate_candidates(instance, self.backend.as_ref(), self.config.k_raw)?;
        Ok(postprocess(&raw, instance, &self.lexicon, &self.config.filter))
    }

    /// Surviving substitutes in rank order.
    pub fn top_substitutes(&self, instance: &TargetInstance) -> Result<Vec<String>, EngineError> {
        Ok(self.substitute(instance)?.surfaces())
    }
}
