//! Auxiliary evaluations of substitution quality: sentence similarity,
//! seeded corpus perturbation and perplexity.

use thiserror::Error;

use crate::backends::BackendError;
use crate::engine::EngineError;
use crate::instance::TargetInstance;
use crate::text::capitalize_first;

pub mod perplexity;
pub mod perturb;
pub mod similarity;

pub use perplexity::{perplexity_report, InstancePerplexity, PerplexityReport};
pub use perturb::{
    perturb_corpus, perturb_document, write_manifest, Eligibility, PerturbationConfig,
    PerturbationOutput, Replacement, STOPWORDS_V1, STOPWORDS_VERSION,
};
pub use similarity::{cosine, similarity_top1_random1, SimilarityEvaluation, SimilarityReport};

#[derive(Debug, Error)]
pub enum QualityError {
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("embedder {model} returned {got} vectors for {expected} texts")]
    VectorCount {
        model: String,
        expected: usize,
        got: usize,
    },
}

/// The sentence with the target span replaced. When the target opens the
/// sentence and is capitalized, the substitute is capitalized too.
pub fn substitute_in_sentence(instance: &TargetInstance, substitute: &str) -> String {
    let initial_upper = instance.is_sentence_initial()
        && instance
            .target_surface
            .chars()
            .next()
            .is_some_and(char::is_uppercase);
    let replacement = if initial_upper {
        capitalize_first(substitute)
    } else {
        substitute.to_string()
    };
    let left = instance.left_context();
    let right = instance.right_context();
    let mut out = String::with_capacity(left.len() + replacement.len() + right.len());
    out.push_str(left);
    out.push_str(&replacement);
    out.push_str(right);
    out
}
