//! Lexical substitution with concatenated masked/original prompts.
//!
//! The crate is split along the pipeline:
//!
//! * [`engine`] builds prompts, queries a fill-mask backend and filters the
//!   raw predictions into a ranked [`engine::CandidateList`].
//! * [`lexicon`] reads a WordNet-format database and answers relation and
//!   lemma queries used by the filters.
//! * [`corpus`] imports the LS07, CoInCo and Swords releases into one
//!   canonical record format and reads/writes prediction files.
//! * [`metrics`] scores predictions (best, oot, their mode variants, P@k,
//!   top-3 coverage and mismatch rate).
//! * [`quality`] runs the auxiliary evaluations: sentence similarity,
//!   corpus perturbation and perplexity.
//! * [`backends`] defines the model capabilities and their HTTP/fixture
//!   implementations.

pub mod backends;
pub mod corpus;
pub mod engine;
pub mod instance;
pub mod lexicon;
pub mod metrics;
pub mod quality;
pub mod text;

pub use engine::{Candidate, CandidateList, Engine, EngineConfig, FilterConfig, RemovalReason};
pub use instance::{Pos, TargetInstance};
pub use lexicon::{Lexicon, Relation, RelationSet};
