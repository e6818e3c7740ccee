use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{char_len, char_to_byte};

/// Coarse part of speech. Only the first four have lexicon entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
    Other,
}

impl Pos {
    pub const LEXICAL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adj, Pos::Adv];

    /// Maps benchmark tags: `n`, `v`, `a`/`j`/`s`, `r`, plus Penn/UD style
    /// tags by their leading letter (`NN`, `VBD`, `JJ`, `RB`, `NOUN`, `ADJ`...).
    pub fn from_tag(tag: &str) -> Pos {
        let tag = tag.trim().to_ascii_lowercase();
        match tag.as_str() {
            "adj" | "adjective" => return Pos::Adj,
            "adv" | "adverb" => return Pos::Adv,
            "noun" | "propn" => return Pos::Noun,
            "verb" => return Pos::Verb,
            _ => {}
        }
        match tag.chars().next() {
            Some('n') => Pos::Noun,
            Some('v') => Pos::Verb,
            Some('a') | Some('j') | Some('s') => Pos::Adj,
            Some('r') => Pos::Adv,
            _ => Pos::Other,
        }
    }

    pub fn is_lexical(self) -> bool {
        self != Pos::Other
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adj => "adj",
            Pos::Adv => "adv",
            Pos::Other => "other",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Pos::from_tag(s))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance {id}: span {start}..{end} holds {found:?}, expected {expected:?}")]
    OffsetMismatch {
        id: String,
        start: usize,
        end: usize,
        expected: String,
        found: String,
    },
    #[error("instance {id}: target {surface:?} must be non-empty and contain no whitespace")]
    BadSurface { id: String, surface: String },
    #[error("instance {id}: target {word:?} not found in sentence")]
    NotFound { id: String, word: String },
    #[error("instance {id}: target {word:?} occurs at char offsets {occurrences:?}; give a span")]
    Ambiguous {
        id: String,
        word: String,
        occurrences: Vec<usize>,
    },
}

/// One sentence with one marked target word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetInstance {
    pub id: String,
    pub sentence: String,
    pub target_char_start: usize,
    pub target_char_end: usize,
    pub target_surface: String,
    pub target_lemma: String,
    pub target_pos: Pos,
}

impl TargetInstance {
    pub fn new(
        id: impl Into<String>,
        sentence: impl Into<String>,
        char_start: usize,
        char_end: usize,
        surface: impl Into<String>,
        lemma: impl Into<String>,
        pos: Pos,
    ) -> Result<Self, InstanceError> {
        let instance = TargetInstance {
            id: id.into(),
            sentence: sentence.into(),
            target_char_start: char_start,
            target_char_end: char_end,
            target_surface: surface.into(),
            target_lemma: lemma.into().to_lowercase(),
            target_pos: pos,
        };
        instance.validate()?;
        Ok(instance)
    }

    /// Builds an instance from a word that must occur exactly once as a whole token.
    pub fn locate(
        id: impl Into<String>,
        sentence: impl Into<String>,
        word: &str,
        lemma: Option<&str>,
        pos: Pos,
    ) -> Result<Self, InstanceError> {
        let id = id.into();
        let sentence = sentence.into();
        let occurrences = word_occurrences(&sentence, word);
        match occurrences.as_slice() {
            [] => Err(InstanceError::NotFound {
                id,
                word: word.to_string(),
            }),
            [start] => {
                let start = *start;
                let lemma = lemma.map(str::to_string).unwrap_or_else(|| word.to_lowercase());
                TargetInstance::new(id, sentence, start, start + char_len(word), word, lemma, pos)
            }
            _ => Err(InstanceError::Ambiguous {
                id,
                word: word.to_string(),
                occurrences,
            }),
        }
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        if self.target_surface.is_empty() || self.target_surface.chars().any(char::is_whitespace) {
            return Err(InstanceError::BadSurface {
                id: self.id.clone(),
                surface: self.target_surface.clone(),
            });
        }
        let found = self.span_text().unwrap_or_default();
        if self.target_char_start >= self.target_char_end || found != self.target_surface {
            return Err(InstanceError::OffsetMismatch {
                id: self.id.clone(),
                start: self.target_char_start,
                end: self.target_char_end,
                expected: self.target_surface.clone(),
                found: found.to_string(),
            });
        }
        Ok(())
    }

    fn byte_span(&self) -> Option<(usize, usize)> {
        let start = char_to_byte(&self.sentence, self.target_char_start)?;
        let end = char_to_byte(&self.sentence, self.target_char_end)?;
        (start <= end).then_some((start, end))
    }

    fn span_text(&self) -> Option<&str> {
        self.byte_span().map(|(s, e)| &self.sentence[s..e])
    }

    /// Text before the target span.
    pub fn left_context(&self) -> &str {
        let (start, _) = self.byte_span().unwrap_or((0, 0));
        &self.sentence[..start]
    }

    /// Text after the target span.
    pub fn right_context(&self) -> &str {
        let (_, end) = self.byte_span().unwrap_or((0, 0));
        &self.sentence[end..]
    }

    /// True when nothing but punctuation or whitespace precedes the target.
    pub fn is_sentence_initial(&self) -> bool {
        !self.left_context().chars().any(char::is_alphanumeric)
    }
}

/// Char offsets where `word` occurs delimited by non-word characters.
pub fn word_occurrences(sentence: &str, word: &str) -> Vec<usize> {
    if word.is_empty() {
        return Vec::new();
    }
    let is_word = |c: char| c.is_alphanumeric() || c == '_';
    let mut out = Vec::new();
    for (byte, _) in sentence.match_indices(word) {
        let before = sentence[..byte].chars().next_back();
        let after = sentence[byte + word.len()..].chars().next();
        if before.is_some_and(is_word) || after.is_some_and(is_word) {
            continue;
        }
        out.push(char_len(&sentence[..byte]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pos_tags() {
        assert_eq!(Pos::from_tag("n"), Pos::Noun);
        assert_eq!(Pos::from_tag("a"), Pos::Adj);
        assert_eq!(Pos::from_tag("j"), Pos::Adj);
        assert_eq!(Pos::from_tag("r"), Pos::Adv);
        assert_eq!(Pos::from_tag("VBD"), Pos::Verb);
        assert_eq!(Pos::from_tag("ADJ"), Pos::Adj);
        assert_eq!(Pos::from_tag("ADV"), Pos::Adv);
        assert_eq!(Pos::from_tag("IN"), Pos::Other);
        assert_eq!(Pos::from_tag("x"), Pos::Other);
    }

    #[test]
    fn span_must_match_surface() {
        let err = TargetInstance::new("1", "a b", 0, 3, "a", "a", Pos::Other).unwrap_err();
        assert!(matches!(err, InstanceError::OffsetMismatch { .. }));
        assert!(TargetInstance::new("1", "a b", 0, 1, "a", "a", Pos::Other).is_ok());
        assert!(TargetInstance::new("1", "a b", 2, 9, "b", "b", Pos::Other).is_err());
        assert!(TargetInstance::new("1", "a b", 1, 1, "", "", Pos::Other).is_err());
    }

    #[test]
    fn locate_needs_unique_word() {
        let i = TargetInstance::locate("1", "The cat sat.", "sat", None, Pos::Verb).unwrap();
        assert_eq!((i.target_char_start, i.target_char_end), (8, 11));
        assert_eq!(i.left_context(), "The cat ");
        assert_eq!(i.right_context(), ".");
        let err = TargetInstance::locate("1", "the cat saw the dog", "the", None, Pos::Other);
        assert_eq!(
            err.unwrap_err(),
            InstanceError::Ambiguous {
                id: "1".into(),
                word: "the".into(),
                occurrences: vec![0, 12],
            }
        );
        // substring of a longer word is not an occurrence
        assert!(TargetInstance::locate("1", "cats", "cat", None, Pos::Noun).is_err());
    }

    #[test]
    fn sentence_initial() {
        let i = TargetInstance::locate("1", "\"Run!\"", "Run", None, Pos::Verb).unwrap();
        assert!(i.is_sentence_initial());
        let i = TargetInstance::locate("1", "We run.", "run", None, Pos::Verb).unwrap();
        assert!(!i.is_sentence_initial());
    }
}
