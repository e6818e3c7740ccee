//! WordNet-format lexical database: relation sets, lemmatization and the
//! relation-based candidate filter.

mod wndb;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Pos, TargetInstance};
use wndb::{Synset, SynsetId};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("missing database file {0}")]
    MissingFile(PathBuf),
    #[error("{}:{line}: {message}: {content:?}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        content: String,
        message: String,
    },
    #[error("reading {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Synonym,
    Antonym,
    Hypernym,
    Hyponym,
    Meronym,
    Holonym,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::Synonym,
        Relation::Antonym,
        Relation::Hypernym,
        Relation::Hyponym,
        Relation::Meronym,
        Relation::Holonym,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Synonym => "synonym",
            Relation::Antonym => "antonym",
            Relation::Hypernym => "hypernym",
            Relation::Hyponym => "hyponym",
            Relation::Meronym => "meronym",
            Relation::Holonym => "holonym",
        }
    }

    /// Parses a comma-separated list such as `antonym,synonym`; `all` expands
    /// to the six relations and `none` (or an empty string) to the empty set.
    pub fn parse_set(list: &str) -> Result<BTreeSet<Relation>, String> {
        let mut out = BTreeSet::new();
        for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "all" => out.extend(Relation::ALL),
                "none" => {}
                other => {
                    out.insert(other.parse()?);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Relation::ALL
            .into_iter()
            .find(|r| r.as_str() == s.trim().to_lowercase().trim_end_matches('s'))
            .ok_or_else(|| format!("unknown relation {s:?}"))
    }
}

/// Lemmas related to a query lemma, per relation. Multiword lemmas use spaces.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RelationSet {
    pub synonyms: BTreeSet<String>,
    pub antonyms: BTreeSet<String>,
    pub hypernyms: BTreeSet<String>,
    pub hyponyms: BTreeSet<String>,
    pub meronyms: BTreeSet<String>,
    pub holonyms: BTreeSet<String>,
}

impl RelationSet {
    pub fn get(&self, relation: Relation) -> &BTreeSet<String> {
        match relation {
            Relation::Synonym => &self.synonyms,
            Relation::Antonym => &self.antonyms,
            Relation::Hypernym => &self.hypernyms,
            Relation::Hyponym => &self.hyponyms,
            Relation::Meronym => &self.meronyms,
            Relation::Holonym => &self.holonyms,
        }
    }

    fn get_mut(&mut self, relation: Relation) -> &mut BTreeSet<String> {
        match relation {
            Relation::Synonym => &mut self.synonyms,
            Relation::Antonym => &mut self.antonyms,
            Relation::Hypernym => &mut self.hypernyms,
            Relation::Hyponym => &mut self.hyponyms,
            Relation::Meronym => &mut self.meronyms,
            Relation::Holonym => &mut self.holonyms,
        }
    }

    pub fn is_empty(&self) -> bool {
        Relation::ALL.iter().all(|r| self.get(*r).is_empty())
    }
}

/// A survivor removed by [`Lexicon::filter_candidates`], with the evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationRemoval {
    pub surface: String,
    pub relation: Relation,
    pub lemma: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FilterOutcome {
    pub kept: Vec<String>,
    pub removed: Vec<RelationRemoval>,
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    index: HashMap<(Pos, String), Vec<SynsetId>>,
    synsets: HashMap<SynsetId, Synset>,
    exceptions: HashMap<Pos, HashMap<String, Vec<String>>>,
}

// Detachment rules (suffix, replacement) applied when no exception matches.
const NOUN_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
];
const VERB_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
];
const ADJ_RULES: &[(&str, &str)] = &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")];

fn rules(pos: Pos) -> &'static [(&'static str, &'static str)] {
    match pos {
        Pos::Noun => NOUN_RULES,
        Pos::Verb => VERB_RULES,
        Pos::Adj => ADJ_RULES,
        Pos::Adv | Pos::Other => &[],
    }
}

fn key(word: &str) -> String {
    word.trim().to_lowercase().replace(' ', "_")
}

fn expose(lemma: &str) -> String {
    lemma.replace('_', " ")
}

impl Lexicon {
    /// A lexicon with no entries; every query comes back empty.
    pub fn empty() -> Self {
        Lexicon::default()
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let dir = dir.as_ref();
        for file in wndb::required_files(dir) {
            if !file.is_file() {
                return Err(LexiconError::MissingFile(file));
            }
        }
        let mut lex = Lexicon::default();
        for pos in Pos::LEXICAL {
            let stem = wndb::file_stem(pos);
            let path = dir.join(format!("data.{stem}"));
            wndb::parse_data(&path, &wndb::read(&path)?, pos, &mut lex.synsets)?;
            let path = dir.join(format!("index.{stem}"));
            wndb::parse_index(&path, &wndb::read(&path)?, pos, &mut lex.index)?;
            let path = dir.join(format!("{stem}.exc"));
            let exc = lex.exceptions.entry(pos).or_default();
            wndb::parse_exceptions(&path, &wndb::read(&path)?, exc)?;
        }
        wndb::check_index(dir, &lex.index, &lex.synsets)?;
        Ok(lex)
    }

    /// Number of (lemma, pos) index entries.
    pub fn entry_count(&self) -> usize {
        self.index.len()
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.len()
    }

    pub fn contains(&self, lemma: &str, pos: Pos) -> bool {
        self.index.contains_key(&(pos, key(lemma)))
    }

    pub fn contains_any(&self, lemma: &str) -> bool {
        Pos::LEXICAL.iter().any(|p| self.contains(lemma, *p))
    }

    /// One-hop relations of `lemma` unioned over all of its senses.
    pub fn relations(&self, lemma: &str, pos: Pos) -> RelationSet {
        let query = key(lemma);
        let mut out = RelationSet::default();
        let Some(ids) = self.index.get(&(pos, query.clone())) else {
            return out;
        };
        for id in ids {
            let Some(synset) = self.synsets.get(id) else {
                continue;
            };
            out.synonyms.extend(synset.words.iter().cloned());
            for ptr in &synset.pointers {
                let Some(target) = self.synsets.get(&ptr.target) else {
                    continue;
                };
                let set = out.get_mut(ptr.relation);
                if ptr.source_word == 0 {
                    set.extend(target.words.iter().cloned());
                } else if synset.words.get(ptr.source_word - 1) == Some(&query) {
                    if let Some(word) = target.words.get(ptr.target_word.wrapping_sub(1)) {
                        set.insert(word.clone());
                    }
                }
            }
        }
        for relation in Relation::ALL {
            let set = out.get_mut(relation);
            set.remove(&query);
            *set = set.iter().map(|l| expose(l)).collect();
        }
        out
    }

    /// Base forms of `surface` under `pos`: exception list first, otherwise
    /// the detachment rules. Only forms present in the index are returned.
    pub fn lemmatize(&self, surface: &str, pos: Pos) -> BTreeSet<String> {
        let word = key(surface);
        let mut out = BTreeSet::new();
        if word.is_empty() || !pos.is_lexical() {
            return out;
        }
        let mut forms = vec![word.clone()];
        match self.exceptions.get(&pos).and_then(|e| e.get(&word)) {
            Some(bases) => forms.extend(bases.iter().cloned()),
            None => {
                for (suffix, replacement) in rules(pos) {
                    if let Some(stem) = word.strip_suffix(suffix) {
                        if !stem.is_empty() {
                            forms.push(format!("{stem}{replacement}"));
                        }
                    }
                }
            }
        }
        for form in forms {
            if self.index.contains_key(&(pos, form.clone())) {
                out.insert(expose(&form));
            }
        }
        out
    }

    /// Union of [`Lexicon::lemmatize`] over the four parts of speech.
    pub fn lemmatize_any(&self, surface: &str) -> BTreeSet<String> {
        Pos::LEXICAL
            .iter()
            .flat_map(|p| self.lemmatize(surface, *p))
            .collect()
    }

    /// Drops survivors whose lemmas fall in an excluded relation of the target.
    /// Targets outside the four lexical parts of speech pass through untouched.
    pub fn filter_candidates(
        &self,
        target: &TargetInstance,
        survivors: &[String],
        excluded: &BTreeSet<Relation>,
    ) -> FilterOutcome {
        if excluded.is_empty() || !target.target_pos.is_lexical() {
            return FilterOutcome {
                kept: survivors.to_vec(),
                removed: Vec::new(),
            };
        }
        let related = self.relations(&target.target_lemma, target.target_pos);
        let mut outcome = FilterOutcome::default();
        'next: for surface in survivors {
            let lemmas = self.lemmatize_any(surface);
            for relation in excluded {
                let members = related.get(*relation);
                if let Some(lemma) = lemmas
                    .iter()
                    .find(|l| !l.contains(' ') && members.contains(*l))
                {
                    outcome.removed.push(RelationRemoval {
                        surface: surface.clone(),
                        relation: *relation,
                        lemma: lemma.clone(),
                    });
                    continue 'next;
                }
            }
            outcome.kept.push(surface.clone());
        }
        outcome
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_names() {
        assert_eq!("antonym".parse::<Relation>(), Ok(Relation::Antonym));
        assert_eq!("Hypernyms".parse::<Relation>(), Ok(Relation::Hypernym));
        assert!("cousin".parse::<Relation>().is_err());
        assert_eq!(Relation::parse_set("all").unwrap().len(), 6);
        assert!(Relation::parse_set("none").unwrap().is_empty());
        assert_eq!(
            Relation::parse_set("antonym, synonym").unwrap(),
            BTreeSet::from([Relation::Antonym, Relation::Synonym])
        );
    }

    #[test]
    fn empty_lexicon_answers_nothing() {
        let lex = Lexicon::empty();
        assert!(lex.relations("good", Pos::Adj).is_empty());
        assert!(lex.lemmatize("running", Pos::Verb).is_empty());
        assert_eq!(lex.entry_count(), 0);
    }
}
