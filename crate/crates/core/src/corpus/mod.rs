//! Canonical instance + gold records and the benchmark importers.

mod coinco;
mod ls07;
mod predictions;
mod swords;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{InstanceError, Pos, TargetInstance};
use crate::text::word_count;

pub use coinco::import_coinco;
pub use ls07::{import_ls07, parse_gold_line};
pub use predictions::{read_predictions, write_predictions, PredictionFile, MAX_PREDICTIONS};
pub use swords::import_swords;

pub const SHORT_CONTEXT_TAG: &str = "short_context";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{location}: {message}")]
    Parse { location: String, message: String },
    #[error(transparent)]
    Offset(#[from] InstanceError),
    #[error("duplicate instance id {0:?}")]
    DuplicateInstance(String),
    #[error("reading {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CorpusError {
    pub(crate) fn parse(location: impl fmt::Display, message: impl Into<String>) -> Self {
        CorpusError::Parse {
            location: location.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        CorpusError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldEntry {
    pub sub: String,
    pub weight: u32,
}

/// Weighted annotator substitutes for one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldSet {
    pub instance_id: String,
    entries: Vec<GoldEntry>,
    mode: Option<String>,
}

impl GoldSet {
    /// Case-folds substitutes and merges duplicates by summing weights,
    /// keeping first-appearance order. Zero weights are dropped. Returns
    /// `None` when nothing remains.
    pub fn new<I, S>(instance_id: impl Into<String>, entries: I) -> Option<GoldSet>
    where
        I: IntoIterator<Item = (S, u32)>,
        S: AsRef<str>,
    {
        let mut merged: Vec<GoldEntry> = Vec::new();
        for (sub, weight) in entries {
            let sub = sub.as_ref().trim().to_lowercase();
            if sub.is_empty() || weight == 0 {
                continue;
            }
            match merged.iter_mut().find(|e| e.sub == sub) {
                Some(e) => e.weight += weight,
                None => merged.push(GoldEntry { sub, weight }),
            }
        }
        if merged.is_empty() {
            return None;
        }
        let max = merged.iter().map(|e| e.weight).max().unwrap_or(0);
        let mut at_max = merged.iter().filter(|e| e.weight == max);
        let first = at_max.next().map(|e| e.sub.clone());
        let mode = if at_max.next().is_none() { first } else { None };
        Some(GoldSet {
            instance_id: instance_id.into(),
            entries: merged,
            mode,
        })
    }

    pub fn entries(&self) -> &[GoldEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The unique entry with strictly maximal weight.
    pub fn mode(&self) -> Option<&str> {
        self.mode.as_deref()
    }

    pub fn total_weight(&self) -> u32 {
        self.entries.iter().map(|e| e.weight).sum()
    }

    pub fn weight(&self, sub: &str) -> u32 {
        let sub = sub.to_lowercase();
        self.entries
            .iter()
            .find(|e| e.sub == sub)
            .map_or(0, |e| e.weight)
    }

    pub fn contains(&self, sub: &str) -> bool {
        self.weight(sub) > 0
    }

    /// Entries by descending weight; ties keep file order.
    pub fn ranked(&self) -> Vec<&GoldEntry> {
        let mut v: Vec<&GoldEntry> = self.entries.iter().collect();
        v.sort_by(|a, b| b.weight.cmp(&a.weight));
        v
    }

    /// The mode if present, else the first entry of maximal weight.
    pub fn top(&self) -> &str {
        self.ranked()[0].sub.as_str()
    }

    /// A copy without multiword entries, or `None` if nothing is left.
    pub fn single_words(&self) -> Option<GoldSet> {
        GoldSet::new(
            self.instance_id.clone(),
            self.entries
                .iter()
                .filter(|e| !e.sub.contains(char::is_whitespace))
                .map(|e| (e.sub.as_str(), e.weight)),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalRecord {
    pub instance: TargetInstance,
    pub gold: GoldSet,
    pub tags: Vec<String>,
}

impl CanonicalRecord {
    /// Pairs an instance with its gold, adding the short-context tag when the
    /// sentence has at most two words.
    pub fn new(instance: TargetInstance, gold: GoldSet) -> Self {
        let mut tags = Vec::new();
        if word_count(&instance.sentence) <= 2 {
            tags.push(SHORT_CONTEXT_TAG.to_string());
        }
        CanonicalRecord {
            instance,
            gold,
            tags,
        }
    }

    pub fn id(&self) -> &str {
        &self.instance.id
    }

    pub fn is_short_context(&self) -> bool {
        self.tags.iter().any(|t| t == SHORT_CONTEXT_TAG)
    }
}

#[derive(Serialize, Deserialize)]
struct TargetLine {
    surface: String,
    lemma: String,
    pos: Pos,
    char_start: usize,
    char_end: usize,
}

#[derive(Serialize, Deserialize)]
struct CanonicalLine {
    id: String,
    sentence: String,
    target: TargetLine,
    gold: Vec<GoldEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tags: Vec<String>,
}

impl CanonicalRecord {
    pub fn to_line(&self) -> String {
        let i = &self.instance;
        let line = CanonicalLine {
            id: i.id.clone(),
            sentence: i.sentence.clone(),
            target: TargetLine {
                surface: i.target_surface.clone(),
                lemma: i.target_lemma.clone(),
                pos: i.target_pos,
                char_start: i.target_char_start,
                char_end: i.target_char_end,
            },
            gold: self.gold.entries.clone(),
            tags: self.tags.clone(),
        };
        serde_json::to_string(&line).expect("canonical record serializes")
    }

    pub fn from_line(line: &str, location: impl fmt::Display) -> Result<Self, CorpusError> {
        let raw: CanonicalLine =
            serde_json::from_str(line).map_err(|e| CorpusError::parse(&location, e.to_string()))?;
        let instance = TargetInstance::new(
            raw.id.clone(),
            raw.sentence,
            raw.target.char_start,
            raw.target.char_end,
            raw.target.surface,
            raw.target.lemma,
            raw.target.pos,
        )?;
        let gold = GoldSet::new(raw.id, raw.gold.iter().map(|e| (e.sub.as_str(), e.weight)))
            .ok_or_else(|| CorpusError::parse(&location, "record has an empty gold set"))?;
        Ok(CanonicalRecord {
            instance,
            gold,
            tags: raw.tags,
        })
    }
}

pub fn write_canonical(mut out: impl Write, records: &[CanonicalRecord]) -> io::Result<()> {
    for r in records {
        writeln!(out, "{}", r.to_line())?;
    }
    Ok(())
}

pub fn save_canonical(path: impl AsRef<Path>, records: &[CanonicalRecord]) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| CorpusError::io(path, e))?;
    let mut out = io::BufWriter::new(file);
    write_canonical(&mut out, records).map_err(|e| CorpusError::io(path, e))?;
    out.flush().map_err(|e| CorpusError::io(path, e))
}

/// Reads a canonical file; ids must be unique.
pub fn load_canonical(path: impl AsRef<Path>) -> Result<Vec<CanonicalRecord>, CorpusError> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| CorpusError::io(path, e))?;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (i, line) in io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CorpusError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = CanonicalRecord::from_line(&line, format!("{}:{}", path.display(), i + 1))?;
        if !seen.insert(record.id().to_string()) {
            return Err(CorpusError::DuplicateInstance(record.id().to_string()));
        }
        out.push(record);
    }
    Ok(out)
}

/// Counts and anomalies from one import.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ImportReport {
    pub dataset: String,
    pub records: usize,
    pub dropped_empty_gold: usize,
    pub dropped_missing_context: usize,
    pub short_context: usize,
    pub multiword_gold: usize,
    /// (instance id, substitute) pairs carrying `@...@` annotation artifacts.
    pub flagged_artifacts: Vec<(String, String)>,
    pub anomalies: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
}

impl ImportReport {
    pub(crate) fn new(dataset: &str) -> Self {
        ImportReport {
            dataset: dataset.to_string(),
            ..Default::default()
        }
    }

    pub(crate) fn tally(&mut self, records: &[CanonicalRecord]) {
        self.records = records.len();
        self.short_context = records.iter().filter(|r| r.is_short_context()).count();
        self.multiword_gold = records
            .iter()
            .flat_map(|r| r.gold.entries())
            .filter(|e| e.sub.contains(char::is_whitespace))
            .count();
        for r in records {
            for e in r.gold.entries() {
                if artifact_regex().is_match(&e.sub) {
                    self.flagged_artifacts.push((r.id().to_string(), e.sub.clone()));
                }
            }
        }
    }
}

impl fmt::Display for ImportReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dataset:                 {}", self.dataset)?;
        writeln!(f, "records:                 {}", self.records)?;
        writeln!(f, "dropped (empty gold):    {}", self.dropped_empty_gold)?;
        writeln!(f, "dropped (no context):    {}", self.dropped_missing_context)?;
        writeln!(f, "short contexts:          {}", self.short_context)?;
        writeln!(f, "multiword gold entries:  {}", self.multiword_gold)?;
        writeln!(f, "flagged artifacts:       {}", self.flagged_artifacts.len())?;
        for (id, sub) in &self.flagged_artifacts {
            writeln!(f, "  {id}: {sub:?}")?;
        }
        for a in &self.anomalies {
            writeln!(f, "anomaly: {a}")?;
        }
        Ok(())
    }
}

fn artifact_regex() -> &'static regex::Regex {
    static RE: std::sync::OnceLock<regex::Regex> = std::sync::OnceLock::new();
    RE.get_or_init(|| regex::Regex::new(r"@[^@\s]+@").unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gold_mode_and_merge() {
        let g = GoldSet::new("1", [("intelligent", 3), ("clever", 1)]).unwrap();
        assert_eq!(g.mode(), Some("intelligent"));
        assert_eq!(g.total_weight(), 4);
        let tie = GoldSet::new("2", [("a", 2), ("b", 2)]).unwrap();
        assert_eq!(tie.mode(), None);
        assert_eq!(tie.top(), "a");
        let merged = GoldSet::new("3", [("Smart", 1), ("smart", 2), ("bright", 2)]).unwrap();
        assert_eq!(merged.len(), 2);
        assert_eq!(merged.weight("SMART"), 3);
        assert_eq!(merged.mode(), Some("smart"));
        assert!(GoldSet::new("4", [("x", 0)]).is_none());
    }

    #[test]
    fn single_words_recomputes_mode() {
        let g = GoldSet::new("1", [("very much", 3), ("plenty", 1), ("ample", 1)]).unwrap();
        assert_eq!(g.mode(), Some("very much"));
        let s = g.single_words().unwrap();
        assert_eq!(s.total_weight(), 2);
        assert_eq!(s.mode(), None);
    }

    #[test]
    fn canonical_line_is_stable() {
        let inst = TargetInstance::locate("7", "She said.", "said", Some("say"), Pos::Verb).unwrap();
        let gold = GoldSet::new("7", [("state", 2), ("tell", 1)]).unwrap();
        let rec = CanonicalRecord::new(inst, gold);
        assert_eq!(
            rec.to_line(),
            r#"{"id":"7","sentence":"She said.","target":{"surface":"said","lemma":"say","pos":"verb","char_start":4,"char_end":8},"gold":[{"sub":"state","weight":2},{"sub":"tell","weight":1}],"tags":["short_context"]}"#
        );
        assert_eq!(CanonicalRecord::from_line(&rec.to_line(), "t").unwrap(), rec);
    }
}
