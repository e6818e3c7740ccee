//! Prediction files: one JSON object per line, `{"id": .., "substitutes": [..]}`.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CorpusError;

pub const MAX_PREDICTIONS: usize = 10;

#[derive(Serialize, Deserialize)]
struct PredictionLine {
    id: String,
    substitutes: Vec<String>,
}

/// Instance id to ranked substitutes; lists are lowercase, duplicate-free
/// and at most [`MAX_PREDICTIONS`] long.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PredictionFile {
    map: BTreeMap<String, Vec<String>>,
}

impl PredictionFile {
    pub fn new() -> Self {
        Self::default()
    }

    /// Normalizes and stores a list, replacing any previous one for `id`.
    pub fn insert<I, S>(&mut self, id: impl Into<String>, subs: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut list: Vec<String> = Vec::new();
        for s in subs {
            let s = s.as_ref().trim().to_lowercase();
            if !s.is_empty() && !list.contains(&s) {
                list.push(s);
            }
            if list.len() == MAX_PREDICTIONS {
                break;
            }
        }
        self.map.insert(id.into(), list);
    }

    pub fn get(&self, id: &str) -> Option<&[String]> {
        self.map.get(id).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.map.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

impl<K: Into<String>, V: AsRef<str>> FromIterator<(K, Vec<V>)> for PredictionFile {
    fn from_iter<T: IntoIterator<Item = (K, Vec<V>)>>(iter: T) -> Self {
        let mut p = PredictionFile::new();
        for (k, v) in iter {
            p.insert(k, v);
        }
        p
    }
}

pub fn write_predictions(path: impl AsRef<Path>, predictions: &PredictionFile) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| CorpusError::io(path, e))?;
    let mut out = io::BufWriter::new(file);
    for (id, subs) in &predictions.map {
        let line = PredictionLine {
            id: id.clone(),
            substitutes: subs.clone(),
        };
        let json = serde_json::to_string(&line).expect("prediction line serializes");
        writeln!(out, "{json}").map_err(|e| CorpusError::io(path, e))?;
    }
    out.flush().map_err(|e| CorpusError::io(path, e))
}

pub fn read_predictions(path: impl AsRef<Path>) -> Result<PredictionFile, CorpusError> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| CorpusError::io(path, e))?;
    let mut out = PredictionFile::new();
    for (i, line) in io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CorpusError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: PredictionLine = serde_json::from_str(&line)
            .map_err(|e| CorpusError::parse(format!("{}:{}", path.display(), i + 1), e.to_string()))?;
        if out.map.contains_key(&parsed.id) {
            return Err(CorpusError::DuplicateInstance(parsed.id));
        }
        out.insert(parsed.id, parsed.substitutes);
    }
    Ok(out)
}
