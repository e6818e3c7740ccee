use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::model::{SurveyError, SurveyQuestion, SurveyResponse};

const LOG_FILE: &str = "responses.log.jsonl";
const SNAPSHOT_FILE: &str = "responses.snapshot.jsonl";
/// Appends between automatic compactions.
const COMPACT_EVERY: usize = 256;

/// Responses keyed by (respondent, qid). Every accepted response is appended
/// to a log before it is visible; compaction writes the current map to a
/// snapshot (via rename) and empties the log. Opening replays snapshot then
/// log, so a crash at any point loses nothing that was acknowledged.
#[derive(Debug)]
pub struct ResponseStore {
    dir: PathBuf,
    options: HashMap<String, usize>,
    responses: BTreeMap<(String, String), SurveyResponse>,
    log: File,
    appended: usize,
}

fn read_lines(path: &Path, into: &mut BTreeMap<(String, String), SurveyResponse>) -> Result<(), SurveyError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(()),
        Err(e) => return Err(SurveyError::io(path, e)),
    };
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| SurveyError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let r: SurveyResponse = match serde_json::from_str(&line) {
            Ok(r) => r,
            // a torn final write from a crash is dropped
            Err(e) if e.is_eof() => continue,
            Err(e) => {
                return Err(SurveyError::Parse {
                    location: format!("{}:{}", path.display(), i + 1),
                    message: e.to_string(),
                })
            }
        };
        into.insert((r.respondent_id.clone(), r.qid.clone()), r);
    }
    Ok(())
}

impl ResponseStore {
    pub fn open(dir: impl AsRef<Path>, questions: &[SurveyQuestion]) -> Result<Self, SurveyError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| SurveyError::io(&dir, e))?;
        let mut responses = BTreeMap::new();
        read_lines(&dir.join(SNAPSHOT_FILE), &mut responses)?;
        read_lines(&dir.join(LOG_FILE), &mut responses)?;
        let log_path = dir.join(LOG_FILE);
        let log = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&log_path)
            .map_err(|e| SurveyError::io(&log_path, e))?;
        Ok(ResponseStore {
            dir,
            options: questions
                .iter()
                .map(|q| (q.qid.clone(), q.options.len()))
                .collect(),
            responses,
            log,
            appended: 0,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn validate(&self, response: &SurveyResponse) -> Result<(), SurveyError> {
        let id = &response.respondent_id;
        if id.trim().is_empty() || id.len() > 128 {
            return Err(SurveyError::BadRespondent);
        }
        let n = *self
            .options
            .get(&response.qid)
            .ok_or_else(|| SurveyError::UnknownQuestion(response.qid.clone()))?;
        if response.choice >= n {
            return Err(SurveyError::IndexOutOfRange {
                qid: response.qid.clone(),
                choice: response.choice,
                options: n,
            });
        }
        Ok(())
    }

    /// Validates, appends and applies. A repeated (respondent, qid)
    /// replaces the earlier answer.
    pub fn record(&mut self, response: SurveyResponse) -> Result<(), SurveyError> {
        self.validate(&response)?;
        let mut line = serde_json::to_string(&response).expect("response serializes");
        line.push('\n');
        let log_path = self.dir.join(LOG_FILE);
        self.log
            .write_all(line.as_bytes())
            .and_then(|_| self.log.sync_data())
            .map_err(|e| SurveyError::io(&log_path, e))?;
        self.responses
            .insert((response.respondent_id.clone(), response.qid.clone()), response);
        self.appended += 1;
        if self.appended >= COMPACT_EVERY {
            self.compact()?;
        }
        Ok(())
    }

    pub fn compact(&mut self) -> Result<(), SurveyError> {
        let snapshot = self.dir.join(SNAPSHOT_FILE);
        let tmp = self.dir.join(format!("{SNAPSHOT_FILE}.tmp"));
        {
            let mut f = File::create(&tmp).map_err(|e| SurveyError::io(&tmp, e))?;
            for r in self.responses.values() {
                writeln!(f, "{}", serde_json::to_string(r).expect("response serializes"))
                    .map_err(|e| SurveyError::io(&tmp, e))?;
            }
            f.sync_all().map_err(|e| SurveyError::io(&tmp, e))?;
        }
        fs::rename(&tmp, &snapshot).map_err(|e| SurveyError::io(&snapshot, e))?;
        self.log
            .set_len(0)
            .map_err(|e| SurveyError::io(self.dir.join(LOG_FILE), e))?;
        self.appended = 0;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }

    /// Stored responses ordered by respondent then qid.
    pub fn responses(&self) -> Vec<SurveyResponse> {
        self.responses.values().cloned().collect()
    }
}
