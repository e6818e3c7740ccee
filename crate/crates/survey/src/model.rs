use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_PER_TASK: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Task {
    #[serde(rename = "SWR")]
    Swr,
    #[serde(rename = "SWR_M")]
    SwrM,
    #[serde(rename = "SR")]
    Sr,
    #[serde(rename = "SR_M")]
    SrM,
}

impl Task {
    pub const ALL: [Task; 4] = [Task::Swr, Task::SwrM, Task::Sr, Task::SrM];

    /// Target replaced by the placeholder.
    pub fn is_masked(self) -> bool {
        matches!(self, Task::SwrM | Task::SrM)
    }

    /// Options are three-word sets rather than single words.
    pub fn is_set(self) -> bool {
        matches!(self, Task::Sr | Task::SrM)
    }

    pub fn option_size(self) -> usize {
        if self.is_set() {
            3
        } else {
            1
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Swr => "SWR",
            Task::SwrM => "SWR_M",
            Task::Sr => "SR",
            Task::SrM => "SR_M",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Gold,
    SystemA,
    SystemB,
}

impl Source {
    pub const ALL: [Source; 3] = [Source::Gold, Source::SystemA, Source::SystemB];

    pub fn as_str(self) -> &'static str {
        match self {
            Source::Gold => "gold",
            Source::SystemA => "system_a",
            Source::SystemB => "system_b",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyOption {
    /// One word, or a three-word set.
    pub display: Vec<String>,
    pub sources: BTreeSet<Source>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyQuestion {
    pub qid: String,
    pub task: Task,
    pub instance_id: String,
    pub sentence_display: String,
    pub options: Vec<SurveyOption>,
    pub display_order_seed: u64,
}

/// What respondents see: no sources and no instance ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicQuestion {
    pub qid: String,
    pub task: Task,
    pub sentence_display: String,
    pub options: Vec<Vec<String>>,
}

impl From<&SurveyQuestion> for PublicQuestion {
    fn from(q: &SurveyQuestion) -> Self {
        PublicQuestion {
            qid: q.qid.clone(),
            task: q.task,
            sentence_display: q.sentence_display.clone(),
            options: q.options.iter().map(|o| o.display.clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyResponse {
    pub respondent_id: String,
    pub qid: String,
    pub choice: usize,
    /// Seconds since the Unix epoch.
    #[serde(default)]
    pub timestamp: u64,
}

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("need {needed} eligible records for task {task}, found {available}")]
    InsufficientRecords {
        task: Task,
        needed: usize,
        available: usize,
    },
    #[error("unknown question {0:?}")]
    UnknownQuestion(String),
    #[error("choice {choice} out of range for question {qid:?} with {options} options")]
    IndexOutOfRange {
        qid: String,
        choice: usize,
        options: usize,
    },
    #[error("respondent id must be non-empty and at most 128 characters")]
    BadRespondent,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{location}: {message}")]
    Parse { location: String, message: String },
}

impl SurveyError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SurveyError::Io {
            path: path.into(),
            source,
        }
    }
}
