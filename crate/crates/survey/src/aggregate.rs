use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::model::{Source, SurveyQuestion, SurveyResponse, Task};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Cell {
    pub count: usize,
    pub percentage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskRow {
    pub task: Task,
    pub responses: usize,
    pub base: usize,
    pub cells: BTreeMap<Source, Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyAggregate {
    pub respondents: usize,
    pub per_task: usize,
    pub rows: Vec<TaskRow>,
    pub total_base: usize,
    pub totals: BTreeMap<Source, Cell>,
}

fn pct(count: usize, base: usize) -> f64 {
    if base == 0 {
        0.0
    } else {
        100.0 * count as f64 / base as f64
    }
}

/// Credits every source of the chosen option. Task percentages use
/// respondents × `per_task` as base; totals use respondents × 4 · `per_task`.
/// Responses to unknown questions or out-of-range choices are ignored.
pub fn aggregate(
    questions: &[SurveyQuestion],
    responses: &[SurveyResponse],
    per_task: usize,
) -> SurveyAggregate {
    let by_qid: HashMap<&str, &SurveyQuestion> =
        questions.iter().map(|q| (q.qid.as_str(), q)).collect();
    let mut respondents = BTreeSet::new();
    let mut counts: BTreeMap<Task, (usize, BTreeMap<Source, usize>)> = BTreeMap::new();
    for r in responses {
        let Some(q) = by_qid.get(r.qid.as_str()) else { continue };
        let Some(option) = q.options.get(r.choice) else { continue };
        respondents.insert(r.respondent_id.as_str());
        let entry = counts.entry(q.task).or_default();
        entry.0 += 1;
        for s in &option.sources {
            *entry.1.entry(*s).or_default() += 1;
        }
    }
    let n = respondents.len();
    let base = n * per_task;
    let rows: Vec<TaskRow> = Task::ALL
        .iter()
        .map(|task| {
            let (responses, c) = counts.remove(task).unwrap_or_default();
            TaskRow {
                task: *task,
                responses,
                base,
                cells: Source::ALL
                    .iter()
                    .map(|s| {
                        let count = c.get(s).copied().unwrap_or(0);
                        (*s, Cell { count, percentage: pct(count, base) })
                    })
                    .collect(),
            }
        })
        .collect();
    let total_base = base * Task::ALL.len();
    let totals = Source::ALL
        .iter()
        .map(|s| {
            let count = rows.iter().map(|r| r.cells[s].count).sum();
            (*s, Cell { count, percentage: pct(count, total_base) })
        })
        .collect();
    SurveyAggregate {
        respondents: n,
        per_task,
        rows,
        total_base,
        totals,
    }
}

impl fmt::Display for SurveyAggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<8}", "task")?;
        for s in Source::ALL {
            write!(f, "{:>20}", s.as_str())?;
        }
        writeln!(f)?;
        let cell = |c: &Cell| format!("{} ({:.2}%)", c.count, c.percentage);
        for row in &self.rows {
            write!(f, "{:<8}", row.task.as_str())?;
            for s in Source::ALL {
                write!(f, "{:>20}", cell(&row.cells[&s]))?;
            }
            writeln!(f)?;
        }
        write!(f, "{:<8}", "total")?;
        for s in Source::ALL {
            write!(f, "{:>20}", cell(&self.totals[&s]))?;
        }
        writeln!(f)?;
        write!(f, "respondents: {}", self.respondents)
    }
}
