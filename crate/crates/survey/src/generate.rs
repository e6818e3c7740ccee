use std::collections::HashSet;

use lexsub_core::corpus::{CanonicalRecord, PredictionFile};
use lexsub_core::TargetInstance;
use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Source, SurveyError, SurveyOption, SurveyQuestion, Task};

pub const PLACEHOLDER: &str = "______";

/// The sentence with the target bolded, or replaced by [`PLACEHOLDER`] for
/// the masked tasks.
pub fn sentence_display(instance: &TargetInstance, task: Task) -> String {
    let middle = if task.is_masked() {
        PLACEHOLDER.to_string()
    } else {
        format!("**{}**", instance.target_surface)
    };
    format!("{}{middle}{}", instance.left_context(), instance.right_context())
}

fn source_option(
    record: &CanonicalRecord,
    a: &PredictionFile,
    b: &PredictionFile,
    source: Source,
    size: usize,
) -> Option<Vec<String>> {
    let list: Vec<String> = match source {
        Source::Gold if size == 1 => vec![record.gold.top().to_string()],
        Source::Gold => record.gold.ranked().iter().map(|e| e.sub.clone()).collect(),
        Source::SystemA => a.get(record.id())?.to_vec(),
        Source::SystemB => b.get(record.id())?.to_vec(),
    };
    (!list.is_empty()).then(|| list.into_iter().take(size).collect())
}

fn qualifies(record: &CanonicalRecord, a: &PredictionFile, b: &PredictionFile, task: Task) -> bool {
    let need = task.option_size();
    let len = |p: &PredictionFile| p.get(record.id()).map_or(0, <[String]>::len);
    !record.gold.is_empty() && len(a) >= need && len(b) >= need
}

fn merge_key(display: &[String]) -> Vec<String> {
    let mut k: Vec<String> = display.iter().map(|s| s.to_lowercase()).collect();
    k.sort();
    k
}

/// Samples `n_per_task` distinct records per task (no record is used twice
/// in one survey), builds one option per source, merges options whose
/// displays are equal as sets and shuffles them with a per-question seed.
pub fn generate_survey(
    records: &[CanonicalRecord],
    predictions_a: &PredictionFile,
    predictions_b: &PredictionFile,
    n_per_task: usize,
    seed: u64,
) -> Result<Vec<SurveyQuestion>, SurveyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.shuffle(&mut rng);
    let mut used = HashSet::new();
    let mut questions = Vec::with_capacity(4 * n_per_task);

    // set tasks first: they have the stricter requirement
    let mut picks: Vec<(Task, Vec<usize>)> = Vec::new();
    for task in [Task::Sr, Task::SrM, Task::Swr, Task::SwrM] {
        let chosen: Vec<usize> = order
            .iter()
            .copied()
            .filter(|i| !used.contains(i) && qualifies(&records[*i], predictions_a, predictions_b, task))
            .take(n_per_task)
            .collect();
        if chosen.len() < n_per_task {
            return Err(SurveyError::InsufficientRecords {
                task,
                needed: n_per_task,
                available: chosen.len(),
            });
        }
        used.extend(chosen.iter().copied());
        picks.push((task, chosen));
    }
    picks.sort_by_key(|(t, _)| *t);

    for (task, chosen) in picks {
        for (n, &ri) in chosen.iter().enumerate() {
            let record = &records[ri];
            let mut options: Vec<SurveyOption> = Vec::new();
            for source in Source::ALL {
                let Some(display) =
                    source_option(record, predictions_a, predictions_b, source, task.option_size())
                else {
                    continue;
                };
                let key = merge_key(&display);
                match options.iter_mut().find(|o| merge_key(&o.display) == key) {
                    Some(o) => {
                        o.sources.insert(source);
                    }
                    None => options.push(SurveyOption {
                        display,
                        sources: [source].into(),
                    }),
                }
            }
            let display_order_seed = rng.next_u64();
            options.shuffle(&mut ChaCha8Rng::seed_from_u64(display_order_seed));
            questions.push(SurveyQuestion {
                qid: format!("{}-{:02}", task, n + 1),
                task,
                instance_id: record.id().to_string(),
                sentence_display: sentence_display(&record.instance, task),
                options,
                display_order_seed,
            });
        }
    }
    Ok(questions)
}
