//! Swords JSON release. Each substitute has a list of annotator labels; a
//! label starting with `TRUE` is a vote for the substitute.

use std::path::Path;

use serde_json::Value;

use super::{read_file, CanonicalRecord, CorpusError, GoldSet, ImportReport};
use crate::instance::{Pos, TargetInstance};
use crate::text::{char_len, char_to_byte};

const FRACTION_EPSILON: f64 = 1e-12;

fn votes(labels: &Value) -> Option<(u32, u32)> {
    match labels {
        Value::Array(items) => {
            let total = items.len() as u32;
            let yes = items
                .iter()
                .filter(|l| l.as_str().is_some_and(|s| s.starts_with("TRUE")))
                .count() as u32;
            Some((yes, total))
        }
        Value::Object(map) => {
            let yes = map.get("votes")?.as_u64()? as u32;
            let total = map.get("total")?.as_u64()? as u32;
            Some((yes, total))
        }
        _ => None,
    }
}

/// Keeps a substitute iff it has at least one vote and its vote fraction is
/// at least `min_vote_fraction`; the weight is the raw vote count.
pub fn import_swords(
    json_file: impl AsRef<Path>,
    min_vote_fraction: f64,
) -> Result<(Vec<CanonicalRecord>, ImportReport), CorpusError> {
    let path = json_file.as_ref();
    let loc = path.display().to_string();
    if !(0.0..=1.0).contains(&min_vote_fraction) {
        return Err(CorpusError::parse(&loc, format!("min vote fraction {min_vote_fraction} outside [0, 1]")));
    }
    let root: Value = serde_json::from_str(&read_file(path)?)
        .map_err(|e| CorpusError::parse(&loc, e.to_string()))?;
    let section = |name: &str| {
        root.get(name)
            .and_then(Value::as_object)
            .ok_or_else(|| CorpusError::parse(&loc, format!("missing object {name:?}")))
    };
    let contexts = section("contexts")?;
    let targets = section("targets")?;
    let substitutes = section("substitutes")?;
    let labels = section("substitute_labels")?;
    let mut report = ImportReport::new(&format!("swords(min_vote={min_vote_fraction})"));

    let mut per_target: std::collections::BTreeMap<&str, Vec<(String, u32)>> = Default::default();
    for (sid, sub) in substitutes {
        let field = |k: &str| {
            sub.get(k)
                .and_then(Value::as_str)
                .ok_or_else(|| CorpusError::parse(format!("{loc}: substitute {sid}"), format!("missing {k:?}")))
        };
        let tid = field("target_id")?;
        let word = field("substitute")?;
        let (yes, total) = labels
            .get(sid)
            .and_then(votes)
            .ok_or_else(|| CorpusError::parse(format!("{loc}: substitute {sid}"), "missing or bad labels"))?;
        let entry = per_target.entry(tid).or_default();
        if yes >= 1 && total > 0 && yes as f64 / total as f64 + FRACTION_EPSILON >= min_vote_fraction {
            entry.push((word.to_string(), yes));
        }
    }

    let mut records = Vec::new();
    for (tid, target) in targets {
        let tloc = format!("{loc}: target {tid}");
        let field = |k: &str| {
            target
                .get(k)
                .ok_or_else(|| CorpusError::parse(&tloc, format!("missing {k:?}")))
        };
        let cid = field("context_id")?.as_str().unwrap_or_default();
        let word = field("target")?.as_str().unwrap_or_default();
        let offset = field("offset")?
            .as_u64()
            .ok_or_else(|| CorpusError::parse(&tloc, "offset is not an integer"))? as usize;
        let pos = target.get("pos").and_then(Value::as_str).unwrap_or("");
        let context = contexts
            .get(cid)
            .and_then(|c| c.get("context"))
            .and_then(Value::as_str);
        let Some(context) = context else {
            report.dropped_missing_context += 1;
            continue;
        };
        let subs = per_target.remove(tid.as_str()).unwrap_or_default();
        let Some(gold) = GoldSet::new(tid.clone(), subs.iter().map(|(s, w)| (s.as_str(), *w))) else {
            report.dropped_empty_gold += 1;
            continue;
        };
        if word.contains(char::is_whitespace) {
            report
                .anomalies
                .push(format!("target {tid}: {word:?} has whitespace; dropped"));
            continue;
        }
        // offsets count characters
        if char_to_byte(context, offset + char_len(word)).is_none() {
            return Err(CorpusError::parse(&tloc, format!("offset {offset} beyond context")));
        }
        let instance = TargetInstance::new(
            tid.clone(),
            context,
            offset,
            offset + char_len(word),
            word,
            word.to_lowercase(),
            Pos::from_tag(pos),
        )?;
        records.push(CanonicalRecord::new(instance, gold));
    }
    for tid in per_target.keys() {
        report
            .anomalies
            .push(format!("substitutes reference unknown target {tid}"));
    }
    report.tally(&records);
    Ok((records, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn label_votes() {
        assert_eq!(votes(&json!(["TRUE", "FALSE", "TRUE_IMPLICIT"])), Some((2, 3)));
        assert_eq!(votes(&json!({"votes": 3, "total": 10})), Some((3, 10)));
        assert_eq!(votes(&json!("TRUE")), None);
    }
}
