//! CoInCo XML release: `<sent>` elements with a `<targetsentence>` and a
//! `<tokens>` list whose target tokens carry `<subst lemma=".." freq="n"/>`.

use std::collections::HashSet;
use std::path::Path;

use super::{read_file, CanonicalRecord, CorpusError, GoldSet, ImportReport};
use crate::instance::{Pos, TargetInstance};
use crate::text::char_len;

pub fn import_coinco(
    xml_file: impl AsRef<Path>,
) -> Result<(Vec<CanonicalRecord>, ImportReport), CorpusError> {
    let path = xml_file.as_ref();
    let text = read_file(path)?;
    let opts = roxmltree::ParsingOptions {
        allow_dtd: true,
        ..Default::default()
    };
    let doc = roxmltree::Document::parse_with_options(&text, opts)
        .map_err(|e| CorpusError::parse(path.display(), e.to_string()))?;
    let mut report = ImportReport::new("coinco");
    let mut records = Vec::new();
    let mut seen = HashSet::new();

    for sent in doc.descendants().filter(|n| n.has_tag_name("sent")) {
        let location = || {
            let pos = doc.text_pos_at(sent.range().start);
            format!("{}:{}", path.display(), pos.row)
        };
        let sentence = sent
            .children()
            .find(|n| n.has_tag_name("targetsentence"))
            .and_then(|n| n.text())
            .map(str::trim)
            .ok_or_else(|| CorpusError::parse(location(), "<sent> without <targetsentence>"))?;
        let Some(tokens) = sent.children().find(|n| n.has_tag_name("tokens")) else {
            continue;
        };
        // byte cursor into the sentence; tokens appear in sentence order
        let mut cursor = 0;
        for token in tokens.children().filter(|n| n.has_tag_name("token")) {
            let wordform = token.attribute("wordform").unwrap_or_default();
            let id = token.attribute("id").unwrap_or("XXX");
            let found = if wordform.is_empty() {
                None
            } else {
                sentence[cursor..].find(wordform).map(|i| cursor + i)
            };
            let subst: Vec<(String, u32)> = token
                .descendants()
                .filter(|n| n.has_tag_name("subst"))
                .map(|n| {
                    let lemma = n.attribute("lemma").unwrap_or_default().to_string();
                    let freq = n.attribute("freq").unwrap_or("1");
                    freq.trim()
                        .parse::<u32>()
                        .map(|f| (lemma, f))
                        .map_err(|_| CorpusError::parse(location(), format!("bad freq {freq:?}")))
                })
                .collect::<Result<_, _>>()?;
            let is_target = id != "XXX" && token.descendants().any(|n| n.has_tag_name("substitutions"));
            let Some(byte_start) = found else {
                if is_target {
                    report
                        .anomalies
                        .push(format!("token {id}: wordform {wordform:?} not found in sentence; dropped"));
                }
                continue;
            };
            cursor = byte_start + wordform.len();
            if !is_target {
                continue;
            }
            if !seen.insert(id.to_string()) {
                return Err(CorpusError::DuplicateInstance(id.to_string()));
            }
            let Some(gold) = GoldSet::new(id, subst.iter().map(|(s, f)| (s.as_str(), *f))) else {
                report.dropped_empty_gold += 1;
                continue;
            };
            if wordform.contains(char::is_whitespace) {
                report
                    .anomalies
                    .push(format!("token {id}: wordform {wordform:?} has whitespace; dropped"));
                continue;
            }
            let pos_tag = token
                .attribute("posMASC")
                .or_else(|| token.attribute("posTT"))
                .unwrap_or("");
            let lemma = token.attribute("lemma").unwrap_or(wordform).to_lowercase();
            let char_start = char_len(&sentence[..byte_start]);
            let instance = TargetInstance::new(
                id,
                sentence,
                char_start,
                char_start + char_len(wordform),
                wordform,
                lemma,
                Pos::from_tag(pos_tag),
            )?;
            records.push(CanonicalRecord::new(instance, gold));
        }
    }
    report.tally(&records);
    Ok((records, report))
}
