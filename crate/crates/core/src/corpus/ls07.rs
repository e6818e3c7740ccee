//! SemEval-2007 lexical substitution release: an XML-like context file with
//! `<head>`-marked targets and a gold file of `item id :: sub n; sub n;` lines.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;

use super::{read_file, CanonicalRecord, CorpusError, GoldSet, ImportReport};
use crate::instance::{InstanceError, Pos, TargetInstance};
use crate::text::char_len;

/// One parsed gold line: item (`lemma.pos`), instance id and weighted substitutes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldLine {
    pub item: String,
    pub id: String,
    pub subs: Vec<(String, u32)>,
}

pub fn parse_gold_line(line: &str) -> Result<GoldLine, String> {
    let (head, subs) = line
        .split_once("::")
        .ok_or_else(|| "missing '::' separator".to_string())?;
    let mut head = head.split_whitespace();
    let (Some(item), Some(id), None) = (head.next(), head.next(), head.next()) else {
        return Err("expected `lemma.pos id` before '::'".into());
    };
    let mut out = Vec::new();
    for part in subs.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (sub, weight) = part
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| format!("substitute {part:?} has no count"))?;
        let weight: u32 = weight
            .parse()
            .map_err(|_| format!("bad count {weight:?} for {sub:?}"))?;
        out.push((sub.trim().to_string(), weight));
    }
    Ok(GoldLine {
        item: item.to_string(),
        id: id.to_string(),
        subs: out,
    })
}

fn split_item(item: &str) -> (String, Pos) {
    match item.rsplit_once('.') {
        Some((lemma, tag)) => (lemma.to_lowercase(), Pos::from_tag(tag)),
        None => (item.to_lowercase(), Pos::Other),
    }
}

fn decode_entities(s: &str) -> String {
    s.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&amp;", "&")
}

fn instance_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r#"(?s)<instance\s+id="([^"]*)"[^>]*>\s*<context>(.*?)</context>"#).unwrap()
    })
}

fn lexelt_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r#"<lexelt\s+item="([^"]*)""#).unwrap())
}

fn line_of(text: &str, byte: usize) -> usize {
    text[..byte].matches('\n').count() + 1
}

pub fn import_ls07(
    context_file: impl AsRef<Path>,
    gold_file: impl AsRef<Path>,
) -> Result<(Vec<CanonicalRecord>, ImportReport), CorpusError> {
    let context_path = context_file.as_ref();
    let gold_path = gold_file.as_ref();
    let contexts = read_file(context_path)?;
    let gold_text = read_file(gold_path)?;
    let mut report = ImportReport::new("ls07");

    let mut gold: HashMap<String, GoldLine> = HashMap::new();
    for (i, line) in gold_text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let location = format!("{}:{}", gold_path.display(), i + 1);
        let parsed = parse_gold_line(line).map_err(|m| CorpusError::parse(&location, m))?;
        if gold.contains_key(&parsed.id) {
            return Err(CorpusError::DuplicateInstance(parsed.id));
        }
        gold.insert(parsed.id.clone(), parsed);
    }

    let lexelts: Vec<(usize, String)> = lexelt_regex()
        .captures_iter(&contexts)
        .map(|c| (c.get(0).unwrap().start(), c[1].to_string()))
        .collect();

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for caps in instance_regex().captures_iter(&contexts) {
        let start = caps.get(0).unwrap().start();
        let location = format!("{}:{}", context_path.display(), line_of(&contexts, start));
        let id = caps[1].to_string();
        if !seen.insert(id.clone()) {
            return Err(CorpusError::DuplicateInstance(id));
        }
        let item = lexelts
            .iter()
            .take_while(|(pos, _)| *pos < start)
            .last()
            .map(|(_, item)| item.clone())
            .ok_or_else(|| CorpusError::parse(&location, format!("instance {id} outside a <lexelt>")))?;
        let Some(line) = gold.get(&id) else {
            report.dropped_empty_gold += 1;
            continue;
        };
        if line.item != item {
            report
                .anomalies
                .push(format!("instance {id}: gold item {} vs context item {item}", line.item));
        }
        let Some(gold_set) = GoldSet::new(id.clone(), line.subs.iter().map(|(s, w)| (s.as_str(), *w)))
        else {
            report.dropped_empty_gold += 1;
            continue;
        };
        let context = &caps[2];
        let (Some(h0), Some(h1)) = (context.find("<head>"), context.find("</head>")) else {
            return Err(InstanceError::NotFound {
                id,
                word: item,
            }
            .into());
        };
        if h1 < h0 {
            return Err(CorpusError::parse(&location, "</head> before <head>"));
        }
        let before = decode_entities(&context[..h0]);
        let before = before.trim_start();
        let head = decode_entities(&context[h0 + "<head>".len()..h1]);
        let head = head.trim();
        let after = decode_entities(&context[h1 + "</head>".len()..]);
        let after = after.trim_end();
        if head.is_empty() || head.contains(char::is_whitespace) {
            report
                .anomalies
                .push(format!("instance {id}: head {head:?} is not a single token; dropped"));
            continue;
        }
        let sentence = format!("{before}{head}{after}");
        let (lemma, pos) = split_item(&item);
        let char_start = char_len(before);
        let instance = TargetInstance::new(
            id,
            sentence,
            char_start,
            char_start + char_len(head),
            head,
            lemma,
            pos,
        )?;
        records.push(CanonicalRecord::new(instance, gold_set));
    }
    let used: HashSet<&str> = records.iter().map(|r| r.id()).collect();
    report.dropped_missing_context = gold
        .keys()
        .filter(|id| !used.contains(id.as_str()) && !seen.contains(id.as_str()))
        .count();
    report.tally(&records);
    Ok((records, report))
}
