//! Reader for the plain-text WordNet database files (`index.*`, `data.*`,
//! `*.exc`). Synsets are keyed by the offset field on each data line, so
//! hand-edited databases whose offsets are not byte positions still load.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::{LexiconError, Relation};
use crate::instance::Pos;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct SynsetId {
    pub pos: Pos,
    pub offset: u64,
}

#[derive(Debug, Clone)]
pub(crate) struct Pointer {
    pub relation: Relation,
    pub target: SynsetId,
    /// 1-based word index in the source synset; 0 for a semantic pointer.
    pub source_word: usize,
    pub target_word: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Synset {
    pub words: Vec<String>,
    pub pointers: Vec<Pointer>,
}

pub(crate) fn file_stem(pos: Pos) -> &'static str {
    match pos {
        Pos::Noun => "noun",
        Pos::Verb => "verb",
        Pos::Adj => "adj",
        Pos::Adv => "adv",
        Pos::Other => unreachable!("no database for pos other"),
    }
}

pub(crate) fn required_files(dir: &Path) -> Vec<PathBuf> {
    let mut files = Vec::new();
    for pos in Pos::LEXICAL {
        let stem = file_stem(pos);
        files.push(dir.join(format!("index.{stem}")));
        files.push(dir.join(format!("data.{stem}")));
        files.push(dir.join(format!("{stem}.exc")));
    }
    files
}

pub(crate) fn read(path: &Path) -> Result<String, LexiconError> {
    fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn pointer_relation(symbol: &str) -> Option<Relation> {
    match symbol {
        "!" => Some(Relation::Antonym),
        "@" | "@i" => Some(Relation::Hypernym),
        "~" | "~i" => Some(Relation::Hyponym),
        "#m" | "#s" | "#p" => Some(Relation::Holonym),
        "%m" | "%s" | "%p" => Some(Relation::Meronym),
        _ => None,
    }
}

fn pointer_pos(c: &str) -> Option<Pos> {
    match c {
        "n" => Some(Pos::Noun),
        "v" => Some(Pos::Verb),
        "a" | "s" => Some(Pos::Adj),
        "r" => Some(Pos::Adv),
        _ => None,
    }
}

/// Lowercases and strips adjective syntactic markers such as `(a)` or `(ip)`.
pub(crate) fn normalize_word(word: &str) -> String {
    let word = match word.find('(') {
        Some(i) if word.ends_with(')') => &word[..i],
        _ => word,
    };
    word.to_lowercase()
}

struct LineCtx<'a> {
    path: &'a Path,
    number: usize,
    line: &'a str,
}

impl LineCtx<'_> {
    fn error(&self, message: impl Into<String>) -> LexiconError {
        LexiconError::Parse {
            path: self.path.to_path_buf(),
            line: self.number,
            content: self.line.to_string(),
            message: message.into(),
        }
    }
}

struct Fields<'a, 'c> {
    iter: std::str::SplitWhitespace<'a>,
    ctx: &'c LineCtx<'a>,
}

impl<'a> Fields<'a, '_> {
    fn next(&mut self, what: &str) -> Result<&'a str, LexiconError> {
        self.iter
            .next()
            .ok_or_else(|| self.ctx.error(format!("missing {what}")))
    }

    fn dec(&mut self, what: &str) -> Result<u64, LexiconError> {
        let raw = self.next(what)?;
        raw.parse()
            .map_err(|_| self.ctx.error(format!("bad {what} {raw:?}")))
    }

    fn hex(&mut self, what: &str) -> Result<usize, LexiconError> {
        let raw = self.next(what)?;
        usize::from_str_radix(raw, 16).map_err(|_| self.ctx.error(format!("bad {what} {raw:?}")))
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.starts_with(' ') && !l.trim().is_empty())
}

pub(crate) fn parse_data(
    path: &Path,
    text: &str,
    pos: Pos,
    out: &mut HashMap<SynsetId, Synset>,
) -> Result<(), LexiconError> {
    for (number, line) in content_lines(text) {
        let ctx = LineCtx { path, number, line };
        let body = match line.find('|') {
            Some(i) => &line[..i],
            None => return Err(ctx.error("missing gloss separator '|'")),
        };
        let mut f = Fields {
            iter: body.split_whitespace(),
            ctx: &ctx,
        };
        let offset = f.dec("synset offset")?;
        f.next("lex_filenum")?;
        let ss_type = f.next("ss_type")?;
        if pointer_pos(ss_type) != Some(pos) {
            return Err(ctx.error(format!("ss_type {ss_type:?} does not belong in this file")));
        }
        let w_cnt = f.hex("word count")?;
        let mut words = Vec::with_capacity(w_cnt);
        for _ in 0..w_cnt {
            words.push(normalize_word(f.next("word")?));
            f.hex("lex_id")?;
        }
        let p_cnt = f.dec("pointer count")?;
        let mut pointers = Vec::new();
        for _ in 0..p_cnt {
            let symbol = f.next("pointer symbol")?;
            let target = f.dec("pointer offset")?;
            let target_pos = f.next("pointer pos")?;
            let target_pos = pointer_pos(target_pos)
                .ok_or_else(|| ctx.error(format!("bad pointer pos {target_pos:?}")))?;
            let st = f.next("source/target")?;
            if st.len() != 4 {
                return Err(ctx.error(format!("bad source/target field {st:?}")));
            }
            let source_word = usize::from_str_radix(&st[..2], 16)
                .map_err(|_| ctx.error(format!("bad source/target field {st:?}")))?;
            let target_word = usize::from_str_radix(&st[2..], 16)
                .map_err(|_| ctx.error(format!("bad source/target field {st:?}")))?;
            if source_word > words.len() {
                return Err(ctx.error(format!("pointer source word {source_word} out of range")));
            }
            if let Some(relation) = pointer_relation(symbol) {
                pointers.push(Pointer {
                    relation,
                    target: SynsetId {
                        pos: target_pos,
                        offset: target,
                    },
                    source_word,
                    target_word,
                });
            }
        }
        let id = SynsetId { pos, offset };
        if out.insert(id, Synset { words, pointers }).is_some() {
            return Err(ctx.error(format!("duplicate synset offset {offset}")));
        }
    }
    Ok(())
}

pub(crate) fn parse_index(
    path: &Path,
    text: &str,
    pos: Pos,
    out: &mut HashMap<(Pos, String), Vec<SynsetId>>,
) -> Result<(), LexiconError> {
    for (number, line) in content_lines(text) {
        let ctx = LineCtx { path, number, line };
        let mut f = Fields {
            iter: line.split_whitespace(),
            ctx: &ctx,
        };
        let lemma = f.next("lemma")?.to_lowercase();
        let tag = f.next("pos")?;
        if pointer_pos(tag) != Some(pos) {
            return Err(ctx.error(format!("pos {tag:?} does not belong in this file")));
        }
        let synset_cnt = f.dec("synset count")?;
        let p_cnt = f.dec("pointer count")?;
        for _ in 0..p_cnt {
            f.next("pointer symbol")?;
        }
        f.dec("sense count")?;
        f.dec("tagged sense count")?;
        let mut ids = Vec::new();
        for _ in 0..synset_cnt {
            ids.push(SynsetId {
                pos,
                offset: f.dec("synset offset")?,
            });
        }
        if f.iter.next().is_some() {
            return Err(ctx.error("trailing fields after synset offsets"));
        }
        out.insert((pos, lemma), ids);
    }
    Ok(())
}

pub(crate) fn parse_exceptions(
    path: &Path,
    text: &str,
    out: &mut HashMap<String, Vec<String>>,
) -> Result<(), LexiconError> {
    for (number, line) in content_lines(text) {
        let ctx = LineCtx { path, number, line };
        let mut parts = line.split_whitespace();
        let inflected = parts.next().ok_or_else(|| ctx.error("empty line"))?;
        let bases: Vec<String> = parts.map(str::to_lowercase).collect();
        if bases.is_empty() {
            return Err(ctx.error("exception entry without base form"));
        }
        out.entry(inflected.to_lowercase()).or_default().extend(bases);
    }
    Ok(())
}

/// Checks index offsets against the data file; reports the first dangling one.
pub(crate) fn check_index(
    dir: &Path,
    index: &HashMap<(Pos, String), Vec<SynsetId>>,
    synsets: &HashMap<SynsetId, Synset>,
) -> Result<(), LexiconError> {
    let mut dangling: Vec<(&Pos, &String, u64)> = index
        .iter()
        .flat_map(|((pos, lemma), ids)| {
            ids.iter()
                .filter(|id| !synsets.contains_key(id))
                .map(move |id| (pos, lemma, id.offset))
        })
        .collect();
    dangling.sort();
    if let Some((pos, lemma, offset)) = dangling.first() {
        let stem = file_stem(**pos);
        let path = dir.join(format!("index.{stem}"));
        let text = read(&path)?;
        let (number, line) = text
            .lines()
            .enumerate()
            .find(|(_, l)| l.split_whitespace().next() == Some(lemma.as_str()))
            .map(|(i, l)| (i + 1, l.to_string()))
            .unwrap_or((0, String::new()));
        return Err(LexiconError::Parse {
            path,
            line: number,
            content: line,
            message: format!("offset {offset:08} for {lemma:?} missing from data.{stem}"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_real_style_verb_line_with_frames() {
        let text = "  1 header\n\
            00001740 29 v 04 breathe 0 take_a_breath 0 respire 0 suspire 3 002 $ 00002325 v 0000 ~ 00002573 v 0000 02 + 02 00 + 08 00 | draw air into, and expel out of, the lungs  \n";
        let mut out = HashMap::new();
        parse_data(Path::new("data.verb"), text, Pos::Verb, &mut out).unwrap();
        let s = &out[&SynsetId {
            pos: Pos::Verb,
            offset: 1740,
        }];
        assert_eq!(s.words, ["breathe", "take_a_breath", "respire", "suspire"]);
        // `$` (verb group) is not a tracked relation
        assert_eq!(s.pointers.len(), 1);
        assert_eq!(s.pointers[0].relation, Relation::Hyponym);
    }

    #[test]
    fn adjective_markers_stripped() {
        assert_eq!(normalize_word("Galore(ip)"), "galore");
        assert_eq!(normalize_word("Canis_familiaris"), "canis_familiaris");
    }

    #[test]
    fn truncated_line_reports_location() {
        let text = "  1 header\n00000093 00 a 02 good 0 |\n";
        let err = parse_data(Path::new("data.adj"), text, Pos::Adj, &mut HashMap::new())
            .unwrap_err();
        match err {
            LexiconError::Parse { line, content, .. } => {
                assert_eq!(line, 2);
                assert!(content.starts_with("00000093"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn index_line() {
        let text = "dog n 1 3 #m @ ~ 1 0 00000916  \n";
        let mut out = HashMap::new();
        parse_index(Path::new("index.noun"), text, Pos::Noun, &mut out).unwrap();
        assert_eq!(out[&(Pos::Noun, "dog".to_string())][0].offset, 916);
        let bad = "dog n 2 0 1 0 00000916\n";
        assert!(parse_index(Path::new("index.noun"), bad, Pos::Noun, &mut HashMap::new()).is_err());
    }
}
