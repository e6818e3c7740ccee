//! Small string helpers shared across modules. Offsets are in chars.

use std::sync::OnceLock;

use regex::Regex;

/// Byte offset of the `char_idx`-th character; `char_idx == len` maps to `s.len()`.
pub fn char_to_byte(s: &str, char_idx: usize) -> Option<usize> {
    if char_idx == 0 {
        return Some(0);
    }
    let mut count = 0;
    for (byte, _) in s.char_indices() {
        if count == char_idx {
            return Some(byte);
        }
        count += 1;
    }
    (count == char_idx).then_some(s.len())
}

pub fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// Word tokens: letters/digits with optional internal hyphens or apostrophes.
pub fn word_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"[\p{L}\p{N}]+(?:['\-’][\p{L}\p{N}]+)*").unwrap())
}

pub fn word_count(s: &str) -> usize {
    word_regex().find_iter(s).count()
}

/// Uppercases the first character, leaving the rest untouched.
pub fn capitalize_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_offsets_handle_multibyte() {
        let s = "naïve cat";
        assert_eq!(char_to_byte(s, 0), Some(0));
        assert_eq!(char_to_byte(s, 3), Some(4));
        assert_eq!(char_to_byte(s, 9), Some(s.len()));
        assert_eq!(char_to_byte(s, 10), None);
    }

    #[test]
    fn words() {
        assert_eq!(word_count("She said."), 2);
        assert_eq!(word_count("well-known o'clock, 12 cats"), 4);
        assert_eq!(capitalize_first("go"), "Go");
        assert_eq!(capitalize_first("éa"), "Éa");
    }
}
