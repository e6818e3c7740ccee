//! Inflectional-variant test used by the morph_variant filter.

use std::collections::BTreeSet;

use crate::lexicon::Lexicon;

const SUFFIXES: [&str; 7] = ["s", "es", "ed", "d", "ing", "er", "est"];

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn doubles(c: char) -> bool {
    c.is_alphabetic() && !is_vowel(c) && !matches!(c, 'w' | 'x' | 'y')
}

/// True if `form` is `base` plus one inflectional suffix, allowing e-drop,
/// final-consonant doubling and consonant+y to i.
pub fn inflects(base: &str, form: &str) -> bool {
    let chars: Vec<char> = base.chars().collect();
    if chars.len() < 2 {
        return false;
    }
    let last = chars[chars.len() - 1];
    let before_last = chars[chars.len() - 2];
    let stem_without_last: String = chars[..chars.len() - 1].iter().collect();
    SUFFIXES.iter().any(|suffix| {
        let vowel_suffix = suffix.starts_with(|c: char| is_vowel(c));
        if form == format!("{base}{suffix}") {
            return true;
        }
        if vowel_suffix && last == 'e' && form == format!("{stem_without_last}{suffix}") {
            return true;
        }
        if vowel_suffix && doubles(last) && form == format!("{base}{last}{suffix}") {
            return true;
        }
        let y_to_i = last == 'y' && !is_vowel(before_last) && *suffix != "s" && *suffix != "d";
        y_to_i && *suffix != "ing" && form == format!("{stem_without_last}i{suffix}")
    })
}

fn lemma_set(lex: &Lexicon, word: &str) -> BTreeSet<String> {
    let mut set = lex.lemmatize_any(word);
    set.insert(word.to_string());
    set
}

/// Whether `candidate` is a grammatical variant of `target` (both compared
/// case-folded): shared lemma under the lexicon, or a suffix transformation.
pub fn is_morph_variant(lex: &Lexicon, candidate: &str, target: &str) -> bool {
    let c = candidate.to_lowercase();
    let t = target.to_lowercase();
    if c == t {
        return false;
    }
    if inflects(&c, &t) || inflects(&t, &c) {
        return true;
    }
    !lemma_set(lex, &c).is_disjoint(&lemma_set(lex, &t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffix_transformations() {
        assert!(inflects("cat", "cats"));
        assert!(inflects("bus", "buses"));
        assert!(inflects("walk", "walked"));
        assert!(inflects("like", "liked"));
        assert!(inflects("walk", "walking"));
        assert!(inflects("make", "making"));
        assert!(inflects("run", "running"));
        assert!(inflects("big", "bigger"));
        assert!(inflects("big", "biggest"));
        assert!(inflects("fast", "faster"));
        assert!(inflects("happy", "happier"));
        assert!(inflects("carry", "carried"));
        assert!(inflects("large", "largest"));
        assert!(!inflects("happy", "happiing"));
        assert!(!inflects("play", "plaied"));
        assert!(!inflects("cat", "dog"));
        assert!(!inflects("a", "as"));
        assert!(!inflects("fix", "fixxed"));
    }

    #[test]
    fn variant_is_symmetric_without_lexicon() {
        let lex = Lexicon::empty();
        assert!(is_morph_variant(&lex, "happier", "happy"));
        assert!(is_morph_variant(&lex, "happy", "happier"));
        assert!(!is_morph_variant(&lex, "glad", "happy"));
        assert!(!is_morph_variant(&lex, "happy", "HAPPY"));
    }
}
