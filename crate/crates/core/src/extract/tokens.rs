use std::sync::LazyLock;

use regex::Regex;

use super::Span;
use crate::text::fold;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub text: String,
    pub folded: String,
    /// Character offsets into the source text.
    pub span: Span,
    pub is_word: bool,
}

impl Token {
    pub fn is_comma(&self) -> bool {
        !self.is_word && (self.text == "," || self.text == ";")
    }

    pub fn starts_upper(&self) -> bool {
        self.is_word && self.text.chars().next().is_some_and(char::is_uppercase)
    }

    pub fn is_alphabetic(&self) -> bool {
        self.is_word && self.text.chars().any(char::is_alphabetic) && !self.text.chars().any(|c| c.is_ascii_digit())
    }
}

/// Words (letters and digits, with inner hyphens or apostrophes) and single
/// punctuation characters.
pub(crate) fn tokenize(text: &str) -> Vec<Token> {
    static RE: LazyLock<Regex> =
        LazyLock::new(|| Regex::new(r"[\p{L}\p{M}\p{N}]+(?:[-'’][\p{L}\p{M}\p{N}]+)*|[^\s\p{L}\p{M}\p{N}]").unwrap());
    let mut char_at = 0usize;
    let mut byte_at = 0usize;
    RE.find_iter(text)
        .map(|m| {
            char_at += text[byte_at..m.start()].chars().count();
            let start = char_at;
            let len = m.as_str().chars().count();
            char_at += len;
            byte_at = m.end();
            let first = m.as_str().chars().next().unwrap_or(' ');
            Token {
                text: m.as_str().to_string(),
                folded: fold(m.as_str()),
                span: Span { start, end: start + len },
                is_word: first.is_alphanumeric(),
            }
        })
        .collect()
}

/// Length of the phrase from `phrases` that matches at `at`, longest first.
pub(crate) fn match_phrase(tokens: &[Token], at: usize, phrases: &[Vec<String>]) -> Option<usize> {
    phrases
        .iter()
        .filter(|p| !p.is_empty())
        .find(|p| {
            tokens.len() >= at + p.len() && p.iter().zip(&tokens[at..]).all(|(w, t)| t.is_word && t.folded == *w)
        })
        .map(Vec::len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_are_char_offsets() {
        let toks = tokenize("Curaçao, oud 37 jaren");
        assert_eq!(toks[0].text, "Curaçao");
        assert_eq!(toks[0].span, Span { start: 0, end: 7 });
        assert_eq!(toks[1].text, ",");
        assert!(!toks[1].is_word);
        assert_eq!(toks[2].span, Span { start: 9, end: 12 });
    }

    #[test]
    fn hyphenated_words_stay_whole() {
        let toks = tokenize("Anna-Maria d'Abreu");
        assert_eq!(toks.iter().map(|t| t.text.as_str()).collect::<Vec<_>>(), ["Anna-Maria", "d'Abreu"]);
    }

    #[test]
    fn phrase_matching_is_case_insensitive() {
        let toks = tokenize("Is Overleden Jan");
        let phrases = vec![vec!["is".to_string(), "overleden".to_string()], vec!["overleden".to_string()]];
        assert_eq!(match_phrase(&toks, 0, &phrases), Some(2));
        assert_eq!(match_phrase(&toks, 1, &phrases), Some(1));
        assert_eq!(match_phrase(&toks, 2, &phrases), None);
    }
}
