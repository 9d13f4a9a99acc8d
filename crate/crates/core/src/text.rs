//! Text normalization shared by the lexicon, extraction and evaluation code.

use unicode_normalization::UnicodeNormalization;

/// Canonical composition (NFC). `c` + combining cedilla becomes `ç`.
pub fn compose(s: &str) -> String {
    s.nfc().collect()
}

/// Matching key for a single token: composed, then lower-cased.
///
/// Diacritics are kept as letters, so `Curaçao` and `Curacao` stay distinct.
pub fn fold(s: &str) -> String {
    compose(s).to_lowercase()
}

/// Collapse runs of whitespace to one space, trim both ends and normalize
/// `\r\n` / `\r` line endings to `\n` before doing so.
pub fn collapse_whitespace(s: &str) -> String {
    let unified = s.replace("\r\n", "\n").replace('\r', "\n");
    let mut out = String::with_capacity(unified.len());
    for word in unified.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// Split a name on whitespace, composing each token. Internal hyphens stay.
pub fn name_tokens(s: &str) -> Vec<String> {
    s.split_whitespace().map(compose).collect()
}


/// Truncate to at most `max` scalars without splitting a character.
pub(crate) fn truncate_chars(s: &str, max: usize) -> &str {
    match s.char_indices().nth(max) {
        Some((idx, _)) => &s[..idx],
        None => s,
    }
}
