//! Known-name lexicon: edit distance, fuzzy token correction, the known-token
//! quality gate and name-completion rules.

mod correct;
mod distance;
mod store;

use std::path::PathBuf;

pub use correct::{
    append_mother_surname, names_equal_any_order, post_correct_name, quality_gate, CorrectionResult, TokenChange,
    Verdict,
};
pub use distance::levenshtein;
pub use store::{load_lexicon, Lexicon, LoadedLexicon, MalformedRow};

/// Default frequency floor for replacement candidates.
pub const DEFAULT_MIN_FREQ: u64 = 2;

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("lexicon has no usable entries")]
    EmptyLexicon,
    #[error("name has no tokens")]
    EmptyName,
    #[error("no lexicon entry with frequency >= {min_freq}")]
    NoEligibleEntry { min_freq: u64 },
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
