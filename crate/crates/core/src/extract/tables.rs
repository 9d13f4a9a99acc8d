//! Word tables that drive the rule backend. Each table is a UTF-8 file with
//! one entry per line; `#` starts a comment. Valued tables (`months`,
//! `ordinals`, `numbers`) carry `word value` per line.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::{Arc, LazyLock};

use super::numbers::NumberGrammar;
use crate::text::fold;

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("reading table {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Malformed { file: String, line: usize, message: String },
}

/// Phrase lists are stored as folded token sequences.
pub type Phrases = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tables {
    pub months: BTreeMap<String, u32>,
    pub ordinals: BTreeMap<String, u32>,
    pub numbers: BTreeMap<String, u32>,
    pub death_cues: Phrases,
    pub appearance_cues: Phrases,
    pub parent_cues: Phrases,
    pub spouse_cues: Phrases,
    pub stillborn_cues: Phrases,
    pub boundary_cues: Phrases,
    pub professions: Phrases,
    pub particles: BTreeSet<String>,
    pub place_markers: BTreeSet<String>,
    pub stopwords: BTreeSet<String>,
    pub(crate) grammar: NumberGrammar,
}

macro_rules! builtin {
    ($name:literal) => {
        ($name, include_str!(concat!("../../data/", $name, ".txt")))
    };
}

const BUILTIN: [(&str, &str); 13] = [
    builtin!("months"),
    builtin!("ordinals"),
    builtin!("numbers"),
    builtin!("death_cues"),
    builtin!("appearance_cues"),
    builtin!("parent_cues"),
    builtin!("spouse_cues"),
    builtin!("stillborn_cues"),
    builtin!("boundary_cues"),
    builtin!("professions"),
    builtin!("particles"),
    builtin!("place_markers"),
    builtin!("stopwords"),
];

/// Names of the table files, without the `.txt` extension.
pub fn table_names() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(n, _)| *n)
}

fn entries(content: &str) -> impl Iterator<Item = (usize, &str)> {
    content.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn phrases(content: &str) -> Phrases {
    let mut out: Phrases = entries(content).map(|(_, l)| l.split_whitespace().map(fold).collect()).collect();
    // longer phrases first so matching is greedy
    out.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    out.dedup();
    out
}

fn words(content: &str) -> BTreeSet<String> {
    entries(content).map(|(_, l)| fold(l)).collect()
}

fn valued(file: &str, content: &str) -> Result<BTreeMap<String, u32>, TableError> {
    let mut out = BTreeMap::new();
    for (line, entry) in entries(content) {
        let malformed = |message: &str| TableError::Malformed { file: file.to_string(), line, message: message.into() };
        let (word, value) = entry.rsplit_once(char::is_whitespace).ok_or_else(|| malformed("expected `word value`"))?;
        let value: u32 = value.trim().parse().map_err(|_| malformed("value is not a number"))?;
        out.insert(fold(word.trim()), value);
    }
    Ok(out)
}

impl Tables {
    /// Tables compiled into the binary.
    pub fn builtin() -> Arc<Tables> {
        static BUILTIN_TABLES: LazyLock<Arc<Tables>> = LazyLock::new(|| {
            let files = BUILTIN.iter().map(|(n, c)| (n.to_string(), c.to_string())).collect();
            Arc::new(Tables::from_contents(&files).expect("builtin tables are well formed"))
        });
        BUILTIN_TABLES.clone()
    }

    /// Builtin tables, with every `<name>.txt` present in `dir` replacing its
    /// builtin counterpart.
    pub fn from_dir(dir: &Path) -> Result<Tables, TableError> {
        let mut files = BTreeMap::new();
        for (name, content) in BUILTIN {
            let path = dir.join(format!("{name}.txt"));
            let content = match std::fs::read_to_string(&path) {
                Ok(c) => c,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => content.to_string(),
                Err(source) => return Err(TableError::Io { path, source }),
            };
            files.insert(name.to_string(), content);
        }
        Tables::from_contents(&files)
    }

    fn from_contents(files: &BTreeMap<String, String>) -> Result<Tables, TableError> {
        let get = |n: &str| files.get(n).map(String::as_str).unwrap_or("");
        let months = valued("months.txt", get("months"))?;
        let ordinals = valued("ordinals.txt", get("ordinals"))?;
        let numbers = valued("numbers.txt", get("numbers"))?;
        Ok(Tables {
            grammar: NumberGrammar::new(&numbers, &ordinals),
            months,
            ordinals,
            numbers,
            death_cues: phrases(get("death_cues")),
            appearance_cues: phrases(get("appearance_cues")),
            parent_cues: phrases(get("parent_cues")),
            spouse_cues: phrases(get("spouse_cues")),
            stillborn_cues: phrases(get("stillborn_cues")),
            boundary_cues: phrases(get("boundary_cues")),
            professions: phrases(get("professions")),
            particles: words(get("particles")),
            place_markers: words(get("place_markers")),
            stopwords: words(get("stopwords")),
        })
    }
}
