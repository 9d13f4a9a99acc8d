use std::collections::{BTreeMap, HashMap};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::distance::levenshtein_chars;
use super::LexiconError;
use crate::text::{fold, name_tokens};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Entry {
    key: String,
    display: String,
    chars: Vec<char>,
    frequency: u64,
}

/// Frequency table of known name tokens.
///
/// Keys are folded (composed + lower-cased); each key keeps the spelling that
/// was seen most often for display. Immutable once built: [`Lexicon::merge`]
/// returns a new version and leaves `self` untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    entries: Vec<Entry>,
    index: HashMap<String, usize>,
    source: String,
    version: u32,
}

/// A CSV row that could not be used. Collected, never fatal on its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MalformedRow {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct LoadedLexicon {
    pub lexicon: Lexicon,
    pub malformed: Vec<MalformedRow>,
}

impl Lexicon {
    /// Build from `(token, count)` pairs. Counts for tokens that fold to the
    /// same key are summed. Empty tokens and zero counts are dropped.
    pub fn from_counts<I, S>(counts: I, source: impl Into<String>) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut spellings: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
        for (token, count) in counts {
            let token = crate::text::compose(token.as_ref().trim());
            if token.is_empty() || count == 0 {
                continue;
            }
            *spellings
                .entry(fold(&token))
                .or_default()
                .entry(token)
                .or_default() += count;
        }
        if spellings.is_empty() {
            return Err(LexiconError::EmptyLexicon);
        }

        let entries = spellings
            .into_iter()
            .map(|(key, forms)| {
                let frequency = forms.values().sum();
                // most frequent spelling, ties to the smallest string
                let display = forms
                    .iter()
                    .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
                    .map(|(s, _)| s.clone())
                    .unwrap_or_else(|| key.clone());
                Entry { chars: key.chars().collect(), key, display, frequency }
            })
            .collect();
        Ok(Self::from_sorted(entries, source.into(), 1))
    }

    fn from_sorted(entries: Vec<Entry>, source: String, version: u32) -> Self {
        let index = entries.iter().enumerate().map(|(i, e)| (e.key.clone(), i)).collect();
        Self { entries, index, source, version }
    }

    /// Parse `name[,count]` rows. A header row is recognised when its first
    /// cell is `name` and its second cell (if any) is not a number.
    pub fn from_csv_reader<R: Read>(reader: R, source: impl Into<String>) -> Result<LoadedLexicon, LexiconError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);

        let mut counts: Vec<(String, u64)> = Vec::new();
        let mut malformed = Vec::new();
        for (i, row) in rdr.records().enumerate() {
            let line = i as u64 + 1;
            let row = match row {
                Ok(r) => r,
                Err(e) => {
                    malformed.push(MalformedRow { line, reason: e.to_string() });
                    continue;
                }
            };
            let name = row.get(0).unwrap_or("");
            let count_cell = row.get(1).unwrap_or("");
            if i == 0 && name.eq_ignore_ascii_case("name") && count_cell.parse::<u64>().is_err() {
                continue;
            }
            if row.len() > 2 {
                malformed.push(MalformedRow { line, reason: format!("expected at most 2 columns, found {}", row.len()) });
                continue;
            }
            if name.is_empty() {
                if row.iter().all(str::is_empty) {
                    continue;
                }
                malformed.push(MalformedRow { line, reason: "empty name".into() });
                continue;
            }
            let count = if count_cell.is_empty() {
                1
            } else {
                match count_cell.parse::<u64>() {
                    Ok(0) => {
                        malformed.push(MalformedRow { line, reason: "count must be positive".into() });
                        continue;
                    }
                    Ok(c) => c,
                    Err(_) => {
                        malformed.push(MalformedRow { line, reason: format!("invalid count {count_cell:?}") });
                        continue;
                    }
                }
            };
            for token in name_tokens(name) {
                counts.push((token, count));
            }
        }

        let lexicon = Self::from_counts(counts, source)?;
        Ok(LoadedLexicon { lexicon, malformed })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all frequencies.
    pub fn token_mass(&self) -> u64 {
        self.entries.iter().map(|e| e.frequency).sum()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(&fold(token))
    }

    pub fn frequency(&self, token: &str) -> Option<u64> {
        self.index.get(&fold(token)).map(|&i| self.entries[i].frequency)
    }

    /// Display spelling stored for `token`'s key.
    pub fn display(&self, token: &str) -> Option<&str> {
        self.index.get(&fold(token)).map(|&i| self.entries[i].display.as_str())
    }

    /// `(display, frequency)` in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|e| (e.display.as_str(), e.frequency))
    }

    /// `name,count` CSV in key order, readable by [`Lexicon::from_csv_reader`].
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "count"]).expect("in-memory write");
        for (name, count) in self.iter() {
            w.write_record([name, &count.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8")
    }

    /// New lexicon version with each token's frequency incremented by one
    /// per occurrence. Unknown tokens enter with frequency 1.
    pub fn merge<S: AsRef<str>>(&self, tokens: &[S]) -> Lexicon {
        let mut entries = self.entries.clone();
        let mut index = self.index.clone();
        let mut added = false;
        for token in tokens {
            let display = crate::text::compose(token.as_ref().trim());
            if display.is_empty() {
                continue;
            }
            let key = fold(&display);
            match index.get(&key) {
                Some(&i) => entries[i].frequency += 1,
                None => {
                    index.insert(key.clone(), entries.len());
                    entries.push(Entry { chars: key.chars().collect(), key, display, frequency: 1 });
                    added = true;
                }
            }
        }
        if added {
            entries.sort_by(|a, b| a.key.cmp(&b.key));
        }
        Self::from_sorted(entries, self.source.clone(), self.version + 1)
    }

    /// Closest entry with frequency ≥ `min_freq`.
    ///
    /// Order: smallest edit distance, then largest frequency, then smallest
    /// key. Returns the display spelling and the distance.
    pub fn closest_known(&self, token: &str, min_freq: u64) -> Result<(String, usize), LexiconError> {
        if token.trim().is_empty() {
            return Err(LexiconError::EmptyName);
        }
        let query: Vec<char> = fold(token.trim()).chars().collect();

        let mut best: Option<(&Entry, usize)> = None;
        for entry in self.entries.iter().filter(|e| e.frequency >= min_freq) {
            if let Some((_, best_dist)) = best {
                if entry.chars.len().abs_diff(query.len()) > best_dist {
                    continue;
                }
            }
            let dist = levenshtein_chars(&query, &entry.chars);
            let better = match best {
                None => true,
                Some((b, bd)) => dist < bd || (dist == bd && entry.frequency > b.frequency),
            };
            if better {
                best = Some((entry, dist));
            }
        }

        best.map(|(e, d)| (e.display.clone(), d))
            .ok_or(LexiconError::NoEligibleEntry { min_freq })
    }
}

/// Load a lexicon CSV from disk.
pub fn load_lexicon(path: &Path) -> Result<LoadedLexicon, LexiconError> {
    let file = std::fs::File::open(path).map_err(|source| LexiconError::Io { path: path.to_path_buf(), source })?;
    Lexicon::from_csv_reader(file, path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(pairs: &[(&str, u64)]) -> Lexicon {
        Lexicon::from_counts(pairs.iter().copied(), "test").unwrap()
    }

    #[test]
    fn csv_sums_tokens_of_multi_token_names() {
        let loaded = Lexicon::from_csv_reader("Maria,3\nMaria Garmers,2\n".as_bytes(), "t").unwrap();
        assert_eq!(loaded.lexicon.frequency("Maria"), Some(5));
        assert_eq!(loaded.lexicon.frequency("garmers"), Some(2));
        assert!(loaded.malformed.is_empty());
    }

    #[test]
    fn csv_header_and_missing_counts() {
        let loaded = Lexicon::from_csv_reader("name,count\nJohan\nLouis,4\n".as_bytes(), "t").unwrap();
        assert_eq!(loaded.lexicon.frequency("Johan"), Some(1));
        assert_eq!(loaded.lexicon.frequency("Louis"), Some(4));
        assert_eq!(loaded.lexicon.len(), 2);
    }

    #[test]
    fn csv_malformed_rows_are_collected() {
        let loaded = Lexicon::from_csv_reader("Maria,x\n,3\nJohan,0\nLouis,2\n".as_bytes(), "t").unwrap();
        assert_eq!(loaded.malformed.iter().map(|m| m.line).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(loaded.lexicon.len(), 1);
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(matches!(Lexicon::from_csv_reader("".as_bytes(), "t"), Err(LexiconError::EmptyLexicon)));
        assert!(matches!(
            Lexicon::from_csv_reader("name\n".as_bytes(), "t"),
            Err(LexiconError::EmptyLexicon)
        ));
    }

    #[test]
    fn display_prefers_most_frequent_spelling() {
        let l = lex(&[("maria", 1), ("Maria", 5), ("MARIA", 2)]);
        assert_eq!(l.display("mArIa"), Some("Maria"));
        assert_eq!(l.frequency("maria"), Some(8));
    }

    #[test]
    fn closest_known_prefers_distance_then_frequency_then_key() {
        let l = lex(&[("Maria", 100), ("Marian", 5)]);
        assert_eq!(l.closest_known("Mariak", 2).unwrap(), ("Maria".to_string(), 1));
        assert_eq!(l.closest_known("Maria", 2).unwrap(), ("Maria".to_string(), 0));

        let tie = lex(&[("Anna", 3), ("Anne", 7)]);
        assert_eq!(tie.closest_known("Annx", 2).unwrap().0, "Anne");

        let full_tie = lex(&[("Bob", 3), ("Rob", 3)]);
        assert_eq!(full_tie.closest_known("Xob", 2).unwrap().0, "Bob");
    }

    #[test]
    fn closest_known_honours_frequency_floor() {
        let l = lex(&[("X", 1)]);
        assert!(matches!(l.closest_known("X", 2), Err(LexiconError::NoEligibleEntry { min_freq: 2 })));
        let l = lex(&[("Mariak", 1), ("Maria", 2)]);
        assert_eq!(l.closest_known("Mariak", 2).unwrap(), ("Maria".to_string(), 1));
    }

    #[test]
    fn merge_is_copy_on_write() {
        let l = lex(&[("Maria", 2)]);
        let merged = l.merge(&["Maria", "Nicolina", "Nicolina"]);
        assert_eq!(l.token_mass(), 2);
        assert_eq!(merged.token_mass(), 5);
        assert_eq!(merged.frequency("nicolina"), Some(2));
        assert_eq!(merged.version(), l.version() + 1);
        assert!(!l.contains("Nicolina"));
    }

    #[test]
    fn csv_round_trip() {
        let l = lex(&[("Maria", 5), ("Garmers", 2), ("Élise", 1)]);
        let back = Lexicon::from_csv_reader(l.to_csv_string().as_bytes(), "test").unwrap();
        assert!(back.malformed.is_empty());
        assert_eq!(back.lexicon.iter().collect::<Vec<_>>(), l.iter().collect::<Vec<_>>());
    }
}
