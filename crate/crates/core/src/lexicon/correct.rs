use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Lexicon, LexiconError};
use crate::extract::{ExtractedRecord, PersonMention, Provenance, Role};
use crate::text::fold;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Flag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenChange {
    pub replaced: bool,
    pub distance: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionResult {
    pub original: Vec<String>,
    pub corrected: Vec<String>,
    pub per_token: Vec<TokenChange>,
    pub verdict: Verdict,
}

impl CorrectionResult {
    pub fn changed(&self) -> bool {
        self.per_token.iter().any(|t| t.replaced)
    }
}

/// Accept iff the name is non-empty and every token is a lexicon entry of
/// any frequency.
pub fn quality_gate<S: AsRef<str>>(name: &[S], lexicon: &Lexicon) -> Verdict {
    if !name.is_empty() && name.iter().all(|t| lexicon.contains(t.as_ref())) {
        Verdict::Accept
    } else {
        Verdict::Flag
    }
}

/// Replace every unknown token with its closest eligible lexicon entry.
///
/// Known tokens are kept verbatim. When no entry meets `min_freq` the token is
/// kept and the verdict is `Flag`.
pub fn post_correct_name<S: AsRef<str>>(
    name: &[S],
    lexicon: &Lexicon,
    min_freq: u64,
) -> Result<CorrectionResult, LexiconError> {
    if name.is_empty() {
        return Err(LexiconError::EmptyName);
    }
    let original: Vec<String> = name.iter().map(|t| t.as_ref().to_string()).collect();
    let mut corrected = Vec::with_capacity(original.len());
    let mut per_token = Vec::with_capacity(original.len());

    for token in &original {
        if lexicon.contains(token) {
            corrected.push(token.clone());
            per_token.push(TokenChange { replaced: false, distance: 0 });
            continue;
        }
        match lexicon.closest_known(token, min_freq) {
            Ok((replacement, distance)) => {
                corrected.push(replacement);
                per_token.push(TokenChange { replaced: true, distance });
            }
            Err(LexiconError::NoEligibleEntry { .. }) | Err(LexiconError::EmptyName) => {
                corrected.push(token.clone());
                per_token.push(TokenChange { replaced: false, distance: 0 });
            }
            Err(other) => return Err(other),
        }
    }

    let verdict = quality_gate(&corrected, lexicon);
    Ok(CorrectionResult { original, corrected, per_token, verdict })
}

/// True iff the folded token multisets are equal.
pub fn names_equal_any_order<A: AsRef<str>, B: AsRef<str>>(a: &[A], b: &[B]) -> bool {
    fn multiset<T: AsRef<str>>(tokens: &[T]) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for t in tokens {
            *m.entry(fold(t.as_ref())).or_insert(0) += 1;
        }
        m
    }
    a.len() == b.len() && multiset(a) == multiset(b)
}

/// Complete a first-names-only deceased name with the mother's surname.
///
/// Applies when the top deceased candidate shares no token with the final
/// token of any father/mother mention. The completed name is inserted as the
/// new first candidate; the extracted one is kept behind it.
pub fn append_mother_surname(record: &ExtractedRecord) -> ExtractedRecord {
    let mut out = record.clone();
    let Some(top) = record.deceased_candidates.first() else {
        return out;
    };
    let Some(mother) = record.other_mentions.iter().find(|m| m.role == Role::Mother) else {
        return out;
    };
    let Some(mother_surname) = mother.name_tokens.last() else {
        return out;
    };

    let surnames: Vec<String> = record
        .other_mentions
        .iter()
        .filter(|m| matches!(m.role, Role::Father | Role::Mother))
        .filter_map(|m| m.name_tokens.last())
        .map(|t| fold(t))
        .collect();
    if top.name_tokens.iter().any(|t| surnames.contains(&fold(t))) {
        return out;
    }

    let mut tokens = top.name_tokens.clone();
    tokens.push(mother_surname.clone());
    if record.deceased_candidates.iter().any(|c| names_equal_any_order(&c.name_tokens, &tokens)) {
        return out;
    }
    let derived = PersonMention { name_tokens: tokens, provenance: Provenance::Derived, ..top.clone() };
    out.deceased_candidates.insert(0, derived);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::Span;
    use crate::inventory::ScanId;

    fn lex(pairs: &[(&str, u64)]) -> Lexicon {
        Lexicon::from_counts(pairs.iter().copied(), "test").unwrap()
    }

    fn mention(name: &str, role: Role) -> PersonMention {
        PersonMention {
            name_tokens: name.split(' ').map(String::from).collect(),
            role,
            span: Span { start: 0, end: name.chars().count() },
            age: None,
            profession: None,
            provenance: Provenance::Extracted,
        }
    }

    fn record(deceased: &str, others: Vec<PersonMention>) -> ExtractedRecord {
        let mut r = ExtractedRecord::empty(ScanId::parse("O.R. 1887 Stad 411.JPG").unwrap(), "rules");
        r.deceased_candidates.push(mention(deceased, Role::Deceased));
        r.other_mentions = others;
        r
    }

    #[test]
    fn gate() {
        let l = lex(&[("Johan", 3), ("Garmers", 2)]);
        assert_eq!(quality_gate(&["Johan", "Garmers"], &l), Verdict::Accept);
        assert_eq!(quality_gate(&["Mariak"], &l), Verdict::Flag);
        assert_eq!(quality_gate::<&str>(&[], &l), Verdict::Flag);
    }

    #[test]
    fn correction_replaces_only_unknown_tokens() {
        let l = lex(&[("Maria", 100), ("Marian", 5)]);
        let known = post_correct_name(&["Maria"], &l, 2).unwrap();
        assert_eq!(known.corrected, vec!["Maria"]);
        assert!(!known.changed());
        assert_eq!(known.verdict, Verdict::Accept);

        let fixed = post_correct_name(&["Mariak"], &l, 2).unwrap();
        assert_eq!(fixed.corrected, vec!["Maria"]);
        assert_eq!(fixed.per_token, vec![TokenChange { replaced: true, distance: 1 }]);
        assert_eq!(fixed.verdict, Verdict::Accept);

        assert!(matches!(post_correct_name::<&str>(&[], &l, 2), Err(LexiconError::EmptyName)));
    }

    #[test]
    fn no_eligible_entry_keeps_token_and_flags() {
        let l = lex(&[("X", 1)]);
        let r = post_correct_name(&["Yy"], &l, 2).unwrap();
        assert_eq!(r.corrected, vec!["Yy"]);
        assert_eq!(r.verdict, Verdict::Flag);
        assert!(!r.changed());
    }

    #[test]
    fn any_order_comparison() {
        assert!(names_equal_any_order(&["Louis", "Martis"], &["Martis", "louis"]));
        assert!(!names_equal_any_order(&["Louis"], &["Louis", "Martis"]));
        assert!(!names_equal_any_order(&["Anna", "Anna", "Bos"], &["Anna", "Bos", "Bos"]));
    }

    #[test]
    fn mother_surname_appended_as_new_candidate() {
        let r = record("Johan", vec![mention("Maria Nicolina Garmers", Role::Mother)]);
        let out = append_mother_surname(&r);
        assert_eq!(out.deceased_candidates.len(), 2);
        assert_eq!(out.deceased_candidates[0].name_tokens, vec!["Johan", "Garmers"]);
        assert_eq!(out.deceased_candidates[0].provenance, Provenance::Derived);
        assert_eq!(out.deceased_candidates[1].name_tokens, vec!["Johan"]);
    }

    #[test]
    fn mother_surname_guards() {
        let has_surname = record(
            "Johan Garmers",
            vec![mention("Johan Frederik Garmers", Role::Father), mention("Maria Nicolina Garmers", Role::Mother)],
        );
        assert_eq!(append_mother_surname(&has_surname), has_surname);

        let no_mother = record("Johan", vec![mention("Pedro Garcia", Role::Witness)]);
        assert_eq!(append_mother_surname(&no_mother), no_mother);

        let via_father = record("Johan Bos", vec![mention("Piet Bos", Role::Father), mention("Anna Kok", Role::Mother)]);
        assert_eq!(append_mother_surname(&via_father), via_father);
    }
}
