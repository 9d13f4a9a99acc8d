use crate::extract::{ExtractedRecord, Flag};
use crate::lexicon::{append_mother_surname, post_correct_name, quality_gate, Lexicon, Verdict};

/// Name-completion and lexicon stage for one record.
///
/// The mother's surname completes a first-names-only deceased name. With a
/// lexicon, the selected name is gated as extracted (`UnknownTokens` when any
/// token is unknown) and a corrected spelling is attached as a suggestion;
/// the candidates themselves are not rewritten.
pub fn correct_record(record: &ExtractedRecord, lexicon: Option<&Lexicon>, min_freq: u64) -> ExtractedRecord {
    let mut out = append_mother_surname(record);
    out.flags.remove(&Flag::UnknownTokens);
    out.name_correction = None;
    if let (Some(lex), Some(top)) = (lexicon, out.top_name()) {
        let tokens = top.name_tokens.clone();
        if quality_gate(&tokens, lex) == Verdict::Flag {
            out.flags.insert(Flag::UnknownTokens);
        }
        out.name_correction = post_correct_name(&tokens, lex, min_freq).ok();
    }
    out.refresh_flags();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::{PersonMention, Role, Span};
    use crate::inventory::ScanId;

    fn record(name: &[&str]) -> ExtractedRecord {
        let mut r = ExtractedRecord::empty(ScanId::parse("O.R. 1887 Stad 1.JPG").unwrap(), "rules");
        r.deceased_candidates.push(PersonMention {
            name_tokens: name.iter().map(|s| s.to_string()).collect(),
            role: Role::Deceased,
            span: Span { start: 0, end: 1 },
            age: None,
            profession: None,
            provenance: Default::default(),
        });
        r.refresh_flags();
        r
    }

    fn lex() -> Lexicon {
        Lexicon::from_counts([("Maria", 10), ("Garmers", 3)], "t").unwrap()
    }

    #[test]
    fn unknown_token_is_gated_and_suggested() {
        let r = correct_record(&record(&["Mariak", "Garmers"]), Some(&lex()), 2);
        assert!(r.flags.contains(&Flag::UnknownTokens));
        assert_eq!(r.name_correction.as_ref().unwrap().corrected, ["Maria", "Garmers"]);
        assert_eq!(r.top_name().unwrap().name_tokens, ["Mariak", "Garmers"]);
    }

    #[test]
    fn known_name_passes_and_stage_is_idempotent() {
        let once = correct_record(&record(&["Maria", "Garmers"]), Some(&lex()), 2);
        assert!(!once.flags.contains(&Flag::UnknownTokens));
        assert_eq!(correct_record(&once, Some(&lex()), 2), once);
    }

    #[test]
    fn without_lexicon_nothing_is_gated() {
        let r = correct_record(&record(&["Mariak"]), None, 2);
        assert!(!r.flags.contains(&Flag::UnknownTokens));
        assert!(r.name_correction.is_none());
    }
}
