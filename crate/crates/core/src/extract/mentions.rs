use std::sync::LazyLock;

use regex::Regex;

use super::numbers::NumberGrammar;
use super::tables::Tables;
use super::tokens::{match_phrase, tokenize, Token};
use super::{PersonMention, Provenance, Role, Span};
use crate::text::compose;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CueKind {
    Stillborn,
    Death,
    Parent,
    Spouse,
    Appearance,
    Boundary,
}

#[derive(Debug, Clone, Copy)]
struct Cue {
    kind: CueKind,
    start: usize,
    end: usize,
}

fn find_cues(tokens: &[Token], tables: &Tables) -> Vec<Cue> {
    let lists = [
        (CueKind::Stillborn, &tables.stillborn_cues),
        (CueKind::Death, &tables.death_cues),
        (CueKind::Parent, &tables.parent_cues),
        (CueKind::Spouse, &tables.spouse_cues),
        (CueKind::Appearance, &tables.appearance_cues),
        (CueKind::Boundary, &tables.boundary_cues),
    ];
    let mut cues = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        // longest phrase wins; list order breaks ties
        let best = lists
            .iter()
            .filter_map(|(kind, phrases)| match_phrase(tokens, i, phrases).map(|n| (*kind, n)))
            .fold(None, |best: Option<(CueKind, usize)>, (k, n)| match best {
                Some((_, bn)) if bn >= n => best,
                _ => Some((k, n)),
            });
        match best {
            Some((kind, n)) => {
                cues.push(Cue { kind, start: i, end: i + n });
                i += n;
            }
            None => i += 1,
        }
    }
    cues
}

pub(crate) fn has_stillborn_cue(text: &str, tables: &Tables) -> bool {
    let tokens = tokenize(text);
    (0..tokens.len()).any(|i| match_phrase(&tokens, i, &tables.stillborn_cues).is_some())
}

fn is_name_word(t: &Token) -> bool {
    t.starts_upper() && t.is_alphabetic()
}

fn is_particle(t: &Token, tables: &Tables) -> bool {
    t.is_word && !t.starts_upper() && tables.particles.contains(&t.folded)
}

/// End (exclusive) of the capitalized sequence starting at `at`. Lowercase
/// particles are absorbed only when a capitalized word follows them.
fn sequence_end(tokens: &[Token], at: usize, tables: &Tables) -> Option<usize> {
    if !is_name_word(tokens.get(at)?) {
        return None;
    }
    let mut j = at + 1;
    loop {
        if tokens.get(j).is_some_and(is_name_word) {
            j += 1;
            continue;
        }
        let mut k = j;
        while tokens.get(k).is_some_and(|t| is_particle(t, tables)) {
            k += 1;
        }
        if k > j && tokens.get(k).is_some_and(is_name_word) {
            j = k + 1;
            continue;
        }
        return Some(j);
    }
}

fn acceptable_name(tokens: &[Token], start: usize, end: usize, tables: &Tables) -> bool {
    if start > 0 && tokens[start - 1].is_word && tables.place_markers.contains(&tokens[start - 1].folded) {
        return false;
    }
    tokens[start..end]
        .iter()
        .filter(|t| t.starts_upper())
        .all(|t| !tables.stopwords.contains(&t.folded) && !tables.months.contains_key(&t.folded))
}

/// Accepted capitalized sequences in `tokens[from..to]` as token ranges.
fn names_in_range(tokens: &[Token], from: usize, to: usize, tables: &Tables) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = from;
    while i < to {
        match sequence_end(&tokens[..to], i, tables) {
            Some(end) => {
                if acceptable_name(tokens, i, end, tables) {
                    out.push((i, end));
                }
                i = end;
            }
            None => i += 1,
        }
    }
    out
}

fn age_in(window: &[Token], g: &NumberGrammar) -> Option<u32> {
    static DIGITS: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\d{1,3}$").unwrap());
    let oud = window.iter().position(|t| t.is_word && (t.folded == "oud" || t.folded == "oude"))?;
    let at = oud + 1;
    let (value, n) = match window.get(at) {
        Some(t) if DIGITS.is_match(&t.text) => (t.text.parse().ok()?, 1),
        Some(_) => g.parse_run(window, at, 5, NumberGrammar::cardinal)?,
        None => return None,
    };
    match window.get(at + n).map(|t| t.folded.as_str())? {
        "jaren" | "jaar" | "jaars" => Some(value),
        "maanden" | "maand" | "weken" | "week" | "dagen" | "dag" => Some(0),
        _ => None,
    }
}

fn profession_in(window: &[Token], tables: &Tables) -> Option<String> {
    window
        .split(Token::is_comma)
        .take(3)
        .find_map(|segment| {
            (0..segment.len()).find_map(|i| {
                let n = match_phrase(segment, i, &tables.professions)?;
                Some(segment[i..i + n].iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" "))
            })
        })
}

fn mention(tokens: &[Token], (start, end): (usize, usize), role: Role, window: &[Token], tables: &Tables) -> PersonMention {
    PersonMention {
        name_tokens: tokens[start..end].iter().filter(|t| t.is_word).map(|t| compose(&t.text)).collect(),
        role,
        span: Span { start: tokens[start].span.start, end: tokens[end - 1].span.end },
        age: age_in(window, &tables.grammar),
        profession: profession_in(window, tables),
        provenance: Provenance::Extracted,
    }
}

fn roles_for(kind: CueKind, count: usize) -> Vec<Role> {
    (0..count)
        .map(|i| match (kind, i) {
            (CueKind::Death, 0) => Role::Deceased,
            (CueKind::Spouse, 0) => Role::Spouse,
            (CueKind::Appearance, 0) => Role::Informant,
            (CueKind::Appearance, _) => Role::Witness,
            (CueKind::Parent, 0) if count == 1 => Role::Mother,
            (CueKind::Parent, 0) => Role::Father,
            (CueKind::Parent, 1) => Role::Mother,
            _ => Role::Unknown,
        })
        .collect()
}

/// Role-tagged person mentions, ordered by position in the text.
///
/// Names are taken from the stretch between one cue phrase and the next; the
/// cue decides the role. Text before the first cue, and after boundary or
/// stillbirth cues, yields no mentions.
pub fn extract_mentions_with(text: &str, tables: &Tables) -> Vec<PersonMention> {
    let tokens = tokenize(text);
    let cues = find_cues(&tokens, tables);
    let mut out = Vec::new();
    for (ci, cue) in cues.iter().enumerate() {
        if matches!(cue.kind, CueKind::Boundary | CueKind::Stillborn) {
            continue;
        }
        let context_end = cues.get(ci + 1).map_or(tokens.len(), |c| c.start);
        let names = names_in_range(&tokens, cue.end, context_end, tables);
        let roles = roles_for(cue.kind, names.len());
        for (ni, (&range, role)) in names.iter().zip(roles).enumerate() {
            let window_end = names.get(ni + 1).map_or(context_end, |n| n.0);
            out.push(mention(&tokens, range, role, &tokens[range.1..window_end], tables));
        }
    }
    out.sort_by_key(|m| m.span.start);
    out
}

/// [`extract_mentions_with`] using the builtin tables.
pub fn extract_mentions(text: &str) -> Vec<PersonMention> {
    extract_mentions_with(text, &Tables::builtin())
}

/// Every acceptable capitalized sequence, with role `Unknown`. Used for
/// margin notes, which follow no formula.
pub fn raw_names_with(text: &str, tables: &Tables) -> Vec<PersonMention> {
    let tokens = tokenize(text);
    let names = names_in_range(&tokens, 0, tokens.len(), tables);
    names
        .iter()
        .enumerate()
        .map(|(ni, &range)| {
            let window_end = names.get(ni + 1).map_or(tokens.len(), |n| n.0);
            mention(&tokens, range, Role::Unknown, &tokens[range.1..window_end], tables)
        })
        .collect()
}
