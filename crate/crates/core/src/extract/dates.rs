use std::sync::LazyLock;

use chrono::{Datelike, NaiveDate};
use regex::Regex;

use super::numbers::NumberGrammar;
use super::tables::Tables;
use super::tokens::{match_phrase, tokenize, Token};
use super::{DateCandidate, Provenance, Span};

fn numeric_day(token: &Token) -> Option<u32> {
    static RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(\d{1,2})(?:e|de|den|en|ste|sten)?$").unwrap());
    RE.captures(&token.folded)?.get(1)?.as_str().parse().ok()
}

fn numeric_year(token: &Token) -> Option<i32> {
    static RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\d{4}$").unwrap());
    RE.is_match(&token.text).then(|| token.text.parse().ok()).flatten()
}

fn day_at(tokens: &[Token], at: usize, g: &NumberGrammar) -> Option<(u32, usize)> {
    if let Some(d) = numeric_day(&tokens[at]) {
        return Some((d, 1));
    }
    g.parse_run(tokens, at, 4, NumberGrammar::ordinal)
        .or_else(|| g.parse_run(tokens, at, 4, NumberGrammar::cardinal))
        .filter(|(d, _)| (1..=31).contains(d))
}

fn year_at(tokens: &[Token], at: usize, g: &NumberGrammar) -> Option<(i32, usize)> {
    let token = tokens.get(at)?;
    if let Some(y) = numeric_year(token) {
        return Some((y, 1));
    }
    g.parse_run(tokens, at, 8, NumberGrammar::cardinal)
        .filter(|(y, _)| (1000..=2999).contains(y))
        .map(|(y, n)| (y as i32, n))
}

fn month_at(tokens: &[Token], at: usize, tables: &Tables) -> Option<(u32, usize)> {
    let token = tokens.get(at)?;
    if !token.is_word {
        return None;
    }
    let month = *tables.months.get(&token.folded)?;
    // abbreviated months may carry a period
    let dot = tokens.get(at + 1).is_some_and(|t| t.text == ".");
    Some((month, 1 + usize::from(dot)))
}

fn slice_chars(text: &str, span: Span) -> String {
    text.chars().skip(span.start).take(span.end - span.start).collect()
}

fn gap(a: Span, b: Span) -> usize {
    if a.end <= b.start {
        b.start - a.end
    } else {
        a.start.saturating_sub(b.end)
    }
}

/// Spans of death and stillbirth cue phrases.
pub(crate) fn death_cue_spans(tokens: &[Token], tables: &Tables) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let hit = match_phrase(tokens, i, &tables.death_cues).or_else(|| match_phrase(tokens, i, &tables.stillborn_cues));
        match hit {
            Some(n) => {
                spans.push(Span { start: tokens[i].span.start, end: tokens[i + n - 1].span.end });
                i += n;
            }
            None => i += 1,
        }
    }
    spans
}

/// Calendar-valid day-month-year expressions in `text`, ranked by distance
/// to the nearest death cue (ties and cue-less texts: text order).
pub fn extract_death_dates_with(text: &str, tables: &Tables) -> Vec<DateCandidate> {
    let tokens = tokenize(text);
    let g = &tables.grammar;
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let found = (|| {
            let (day, nd) = day_at(&tokens, i, g)?;
            let (month, nm) = month_at(&tokens, i + nd, tables)?;
            let (year, ny) = year_at(&tokens, i + nd + nm, g)?;
            NaiveDate::from_ymd_opt(year, month, day)?;
            Some((year, month, day, nd + nm + ny))
        })();
        match found {
            Some((year, month, day, n)) => {
                let span = Span { start: tokens[i].span.start, end: tokens[i + n - 1].span.end };
                out.push(DateCandidate {
                    year,
                    month,
                    day,
                    span,
                    raw: slice_chars(text, span),
                    year_corrected: false,
                    original_year: None,
                    provenance: Provenance::Extracted,
                });
                i += n;
            }
            None => i += 1,
        }
    }

    let cues = death_cue_spans(&tokens, tables);
    if !cues.is_empty() {
        out.sort_by_key(|d| (cues.iter().map(|c| gap(d.span, *c)).min().unwrap_or(usize::MAX), d.span.start));
    }
    out
}

/// [`extract_death_dates_with`] using the builtin tables.
pub fn extract_death_dates(text: &str) -> Vec<DateCandidate> {
    extract_death_dates_with(text, &Tables::builtin())
}

fn days_in_month(year: i32, month: u32) -> u32 {
    let (ny, nm) = if month == 12 { (year + 1, 1) } else { (year, month + 1) };
    NaiveDate::from_ymd_opt(ny, nm, 1)
        .and_then(|d| d.pred_opt())
        .map(|d| d.day())
        .unwrap_or(28)
}

/// Force the year into `{scan_year - 1, scan_year}`.
///
/// Out-of-window years become the scan year. A 29 February moved to a common
/// year becomes 28 February so the result stays calendar-valid.
pub fn correct_year(candidate: &DateCandidate, scan_year: i32) -> DateCandidate {
    let mut out = candidate.clone();
    if candidate.year == scan_year || candidate.year == scan_year - 1 {
        return out;
    }
    out.original_year = Some(candidate.original_year.unwrap_or(candidate.year));
    out.year = scan_year;
    out.day = out.day.min(days_in_month(scan_year, out.month));
    out.year_corrected = true;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ymd(d: &DateCandidate) -> (i32, u32, u32) {
        (d.year, d.month, d.day)
    }

    #[test]
    fn numeric_day() {
        let d = extract_death_dates("den 5 Mei 1887");
        assert_eq!(d.len(), 1);
        assert_eq!(ymd(&d[0]), (1887, 5, 5));
        assert_eq!(d[0].raw, "5 Mei 1887");
        assert_eq!(d[0].span, Span { start: 4, end: 14 });
    }

    #[test]
    fn ordinal_day_and_written_year() {
        let d = extract_death_dates("den vijfden Mei 1887");
        assert_eq!(ymd(&d[0]), (1887, 5, 5));
        let d = extract_death_dates("op den een en twintigsten Meij achttienhonderd zeven en tachtig, des");
        assert_eq!(ymd(&d[0]), (1887, 5, 21));
        assert_eq!(d[0].raw, "een en twintigsten Meij achttienhonderd zeven en tachtig");
    }

    #[test]
    fn invalid_calendar_dates_are_dropped() {
        assert!(extract_death_dates("den 31 Februari 1887").is_empty());
        assert!(extract_death_dates("den 29 Februari 1887").is_empty());
        assert_eq!(extract_death_dates("den 29 Februari 1888").len(), 1);
    }

    #[test]
    fn ranked_by_cue_distance() {
        let text = "Heden den 6 Mei 1887 verklaarden, dat op den 4 Mei 1887 is overleden Johan";
        let d = extract_death_dates(text);
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].day, 4);
        assert_eq!(d[1].day, 6);
    }

    #[test]
    fn nothing_to_find() {
        assert!(extract_death_dates("geen datum hier").is_empty());
    }

    fn cand(y: i32, m: u32, d: u32) -> DateCandidate {
        DateCandidate {
            year: y,
            month: m,
            day: d,
            span: Span { start: 0, end: 0 },
            raw: String::new(),
            year_corrected: false,
            original_year: None,
            provenance: Provenance::Extracted,
        }
    }

    #[test]
    fn year_correction() {
        let c = correct_year(&cand(1932, 5, 12), 1887);
        assert_eq!(ymd(&c), (1887, 5, 12));
        assert!(c.year_corrected);
        assert_eq!(c.original_year, Some(1932));
        assert_eq!(correct_year(&c, 1887), c);

        assert!(!correct_year(&cand(1887, 5, 12), 1887).year_corrected);
        assert!(!correct_year(&cand(1886, 12, 31), 1887).year_corrected);
    }

    #[test]
    fn leap_day_clamped() {
        let c = correct_year(&cand(1888, 2, 29), 1890);
        assert_eq!(ymd(&c), (1890, 2, 28));
    }
}
