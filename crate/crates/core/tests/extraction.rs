mod common;

use chrono::{Datelike, NaiveDate};
use proptest::prelude::*;

use certpipe::document::{parse_document, LayoutConfig};
use certpipe::extract::{
    backend_by_name, correct_year, extract_death_dates, extract_mentions, extract_record, DateCandidate, Flag,
    Provenance, Role, RuleBackend, Span, Tables,
};
use certpipe::synth::{spell_cardinal, spell_ordinal};
use common::fixture;

const MONTHS: [&str; 12] = [
    "Januari", "Februari", "Maart", "April", "Mei", "Juni", "Juli", "Augustus", "September", "October", "November",
    "December",
];

fn ymd(d: &DateCandidate) -> (i32, u32, u32) {
    (d.year, d.month, d.day)
}

fn candidate(year: i32, month: u32, day: u32) -> DateCandidate {
    DateCandidate {
        year,
        month,
        day,
        span: Span { start: 0, end: 0 },
        raw: String::new(),
        year_corrected: false,
        original_year: None,
        provenance: Provenance::Extracted,
    }
}

fn date_strategy() -> impl Strategy<Value = NaiveDate> {
    (1831..=1950i32, 1..=12u32, 1..=31u32).prop_filter_map("calendar date", |(y, m, d)| NaiveDate::from_ymd_opt(y, m, d))
}

proptest! {
    #[test]
    fn dates_in_every_style(date in date_strategy(), style in 0..3u8) {
        let month = MONTHS[date.month0() as usize];
        let (day, year) = match style {
            0 => (date.day().to_string(), date.year().to_string()),
            1 => (spell_ordinal(date.day()), date.year().to_string()),
            _ => (spell_ordinal(date.day()), spell_cardinal(date.year() as u32)),
        };
        let text = format!("welke verklaarden, dat op den {day} {month} {year} is overleden");
        let found = extract_death_dates(&text);
        prop_assert_eq!(found.len(), 1, "{}", text);
        prop_assert_eq!(ymd(&found[0]), (date.year(), date.month(), date.day()));
        let span = found[0].span;
        let raw: String = text.chars().skip(span.start).take(span.end - span.start).collect();
        prop_assert_eq!(raw, found[0].raw.clone());
    }

    #[test]
    fn year_correction_window(date in date_strategy(), scan_year in 1831..=1950i32) {
        let c = candidate(date.year(), date.month(), date.day());
        let once = correct_year(&c, scan_year);
        prop_assert!(once.year == scan_year || once.year == scan_year - 1);
        prop_assert!(once.date().is_some());
        prop_assert_eq!(once.year_corrected, date.year() != scan_year && date.year() != scan_year - 1);
        prop_assert_eq!(correct_year(&once, scan_year), once.clone());
        prop_assert_eq!((once.month, once.day.min(28)), (date.month(), date.day().min(28)));
    }
}

#[test]
fn leap_day_moved_to_common_year() {
    let c = correct_year(&candidate(1884, 2, 29), 1887);
    assert_eq!(ymd(&c), (1887, 2, 28));
    assert_eq!(c.original_year, Some(1884));
    assert_eq!(ymd(&correct_year(&candidate(1884, 2, 29), 1888)), (1888, 2, 29));
}

#[test]
fn full_certificate_formula() {
    let text = "Heden den achttienden October achttienhonderd drie en zestig compareerden voor mij, Ambtenaar \
        van den Burgerlijken Stand van Curaçao, Willem Cornelis de Windt, oud een en twintig jaren, kleermaker, en \
        Manuel Pietersz, oud zes en veertig jaren, zeeman, welke verklaarden, dat op den vijftienden October \
        achttienhonderd zestig is overleden Antonio de Windt, oud twee en dertig jaren, kleermaker, geboren te \
        Punda, echtgenoot van Helena Catharina Everts, zoon van Jacobus de Windt en Helena van der Dijs.";
    let summary: Vec<(String, Role, Option<u32>)> =
        extract_mentions(text).iter().map(|m| (m.name(), m.role, m.age)).collect();
    assert_eq!(
        summary,
        [
            ("Willem Cornelis de Windt".to_string(), Role::Informant, Some(21)),
            ("Manuel Pietersz".to_string(), Role::Witness, Some(46)),
            ("Antonio de Windt".to_string(), Role::Deceased, Some(32)),
            ("Helena Catharina Everts".to_string(), Role::Spouse, None),
            ("Jacobus de Windt".to_string(), Role::Father, None),
            ("Helena van der Dijs".to_string(), Role::Mother, None),
        ]
    );
    let dates = extract_death_dates(text);
    assert_eq!(ymd(&dates[0]), (1860, 10, 15));
}

#[test]
fn fixture_record_with_wrong_year() {
    let doc = parse_document(&fixture("synthetic/corpus/O.R. 1863 Buiten 2e distr 312.xml")).unwrap().document;
    let record = extract_record(&doc, &LayoutConfig::default(), &RuleBackend::default());
    let top = record.top_date().unwrap();
    assert_eq!(ymd(top), (1863, 10, 15));
    assert_eq!(top.original_year, Some(1860));
    assert!(record.flags.contains(&Flag::YearCorrected));
    assert!(!record.is_gated());
    assert_eq!(record.top_name().unwrap().name(), "Antonio de Windt");
}

#[test]
fn stillbirth_is_flagged_not_gated() {
    let doc = parse_document(&fixture("synthetic/corpus/O.R. 1845 Buiten 8e distr 442.json")).unwrap().document;
    let record = extract_record(&doc, &LayoutConfig::default(), &RuleBackend::default());
    assert!(record.flags.contains(&Flag::Stillborn));
    assert!(!record.flags.contains(&Flag::NoName));
    assert!(!record.is_gated());
}

#[test]
fn table_directory_overrides_builtin() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("months.txt"), "# custom\nmeimaand 5\n").unwrap();
    let tables = Tables::from_dir(dir.path()).unwrap();
    let backend = backend_by_name("rules", std::sync::Arc::new(tables)).unwrap();
    let scan = certpipe::inventory::ScanId::parse("O.R. 1887 Stad 411.JPG").unwrap();
    let record = backend.extract("dat op den 5 meimaand 1887 is overleden Jan Koster", &scan).unwrap();
    assert_eq!(ymd(record.top_date().unwrap()), (1887, 5, 5));
    let record = backend.extract("dat op den 5 Mei 1887 is overleden Jan Koster", &scan).unwrap();
    assert!(record.flags.contains(&Flag::NoDate));

    std::fs::write(dir.path().join("numbers.txt"), "twee x\n").unwrap();
    assert!(Tables::from_dir(dir.path()).is_err());
}
