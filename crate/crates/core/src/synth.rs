//! Seeded generator of death-certificate documents with known entities and
//! planted defects, for tests and demonstrations.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use chrono::{Datelike, Duration, NaiveDate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::document::{ColumnLayout, HtrDocument, Point, TextLine, TextRegion};
use crate::extract::{Flag, Role};
use crate::inventory::{District, DistrictGroup, ScanId, FIRST_YEAR, LAST_GROUPED_YEAR, LAST_YEAR};
use crate::jsonio;

pub const DEFAULT_SEED: u64 = 1887;
pub const DEFAULT_DOCUMENTS: usize = 20;

const PAGE_WIDTH: u32 = 2000;
const PAGE_HEIGHT: u32 = 3000;
const WORDS_PER_LINE: usize = 7;

const MALE_FIRST: &[&str] = &[
    "Johan", "Louis", "Pieter", "Jan", "Cornelis", "Hendrik", "Willem", "Frederik", "Manuel", "Jacobus", "Antonio",
    "Bernardus",
];
const FEMALE_FIRST: &[&str] = &[
    "Maria", "Anna", "Elisabeth", "Nicolina", "Johanna", "Cornelia", "Petronella", "Catharina", "Magdalena",
    "Francisca", "Rosa", "Helena",
];
const SURNAMES: &[&str] = &[
    "Martis", "Garmers", "Koster", "de Windt", "Isenia", "Rosalia", "Statia", "Maduro", "Daal", "Pietersz", "Sillie",
    "Winklaar", "Hooi", "Rojer", "Anthonia", "Wawoe", "Everts", "Mercera", "Cijntje", "van der Dijs",
];
const MALE_PROFESSIONS: &[&str] = &[
    "landbouwer", "arbeider", "timmerman", "metselaar", "smid", "schoenmaker", "kleermaker", "koopman", "zeeman",
    "visscher", "bakker", "kuiper",
];
const FEMALE_PROFESSIONS: &[&str] = &["naaister", "strijkster", "waschvrouw", "werkster", "dienstbode", "landbouwster"];
const PLACES: &[&str] = &["Punda", "Otrobanda", "Bandabou", "Willemstad"];
const MONTHS: [&[&str]; 12] = [
    &["Januari", "Januarij"],
    &["Februari", "Februarij"],
    &["Maart", "Maert"],
    &["April"],
    &["Mei", "Meij"],
    &["Juni", "Junij"],
    &["Juli", "Julij"],
    &["Augustus"],
    &["September"],
    &["October", "Oktober"],
    &["November"],
    &["December"],
];

const UNITS: [&str; 10] = ["", "een", "twee", "drie", "vier", "vijf", "zes", "zeven", "acht", "negen"];
const TEENS: [&str; 10] =
    ["tien", "elf", "twaalf", "dertien", "veertien", "vijftien", "zestien", "zeventien", "achttien", "negentien"];
const TENS: [&str; 10] = ["", "", "twintig", "dertig", "veertig", "vijftig", "zestig", "zeventig", "tachtig", "negentig"];
const ORDINALS: [&str; 20] = [
    "", "eersten", "tweeden", "derden", "vierden", "vijfden", "zesden", "zevenden", "achtsten", "negenden", "tienden",
    "elfden", "twaalfden", "dertienden", "veertienden", "vijftienden", "zestienden", "zeventienden", "achttienden",
    "negentienden",
];

fn below_100(n: u32) -> String {
    match n {
        0..=9 => UNITS[n as usize].to_string(),
        10..=19 => TEENS[n as usize - 10].to_string(),
        _ if n % 10 == 0 => TENS[n as usize / 10].to_string(),
        _ => format!("{} en {}", UNITS[n as usize % 10], TENS[n as usize / 10]),
    }
}

fn with_rest(head: String, rest: u32, spell: impl Fn(u32) -> String) -> String {
    if rest == 0 {
        head
    } else {
        format!("{head} {}", spell(rest))
    }
}

/// Dutch cardinal for 1–2999, years in the `achttienhonderd zeven en tachtig`
/// style.
pub fn spell_cardinal(n: u32) -> String {
    assert!((1..3000).contains(&n), "cardinal out of range: {n}");
    match n {
        1..=99 => below_100(n),
        100..=999 | 1100..=1999 => {
            let h = n / 100;
            let head = if h == 1 { "honderd".to_string() } else { format!("{}honderd", below_100(h)) };
            with_rest(head, n % 100, below_100)
        }
        _ => {
            let t = n / 1000;
            let head = if t == 1 { "duizend".to_string() } else { format!("{}duizend", UNITS[t as usize]) };
            with_rest(head, n % 1000, spell_cardinal)
        }
    }
}

/// Dutch ordinal day (`vijfden`, `een en twintigsten`) for 1–31.
pub fn spell_ordinal(n: u32) -> String {
    assert!((1..=31).contains(&n), "ordinal out of range: {n}");
    match n {
        1..=19 => ORDINALS[n as usize].to_string(),
        20 => "twintigsten".into(),
        30 => "dertigsten".into(),
        _ => format!("{} en {}sten", UNITS[n as usize % 10], TENS[n as usize / 10]),
    }
}

/// Gating defect planted in a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Defect {
    /// Both dates are illegible.
    NoDate,
    /// The deceased's first name `Maria` is read as `Mariak`.
    UnknownTokens,
    /// The deceased's name is missing from the center text.
    NoName,
}

impl Defect {
    pub fn flag(self) -> Flag {
        match self {
            Defect::NoDate => Flag::NoDate,
            Defect::UnknownTokens => Flag::UnknownTokens,
            Defect::NoName => Flag::NoName,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Regular,
    /// The death date is written with a year outside the scan-year window.
    WrongYear,
    /// Death in late December of the year before the scan year.
    PriorDecember,
    Stillborn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DateStyle {
    /// `5 Mei 1887`
    Digits,
    /// `vijfden Mei 1887`
    OrdinalDay,
    /// `vijfden Mei achttienhonderd zeven en tachtig`
    Words,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileFormat {
    Json,
    Xml,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthMention {
    pub name: String,
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub age: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profession: Option<String>,
}

/// What a correct pipeline should report for one generated document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthTruth {
    pub scan: ScanId,
    pub file: String,
    pub format: FileFormat,
    pub layout: ColumnLayout,
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect: Option<Defect>,
    pub date_style: DateStyle,
    pub death_date: NaiveDate,
    /// Deceased's full name; for a child, first names plus the mother's
    /// surname. `None` for a stillbirth.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deceased: Option<String>,
    /// Mentions an extractor should find in the text as written, in order.
    pub mentions: Vec<TruthMention>,
    pub expected_flags: BTreeSet<Flag>,
    /// Center text as written on the certificate (before any HTR defect).
    pub text: String,
}

impl SynthTruth {
    pub fn in_review_queue(&self) -> bool {
        self.defect.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthDocument {
    pub document: HtrDocument,
    pub truth: SynthTruth,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub documents: Vec<SynthDocument>,
    /// `(name, count)` rows of the matching lexicon.
    pub lexicon: Vec<(String, u64)>,
}

#[derive(Debug, Clone)]
struct Person {
    first: Vec<String>,
    surname: String,
}

impl Person {
    fn full(&self) -> String {
        format!("{} {}", self.first.join(" "), self.surname)
    }

    fn first_names(&self) -> String {
        self.first.join(" ")
    }
}

fn pick<'a, R: Rng>(rng: &mut R, list: &[&'a str]) -> &'a str {
    list.choose(rng).expect("non-empty list")
}

fn person<R: Rng>(rng: &mut R, male: bool, plain_surname: bool) -> Person {
    let pool = if male { MALE_FIRST } else { FEMALE_FIRST };
    let n = if rng.gen_bool(0.4) { 2 } else { 1 };
    let mut first: Vec<String> = Vec::new();
    while first.len() < n {
        let f = pick(rng, pool).to_string();
        if !first.contains(&f) {
            first.push(f);
        }
    }
    let surname = loop {
        let s = pick(rng, SURNAMES);
        if !plain_surname || !s.contains(' ') {
            break s.to_string();
        }
    };
    Person { first, surname }
}

fn random_scan<R: Rng>(rng: &mut R) -> ScanId {
    let year = rng.gen_range(FIRST_YEAR..=LAST_YEAR);
    let district = if rng.gen_bool(0.5) {
        District::City
    } else if year <= LAST_GROUPED_YEAR {
        let (group, max) = *[(DistrictGroup::Oost, 3), (DistrictGroup::Midden, 2), (DistrictGroup::West, 3)]
            .choose(rng)
            .expect("non-empty");
        District::Grouped { group, number: rng.gen_range(1..=max) }
    } else {
        let max = match year {
            ..=1863 => 9,
            ..=1924 => 5,
            _ => 3,
        };
        District::Numbered(rng.gen_range(2..=max))
    };
    ScanId::new(year, district, rng.gen_range(1..=450), None).expect("generated scan id is valid")
}

fn month_name<R: Rng>(rng: &mut R, month: u32) -> &'static str {
    pick(rng, MONTHS[month as usize - 1])
}

fn date_phrase<R: Rng>(rng: &mut R, date: NaiveDate, written_year: i32, style: DateStyle) -> String {
    let day = match style {
        DateStyle::Digits => date.day().to_string(),
        _ => spell_ordinal(date.day()),
    };
    let year = match style {
        DateStyle::Words => spell_cardinal(written_year as u32),
        _ => written_year.to_string(),
    };
    format!("{day} {} {year}", month_name(rng, date.month()))
}

/// An illegible date: truncated day word, mangled month, partial year.
fn garbled_date(date: NaiveDate) -> String {
    let day = spell_ordinal(date.day());
    let cut: String = day.chars().take(day.chars().count() - 2).collect();
    format!("{cut} Mi {}.{}", date.year() / 100, date.year() % 10)
}

fn age_phrase(n: u32, unit: &str, words: bool) -> String {
    let n_text = if words { spell_cardinal(n) } else { n.to_string() };
    format!("oud {n_text} {unit}")
}

struct Plan {
    scan: ScanId,
    variant: Variant,
    defect: Option<Defect>,
    format: FileFormat,
}

fn plans<R: Rng>(rng: &mut R, n: usize) -> Vec<Plan> {
    let mut scans = BTreeSet::new();
    while scans.len() < n {
        scans.insert(random_scan(rng));
    }
    let scans: Vec<ScanId> = scans.into_iter().collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut variant = vec![Variant::Regular; n];
    let mut defect = vec![None; n];
    let mut slots = order.into_iter();
    for d in [Defect::NoDate, Defect::UnknownTokens, Defect::NoName] {
        if let Some(i) = slots.next() {
            defect[i] = Some(d);
        }
    }
    let rest: Vec<usize> = slots.collect();
    let mut used = BTreeSet::new();
    for v in [Variant::Stillborn, Variant::WrongYear, Variant::PriorDecember] {
        let slot = rest
            .iter()
            .copied()
            .find(|&i| !used.contains(&i) && (v != Variant::PriorDecember || scans[i].year > FIRST_YEAR));
        if let Some(i) = slot {
            used.insert(i);
            variant[i] = v;
        }
    }
    scans
        .into_iter()
        .enumerate()
        .map(|(i, scan)| Plan {
            scan,
            variant: variant[i],
            defect: defect[i],
            format: if i % 5 == 4 { FileFormat::Xml } else { FileFormat::Json },
        })
        .collect()
}

struct Written {
    clean: String,
    written: String,
    margin_name: Option<String>,
    mentions: Vec<TruthMention>,
    deceased: Option<String>,
    death_date: NaiveDate,
    style: DateStyle,
}

fn mention(name: String, role: Role, age: Option<u32>, profession: Option<&str>) -> TruthMention {
    TruthMention { name, role, age, profession: profession.map(String::from) }
}

fn compose_text<R: Rng>(rng: &mut R, plan: &Plan) -> Written {
    let year = plan.scan.year;
    let style = *[DateStyle::Digits, DateStyle::OrdinalDay, DateStyle::Words].choose(rng).expect("non-empty");
    let words = style == DateStyle::Words;

    let (death, registered) = match plan.variant {
        Variant::PriorDecember => {
            let death = NaiveDate::from_ymd_opt(year - 1, 12, rng.gen_range(28..=31)).expect("valid December day");
            (death, NaiveDate::from_ymd_opt(year, 1, rng.gen_range(2..=4)).expect("valid January day"))
        }
        _ => {
            let month = rng.gen_range(1..=12);
            let death = NaiveDate::from_ymd_opt(year, month, rng.gen_range(1..=25)).expect("valid day");
            (death, death + Duration::days(rng.gen_range(1..=3)))
        }
    };
    let written_death_year = match plan.variant {
        Variant::WrongYear => year - rng.gen_range(2..=9),
        _ => death.year(),
    };

    let informant = person(rng, true, false);
    let witness = person(rng, true, false);
    let (ia, wa) = (rng.gen_range(21..=70), rng.gen_range(21..=70));
    let (ip, wp) = (pick(rng, MALE_PROFESSIONS), pick(rng, MALE_PROFESSIONS));

    let (clean_reg, clean_death) =
        (date_phrase(rng, registered, registered.year(), style), date_phrase(rng, death, written_death_year, style));
    let (reg, death_text) = if plan.defect == Some(Defect::NoDate) {
        (garbled_date(registered), garbled_date(death))
    } else {
        (clean_reg.clone(), clean_death.clone())
    };

    let mut mentions = vec![
        mention(informant.full(), Role::Informant, Some(ia), Some(ip)),
        mention(witness.full(), Role::Witness, Some(wa), Some(wp)),
    ];
    let opening = |reg: &str, death: &str| {
        format!(
            "Heden den {reg} compareerden voor mij, Ambtenaar van den Burgerlijken Stand van Curaçao, {}, {}, {ip}, \
             en {}, {}, {wp}, welke verklaarden, dat op den {death}",
            informant.full(),
            age_phrase(ia, "jaren", words),
            witness.full(),
            age_phrase(wa, "jaren", words),
        )
    };

    let male = rng.gen_bool(0.5) && plan.defect != Some(Defect::UnknownTokens);
    let child_word = if male { "zoon" } else { "dochter" };
    let place = pick(rng, PLACES);

    let (clean_tail, written_tail, deceased, margin_name) = match plan.variant {
        Variant::Stillborn => {
            let mother = person(rng, false, true);
            let sex = if male { "mannelijk" } else { "vrouwelijk" };
            let tail = format!(
                "is levenloos geboren een kind van het {sex} geslacht, {child_word} van {}, zonder beroep.",
                mother.full()
            );
            mentions.push(mention(mother.full(), Role::Mother, None, Some("zonder beroep")));
            (tail.clone(), tail, None, None)
        }
        _ if rng.gen_bool(0.35) => {
            // a child of an unmarried mother: first names only
            let mut child = person(rng, male, true);
            let mother = person(rng, false, true);
            child.surname = mother.surname.clone();
            if plan.defect == Some(Defect::UnknownTokens) {
                child.first[0] = "Maria".into();
            }
            let (age, unit, age_value) = if rng.gen_bool(0.5) {
                let m = rng.gen_range(1..=11);
                (m, "maanden", 0)
            } else {
                let y = rng.gen_range(1..=9);
                (y, "jaren", y)
            };
            let written_first = written_first(&child, plan.defect);
            let body = |first: &str| {
                let name = if first.is_empty() { String::new() } else { format!(" {first}") };
                format!(
                    "is overleden{name}, {}, geboren te {place}, {child_word} van {}, zonder beroep.",
                    age_phrase(age, unit, words),
                    mother.full()
                )
            };
            if !written_first.is_empty() {
                mentions.push(mention(written_first.clone(), Role::Deceased, Some(age_value), None));
            }
            mentions.push(mention(mother.full(), Role::Mother, None, Some("zonder beroep")));
            (body(&child.first_names()), body(&written_first), Some(child.full()), Some(written_margin(&child, plan.defect)))
        }
        _ => {
            let mut deceased = person(rng, male, false);
            if plan.defect == Some(Defect::UnknownTokens) {
                deceased.first[0] = "Maria".into();
            }
            let age = rng.gen_range(18..=90);
            let prof = if male || rng.gen_bool(0.5) {
                Some(pick(rng, if male { MALE_PROFESSIONS } else { FEMALE_PROFESSIONS }))
            } else {
                None
            };
            let spouse = rng.gen_bool(0.6).then(|| person(rng, !male, false));
            let mut father = person(rng, true, false);
            father.surname = deceased.surname.clone();
            let mother = person(rng, false, false);
            let spouse_word = if male { "echtgenoot" } else { "echtgenote" };
            let written_name = match plan.defect {
                Some(Defect::NoName) => String::new(),
                Some(Defect::UnknownTokens) => format!("{} {}", written_first(&deceased, plan.defect), deceased.surname),
                _ => deceased.full(),
            };
            let body = |name: &str| {
                let mut s = String::from("is overleden");
                if !name.is_empty() {
                    s.push(' ');
                    s.push_str(name);
                }
                s.push_str(&format!(", {}", age_phrase(age, "jaren", words)));
                if let Some(p) = prof {
                    s.push_str(&format!(", {p}"));
                }
                s.push_str(&format!(", geboren te {place},"));
                if let Some(sp) = &spouse {
                    s.push_str(&format!(" {spouse_word} van {},", sp.full()));
                }
                s.push_str(&format!(" {child_word} van {} en {}.", father.full(), mother.full()));
                s
            };
            if !written_name.is_empty() {
                mentions.push(mention(written_name.clone(), Role::Deceased, Some(age), prof));
            }
            if let Some(sp) = &spouse {
                mentions.push(mention(sp.full(), Role::Spouse, None, None));
            }
            mentions.push(mention(father.full(), Role::Father, None, None));
            mentions.push(mention(mother.full(), Role::Mother, None, None));
            let margin = if plan.defect == Some(Defect::NoName) { deceased.full() } else { written_name.clone() };
            (body(&deceased.full()), body(&written_name), Some(deceased.full()), Some(margin))
        }
    };

    Written {
        clean: format!("{} {clean_tail}", opening(&clean_reg, &clean_death)),
        written: format!("{} {written_tail}", opening(&reg, &death_text)),
        margin_name,
        mentions,
        deceased,
        death_date: death,
        style,
    }
}

fn written_first(p: &Person, defect: Option<Defect>) -> String {
    match defect {
        Some(Defect::NoName) => String::new(),
        Some(Defect::UnknownTokens) => {
            let mut first = p.first.clone();
            first[0] = "Mariak".into();
            first.join(" ")
        }
        _ => p.first_names(),
    }
}

fn written_margin(p: &Person, defect: Option<Defect>) -> String {
    match defect {
        Some(Defect::UnknownTokens) => written_first(p, defect),
        _ => p.first_names(),
    }
}

fn rect(left: i64, top: i64, right: i64, bottom: i64) -> Vec<Point> {
    vec![Point::new(left, top), Point::new(right, top), Point::new(right, bottom), Point::new(left, bottom)]
}

fn region_lines<R: Rng>(rng: &mut R, prefix: &str, texts: &[String], left: i64, right: i64) -> Vec<TextLine> {
    texts
        .iter()
        .enumerate()
        .map(|(i, text)| {
            let y = 320 + 80 * i as i64;
            TextLine {
                id: format!("{prefix}{i:02}"),
                baseline: vec![Point::new(left + 20, y), Point::new(right - 20, y + rng.gen_range(0..=6))],
                text: text.clone(),
                confidence: None,
            }
        })
        .collect()
}

fn wrap(text: &str) -> Vec<String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    words.chunks(WORDS_PER_LINE).map(|c| c.join(" ")).collect()
}

fn layout_document<R: Rng>(rng: &mut R, plan: &Plan, w: &Written) -> (HtrDocument, ColumnLayout) {
    let three = plan.scan.year <= 1869;
    let (left, center) = if three { ((40, 240), (300, 1600)) } else { ((60, 560), (600, 1980)) };
    let mut center_lines = region_lines(rng, "c", &wrap(&w.written), center.0, center.1);
    center_lines.shuffle(rng);
    let mut margin_texts = vec![format!("{:03}", plan.scan.number)];
    margin_texts.extend(w.margin_name.clone());
    let mut regions = vec![
        TextRegion {
            id: "center".into(),
            polygon: rect(center.0, 200, center.1, 2800),
            declared_order: None,
            lines: center_lines,
        },
        TextRegion {
            id: "margin-left".into(),
            polygon: rect(left.0, 200, left.1, 2800),
            declared_order: None,
            lines: region_lines(rng, "m", &margin_texts, left.0, left.1),
        },
    ];
    if three {
        regions.push(TextRegion {
            id: "margin-right".into(),
            polygon: rect(1650, 200, 1950, 2800),
            declared_order: None,
            lines: region_lines(rng, "r", &[plan.scan.year.to_string()], 1650, 1950),
        });
    }
    regions.shuffle(rng);
    let doc = HtrDocument { scan_id: plan.scan.clone(), page_width: PAGE_WIDTH, page_height: PAGE_HEIGHT, regions };
    (doc, if three { ColumnLayout::ThreeColumn } else { ColumnLayout::TwoColumn })
}

fn lexicon_rows<R: Rng>(rng: &mut R) -> Vec<(String, u64)> {
    let mut rows: BTreeMap<String, u64> = BTreeMap::new();
    for name in MALE_FIRST.iter().chain(FEMALE_FIRST).chain(SURNAMES) {
        rows.insert(name.to_string(), rng.gen_range(2..=60));
    }
    rows.insert("Maria".into(), 120);
    rows.into_iter().collect()
}

/// Generate `n` documents from `seed`. The same seed always gives the same
/// corpus.
pub fn generate(seed: u64, n: usize) -> SynthCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lexicon = lexicon_rows(&mut rng);
    let documents = plans(&mut rng, n)
        .into_iter()
        .map(|plan| {
            let w = compose_text(&mut rng, &plan);
            let (document, layout) = layout_document(&mut rng, &plan, &w);
            let mut expected_flags = BTreeSet::new();
            if let Some(d) = plan.defect {
                expected_flags.insert(d.flag());
            }
            match plan.variant {
                Variant::WrongYear => {
                    expected_flags.insert(Flag::YearCorrected);
                }
                Variant::Stillborn => {
                    expected_flags.insert(Flag::Stillborn);
                }
                _ => {}
            }
            let ext = match plan.format {
                FileFormat::Json => "json",
                FileFormat::Xml => "xml",
            };
            let truth = SynthTruth {
                file: format!("corpus/{}.{ext}", plan.scan.stem()),
                scan: plan.scan,
                format: plan.format,
                layout,
                variant: plan.variant,
                defect: plan.defect,
                date_style: w.style,
                death_date: w.death_date,
                deceased: w.deceased,
                mentions: w.mentions,
                expected_flags,
                text: w.clean,
            };
            SynthDocument { document, truth }
        })
        .collect();
    SynthCorpus { documents, lexicon }
}

pub const SYNTH_CONFIG: &str = "corpus = \"corpus\"\nlexicon = \"names.csv\"\ngold = \"gold.csv\"\nout = \"out\"\n";

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8")
}

impl SynthCorpus {
    /// Every file of the corpus as `(relative path, contents)`, sorted by
    /// path: the documents, `names.csv`, `gold.csv`, `truth.jsonl` and a
    /// ready-to-run `certpipe.toml`.
    pub fn files(&self) -> Vec<(String, String)> {
        let mut files = Vec::new();
        for d in &self.documents {
            let body = match d.truth.format {
                FileFormat::Json => d.document.to_json_string() + "\n",
                FileFormat::Xml => d.document.to_page_xml(),
            };
            files.push((d.truth.file.clone(), body));
        }
        files.push((
            "names.csv".into(),
            csv_text(&["name", "count"], self.lexicon.iter().map(|(n, c)| vec![n.clone(), c.to_string()])),
        ));
        files.push((
            "gold.csv".into(),
            csv_text(
                &["scan", "name", "death_date", "text"],
                self.documents.iter().map(|d| {
                    vec![
                        d.truth.scan.file_name(),
                        d.truth.deceased.clone().unwrap_or_default(),
                        d.truth.death_date.to_string(),
                        d.truth.text.clone(),
                    ]
                }),
            ),
        ));
        let truths: Vec<&SynthTruth> = self.documents.iter().map(|d| &d.truth).collect();
        files.push(("truth.jsonl".into(), jsonio::jsonl_string(&truths)));
        files.push(("certpipe.toml".into(), SYNTH_CONFIG.to_string()));
        files.sort();
        files
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        for (rel, body) in self.files() {
            let path = dir.join(rel);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, body)?;
        }
        Ok(())
    }
}
