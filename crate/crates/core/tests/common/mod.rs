//! Oracles and generators shared by the integration and acceptance tests.
//! Each oracle is written from the definition, not from the library code.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;

use certpipe::document::{HtrDocument, Point, TextLine, TextRegion};
use certpipe::eval::EvalPair;
use certpipe::inventory::{District, DistrictGroup, ScanId};

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

/// Full-matrix edit distance over Unicode scalar values.
pub fn levenshtein_oracle(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

const ALPHABET: &[char] = &[
    'a', 'b', 'e', 'M', 'r', 'ç', 'é', 'ü', 'ß', 'İ', 'Ω', 'ж', '中', '文', '😀', '\u{301}', ' ', '-',
];

/// Up to `max_len` scalars drawn from a small mixed-script alphabet, so that
/// pairs share characters often.
pub fn unicode_string<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| *ALPHABET.choose(rng).unwrap()).collect()
}

// ---------------------------------------------------------------- scan names

pub fn random_district<R: Rng>(rng: &mut R, year: i32) -> District {
    let era_count = match year {
        ..=1863 => 9,
        ..=1924 => 5,
        _ => 3,
    };
    match rng.gen_range(0..3) {
        0 => District::City,
        1 if year <= 1840 => {
            let group = *DistrictGroup::ALL.choose(rng).unwrap();
            let max = if group == DistrictGroup::Midden { 2 } else { 3 };
            District::Grouped { group, number: rng.gen_range(1..=max) }
        }
        _ => District::Numbered(rng.gen_range(2..=era_count)),
    }
}

/// A scan name written out by hand from the naming scheme.
pub fn format_scan_name(year: i32, district: District, number: u32, suffix: Option<char>) -> String {
    let district = match district {
        District::City => "Stad".to_string(),
        District::Numbered(n) => format!("Buiten {n}e distr"),
        District::Grouped { group, number } => format!("Buiten {} {number}e distr", group.as_str()),
    };
    let suffix = suffix.map(String::from).unwrap_or_default();
    format!("O.R. {year} {district} {number:03}{suffix}.JPG")
}

// ------------------------------------------------------- planted scan corpus

pub struct PlantedCorpus {
    pub files: usize,
    pub identical: BTreeSet<Vec<String>>,
    pub rescans: BTreeSet<Vec<String>>,
}

fn write(root: &Path, rel: &str, bytes: &[u8]) {
    let path = root.join(rel);
    std::fs::create_dir_all(path.parent().unwrap()).unwrap();
    std::fs::write(path, bytes).unwrap();
}

/// 42 distinct scans, 5 byte-identical copies and 3 second scans with
/// different bytes: 50 files.
pub fn plant_scan_corpus<R: Rng>(rng: &mut R, root: &Path) -> PlantedCorpus {
    let mut originals: Vec<(String, Vec<u8>)> = Vec::new();
    let mut seen = BTreeSet::new();
    while originals.len() < 42 {
        let year = rng.gen_range(1831..=1950);
        let district = random_district(rng, year);
        let id = ScanId::new(year, district, rng.gen_range(1..=400), None).unwrap();
        if !seen.insert(id.clone()) {
            continue;
        }
        let rel = format!("O.R. {year}/O.R. {year} {district}/{}", id.file_name());
        let mut bytes = format!("JPEG {}\n", id.key()).into_bytes();
        bytes.extend((0..64).map(|_| rng.gen::<u8>()));
        originals.push((rel, bytes));
    }
    for (rel, bytes) in &originals {
        write(root, rel, bytes);
    }
    originals.shuffle(rng);

    let mut identical = BTreeSet::new();
    for (rel, bytes) in &originals[..5] {
        let year = rel.split('/').next().unwrap();
        let name = rel.rsplit('/').next().unwrap();
        let copy = format!("{year}/kopie/{name}");
        write(root, &copy, bytes);
        let mut set = vec![rel.clone(), copy];
        set.sort();
        identical.insert(set);
    }
    let mut rescans = BTreeSet::new();
    for (rel, bytes) in &originals[5..8] {
        let name = rel.rsplit('/').next().unwrap();
        let second = format!("rescan/{name}");
        let mut other = bytes.clone();
        other.push(0xff);
        write(root, &second, &other);
        let mut set = vec![rel.clone(), second];
        set.sort();
        rescans.insert(set);
    }
    PlantedCorpus { files: 50, identical, rescans }
}

// ------------------------------------------------------------------ lexicon

/// Closest entry by exhaustive scan: smallest distance on folded spellings,
/// then highest frequency, then smallest folded key.
pub fn closest_oracle(entries: &[(String, u64)], token: &str, min_freq: u64) -> Option<(String, usize)> {
    let q = token.to_lowercase();
    let mut scored: Vec<(usize, std::cmp::Reverse<u64>, String, &String)> = entries
        .iter()
        .filter(|(_, f)| *f >= min_freq)
        .map(|(name, f)| (levenshtein_oracle(&q, &name.to_lowercase()), std::cmp::Reverse(*f), name.to_lowercase(), name))
        .collect();
    scored.sort();
    scored.first().map(|(d, _, _, name)| ((*name).clone(), *d))
}

/// 50 distinct short names over a small alphabet, so distance and frequency
/// ties are common.
pub fn toy_lexicon<R: Rng>(rng: &mut R) -> Vec<(String, u64)> {
    let letters: Vec<char> = "aeilmnorst".chars().collect();
    let mut names = BTreeSet::new();
    while names.len() < 50 {
        let len = rng.gen_range(3..=6);
        let mut s: String = (0..len).map(|_| *letters.choose(rng).unwrap()).collect();
        s[..1].make_ascii_uppercase();
        names.insert(s);
    }
    names.into_iter().map(|n| (n, rng.gen_range(1..=4))).collect()
}

/// One to two random insertions, deletions or substitutions.
pub fn perturb<R: Rng>(rng: &mut R, token: &str) -> String {
    let mut chars: Vec<char> = token.chars().collect();
    for _ in 0..rng.gen_range(1..=2) {
        let c = *['a', 'e', 'k', 'o', 'u', 'x', 'z', 'ë'].choose(rng).unwrap();
        match rng.gen_range(0..3) {
            0 => chars.insert(rng.gen_range(0..=chars.len()), c),
            1 if chars.len() > 1 => {
                chars.remove(rng.gen_range(0..chars.len()));
            }
            _ => {
                let i = rng.gen_range(0..chars.len());
                chars[i] = c;
            }
        }
    }
    chars.into_iter().collect()
}

// ----------------------------------------------------------------- geometry

pub fn random_polygon<R: Rng>(rng: &mut R) -> Vec<Point> {
    let n = rng.gen_range(3..=12);
    (0..n).map(|_| Point::new(rng.gen_range(-5_000..5_000), rng.gen_range(-5_000..5_000))).collect()
}

fn rect_polygon(left: i64, top: i64, width: i64, height: i64) -> Vec<Point> {
    vec![
        Point::new(left, top),
        Point::new(left + width, top),
        Point::new(left + width, top + height),
        Point::new(left, top + height),
    ]
}

/// Up to four regions with lines in random storage order. Baselines may
/// share a y coordinate so that the tie-breaks matter.
pub fn random_document<R: Rng>(rng: &mut R) -> HtrDocument {
    let page_width = rng.gen_range(800..3000u32);
    let page_height = rng.gen_range(1000..4000u32);
    let n_regions = rng.gen_range(1..=4);
    let declared = rng.gen_bool(0.3);
    let mut order: Vec<u32> = (0..n_regions as u32).collect();
    order.shuffle(rng);
    let regions = (0..n_regions)
        .map(|r| {
            let left = rng.gen_range(0..page_width as i64 - 100);
            let width = rng.gen_range(50..=(page_width as i64 - left));
            let top = rng.gen_range(0..page_height as i64 / 2);
            let height = rng.gen_range(100..=(page_height as i64 - top));
            let lines = (0..rng.gen_range(0..8))
                .map(|l| {
                    let y = top + 40 * rng.gen_range(0..6);
                    let x = left + rng.gen_range(0..20);
                    TextLine {
                        id: format!("r{r}l{l}"),
                        baseline: vec![Point::new(x, y), Point::new(x + rng.gen_range(1..width.max(2)), y)],
                        text: format!("line {r}.{l}"),
                        confidence: None,
                    }
                })
                .collect();
            TextRegion {
                id: format!("region{r}"),
                polygon: rect_polygon(left, top, width, height),
                declared_order: declared.then(|| order[r]),
                lines,
            }
        })
        .collect();
    HtrDocument { scan_id: ScanId::parse("O.R. 1887 Stad 001.JPG").unwrap(), page_width, page_height, regions }
}

pub fn scaled(doc: &HtrDocument, k: i64) -> HtrDocument {
    let scale = |p: &Point| Point::new(p.x * k, p.y * k);
    let mut out = doc.clone();
    out.page_width *= k as u32;
    out.page_height *= k as u32;
    for r in &mut out.regions {
        r.polygon = r.polygon.iter().map(scale).collect();
        for l in &mut r.lines {
            l.baseline = l.baseline.iter().map(scale).collect();
        }
    }
    out
}

// --------------------------------------------------------------- evaluation

/// Labelled name pairs: missing, exact (up to case and spacing), near (one
/// to three edits) and far.
pub fn labeled_pairs<R: Rng>(rng: &mut R, n: usize) -> Vec<(EvalPair, &'static str)> {
    let golds = ["Maria Garmers", "Louis Martis", "Johan Frederik Garmers", "Anna de Windt", "Pieter Isenia"];
    (0..n)
        .map(|i| {
            let gold = golds.choose(rng).unwrap().to_string();
            let (predicted, label) = match rng.gen_range(0..4) {
                0 => (None, "missing"),
                1 => (Some(format!("  {} ", gold.to_uppercase())), "exact"),
                2 => {
                    let mut chars: Vec<char> = gold.chars().collect();
                    for _ in 0..rng.gen_range(1..=3) {
                        let j = rng.gen_range(0..chars.len());
                        chars[j] = 'x';
                    }
                    (Some(chars.into_iter().collect()), "near")
                }
                _ => (Some("Bernardus Zimmerman".to_string()), "far"),
            };
            (EvalPair { id: format!("p{i:03}"), gold, predicted }, label)
        })
        .collect()
}

/// Whitespace-collapsed, lower-cased form used by the recount.
pub fn norm(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

pub fn copy_dir(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for entry in std::fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &target);
        } else {
            std::fs::copy(entry.path(), target).unwrap();
        }
    }
}

/// The bundled synthetic corpus copied into a scratch directory.
pub fn scratch() -> (tempfile::TempDir, certpipe::pipeline::PipelineConfig) {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&fixture("synthetic"), dir.path());
    std::fs::remove_dir_all(dir.path().join("out")).ok();
    let config = certpipe::pipeline::PipelineConfig::load(&dir.path().join("certpipe.toml")).unwrap();
    (dir, config)
}
