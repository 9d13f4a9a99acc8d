use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use super::duplicates::{digest_file, find_duplicates, DuplicateKind, DuplicateSet, ScanFile};
use super::scan_id::{split_scan_extension, District, DistrictFolder, LAST_GROUPED_YEAR};
use super::schema::{district_schema, GroupTable};
use super::{InventoryError, ScanId};

/// Folder that holds set-aside duplicate scans.
pub const SET_ASIDE_DIR: &str = "x-duplicates";

#[derive(Debug, Clone, Default)]
pub struct InventoryOptions {
    pub group_table: GroupTable,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DistrictCount {
    pub year: i32,
    pub district: District,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DistrictGap {
    pub year: i32,
    pub district: District,
    /// Folder name the district would have, e.g. `O.R. 1842 Buiten 9e distr`.
    pub folder: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SkippedFile {
    pub path: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MisplacedFile {
    pub path: String,
    pub folder: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InventoryReport {
    /// Image files with a well-formed scan name, outside the set-aside folder.
    pub scan_files: usize,
    /// Certificate scans per (year, district), notes and removable identical
    /// copies excluded.
    pub counts: Vec<DistrictCount>,
    pub missing_districts: Vec<DistrictGap>,
    pub extra_districts: Vec<DistrictGap>,
    /// Years between the first and last year present without any scan.
    pub missing_years: Vec<i32>,
    pub note_files: Vec<String>,
    pub duplicate_sets: Vec<DuplicateSet>,
    pub skipped_files: Vec<SkippedFile>,
    pub misplaced_files: Vec<MisplacedFile>,
    pub set_aside_files: Vec<String>,
    /// Files that are not scans (documents, spreadsheets, PDFs).
    pub ignored_files: usize,
}

impl InventoryReport {
    pub fn total_count(&self) -> usize {
        self.counts.iter().map(|c| c.count).sum()
    }
}

fn relative(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/")
}

fn in_set_aside(rel: &str) -> bool {
    rel.split('/').any(|c| c.eq_ignore_ascii_case(SET_ASIDE_DIR))
}

fn gap_label(year: i32, district: District, table: &GroupTable) -> DistrictGap {
    let shown = match district {
        District::Numbered(n) if year <= LAST_GROUPED_YEAR => table
            .to_grouped(n)
            .map(|(group, number)| District::Grouped { group, number })
            .unwrap_or(district),
        other => other,
    };
    DistrictGap { year, district: shown, folder: format!("O.R. {year} {shown}") }
}

/// Walk `root` and build the per-year, per-district inventory.
///
/// Digesting runs in parallel; everything else is a sorted reduction, so the
/// report does not depend on directory listing order.
pub fn build_inventory(root: &Path, options: &InventoryOptions) -> Result<InventoryReport, InventoryError> {
    let meta = std::fs::metadata(root).map_err(|source| InventoryError::UnreadableDirectory {
        path: root.to_path_buf(),
        source,
    })?;
    if !meta.is_dir() {
        return Err(InventoryError::UnreadableDirectory {
            path: root.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotADirectory, "not a directory"),
        });
    }

    let mut report = InventoryReport::default();
    let mut candidates: Vec<(String, PathBuf, ScanId)> = Vec::new();

    let walker = WalkDir::new(root).sort_by_file_name().into_iter().filter_entry(|e| {
        e.depth() == 0 || !e.file_name().to_string_lossy().starts_with('.')
    });
    for entry in walker {
        let entry = match entry {
            Ok(e) => e,
            Err(err) => {
                let path = err.path().map(|p| relative(root, p)).unwrap_or_default();
                report.skipped_files.push(SkippedFile { path, reason: err.to_string() });
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = relative(root, entry.path());
        let name = entry.file_name().to_string_lossy();
        if split_scan_extension(&name).is_none() {
            report.ignored_files += 1;
            continue;
        }
        if in_set_aside(&rel) {
            report.set_aside_files.push(rel);
            continue;
        }
        match ScanId::parse(&name) {
            Ok(id) => candidates.push((rel, entry.into_path(), id)),
            Err(e) => report.skipped_files.push(SkippedFile { path: rel, reason: e.to_string() }),
        }
    }

    let digested: Vec<Result<ScanFile, SkippedFile>> = candidates
        .into_par_iter()
        .map(|(rel, abs, scan_id)| match digest_file(&abs) {
            Ok(digest) => Ok(ScanFile { path: rel, digest, scan_id }),
            Err(e) => Err(SkippedFile { path: rel, reason: e.to_string() }),
        })
        .collect();
    let mut files = Vec::with_capacity(digested.len());
    for d in digested {
        match d {
            Ok(f) => files.push(f),
            Err(s) => report.skipped_files.push(s),
        }
    }
    files.sort();

    report.scan_files = files.len();
    report.duplicate_sets = find_duplicates(&files);
    let removable: BTreeSet<&str> = report
        .duplicate_sets
        .iter()
        .filter(|s| s.kind == DuplicateKind::IdenticalFile)
        .flat_map(|s| s.non_survivors())
        .collect();

    let table = &options.group_table;
    let mut counts: BTreeMap<(i32, District), usize> = BTreeMap::new();
    let mut present: BTreeMap<i32, BTreeSet<District>> = BTreeMap::new();
    let mut notes: Vec<(&ScanId, &str)> = Vec::new();
    for f in &files {
        let id = &f.scan_id;
        present.entry(id.year).or_default().insert(table.normalize(id.district));

        if let Some(folder) = Path::new(&f.path).parent().and_then(|p| p.file_name()) {
            if let Ok(folder) = DistrictFolder::parse(&folder.to_string_lossy()) {
                if folder.year != id.year || folder.district != id.district {
                    report.misplaced_files.push(MisplacedFile { path: f.path.clone(), folder: folder.to_string() });
                }
            }
        }

        if id.is_note() {
            notes.push((id, f.path.as_str()));
        } else if !removable.contains(f.path.as_str()) {
            *counts.entry((id.year, id.district)).or_default() += 1;
        }
    }
    report.counts = counts.into_iter().map(|((year, district), count)| DistrictCount { year, district, count }).collect();

    for (&year, labels) in &present {
        let schema = district_schema(year).expect("parsed scan years are in range");
        for missing in schema.expected_labels.difference(labels) {
            report.missing_districts.push(gap_label(year, *missing, table));
        }
        for extra in labels.difference(&schema.expected_labels) {
            report.extra_districts.push(gap_label(year, *extra, table));
        }
    }
    if let (Some(first), Some(last)) = (present.keys().next(), present.keys().next_back()) {
        report.missing_years = (*first..=*last).filter(|y| !present.contains_key(y)).collect();
    }

    notes.sort();
    report.note_files = notes.into_iter().map(|(_, p)| p.to_string()).collect();
    report.skipped_files.sort();
    report.misplaced_files.sort();
    report.set_aside_files.sort();
    report.missing_districts.sort();
    report.extra_districts.sort();
    Ok(report)
}
