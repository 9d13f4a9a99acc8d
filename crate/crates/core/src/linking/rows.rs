use std::path::Path;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::LinkError;
use crate::extract::{ExtractedRecord, Role};
use crate::inventory::ScanId;
use crate::lexicon::MalformedRow;
use crate::text::name_tokens;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowSource {
    Scan(ScanId),
    /// Line number in the gold CSV.
    Gold(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersonRow {
    pub name: Vec<String>,
    pub role: Role,
    pub cert_year: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub age: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profession: Option<String>,
    /// Free text: a birth date, a bare year or a related person's name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<String>,
    pub source: RowSource,
}

impl PersonRow {
    /// Birth year written in `other` as `dd-mm-yyyy` (also `/` or `.`) or as
    /// a bare four-digit year.
    pub fn recorded_birth_year(&self) -> Option<i32> {
        parse_birth_year(self.other.as_deref()?)
    }

    pub fn display_name(&self) -> String {
        self.name.join(" ")
    }
}

pub fn parse_birth_year(other: &str) -> Option<i32> {
    static DATE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\d{1,2}[-/.]\d{1,2}[-/.](\d{4})$").unwrap());
    static YEAR: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(\d{4})$").unwrap());
    let s = other.trim();
    let caps = DATE.captures(s).or_else(|| YEAR.captures(s))?;
    caps.get(1)?.as_str().parse().ok()
}

pub fn parse_role(s: &str) -> Role {
    match s.trim().to_lowercase().as_str() {
        "deceased" | "overledene" | "overleden" => Role::Deceased,
        "father" | "vader" => Role::Father,
        "mother" | "moeder" => Role::Mother,
        "spouse" | "echtgenoot" | "echtgenote" | "partner" => Role::Spouse,
        "witness" | "getuige" => Role::Witness,
        "informant" | "aangever" | "declarant" => Role::Informant,
        _ => Role::Unknown,
    }
}

/// Header names accepted for each gold CSV column, matched case-insensitively.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnMap {
    pub name: Vec<String>,
    pub role: Vec<String>,
    pub year: Vec<String>,
    pub age: Vec<String>,
    pub profession: Vec<String>,
    pub other: Vec<String>,
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            name: names(&["name", "naam"]),
            role: names(&["role", "rol"]),
            year: names(&["year", "jaar", "cert_year"]),
            age: names(&["age", "leeftijd"]),
            profession: names(&["profession", "beroep"]),
            other: names(&["other", "overig"]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadedRows {
    pub rows: Vec<PersonRow>,
    pub malformed: Vec<MalformedRow>,
}

fn column(headers: &csv::StringRecord, aliases: &[String]) -> Option<usize> {
    headers.iter().position(|h| aliases.iter().any(|a| a.eq_ignore_ascii_case(h.trim())))
}

/// Person rows from a gold CSV. Rows with neither age nor a recorded birth
/// year are kept; linking skips them.
pub fn load_gold_rows_from_reader<R: std::io::Read>(reader: R, map: &ColumnMap) -> Result<LoadedRows, LinkError> {
    let mut csv = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(reader);
    let headers = csv.headers().map_err(|e| LinkError::Csv(e.to_string()))?.clone();
    if headers.iter().all(|h| h.is_empty()) {
        return Err(LinkError::EmptyFile);
    }
    let required = |field: &'static str, aliases: &[String]| column(&headers, aliases).ok_or(LinkError::MissingColumn(field));
    let (c_name, c_role, c_year) = (required("name", &map.name)?, required("role", &map.role)?, required("year", &map.year)?);
    let (c_age, c_prof, c_other) = (column(&headers, &map.age), column(&headers, &map.profession), column(&headers, &map.other));

    let mut out = LoadedRows { rows: Vec::new(), malformed: Vec::new() };
    let mut seen_any = false;
    for record in csv.records() {
        seen_any = true;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                out.malformed.push(MalformedRow { line, reason: e.to_string() });
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        let cell = |i: Option<usize>| i.and_then(|i| record.get(i)).map(str::trim).filter(|s| !s.is_empty());
        let bad = |reason: String| MalformedRow { line, reason };

        let name = cell(Some(c_name)).map(name_tokens).unwrap_or_default();
        if name.is_empty() {
            out.malformed.push(bad("empty name".into()));
            continue;
        }
        let Some(year) = cell(Some(c_year)).and_then(|y| y.parse::<i32>().ok()) else {
            out.malformed.push(bad(format!("invalid year {:?}", cell(Some(c_year)).unwrap_or(""))));
            continue;
        };
        let age = match cell(c_age) {
            None => None,
            Some(a) => match a.parse::<u32>() {
                Ok(a) => Some(a),
                Err(_) => {
                    out.malformed.push(bad(format!("invalid age {a:?}")));
                    continue;
                }
            },
        };
        out.rows.push(PersonRow {
            name,
            role: parse_role(cell(Some(c_role)).unwrap_or("")),
            cert_year: year,
            age,
            profession: cell(c_prof).map(String::from),
            other: cell(c_other).map(String::from),
            source: RowSource::Gold(line),
        });
    }
    if !seen_any {
        return Err(LinkError::EmptyFile);
    }
    Ok(out)
}

pub fn load_gold_rows(path: &Path, map: &ColumnMap) -> Result<LoadedRows, LinkError> {
    let file = std::fs::File::open(path).map_err(|source| LinkError::Io { path: path.to_path_buf(), source })?;
    load_gold_rows_from_reader(file, map)
}

/// Person rows from extracted records: the selected deceased name and every
/// role-tagged mention.
pub fn rows_from_records(records: &[ExtractedRecord]) -> Vec<PersonRow> {
    let mut rows = Vec::new();
    for r in records {
        let mentions = r.deceased_candidates.first().into_iter().chain(r.other_mentions.iter());
        for m in mentions.filter(|m| m.role != Role::Unknown && !m.name_tokens.is_empty()) {
            rows.push(PersonRow {
                name: m.name_tokens.clone(),
                role: m.role,
                cert_year: r.scan_id.year,
                age: m.age,
                profession: m.profession.clone(),
                other: None,
                source: RowSource::Scan(r.scan_id.clone()),
            });
        }
    }
    rows
}
