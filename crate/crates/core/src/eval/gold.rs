use std::collections::BTreeMap;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::metrics::{DatePair, EvalPair};
use super::EvalError;
use crate::extract::ExtractedRecord;
use crate::inventory::ScanId;

/// One gold row: the scan plus whichever fields were transcribed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalGold {
    pub scan: ScanId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub death_date: Option<NaiveDate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

/// Which name of a record is scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NameSource {
    /// The top deceased candidate as extracted.
    Extracted,
    /// The lexicon-corrected name when there is one, else the extracted one.
    Corrected,
}

fn parse_scan(s: &str) -> Option<ScanId> {
    ScanId::parse(s).or_else(|_| ScanId::parse_stem(s)).ok()
}

/// Gold CSV with a required `scan` column (file name or stem) and optional
/// `name`, `death_date` (YYYY-MM-DD) and `text` columns.
pub fn load_eval_gold_from_reader<R: std::io::Read>(reader: R) -> Result<Vec<EvalGold>, EvalError> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::Fields).from_reader(reader);
    let headers = csv.headers().map_err(|e| EvalError::Csv(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let c_scan = col("scan").ok_or_else(|| EvalError::Csv("missing column \"scan\"".into()))?;
    let (c_name, c_date, c_text) = (col("name"), col("death_date"), col("text"));

    let mut out = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| EvalError::Csv(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = |i: Option<usize>| i.and_then(|i| record.get(i)).filter(|s| !s.is_empty());
        let scan_raw = cell(Some(c_scan)).unwrap_or("");
        let scan = parse_scan(scan_raw)
            .ok_or_else(|| EvalError::Gold { line, message: format!("bad scan name {scan_raw:?}") })?;
        let death_date = match cell(c_date) {
            None => None,
            Some(d) => Some(
                NaiveDate::parse_from_str(d, "%Y-%m-%d")
                    .map_err(|_| EvalError::Gold { line, message: format!("bad date {d:?}") })?,
            ),
        };
        out.push(EvalGold {
            scan,
            name: cell(c_name).map(String::from),
            death_date,
            text: cell(c_text).map(String::from),
        });
    }
    Ok(out)
}

pub fn load_eval_gold(path: &Path) -> Result<Vec<EvalGold>, EvalError> {
    let file = std::fs::File::open(path).map_err(|source| EvalError::Io { path: path.to_path_buf(), source })?;
    load_eval_gold_from_reader(file)
}

fn index(records: &[ExtractedRecord]) -> BTreeMap<&ScanId, &ExtractedRecord> {
    records.iter().map(|r| (&r.scan_id, r)).collect()
}

/// Name pairs for gold rows that carry a name. A scan without a record
/// counts as not found.
pub fn name_pairs(gold: &[EvalGold], records: &[ExtractedRecord], source: NameSource) -> Vec<EvalPair> {
    let by_scan = index(records);
    gold.iter()
        .filter_map(|g| {
            let name = g.name.clone()?;
            let record = by_scan.get(&g.scan);
            let predicted = record.and_then(|r| {
                let corrected = r.name_correction.as_ref().map(|c| c.corrected.join(" "));
                match source {
                    NameSource::Corrected if corrected.is_some() => corrected,
                    _ => r.top_name().map(|m| m.name()),
                }
            });
            Some(EvalPair { id: g.scan.key(), gold: name, predicted })
        })
        .collect()
}

/// Date pairs for gold rows that carry a death date. The prediction is the
/// top date as written, so the scorer can apply the year correction itself.
pub fn date_pairs(gold: &[EvalGold], records: &[ExtractedRecord]) -> Vec<DatePair> {
    let by_scan = index(records);
    gold.iter()
        .filter_map(|g| {
            let date = g.death_date?;
            let predicted = by_scan.get(&g.scan).and_then(|r| r.top_date()).and_then(|d| {
                NaiveDate::from_ymd_opt(d.original_year.unwrap_or(d.year), d.month, d.day)
            });
            Some(DatePair { id: g.scan.key(), gold: date, predicted, scan_year: g.scan.year })
        })
        .collect()
}

/// `(id, reference, hypothesis)` triples for gold rows that carry text; a
/// missing record is scored against the empty string.
pub fn cer_inputs(gold: &[EvalGold], records: &[ExtractedRecord]) -> Vec<(String, String, String)> {
    let by_scan = index(records);
    gold.iter()
        .filter_map(|g| {
            let text = g.text.clone()?;
            let hyp = by_scan.get(&g.scan).map(|r| r.text.clone()).unwrap_or_default();
            Some((g.scan.key(), text, hyp))
        })
        .collect()
}
