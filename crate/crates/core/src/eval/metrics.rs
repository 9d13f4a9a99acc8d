use std::collections::BTreeSet;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::extract::{correct_year, DateCandidate, Provenance, Span};
use crate::lexicon::{levenshtein, names_equal_any_order};
use crate::text::{collapse_whitespace, fold};

/// Default partial-match distance.
pub const DEFAULT_MAX_DIST: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CerDoc {
    pub id: String,
    pub edits: usize,
    pub reference_chars: usize,
    pub cer: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CerReport {
    pub documents: Vec<CerDoc>,
    pub total_edits: usize,
    pub total_reference_chars: usize,
    /// Total edits over total reference characters.
    pub aggregate: f64,
    pub n: usize,
}

fn normalized(s: &str) -> String {
    collapse_whitespace(s)
}

/// Edit count and reference length after whitespace normalization.
fn cer_parts(reference: &str, hypothesis: &str) -> Result<(usize, usize), EvalError> {
    let r = normalized(reference);
    let len = r.chars().count();
    if len == 0 {
        return Err(EvalError::EmptyReference);
    }
    Ok((levenshtein(&r, &normalized(hypothesis)), len))
}

/// Character error rate: edit distance over reference length, in Unicode
/// scalars, after collapsing whitespace and unifying line endings.
pub fn cer(reference: &str, hypothesis: &str) -> Result<f64, EvalError> {
    let (edits, len) = cer_parts(reference, hypothesis)?;
    Ok(edits as f64 / len as f64)
}

/// Per-document and edit-weighted aggregate CER over `(id, reference,
/// hypothesis)` triples.
pub fn cer_report<I: AsRef<str> + Sync, R: AsRef<str> + Sync, H: AsRef<str> + Sync>(
    docs: &[(I, R, H)],
) -> Result<CerReport, EvalError> {
    if docs.is_empty() {
        return Err(EvalError::NoPairs);
    }
    let documents = docs
        .par_iter()
        .map(|(id, r, h)| {
            let (edits, len) = cer_parts(r.as_ref(), h.as_ref())?;
            Ok(CerDoc { id: id.as_ref().to_string(), edits, reference_chars: len, cer: edits as f64 / len as f64 })
        })
        .collect::<Result<Vec<_>, EvalError>>()?;
    let total_edits = documents.iter().map(|d| d.edits).sum();
    let total_reference_chars: usize = documents.iter().map(|d| d.reference_chars).sum();
    Ok(CerReport {
        n: documents.len(),
        aggregate: total_edits as f64 / total_reference_chars as f64,
        documents,
        total_edits,
        total_reference_chars,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPair {
    pub id: String,
    pub gold: String,
    pub predicted: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatePair {
    pub id: String,
    pub gold: NaiveDate,
    /// Prediction as written, before year correction.
    pub predicted: Option<NaiveDate>,
    pub scan_year: i32,
}

/// Pair ids per outcome; `exact ⊆ partial ⊆ found` and `exact ⊆ corrected ⊆
/// found`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdSets {
    pub found: BTreeSet<String>,
    pub exact: BTreeSet<String>,
    pub partial: BTreeSet<String>,
    pub corrected: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub metric: String,
    pub n: usize,
    pub found: usize,
    pub exact: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrected: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_partial_distance: Option<usize>,
    pub found_rate: f64,
    pub exact_rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrected_rate: Option<f64>,
    #[serde(skip)]
    pub ids: IdSets,
}

impl AccuracyReport {
    /// Build a report from counts; rates are counts over `n`.
    pub fn from_counts(
        metric: &str,
        n: usize,
        found: usize,
        exact: usize,
        partial: Option<usize>,
        corrected: Option<usize>,
        max_partial_distance: Option<usize>,
    ) -> Self {
        let rate = |c: usize| if n == 0 { 0.0 } else { c as f64 / n as f64 };
        Self {
            metric: metric.to_string(),
            n,
            found,
            exact,
            partial,
            corrected,
            max_partial_distance,
            found_rate: rate(found),
            exact_rate: rate(exact),
            partial_rate: partial.map(rate),
            corrected_rate: corrected.map(rate),
            ids: IdSets::default(),
        }
    }
}

fn name_tokens_normalized(s: &str) -> Vec<String> {
    collapse_whitespace(s).split(' ').filter(|t| !t.is_empty()).map(fold).collect()
}

/// Found / exact / partial rates for predicted names.
///
/// Exact compares folded, whitespace-normalized strings, or token multisets
/// when `any_order` is set. Partial is exact or within `max_dist` edits.
pub fn name_accuracy(pairs: &[EvalPair], max_dist: usize, any_order: bool) -> Result<AccuracyReport, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::NoPairs);
    }
    let outcomes: Vec<(bool, bool, bool)> = pairs
        .par_iter()
        .map(|p| {
            let Some(pred) = p.predicted.as_deref().filter(|s| !collapse_whitespace(s).is_empty()) else {
                return (false, false, false);
            };
            let (g, h) = (name_tokens_normalized(&p.gold), name_tokens_normalized(pred));
            let exact = g == h || (any_order && names_equal_any_order(&g, &h));
            let partial = exact || levenshtein(&g.join(" "), &h.join(" ")) <= max_dist;
            (true, exact, partial)
        })
        .collect();

    let mut ids = IdSets::default();
    for (p, &(found, exact, partial)) in pairs.iter().zip(&outcomes) {
        if found {
            ids.found.insert(p.id.clone());
        }
        if exact {
            ids.exact.insert(p.id.clone());
        }
        if partial {
            ids.partial.insert(p.id.clone());
        }
    }
    let count = |f: fn(&(bool, bool, bool)) -> bool| outcomes.iter().filter(|o| f(o)).count();
    let mut report = AccuracyReport::from_counts(
        if any_order { "names_any_order" } else { "names" },
        pairs.len(),
        count(|o| o.0),
        count(|o| o.1),
        Some(count(|o| o.2)),
        None,
        Some(max_dist),
    );
    report.ids = ids;
    Ok(report)
}

fn corrected_date(date: NaiveDate, scan_year: i32) -> Option<NaiveDate> {
    use chrono::Datelike;
    let candidate = DateCandidate {
        year: date.year(),
        month: date.month(),
        day: date.day(),
        span: Span { start: 0, end: 0 },
        raw: String::new(),
        year_corrected: false,
        original_year: None,
        provenance: Provenance::Extracted,
    };
    correct_year(&candidate, scan_year).date()
}

/// Found / exact / corrected rates for predicted death dates. Corrected
/// counts predictions that are exact, or become exact after year correction.
pub fn date_accuracy(pairs: &[DatePair]) -> Result<AccuracyReport, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::NoPairs);
    }
    let mut ids = IdSets::default();
    for p in pairs {
        let Some(pred) = p.predicted else { continue };
        ids.found.insert(p.id.clone());
        let exact = pred == p.gold;
        if exact {
            ids.exact.insert(p.id.clone());
        }
        if exact || corrected_date(pred, p.scan_year) == Some(p.gold) {
            ids.corrected.insert(p.id.clone());
        }
    }
    let mut report = AccuracyReport::from_counts(
        "dates",
        pairs.len(),
        ids.found.len(),
        ids.exact.len(),
        None,
        Some(ids.corrected.len()),
        None,
    );
    report.ids = ids;
    Ok(report)
}
