use std::sync::Arc;

use super::dates::{correct_year, extract_death_dates_with};
use super::mentions::{extract_mentions_with, has_stillborn_cue, raw_names_with};
use super::tables::Tables;
use super::{ExtractedRecord, Flag, MarginMentions, PersonMention, Role};
use crate::document::{classify_layout, main_text, HtrDocument, LayoutConfig};
use crate::inventory::ScanId;

/// Name of the bundled rule backend.
pub const RULES_BACKEND: &str = "rules";

#[derive(Debug, thiserror::Error)]
pub enum BackendError {
    #[error("unknown extractor backend {0:?}")]
    Unknown(String),
    #[error("extraction failed: {0}")]
    Failed(String),
}

/// An entity extractor. Implementations must be shareable across worker
/// threads.
pub trait ExtractorBackend: Send + Sync {
    fn name(&self) -> &str;

    /// Entities of one certificate's center-column text.
    fn extract(&self, text: &str, scan_id: &ScanId) -> Result<ExtractedRecord, BackendError>;

    /// Names in a margin note. Backends without margin support return none.
    fn margin_names(&self, _text: &str) -> Vec<PersonMention> {
        Vec::new()
    }
}

#[derive(Debug, Clone)]
pub struct RuleBackend {
    tables: Arc<Tables>,
}

impl Default for RuleBackend {
    fn default() -> Self {
        Self::new(Tables::builtin())
    }
}

impl RuleBackend {
    pub fn new(tables: Arc<Tables>) -> Self {
        Self { tables }
    }

    pub fn tables(&self) -> &Tables {
        &self.tables
    }
}

impl ExtractorBackend for RuleBackend {
    fn name(&self) -> &str {
        RULES_BACKEND
    }

    fn extract(&self, text: &str, scan_id: &ScanId) -> Result<ExtractedRecord, BackendError> {
        let mut record = ExtractedRecord::empty(scan_id.clone(), RULES_BACKEND);
        record.death_dates = extract_death_dates_with(text, &self.tables);
        let (deceased, other): (Vec<_>, Vec<_>) =
            extract_mentions_with(text, &self.tables).into_iter().partition(|m| m.role == Role::Deceased);
        record.deceased_candidates = deceased;
        record.other_mentions = other;
        if has_stillborn_cue(text, &self.tables) {
            record.flags.insert(Flag::Stillborn);
        }
        record.text = text.to_string();
        record.refresh_flags();
        Ok(record)
    }

    fn margin_names(&self, text: &str) -> Vec<PersonMention> {
        raw_names_with(text, &self.tables)
    }
}

/// Backend registered under `name`.
pub fn backend_by_name(name: &str, tables: Arc<Tables>) -> Result<Box<dyn ExtractorBackend>, BackendError> {
    match name {
        RULES_BACKEND => Ok(Box::new(RuleBackend::new(tables))),
        other => Err(BackendError::Unknown(other.to_string())),
    }
}

/// Layout → center text → backend → year correction → flags. Margin texts
/// are kept with the names found in them. Failures yield a record flagged
/// `ExtractionFailed` instead of an error.
pub fn extract_record(doc: &HtrDocument, layout: &LayoutConfig, backend: &dyn ExtractorBackend) -> ExtractedRecord {
    let class = classify_layout(doc, layout);
    let text = match main_text(doc, &class) {
        Ok(t) => t,
        Err(e) => return ExtractedRecord::failed(doc.scan_id.clone(), backend.name(), e.to_string()),
    };
    let mut record = match backend.extract(&text.center_text, &doc.scan_id) {
        Ok(r) => r,
        Err(e) => return ExtractedRecord::failed(doc.scan_id.clone(), backend.name(), e.to_string()),
    };
    record.scan_id = doc.scan_id.clone();
    let scan_year = doc.scan_id.year;
    record.death_dates = record.death_dates.iter().map(|d| correct_year(d, scan_year)).collect();
    record.margin_mentions = text
        .margin_texts
        .into_iter()
        .map(|m| MarginMentions { names: backend.margin_names(&m.text), region_id: m.region_id, text: m.text })
        .collect();
    record.refresh_flags();
    record
}
