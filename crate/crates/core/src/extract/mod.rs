//! Rule-based recognition of death dates and role-tagged person mentions in
//! certificate text.

mod backend;
mod dates;
mod mentions;
mod numbers;
mod tables;
mod tokens;

use std::collections::BTreeSet;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::inventory::ScanId;
use crate::lexicon::CorrectionResult;

pub use backend::{backend_by_name, extract_record, BackendError, ExtractorBackend, RuleBackend, RULES_BACKEND};
pub use dates::{correct_year, extract_death_dates, extract_death_dates_with};
pub use mentions::{extract_mentions, extract_mentions_with, raw_names_with};
pub use tables::{table_names, Phrases, TableError, Tables};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Deceased,
    Father,
    Mother,
    Spouse,
    Witness,
    Informant,
    Unknown,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Deceased => "deceased",
            Role::Father => "father",
            Role::Mother => "mother",
            Role::Spouse => "spouse",
            Role::Witness => "witness",
            Role::Informant => "informant",
            Role::Unknown => "unknown",
        }
    }
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    #[default]
    Extracted,
    /// Produced by a completion rule such as the mother's surname.
    Derived,
    /// Entered by a reviewer.
    Human,
}

fn is_extracted(p: &Provenance) -> bool {
    *p == Provenance::Extracted
}

/// Character offsets `[start, end)` into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersonMention {
    pub name_tokens: Vec<String>,
    pub role: Role,
    pub span: Span,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub age: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profession: Option<String>,
    #[serde(default, skip_serializing_if = "is_extracted")]
    pub provenance: Provenance,
}

impl PersonMention {
    pub fn name(&self) -> String {
        self.name_tokens.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DateCandidate {
    pub year: i32,
    pub month: u32,
    pub day: u32,
    pub span: Span,
    pub raw: String,
    pub year_corrected: bool,
    /// Year as written, when correction changed it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub original_year: Option<i32>,
    #[serde(default, skip_serializing_if = "is_extracted")]
    pub provenance: Provenance,
}

impl DateCandidate {
    pub fn date(&self) -> Option<NaiveDate> {
        NaiveDate::from_ymd_opt(self.year, self.month, self.day)
    }

    pub fn iso(&self) -> String {
        format!("{:04}-{:02}-{:02}", self.year, self.month, self.day)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    NoName,
    NoDate,
    YearCorrected,
    Stillborn,
    UnknownTokens,
    ExtractionFailed,
}

impl Flag {
    /// Flags that send a record to the review queue.
    pub fn is_gating(&self) -> bool {
        matches!(self, Flag::NoName | Flag::NoDate | Flag::UnknownTokens | Flag::ExtractionFailed)
    }
}

/// Names found in one margin region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginMentions {
    pub region_id: String,
    pub text: String,
    pub names: Vec<PersonMention>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractedRecord {
    pub scan_id: ScanId,
    pub backend: String,
    /// Ranked; the first entry is the selected name.
    pub deceased_candidates: Vec<PersonMention>,
    /// Ranked; the first entry is the selected date.
    pub death_dates: Vec<DateCandidate>,
    pub other_mentions: Vec<PersonMention>,
    #[serde(default)]
    pub margin_mentions: Vec<MarginMentions>,
    pub flags: BTreeSet<Flag>,
    /// Center-column text the entities were taken from.
    #[serde(default)]
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name_correction: Option<CorrectionResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ExtractedRecord {
    pub fn empty(scan_id: ScanId, backend: &str) -> Self {
        Self {
            scan_id,
            backend: backend.to_string(),
            deceased_candidates: Vec::new(),
            death_dates: Vec::new(),
            other_mentions: Vec::new(),
            margin_mentions: Vec::new(),
            flags: BTreeSet::new(),
            text: String::new(),
            name_correction: None,
            error: None,
        }
    }

    /// A record for a document that could not be processed.
    pub fn failed(scan_id: ScanId, backend: &str, error: impl Into<String>) -> Self {
        let mut r = Self::empty(scan_id, backend);
        r.flags.insert(Flag::ExtractionFailed);
        r.error = Some(error.into());
        r.refresh_flags();
        r
    }

    pub fn top_name(&self) -> Option<&PersonMention> {
        self.deceased_candidates.first()
    }

    pub fn top_date(&self) -> Option<&DateCandidate> {
        self.death_dates.first()
    }

    pub fn is_gated(&self) -> bool {
        self.flags.iter().any(Flag::is_gating)
    }

    /// Recompute the content-derived flags: `NoDate` iff there are no dates,
    /// `NoName` iff there are no name candidates and the record is not a
    /// stillbirth, `YearCorrected` iff the selected date was corrected.
    pub fn refresh_flags(&mut self) {
        let set = |flags: &mut BTreeSet<Flag>, flag, on: bool| {
            if on {
                flags.insert(flag);
            } else {
                flags.remove(&flag);
            }
        };
        let stillborn = self.flags.contains(&Flag::Stillborn);
        set(&mut self.flags, Flag::NoDate, self.death_dates.is_empty());
        set(&mut self.flags, Flag::NoName, !stillborn && self.deceased_candidates.is_empty());
        let corrected = self.top_date().is_some_and(|d| d.year_corrected);
        set(&mut self.flags, Flag::YearCorrected, corrected);
    }
}
