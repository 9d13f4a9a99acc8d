use std::collections::BTreeMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, Mutex, RwLock};

use chrono::NaiveDate;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::extract::{DateCandidate, ExtractedRecord, Flag, PersonMention, Provenance, Role, Span};
use crate::inventory::ScanId;
use crate::jsonio::{self, JsonIoError};
use crate::lexicon::Lexicon;
use crate::text::{name_tokens, truncate_chars};

/// Version tag carried by every API payload and stored event.
pub const REVIEW_SCHEMA: &str = "certpipe-review/1";
pub const ITEMS_FILE: &str = "items.jsonl";
pub const EVENTS_FILE: &str = "events.jsonl";
/// Longest center-text excerpt shown to reviewers, in characters.
pub const EXCERPT_CHARS: usize = 1200;
const DEFAULT_REVIEWER: &str = "anonymous";

#[derive(Debug, thiserror::Error)]
pub enum ReviewError {
    #[error("no review item {0:?}")]
    NotFound(String),
    #[error("item {id:?} is already {status}")]
    Conflict { id: String, status: ReviewStatus },
    #[error("invalid request: {0}")]
    Invalid(String),
    #[error("event {seq} refers to unknown record {item_id:?}")]
    OrphanEvent { seq: u64, item_id: String },
    #[error(transparent)]
    Io(#[from] JsonIoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReviewStatus {
    Pending,
    Corrected,
    Accepted,
}

impl fmt::Display for ReviewStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReviewStatus::Pending => "pending",
            ReviewStatus::Corrected => "corrected",
            ReviewStatus::Accepted => "accepted",
        })
    }
}

/// A record waiting for (or done with) human review.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewItem {
    pub id: String,
    pub scan_id: ScanId,
    pub flags: Vec<Flag>,
    pub excerpt: String,
    pub status: ReviewStatus,
    pub record: ExtractedRecord,
}

impl ReviewItem {
    pub fn from_record(record: &ExtractedRecord) -> Self {
        Self {
            id: record.scan_id.key(),
            scan_id: record.scan_id.clone(),
            flags: record.flags.iter().copied().collect(),
            excerpt: truncate_chars(&record.text, EXCERPT_CHARS).to_string(),
            status: ReviewStatus::Pending,
            record: record.clone(),
        }
    }
}

/// Review items for exactly the records that carry a gating flag, in scan
/// order.
pub fn review_items(records: &[ExtractedRecord]) -> Vec<ReviewItem> {
    let mut items: Vec<ReviewItem> = records.iter().filter(|r| r.is_gated()).map(ReviewItem::from_record).collect();
    items.sort_by(|a, b| a.scan_id.cmp(&b.scan_id));
    items
}

/// Field a correction targets: `deceased_name`, `death_date`,
/// `mentions/<i>/name` or `mentions/<i>/role`, where `i` indexes
/// `other_mentions`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldPath {
    DeceasedName,
    DeathDate,
    MentionName(usize),
    MentionRole(usize),
}

impl fmt::Display for FieldPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldPath::DeceasedName => f.write_str("deceased_name"),
            FieldPath::DeathDate => f.write_str("death_date"),
            FieldPath::MentionName(i) => write!(f, "mentions/{i}/name"),
            FieldPath::MentionRole(i) => write!(f, "mentions/{i}/role"),
        }
    }
}

impl FromStr for FieldPath {
    type Err = ReviewError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ReviewError::Invalid(format!("unknown field {s:?}"));
        match s {
            "deceased_name" => Ok(FieldPath::DeceasedName),
            "death_date" => Ok(FieldPath::DeathDate),
            _ => {
                let rest = s.strip_prefix("mentions/").ok_or_else(bad)?;
                let (index, attr) = rest.split_once('/').ok_or_else(bad)?;
                let index: usize = index.parse().map_err(|_| bad())?;
                match attr {
                    "name" => Ok(FieldPath::MentionName(index)),
                    "role" => Ok(FieldPath::MentionRole(index)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl Serialize for FieldPath {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldPath {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventAction {
    Correct,
    Accept,
}

/// One line of the append-only event log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionEvent {
    pub schema: String,
    pub seq: u64,
    pub item_id: String,
    pub action: EventAction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldPath>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub old_value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub new_value: Option<String>,
    /// Marks the certificate as a stillbirth; allows an empty name or date.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub stillborn: bool,
    pub reviewer: String,
    pub timestamp: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeRequest {
    pub field: FieldPath,
    #[serde(default)]
    pub new_value: String,
    #[serde(default)]
    pub stillborn: bool,
}

/// Body of `POST /api/items/{id}/corrections`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrectionRequest {
    #[serde(default)]
    pub reviewer: Option<String>,
    pub changes: Vec<ChangeRequest>,
}

/// Body of `POST /api/items/{id}/accept`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcceptRequest {
    #[serde(default)]
    pub reviewer: Option<String>,
}

fn parse_date(s: &str) -> Result<NaiveDate, ReviewError> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d")
        .map_err(|_| ReviewError::Invalid(format!("{s:?} is not a calendar date (YYYY-MM-DD)")))
}

fn parse_role(s: &str) -> Result<Role, ReviewError> {
    serde_json::from_value(serde_json::Value::String(s.trim().to_string()))
        .map_err(|_| ReviewError::Invalid(format!("unknown role {s:?}")))
}

fn mention<'a>(record: &'a ExtractedRecord, i: usize) -> Result<&'a PersonMention, ReviewError> {
    record
        .other_mentions
        .get(i)
        .ok_or_else(|| ReviewError::Invalid(format!("record has {} mentions, no index {i}", record.other_mentions.len())))
}

/// Current value of a field as shown to reviewers.
pub fn field_value(record: &ExtractedRecord, field: FieldPath) -> Result<String, ReviewError> {
    Ok(match field {
        FieldPath::DeceasedName => record.top_name().map(|m| m.name()).unwrap_or_default(),
        FieldPath::DeathDate => record.top_date().map(|d| d.iso()).unwrap_or_default(),
        FieldPath::MentionName(i) => mention(record, i)?.name(),
        FieldPath::MentionRole(i) => mention(record, i)?.role.to_string(),
    })
}

/// Check a change against the record it targets.
pub fn validate_change(record: &ExtractedRecord, change: &ChangeRequest) -> Result<(), ReviewError> {
    let value = change.new_value.trim();
    let empty_ok = change.stillborn;
    match change.field {
        FieldPath::DeceasedName if value.is_empty() && !empty_ok => {
            Err(ReviewError::Invalid("deceased name must not be empty unless stillborn".into()))
        }
        FieldPath::DeathDate if value.is_empty() && !empty_ok => {
            Err(ReviewError::Invalid("death date must not be empty unless stillborn".into()))
        }
        FieldPath::DeathDate if !value.is_empty() => parse_date(value).map(|_| ()),
        FieldPath::MentionName(i) => {
            mention(record, i)?;
            if value.is_empty() {
                return Err(ReviewError::Invalid("mention name must not be empty".into()));
            }
            Ok(())
        }
        FieldPath::MentionRole(i) => {
            mention(record, i)?;
            parse_role(value).map(|_| ())
        }
        _ => Ok(()),
    }
}

/// Apply one correction event to a record. Returns the name tokens the
/// reviewer confirmed.
fn apply_event(record: &mut ExtractedRecord, event: &CorrectionEvent) -> Result<Vec<String>, ReviewError> {
    let Some(field) = event.field else {
        return Err(ReviewError::Invalid(format!("event {} has no field", event.seq)));
    };
    let value = event.new_value.as_deref().unwrap_or("").trim();
    if event.stillborn {
        record.flags.insert(Flag::Stillborn);
    }
    let mut confirmed = Vec::new();
    match field {
        FieldPath::DeceasedName => {
            record.flags.remove(&Flag::UnknownTokens);
            record.name_correction = None;
            let tokens = name_tokens(value);
            if !tokens.is_empty() {
                let span = record.top_name().map_or(Span { start: 0, end: 0 }, |m| m.span);
                confirmed.extend(tokens.iter().cloned());
                record.deceased_candidates.insert(
                    0,
                    PersonMention {
                        name_tokens: tokens,
                        role: Role::Deceased,
                        span,
                        age: record.top_name().and_then(|m| m.age),
                        profession: record.top_name().and_then(|m| m.profession.clone()),
                        provenance: Provenance::Human,
                    },
                );
            }
        }
        FieldPath::DeathDate => {
            if !value.is_empty() {
                use chrono::Datelike;
                let date = parse_date(value)?;
                let span = record.top_date().map_or(Span { start: 0, end: 0 }, |d| d.span);
                record.death_dates.insert(
                    0,
                    DateCandidate {
                        year: date.year(),
                        month: date.month(),
                        day: date.day(),
                        span,
                        raw: value.to_string(),
                        year_corrected: false,
                        original_year: None,
                        provenance: Provenance::Human,
                    },
                );
            }
        }
        FieldPath::MentionName(i) => {
            let tokens = name_tokens(value);
            let m = record
                .other_mentions
                .get_mut(i)
                .ok_or_else(|| ReviewError::Invalid(format!("event {} names mention {i}", event.seq)))?;
            confirmed.extend(tokens.iter().cloned());
            m.name_tokens = tokens;
            m.provenance = Provenance::Human;
        }
        FieldPath::MentionRole(i) => {
            let role = parse_role(value)?;
            let m = record
                .other_mentions
                .get_mut(i)
                .ok_or_else(|| ReviewError::Invalid(format!("event {} names mention {i}", event.seq)))?;
            m.role = role;
            m.provenance = Provenance::Human;
        }
    }
    record.refresh_flags();
    Ok(confirmed)
}

#[derive(Debug, Clone)]
pub struct MergeOutput {
    pub records: Vec<ExtractedRecord>,
    pub lexicon: Lexicon,
    /// Name tokens added to the lexicon, one frequency unit each.
    pub confirmed_tokens: usize,
}

/// Replay the event log over the extracted records.
///
/// Corrected values are placed first with `human` provenance; the extracted
/// values stay behind them. Tokens of corrected names enter the lexicon with
/// +1 frequency each. Events are applied in `seq` order.
pub fn merge_corrections(
    records: &[ExtractedRecord],
    events: &[CorrectionEvent],
    lexicon: &Lexicon,
) -> Result<MergeOutput, ReviewError> {
    let mut merged = records.to_vec();
    let index: BTreeMap<String, usize> = merged.iter().enumerate().map(|(i, r)| (r.scan_id.key(), i)).collect();
    let mut ordered: Vec<&CorrectionEvent> = events.iter().collect();
    ordered.sort_by_key(|e| e.seq);

    let mut tokens = Vec::new();
    for event in ordered {
        let &i = index
            .get(&event.item_id)
            .ok_or_else(|| ReviewError::OrphanEvent { seq: event.seq, item_id: event.item_id.clone() })?;
        if event.action == EventAction::Correct {
            tokens.extend(apply_event(&mut merged[i], event)?);
        }
    }
    let lexicon = if tokens.is_empty() { lexicon.clone() } else { lexicon.merge(&tokens) };
    Ok(MergeOutput { records: merged, lexicon, confirmed_tokens: tokens.len() })
}

/// Immutable view of the store handed to readers.
#[derive(Debug, Clone, Default)]
pub struct Snapshot {
    items: BTreeMap<String, ReviewItem>,
    order: Vec<String>,
    events: Vec<CorrectionEvent>,
}

/// Summary row of the queue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueueEntry {
    pub id: String,
    pub scan_label: String,
    pub flags: Vec<Flag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name_candidate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date_candidate: Option<String>,
    pub status: ReviewStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueuePage {
    pub schema: String,
    pub items: Vec<QueueEntry>,
    /// Pass as `cursor` to fetch the next page.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next_cursor: Option<String>,
    pub pending: usize,
}

impl Snapshot {
    fn build(items: Vec<ReviewItem>, events: Vec<CorrectionEvent>) -> Self {
        let mut s = Snapshot::default();
        let mut sorted = items;
        sorted.sort_by(|a, b| a.scan_id.cmp(&b.scan_id));
        for mut item in sorted {
            item.status = ReviewStatus::Pending;
            s.order.push(item.id.clone());
            s.items.insert(item.id.clone(), item);
        }
        for e in &events {
            s.note_event(e);
        }
        s.events = events;
        s
    }

    fn note_event(&mut self, e: &CorrectionEvent) {
        if let Some(item) = self.items.get_mut(&e.item_id) {
            if item.status == ReviewStatus::Pending {
                item.status = match e.action {
                    EventAction::Correct => ReviewStatus::Corrected,
                    EventAction::Accept => ReviewStatus::Accepted,
                };
            }
        }
    }

    pub fn item(&self, id: &str) -> Option<&ReviewItem> {
        self.items.get(id)
    }

    /// All items in scan order.
    pub fn items(&self) -> impl Iterator<Item = &ReviewItem> {
        self.order.iter().map(|id| &self.items[id])
    }

    pub fn events(&self) -> &[CorrectionEvent] {
        &self.events
    }

    /// Pending items after `cursor`, at most `limit` of them.
    pub fn queue(&self, cursor: Option<&str>, limit: usize) -> Result<QueuePage, ReviewError> {
        let start = match cursor {
            None => 0,
            Some(c) => {
                self.order.iter().position(|id| id == c).ok_or_else(|| ReviewError::Invalid(format!("bad cursor {c:?}")))?
                    + 1
            }
        };
        let pending: Vec<&ReviewItem> =
            self.order[start..].iter().map(|id| &self.items[id]).filter(|i| i.status == ReviewStatus::Pending).collect();
        let limit = limit.max(1);
        let page: Vec<QueueEntry> = pending
            .iter()
            .take(limit)
            .map(|i| QueueEntry {
                id: i.id.clone(),
                scan_label: i.scan_id.stem(),
                flags: i.flags.clone(),
                name_candidate: i.record.top_name().map(|m| m.name()),
                date_candidate: i.record.top_date().map(|d| d.iso()),
                status: i.status,
            })
            .collect();
        let next_cursor = if pending.len() > limit { page.last().map(|e| e.id.clone()) } else { None };
        Ok(QueuePage {
            schema: REVIEW_SCHEMA.to_string(),
            items: page,
            next_cursor,
            pending: self.items.values().filter(|i| i.status == ReviewStatus::Pending).count(),
        })
    }
}

/// Review items plus the append-only event log, persisted as JSONL.
///
/// Writes go through one mutex-guarded writer; readers take the current
/// immutable snapshot and never block on a write in progress.
#[derive(Debug)]
pub struct ReviewStore {
    dir: PathBuf,
    state: RwLock<Arc<Snapshot>>,
    writer: Mutex<File>,
}

impl ReviewStore {
    /// Write the items for `records` and keep any existing event log.
    pub fn create(dir: &Path, records: &[ExtractedRecord]) -> Result<Self, ReviewError> {
        std::fs::create_dir_all(dir)
            .map_err(|source| JsonIoError::Io { path: dir.display().to_string(), source })?;
        jsonio::write_jsonl(&dir.join(ITEMS_FILE), &review_items(records))?;
        Self::open(dir)
    }

    pub fn open(dir: &Path) -> Result<Self, ReviewError> {
        let items: Vec<ReviewItem> = jsonio::read_jsonl(&dir.join(ITEMS_FILE))?;
        let events_path = dir.join(EVENTS_FILE);
        let events: Vec<CorrectionEvent> = jsonio::read_jsonl(&events_path)?;
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&events_path)
            .map_err(|source| JsonIoError::Io { path: events_path.display().to_string(), source })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            state: RwLock::new(Arc::new(Snapshot::build(items, events))),
            writer: Mutex::new(file),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.state.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    /// Append events for `id` after checking the item is still pending, then
    /// publish the new snapshot. Serialized by the writer lock.
    fn commit<F>(&self, id: &str, build: F) -> Result<ReviewItem, ReviewError>
    where
        F: FnOnce(&ReviewItem, u64) -> Result<Vec<CorrectionEvent>, ReviewError>,
    {
        let mut file = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        let current = self.snapshot();
        let item = current.item(id).ok_or_else(|| ReviewError::NotFound(id.to_string()))?;
        if item.status != ReviewStatus::Pending {
            return Err(ReviewError::Conflict { id: id.to_string(), status: item.status });
        }
        let events = build(item, current.events.len() as u64 + 1)?;
        let path = self.dir.join(EVENTS_FILE);
        for e in &events {
            jsonio::append_jsonl(&mut file, &path, e)?;
        }
        let mut next = (*current).clone();
        for e in events {
            next.note_event(&e);
            next.events.push(e);
        }
        let updated = next.items[id].clone();
        *self.state.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(next);
        Ok(updated)
    }

    /// Record a reviewer's corrections; the item becomes `Corrected`.
    pub fn correct(&self, id: &str, request: &CorrectionRequest) -> Result<ReviewItem, ReviewError> {
        if request.changes.is_empty() {
            return Err(ReviewError::Invalid("no changes".into()));
        }
        let reviewer = reviewer_name(request.reviewer.as_deref());
        let timestamp = now();
        self.commit(id, |item, first_seq| {
            request
                .changes
                .iter()
                .enumerate()
                .map(|(k, change)| {
                    validate_change(&item.record, change)?;
                    Ok(CorrectionEvent {
                        schema: REVIEW_SCHEMA.to_string(),
                        seq: first_seq + k as u64,
                        item_id: item.id.clone(),
                        action: EventAction::Correct,
                        field: Some(change.field),
                        old_value: Some(field_value(&item.record, change.field)?),
                        new_value: Some(change.new_value.trim().to_string()),
                        stillborn: change.stillborn,
                        reviewer: reviewer.clone(),
                        timestamp: timestamp.clone(),
                    })
                })
                .collect()
        })
    }

    /// Confirm the extraction as is; the item becomes `Accepted`.
    pub fn accept(&self, id: &str, request: &AcceptRequest) -> Result<ReviewItem, ReviewError> {
        let reviewer = reviewer_name(request.reviewer.as_deref());
        self.commit(id, |item, seq| {
            Ok(vec![CorrectionEvent {
                schema: REVIEW_SCHEMA.to_string(),
                seq,
                item_id: item.id.clone(),
                action: EventAction::Accept,
                field: None,
                old_value: None,
                new_value: None,
                stillborn: false,
                reviewer,
                timestamp: now(),
            }])
        })
    }
}

fn reviewer_name(r: Option<&str>) -> String {
    r.map(str::trim).filter(|s| !s.is_empty()).unwrap_or(DEFAULT_REVIEWER).to_string()
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(number: u32, name: &str) -> ExtractedRecord {
        let mut r = ExtractedRecord::empty(ScanId::parse(&format!("O.R. 1887 Stad {number}.JPG")).unwrap(), "rules");
        r.deceased_candidates.push(PersonMention {
            name_tokens: name_tokens(name),
            role: Role::Deceased,
            span: Span { start: 0, end: 1 },
            age: None,
            profession: None,
            provenance: Provenance::Extracted,
        });
        r.refresh_flags();
        r
    }

    fn name_change(v: &str) -> CorrectionRequest {
        CorrectionRequest {
            reviewer: Some("r1".into()),
            changes: vec![ChangeRequest { field: FieldPath::DeceasedName, new_value: v.into(), stillborn: false }],
        }
    }

    #[test]
    fn field_paths_round_trip() {
        for f in [FieldPath::DeceasedName, FieldPath::DeathDate, FieldPath::MentionName(2), FieldPath::MentionRole(0)] {
            assert_eq!(f.to_string().parse::<FieldPath>().unwrap(), f);
        }
        assert!("mentions/x/name".parse::<FieldPath>().is_err());
        assert!("name".parse::<FieldPath>().is_err());
    }

    #[test]
    fn only_gated_records_are_queued() {
        let items = review_items(&[record(1, "Maria"), record(2, "Jan")]);
        assert_eq!(items.len(), 2); // both lack a date
        let mut dated = record(3, "Jan");
        dated.death_dates.push(DateCandidate {
            year: 1887,
            month: 5,
            day: 5,
            span: Span { start: 0, end: 1 },
            raw: "5 Mei 1887".into(),
            year_corrected: false,
            original_year: None,
            provenance: Provenance::Extracted,
        });
        dated.refresh_flags();
        assert!(review_items(&[dated]).is_empty());
    }

    #[test]
    fn correction_then_conflict() {
        let dir = tempfile::tempdir().unwrap();
        let store = ReviewStore::create(dir.path(), &[record(1, "Mariak")]).unwrap();
        let id = "1887-stad-001";
        assert_eq!(store.correct(id, &name_change("Maria")).unwrap().status, ReviewStatus::Corrected);
        assert!(matches!(store.correct(id, &name_change("Maria")), Err(ReviewError::Conflict { .. })));
        assert!(matches!(store.accept("nope", &AcceptRequest::default()), Err(ReviewError::NotFound(_))));

        let reopened = ReviewStore::open(dir.path()).unwrap();
        let snap = reopened.snapshot();
        assert_eq!(snap.item(id).unwrap().status, ReviewStatus::Corrected);
        assert_eq!(snap.events()[0].old_value.as_deref(), Some("Mariak"));
        assert_eq!(snap.queue(None, 10).unwrap().items.len(), 0);
    }

    #[test]
    fn invalid_changes_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let store = ReviewStore::create(dir.path(), &[record(1, "Mariak")]).unwrap();
        let id = "1887-stad-001";
        assert!(matches!(store.correct(id, &name_change("  ")), Err(ReviewError::Invalid(_))));
        let bad_date = CorrectionRequest {
            reviewer: None,
            changes: vec![ChangeRequest { field: FieldPath::DeathDate, new_value: "1887-02-31".into(), stillborn: false }],
        };
        assert!(matches!(store.correct(id, &bad_date), Err(ReviewError::Invalid(_))));
        assert_eq!(store.snapshot().item(id).unwrap().status, ReviewStatus::Pending);
    }

    #[test]
    fn merge_overrides_with_provenance_and_grows_lexicon() {
        let dir = tempfile::tempdir().unwrap();
        let records = vec![record(1, "Mariak Garmers")];
        let store = ReviewStore::create(dir.path(), &records).unwrap();
        store.correct("1887-stad-001", &name_change("Maria Garmers")).unwrap();
        let lex = Lexicon::from_counts([("Maria", 5)], "t").unwrap();
        let out = merge_corrections(&records, store.snapshot().events(), &lex).unwrap();
        let top = out.records[0].top_name().unwrap();
        assert_eq!(top.name(), "Maria Garmers");
        assert_eq!(top.provenance, Provenance::Human);
        assert_eq!(out.records[0].deceased_candidates[1].name(), "Mariak Garmers");
        assert_eq!(out.lexicon.token_mass(), lex.token_mass() + 2);
        assert_eq!(out.confirmed_tokens, 2);
    }

    #[test]
    fn merge_without_events_is_identity_and_orphans_fail() {
        let records = vec![record(1, "Maria")];
        let lex = Lexicon::from_counts([("Maria", 5)], "t").unwrap();
        let out = merge_corrections(&records, &[], &lex).unwrap();
        assert_eq!(out.records, records);
        assert_eq!(out.lexicon, lex);
        let orphan = CorrectionEvent {
            schema: REVIEW_SCHEMA.into(),
            seq: 1,
            item_id: "1900-stad-001".into(),
            action: EventAction::Accept,
            field: None,
            old_value: None,
            new_value: None,
            stillborn: false,
            reviewer: "r".into(),
            timestamp: "t".into(),
        };
        assert!(matches!(merge_corrections(&records, &[orphan], &lex), Err(ReviewError::OrphanEvent { seq: 1, .. })));
    }
}
