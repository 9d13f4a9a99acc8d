use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use walkdir::WalkDir;

use super::config::PipelineConfig;
use super::correct::correct_record;
use super::review::ReviewStore;
use super::PipelineError;
use crate::document::{parse_document, scan_id_from_path, LayoutConfig};
use crate::eval::{
    cer_inputs, cer_report, date_accuracy, date_pairs, emit_cer, emit_report, name_accuracy, name_pairs, AccuracyReport,
    CerReport, EvalGold, NameSource, ReportFormat,
};
use crate::extract::{backend_by_name, extract_record, ExtractedRecord, ExtractorBackend, Flag, Tables};
use crate::inventory::{build_inventory, InventoryOptions};
use crate::jsonio;
use crate::lexicon::{load_lexicon, Lexicon};
use crate::linking::{build_link_groups, link_stats, rows_from_records, LinkGroup, LinkOptions, LinkStats};

pub const RECORDS_FILE: &str = "records.jsonl";
pub const GROUPS_FILE: &str = "groups.json";
pub const LINK_STATS_FILE: &str = "link_stats.json";
pub const INVENTORY_FILE: &str = "inventory.json";
pub const EVAL_FILE: &str = "eval.json";
pub const EVAL_TEXT_FILE: &str = "eval.txt";
pub const SUMMARY_FILE: &str = "summary.json";

/// A corpus file that produced no record.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SkippedDocument {
    pub path: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalOutput {
    pub accuracy: Vec<AccuracyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cer: Option<CerReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub documents: usize,
    pub records: usize,
    pub skipped: Vec<SkippedDocument>,
    pub flag_counts: BTreeMap<Flag, usize>,
    pub review_items: usize,
    pub groups: usize,
    pub suspect_groups: usize,
    /// SHA-256 of `records.jsonl`.
    pub records_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inventory_scans: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalOutput>,
}

/// Document files (`.json`, `.xml`) under `root`, sorted by path.
pub fn collect_documents(root: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    if !root.is_dir() {
        return Err(PipelineError::Corpus(root.to_path_buf()));
    }
    let mut out: Vec<PathBuf> = WalkDir::new(root)
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
        .map(|e| e.into_path())
        .filter(|p| {
            p.extension()
                .map(|x| x.eq_ignore_ascii_case("json") || x.eq_ignore_ascii_case("xml"))
                .unwrap_or(false)
        })
        .collect();
    out.sort();
    Ok(out)
}

fn display(root: &Path, path: &Path) -> String {
    path.strip_prefix(root).unwrap_or(path).to_string_lossy().replace('\\', "/")
}

/// Parse and extract one document. An unreadable document whose file name is
/// a scan name becomes an `ExtractionFailed` record; otherwise it is skipped.
pub fn process_document(
    path: &Path,
    backend: &dyn ExtractorBackend,
    layout: &LayoutConfig,
) -> Result<ExtractedRecord, String> {
    match parse_document(path) {
        Ok(parsed) => Ok(extract_record(&parsed.document, layout, backend)),
        Err(e) => {
            log::warn!("{}: {e}", path.display());
            match scan_id_from_path(path) {
                Some(scan) => Ok(ExtractedRecord::failed(scan, backend.name(), e.to_string())),
                None => Err(e.to_string()),
            }
        }
    }
}

/// Run `f` on a pool of `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, PipelineError> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| PipelineError::Config(format!("worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Extract every document; records come back sorted by scan, one per scan.
pub fn extract_corpus(
    root: &Path,
    paths: &[PathBuf],
    backend: &dyn ExtractorBackend,
    layout: &LayoutConfig,
) -> (Vec<ExtractedRecord>, Vec<SkippedDocument>) {
    let outcomes: Vec<(String, Result<ExtractedRecord, String>)> =
        paths.par_iter().map(|p| (display(root, p), process_document(p, backend, layout))).collect();
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut seen = BTreeSet::new();
    for (path, outcome) in outcomes {
        match outcome {
            Ok(r) if seen.insert(r.scan_id.clone()) => records.push(r),
            Ok(r) => skipped.push(SkippedDocument { path, reason: format!("second document for {}", r.scan_id) }),
            Err(reason) => skipped.push(SkippedDocument { path, reason }),
        }
    }
    records.sort_by(|a, b| a.scan_id.cmp(&b.scan_id));
    (records, skipped)
}

pub fn correct_records(records: &[ExtractedRecord], lexicon: Option<&Lexicon>, min_freq: u64) -> Vec<ExtractedRecord> {
    records.par_iter().map(|r| correct_record(r, lexicon, min_freq)).collect()
}

pub fn link_records(records: &[ExtractedRecord], options: &LinkOptions) -> (Vec<LinkGroup>, LinkStats) {
    let rows = rows_from_records(records);
    let groups = build_link_groups(&rows, options);
    let stats = link_stats(&groups, &rows, options);
    (groups, stats)
}

/// Every metric the gold rows support: extracted and corrected names, names
/// in any order, dates and CER.
pub fn evaluate_records(gold: &[EvalGold], records: &[ExtractedRecord], max_dist: usize) -> EvalOutput {
    let mut accuracy = Vec::new();
    let extracted = name_pairs(gold, records, NameSource::Extracted);
    if let Ok(r) = name_accuracy(&extracted, max_dist, false) {
        accuracy.push(r);
    }
    if let Ok(mut r) = name_accuracy(&name_pairs(gold, records, NameSource::Corrected), max_dist, false) {
        r.metric = "names_corrected".into();
        accuracy.push(r);
    }
    if let Ok(r) = name_accuracy(&extracted, max_dist, true) {
        accuracy.push(r);
    }
    if let Ok(r) = date_accuracy(&date_pairs(gold, records)) {
        accuracy.push(r);
    }
    let inputs = cer_inputs(gold, records);
    let cer = if inputs.is_empty() {
        None
    } else {
        match cer_report(&inputs) {
            Ok(r) => Some(r),
            Err(e) => {
                log::warn!("cer: {e}");
                None
            }
        }
    };
    EvalOutput { accuracy, cer }
}

pub fn eval_text(output: &EvalOutput) -> String {
    let mut text = emit_report(&output.accuracy, ReportFormat::Text);
    if let Some(cer) = &output.cer {
        text.push('\n');
        text.push_str(&emit_cer(cer, ReportFormat::Text));
    }
    text
}

pub fn load_tables(dir: Option<&Path>) -> Result<Arc<Tables>, PipelineError> {
    match dir {
        None => Ok(Tables::builtin()),
        Some(d) => Tables::from_dir(d).map(Arc::new).map_err(|e| PipelineError::Stage(e.to_string())),
    }
}

pub fn load_lexicon_opt(path: Option<&Path>) -> Result<Option<Lexicon>, PipelineError> {
    let Some(path) = path else { return Ok(None) };
    let loaded = load_lexicon(path).map_err(|e| PipelineError::Stage(e.to_string()))?;
    for row in &loaded.malformed {
        log::warn!("{} line {}: {}", path.display(), row.line, row.reason);
    }
    Ok(Some(loaded.lexicon))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn out_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Output { path: path.to_path_buf(), source }
}

/// Inventory → ingest → extract → correct → link → evaluate → review queue.
///
/// Per-document failures are isolated: they become flagged records or
/// skipped entries. All outputs are sorted, so identical inputs and config
/// give byte-identical files.
pub fn run_pipeline(config: &PipelineConfig) -> Result<RunSummary, PipelineError> {
    config.validate()?;
    let out = &config.out;
    std::fs::create_dir_all(out).map_err(out_err(out))?;

    let inventory_scans = match &config.scans {
        Some(root) => {
            let report = build_inventory(root, &InventoryOptions::default())
                .map_err(|e| PipelineError::Stage(e.to_string()))?;
            jsonio::write_json(&out.join(INVENTORY_FILE), &report)?;
            Some(report.scan_files)
        }
        None => None,
    };

    let tables = load_tables(config.tables.as_deref())?;
    let backend = backend_by_name(&config.backend, tables).map_err(|e| PipelineError::Config(e.to_string()))?;
    let lexicon = load_lexicon_opt(config.lexicon.as_deref())?;
    let paths = collect_documents(&config.corpus)?;
    log::info!("{} documents under {}", paths.len(), config.corpus.display());

    let (records, skipped) = with_workers(config.workers, || {
        let (records, skipped) = extract_corpus(&config.corpus, &paths, backend.as_ref(), &config.layout);
        (correct_records(&records, lexicon.as_ref(), config.correction.min_freq), skipped)
    })?;

    let records_text = jsonio::jsonl_string(&records);
    let records_path = out.join(RECORDS_FILE);
    std::fs::write(&records_path, &records_text).map_err(out_err(&records_path))?;

    let (groups, stats) = link_records(&records, &config.link);
    jsonio::write_json(&out.join(GROUPS_FILE), &groups)?;
    jsonio::write_json(&out.join(LINK_STATS_FILE), &stats)?;

    let eval = match &config.gold {
        Some(path) => {
            let gold = crate::eval::load_eval_gold(path).map_err(|e| PipelineError::Stage(e.to_string()))?;
            let output = evaluate_records(&gold, &records, config.correction.max_dist);
            jsonio::write_json(&out.join(EVAL_FILE), &output)?;
            let text_path = out.join(EVAL_TEXT_FILE);
            std::fs::write(&text_path, eval_text(&output)).map_err(out_err(&text_path))?;
            Some(output)
        }
        None => None,
    };

    let store = ReviewStore::create(&config.review_dir(), &records)?;
    let review_items = store.snapshot().items().count();

    let mut flag_counts = BTreeMap::new();
    for f in records.iter().flat_map(|r| r.flags.iter()) {
        *flag_counts.entry(*f).or_insert(0) += 1;
    }
    let summary = RunSummary {
        documents: paths.len(),
        records: records.len(),
        skipped,
        flag_counts,
        review_items,
        groups: stats.groups,
        suspect_groups: stats.suspect_groups,
        records_sha256: sha256_hex(records_text.as_bytes()),
        inventory_scans,
        eval,
    };
    jsonio::write_json(&out.join(SUMMARY_FILE), &summary)?;
    Ok(summary)
}
