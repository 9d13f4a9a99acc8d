//! Stage orchestration, persisted outputs and the human review loop.

mod config;
mod correct;
mod review;
mod run;
#[cfg(feature = "server")]
pub mod server;

use std::path::PathBuf;

pub use config::{ConfigOverrides, CorrectionConfig, PipelineConfig, CONFIG_ENV};
pub use correct::correct_record;
pub use review::{
    field_value, merge_corrections, review_items, validate_change, AcceptRequest, ChangeRequest, CorrectionEvent,
    CorrectionRequest, EventAction, FieldPath, MergeOutput, QueueEntry, QueuePage, ReviewError, ReviewItem,
    ReviewStatus, ReviewStore, Snapshot, EVENTS_FILE, EXCERPT_CHARS, ITEMS_FILE, REVIEW_SCHEMA,
};
pub use run::{
    collect_documents, correct_records, eval_text, evaluate_records, extract_corpus, link_records, load_lexicon_opt,
    load_tables, process_document, run_pipeline, with_workers, EvalOutput, RunSummary, SkippedDocument, EVAL_FILE,
    EVAL_TEXT_FILE, GROUPS_FILE, INVENTORY_FILE, LINK_STATS_FILE, RECORDS_FILE, SUMMARY_FILE,
};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error("corpus directory {0} is not readable")]
    Corpus(PathBuf),
    #[error("{0}")]
    Stage(String),
    #[error("writing {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] crate::jsonio::JsonIoError),
    #[error(transparent)]
    Review(#[from] ReviewError),
}
