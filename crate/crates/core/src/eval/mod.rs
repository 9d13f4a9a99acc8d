//! Character error rate and name/date accuracy against a gold standard.

mod gold;
mod metrics;
mod report;

use std::path::PathBuf;

pub use gold::{cer_inputs, date_pairs, load_eval_gold, load_eval_gold_from_reader, name_pairs, EvalGold, NameSource};
pub use metrics::{
    cer, cer_report, date_accuracy, name_accuracy, AccuracyReport, CerDoc, CerReport, DatePair, EvalPair, IdSets,
    DEFAULT_MAX_DIST,
};
pub use report::{emit_cer, emit_report, parse_report_csv, ReportFormat};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("reference text is empty")]
    EmptyReference,
    #[error("no pairs to score")]
    NoPairs,
    #[error("unknown report format {0:?}")]
    UnknownFormat(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("gold line {line}: {message}")]
    Gold { line: u64, message: String },
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
