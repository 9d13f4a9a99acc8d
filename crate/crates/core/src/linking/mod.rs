//! Linking person mentions across certificates by exact name and
//! overlapping birth-year windows.

mod groups;
mod rows;
mod stats;

use std::path::PathBuf;

pub use groups::{
    birth_interval, build_link_groups, name_key, row_interval, validate_group, BirthInterval, GroupKey, LinkGroup,
    LinkOptions, SuspectReason, GroupVerdict,
};
pub use rows::{
    load_gold_rows, load_gold_rows_from_reader, parse_birth_year, parse_role, rows_from_records, ColumnMap,
    LoadedRows, PersonRow, RowSource,
};
pub use stats::{link_stats, LinkStats};

#[derive(Debug, thiserror::Error)]
pub enum LinkError {
    #[error("age must not be negative, got {0}")]
    NegativeAge(i64),
    #[error("file has no data rows")]
    EmptyFile,
    #[error("no column for {0:?} in header")]
    MissingColumn(&'static str),
    #[error("csv: {0}")]
    Csv(String),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
