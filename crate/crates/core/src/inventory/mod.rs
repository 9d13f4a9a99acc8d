//! Archive file-naming scheme, per-year/per-district inventory, duplicate
//! detection and clean-up.

mod clean;
mod duplicates;
mod report;
mod scan_id;
mod schema;

use std::path::PathBuf;

pub use clean::{clean, plan_clean, ActionLogEntry, ActionStatus, CleanAction, CleanMode, CleanPlan};
pub use duplicates::{digest_bytes, digest_file, find_duplicates, DuplicateKind, DuplicateSet, ScanFile};
pub use report::{
    build_inventory, DistrictCount, DistrictGap, InventoryOptions, InventoryReport, MisplacedFile, SkippedFile,
    SET_ASIDE_DIR,
};
pub use scan_id::{
    canonical_scan_name, parse_year_folder, split_scan_extension, District, DistrictFolder, DistrictGroup, ScanId,
    FIRST_YEAR, LAST_GROUPED_YEAR, LAST_YEAR,
};
pub use schema::{district_schema, DistrictSchema, Era, GroupTable};

#[derive(Debug, thiserror::Error)]
pub enum ScanNameError {
    #[error("malformed scan name {0:?}")]
    MalformedName(String),
    #[error("year {0} outside 1831-1950")]
    YearOutOfRange(i32),
    #[error("certificate number must be at least 1")]
    NumberZero,
    #[error("invalid district {0:?}")]
    InvalidDistrict(String),
    #[error("grouped district {district:?} used in {year}, after 1840")]
    GroupedOutsideEra { year: i32, district: String },
}

#[derive(Debug, thiserror::Error)]
pub enum InventoryError {
    #[error("cannot read corpus directory {path}: {source}")]
    UnreadableDirectory {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("filesystem error on {path} after {completed} completed actions: {source}")]
    Filesystem {
        path: PathBuf,
        completed: usize,
        #[source]
        source: std::io::Error,
    },
}
