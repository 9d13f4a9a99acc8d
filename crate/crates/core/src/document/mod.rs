//! HTR output: page geometry, column layout and reading order.

mod geometry;
mod layout;
mod model;
mod order;
mod xml;

use std::path::PathBuf;

pub use geometry::{region_bounding_rect, Point, Rect};
pub use layout::{classify_layout, ColumnLayout, LayoutClass, LayoutConfig};
pub use model::{
    parse_document, scan_id_from_path, DocWarning, HtrDocument, ParsedDocument, TextLine, TextRegion,
    CONTAINMENT_TOLERANCE, DOC_FORMAT,
};
pub use order::{main_text, ordered_lines, region_order, reorder_lines, reordered, MainText, MarginText};

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("polygon needs at least 3 points, found {points}")]
    DegeneratePolygon { points: usize },
    #[error("document has no text regions")]
    NoRegions,
}

impl DocumentError {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        DocumentError::Parse { path: path.into(), message: message.into() }
    }
}
