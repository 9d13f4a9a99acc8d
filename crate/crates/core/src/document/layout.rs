use serde::{Deserialize, Serialize};

use super::geometry::Rect;
use super::model::HtrDocument;

/// Thresholds, as fractions of the page width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LayoutConfig {
    /// Minimum width of a region to count as a margin column.
    pub margin_min_width: f64,
    /// Center right edge beyond which no room is left for right-margin text.
    pub merged_right_edge: f64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self { margin_min_width: 0.05, merged_right_edge: 0.90 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnLayout {
    OneColumn,
    TwoColumn,
    ThreeColumn,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutClass {
    pub layout: ColumnLayout,
    pub center_region_id: Option<String>,
    pub margin_merged: bool,
    pub left_margins: Vec<String>,
    pub right_margins: Vec<String>,
}

impl LayoutClass {
    fn unknown() -> Self {
        Self {
            layout: ColumnLayout::Unknown,
            center_region_id: None,
            margin_merged: false,
            left_margins: Vec::new(),
            right_margins: Vec::new(),
        }
    }
}

// Ratios are compared as quotients: w*k / W*k rounds to the same f64 as w / W,
// which keeps the classification exactly invariant under integer scaling.
fn ratio(part: i64, whole: u32) -> f64 {
    part as f64 / whole as f64
}

/// Classify the column layout from region bounding rectangles.
///
/// The widest region is the center column (ties: leftmost, then id). Regions
/// whose horizontal midpoint lies left of the center's left edge, or right of
/// its right edge, and that are at least `margin_min_width` wide, are margin
/// columns.
pub fn classify_layout(doc: &HtrDocument, config: &LayoutConfig) -> LayoutClass {
    if doc.regions.is_empty() || doc.page_width == 0 {
        return LayoutClass::unknown();
    }
    let rects: Vec<(&str, Rect)> = doc.regions.iter().map(|r| (r.id.as_str(), r.rect())).collect();
    let (center_id, center) = *rects
        .iter()
        .min_by(|a, b| b.1.width.cmp(&a.1.width).then(a.1.left.cmp(&b.1.left)).then(a.0.cmp(b.0)))
        .expect("non-empty");

    let mut left_margins = Vec::new();
    let mut right_margins = Vec::new();
    for (id, rect) in &rects {
        if *id == center_id || ratio(rect.width, doc.page_width) < config.margin_min_width {
            continue;
        }
        // midpoint*2 vs edge*2 avoids halving
        let mid2 = 2 * rect.left + rect.width;
        if mid2 < 2 * center.left {
            left_margins.push(id.to_string());
        } else if mid2 > 2 * center.right() {
            right_margins.push(id.to_string());
        }
    }

    let layout = match (left_margins.is_empty(), right_margins.is_empty()) {
        (false, false) => ColumnLayout::ThreeColumn,
        (true, true) => ColumnLayout::OneColumn,
        _ => ColumnLayout::TwoColumn,
    };
    LayoutClass {
        layout,
        center_region_id: Some(center_id.to_string()),
        margin_merged: ratio(center.right(), doc.page_width) > config.merged_right_edge,
        left_margins,
        right_margins,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::{Point, TextRegion};
    use crate::inventory::ScanId;

    fn region(id: &str, left: i64, width: i64) -> TextRegion {
        TextRegion {
            id: id.into(),
            polygon: vec![
                Point::new(left, 0),
                Point::new(left + width, 0),
                Point::new(left + width, 100),
                Point::new(left, 100),
            ],
            declared_order: None,
            lines: Vec::new(),
        }
    }

    fn doc(regions: Vec<TextRegion>) -> HtrDocument {
        HtrDocument { scan_id: ScanId::parse("O.R. 1850 Stad 001.JPG").unwrap(), page_width: 1000, page_height: 1500, regions }
    }

    #[test]
    fn three_columns() {
        let c = classify_layout(&doc(vec![region("l", 0, 100), region("c", 120, 650), region("r", 800, 150)]), &LayoutConfig::default());
        assert_eq!(c.layout, ColumnLayout::ThreeColumn);
        assert_eq!(c.center_region_id.as_deref(), Some("c"));
        assert!(!c.margin_merged);
    }

    #[test]
    fn two_columns() {
        let c = classify_layout(&doc(vec![region("l", 0, 250), region("c", 270, 700)]), &LayoutConfig::default());
        assert_eq!(c.layout, ColumnLayout::TwoColumn);
        assert_eq!(c.left_margins, vec!["l"]);
    }

    #[test]
    fn one_wide_region() {
        let c = classify_layout(&doc(vec![region("c", 20, 950)]), &LayoutConfig::default());
        assert_eq!(c.layout, ColumnLayout::OneColumn);
        assert!(c.margin_merged);
    }

    #[test]
    fn narrow_regions_are_not_margins() {
        let c = classify_layout(&doc(vec![region("l", 0, 40), region("c", 60, 700)]), &LayoutConfig::default());
        assert_eq!(c.layout, ColumnLayout::OneColumn);
    }

    #[test]
    fn no_regions() {
        assert_eq!(classify_layout(&doc(vec![]), &LayoutConfig::default()).layout, ColumnLayout::Unknown);
    }
}
