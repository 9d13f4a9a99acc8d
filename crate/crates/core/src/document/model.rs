use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::geometry::{bounding_rect, region_bounding_rect, Point, Rect};
use super::{xml, DocumentError};
use crate::inventory::ScanId;

/// Format tag of the canonical JSON document.
pub const DOC_FORMAT: &str = "certpipe-doc/1";

/// Slack, in pixels, when checking that a baseline sits inside its region.
pub const CONTAINMENT_TOLERANCE: i64 = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextLine {
    pub id: String,
    /// At least two points, non-decreasing x.
    pub baseline: Vec<Point>,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f32>,
}

impl TextLine {
    /// Twice the midpoint between the first and last baseline points, kept in
    /// integers so sorting is exact.
    pub fn anchor2(&self) -> (i64, i64) {
        let first = self.baseline.first().copied().unwrap_or(Point::new(0, 0));
        let last = self.baseline.last().copied().unwrap_or(first);
        (first.x + last.x, first.y + last.y)
    }

    pub fn midpoint(&self) -> Point {
        let (x2, y2) = self.anchor2();
        Point::new(x2.div_euclid(2), y2.div_euclid(2))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextRegion {
    pub id: String,
    pub polygon: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_order: Option<u32>,
    #[serde(default)]
    pub lines: Vec<TextLine>,
}

impl TextRegion {
    /// Bounding rectangle of the polygon. Parsed regions always have ≥ 3
    /// points; see [`region_bounding_rect`] for the checked variant.
    pub fn rect(&self) -> Rect {
        bounding_rect(&self.polygon).unwrap_or(Rect { left: 0, top: 0, width: 0, height: 0 })
    }

    pub fn checked_rect(&self) -> Result<Rect, DocumentError> {
        region_bounding_rect(&self.polygon)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HtrDocument {
    pub scan_id: ScanId,
    pub page_width: u32,
    pub page_height: u32,
    pub regions: Vec<TextRegion>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DocWarning {
    EmptyRegion { region: String },
    LineOutsideRegion { region: String, line: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedDocument {
    pub document: HtrDocument,
    pub warnings: Vec<DocWarning>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocFile {
    format: String,
    scan: String,
    page_width: u32,
    page_height: u32,
    regions: Vec<TextRegion>,
}

impl HtrDocument {
    pub fn line_count(&self) -> usize {
        self.regions.iter().map(|r| r.lines.len()).sum()
    }

    pub fn region(&self, id: &str) -> Option<&TextRegion> {
        self.regions.iter().find(|r| r.id == id)
    }

    /// Checks the structural invariants and normalises baselines to
    /// non-decreasing x.
    pub(crate) fn validated(mut self, origin: &str) -> Result<ParsedDocument, DocumentError> {
        if self.page_width == 0 || self.page_height == 0 {
            return Err(DocumentError::parse(origin, "page dimensions must be positive"));
        }
        let mut seen = BTreeSet::new();
        let mut warnings = Vec::new();
        for region in &mut self.regions {
            if !seen.insert(region.id.clone()) {
                return Err(DocumentError::parse(format!("{origin}/regions[{}]", region.id), "duplicate region id"));
            }
            if region.polygon.len() < 3 {
                return Err(DocumentError::parse(
                    format!("{origin}/regions[{}]/polygon", region.id),
                    format!("polygon needs at least 3 points, found {}", region.polygon.len()),
                ));
            }
            if region.lines.is_empty() {
                warnings.push(DocWarning::EmptyRegion { region: region.id.clone() });
            }
            let rect = region.rect().expanded(CONTAINMENT_TOLERANCE);
            for line in &mut region.lines {
                if line.baseline.len() < 2 {
                    return Err(DocumentError::parse(
                        format!("{origin}/regions[{}]/lines[{}]/baseline", region.id, line.id),
                        "baseline needs at least 2 points",
                    ));
                }
                line.baseline.sort_by_key(|p| p.x);
                if !rect.contains(line.midpoint()) {
                    warnings.push(DocWarning::LineOutsideRegion { region: region.id.clone(), line: line.id.clone() });
                }
            }
        }
        Ok(ParsedDocument { document: self, warnings })
    }

    pub fn from_json_str(s: &str) -> Result<ParsedDocument, DocumentError> {
        let file: DocFile = serde_json::from_str(s).map_err(|e| DocumentError::parse("$", e.to_string()))?;
        if file.format != DOC_FORMAT {
            return Err(DocumentError::parse("$.format", format!("expected {DOC_FORMAT:?}, found {:?}", file.format)));
        }
        let scan_id = ScanId::parse(&file.scan).map_err(|e| DocumentError::parse("$.scan", e.to_string()))?;
        HtrDocument { scan_id, page_width: file.page_width, page_height: file.page_height, regions: file.regions }
            .validated("$")
    }

    pub fn to_json_string(&self) -> String {
        let file = DocFile {
            format: DOC_FORMAT.to_string(),
            scan: self.scan_id.file_name(),
            page_width: self.page_width,
            page_height: self.page_height,
            regions: self.regions.clone(),
        };
        serde_json::to_string_pretty(&file).expect("document serializes")
    }

    /// The page-XML subset accepted by [`HtrDocument::from_str_auto`].
    pub fn to_page_xml(&self) -> String {
        xml::write_page_xml(self)
    }

    /// Canonical JSON or the page-XML subset, detected from the content.
    /// `fallback_scan` supplies the identity when the XML names no image.
    pub fn from_str_auto(s: &str, fallback_scan: Option<&ScanId>) -> Result<ParsedDocument, DocumentError> {
        let trimmed = s.trim_start_matches('\u{feff}').trim_start();
        if trimmed.starts_with('<') {
            xml::parse_page_xml(trimmed, fallback_scan)
        } else if trimmed.starts_with('{') {
            Self::from_json_str(trimmed)
        } else {
            Err(DocumentError::parse("$", "neither JSON nor XML"))
        }
    }
}

/// File stem as a scan identity, e.g. `O.R. 1887 Stad 411.xml`.
pub fn scan_id_from_path(path: &Path) -> Option<ScanId> {
    let stem = path.file_stem()?.to_string_lossy();
    ScanId::parse_stem(&stem).ok()
}

pub fn parse_document(path: &Path) -> Result<ParsedDocument, DocumentError> {
    let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io { path: path.to_path_buf(), source })?;
    HtrDocument::from_str_auto(&text, scan_id_from_path(path).as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"{
      "format": "certpipe-doc/1",
      "scan": "O.R. 1887 Stad 411.JPG",
      "page_width": 1000, "page_height": 1500,
      "regions": [
        {"id": "r1", "polygon": [[0,0],[100,0],[100,1500],[0,1500]],
         "lines": [{"id": "l1", "baseline": [[10,100],[90,100]], "text": "Stad"}]},
        {"id": "r2", "polygon": [[150,0],[950,0],[950,1500],[150,1500]],
         "lines": [
           {"id": "l2", "baseline": [[900,200],[160,200]], "text": "Heden", "confidence": 0.5},
           {"id": "l3", "baseline": [[160,300],[900,300]], "text": "den"},
           {"id": "l4", "baseline": [[160,400],[900,400]], "text": "vijfden"},
           {"id": "l5", "baseline": [[160,500],[900,500]], "text": "Mei"}
         ]}
      ]
    }"#;

    #[test]
    fn loads_canonical_json() {
        let parsed = HtrDocument::from_json_str(DOC).unwrap();
        assert_eq!(parsed.document.regions.len(), 2);
        assert_eq!(parsed.document.line_count(), 5);
        assert!(parsed.warnings.is_empty());
        // baseline re-ordered by x
        assert_eq!(parsed.document.regions[1].lines[0].baseline[0], Point::new(160, 200));
    }

    #[test]
    fn round_trips_through_json() {
        let doc = HtrDocument::from_json_str(DOC).unwrap().document;
        let again = HtrDocument::from_json_str(&doc.to_json_string()).unwrap().document;
        assert_eq!(doc, again);
    }

    #[test]
    fn truncated_json_is_a_parse_error() {
        let cut = &DOC[..DOC.len() / 2];
        assert!(matches!(HtrDocument::from_str_auto(cut, None), Err(DocumentError::Parse { .. })));
    }

    #[test]
    fn wrong_format_tag() {
        let bad = DOC.replace("certpipe-doc/1", "certpipe-doc/9");
        let err = HtrDocument::from_json_str(&bad).unwrap_err();
        assert!(err.to_string().contains("$.format"));
    }

    #[test]
    fn empty_region_is_flagged_not_fatal() {
        let doc = DOC.replace(r#""lines": [{"id": "l1", "baseline": [[10,100],[90,100]], "text": "Stad"}]"#, r#""lines": []"#);
        let parsed = HtrDocument::from_json_str(&doc).unwrap();
        assert_eq!(parsed.warnings, vec![DocWarning::EmptyRegion { region: "r1".into() }]);
    }

    #[test]
    fn duplicate_region_ids_rejected() {
        let doc = DOC.replace("\"r2\"", "\"r1\"");
        assert!(HtrDocument::from_json_str(&doc).is_err());
    }
}
