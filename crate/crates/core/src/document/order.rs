use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::layout::LayoutClass;
use super::model::{HtrDocument, TextLine, TextRegion};
use super::DocumentError;

/// Region indices in reading order.
///
/// A declared order is used when every region has one and the values are
/// distinct; otherwise regions sort by left edge, then top edge, then id.
pub fn region_order(doc: &HtrDocument) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..doc.regions.len()).collect();
    let declared: Option<Vec<u32>> = doc.regions.iter().map(|r| r.declared_order).collect();
    let total = declared.as_ref().is_some_and(|d| d.iter().collect::<BTreeSet<_>>().len() == d.len());
    if total {
        idx.sort_by_key(|&i| doc.regions[i].declared_order);
    } else {
        idx.sort_by(|&a, &b| {
            let (ra, rb) = (doc.regions[a].rect(), doc.regions[b].rect());
            (ra.left, ra.top, &doc.regions[a].id).cmp(&(rb.left, rb.top, &doc.regions[b].id))
        });
    }
    idx
}

/// Lines of one region sorted by baseline midpoint: y, then x, then id.
pub fn ordered_lines(region: &TextRegion) -> Vec<&TextLine> {
    let mut lines: Vec<&TextLine> = region.lines.iter().collect();
    lines.sort_by(|a, b| {
        let (ax, ay) = a.anchor2();
        let (bx, by) = b.anchor2();
        (ay, ax, &a.id).cmp(&(by, bx, &b.id))
    });
    lines
}

/// Every line of the document in reading order, tagged with its region id.
pub fn reorder_lines(doc: &HtrDocument) -> Vec<(String, TextLine)> {
    region_order(doc)
        .into_iter()
        .flat_map(|i| {
            let region = &doc.regions[i];
            ordered_lines(region).into_iter().map(move |l| (region.id.clone(), l.clone()))
        })
        .collect()
}

/// A copy of `doc` with regions and lines stored in reading order.
pub fn reordered(doc: &HtrDocument) -> HtrDocument {
    let regions = region_order(doc)
        .into_iter()
        .map(|i| {
            let region = &doc.regions[i];
            TextRegion { lines: ordered_lines(region).into_iter().cloned().collect(), ..region.clone() }
        })
        .collect();
    HtrDocument { regions, ..doc.clone() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginText {
    pub region_id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainText {
    pub center_region_id: String,
    pub center_text: String,
    pub margin_texts: Vec<MarginText>,
}

fn region_text(region: &TextRegion) -> String {
    ordered_lines(region).iter().map(|l| l.text.as_str()).collect::<Vec<_>>().join("\n")
}

/// Center-column text plus one string per other region that has lines.
pub fn main_text(doc: &HtrDocument, layout: &LayoutClass) -> Result<MainText, DocumentError> {
    let center_id = layout.center_region_id.as_deref().ok_or(DocumentError::NoRegions)?;
    let center = doc.region(center_id).ok_or(DocumentError::NoRegions)?;
    let margin_texts = region_order(doc)
        .into_iter()
        .map(|i| &doc.regions[i])
        .filter(|r| r.id != center_id && !r.lines.is_empty())
        .map(|r| MarginText { region_id: r.id.clone(), text: region_text(r) })
        .collect();
    Ok(MainText { center_region_id: center_id.to_string(), center_text: region_text(center), margin_texts })
}
