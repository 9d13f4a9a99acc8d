//! Reader for the subset of page-layout XML emitted by HTR tools:
//! `Page`, `ReadingOrder`, `TextRegion`, `TextLine`, `Coords`, `Baseline`,
//! `TextEquiv/Unicode`. Namespaces are ignored; everything else is skipped.

use std::collections::HashMap;
use std::sync::LazyLock;

use regex::Regex;
use roxmltree::Node;

use super::geometry::{bounding_rect, Point};
use super::model::{HtrDocument, ParsedDocument, TextLine, TextRegion};
use super::DocumentError;
use crate::inventory::ScanId;

fn is(node: &Node, name: &str) -> bool {
    node.is_element() && node.tag_name().name() == name
}

fn child<'a, 'i>(node: Node<'a, 'i>, name: &str) -> Option<Node<'a, 'i>> {
    node.children().find(|c| is(c, name))
}

fn node_path(node: Node) -> String {
    let mut parts: Vec<String> = node
        .ancestors()
        .filter(|n| n.is_element())
        .map(|n| match n.attribute("id") {
            Some(id) => format!("{}[@id={id}]", n.tag_name().name()),
            None => n.tag_name().name().to_string(),
        })
        .collect();
    parts.reverse();
    format!("/{}", parts.join("/"))
}

fn parse_points(node: Node) -> Result<Vec<Point>, DocumentError> {
    let raw = node
        .attribute("points")
        .ok_or_else(|| DocumentError::parse(node_path(node), "missing points attribute"))?;
    raw.split_whitespace()
        .map(|pair| {
            let (x, y) = pair
                .split_once(',')
                .ok_or_else(|| DocumentError::parse(node_path(node), format!("bad point {pair:?}")))?;
            let x: f64 = x.trim().parse().map_err(|_| DocumentError::parse(node_path(node), format!("bad x in {pair:?}")))?;
            let y: f64 = y.trim().parse().map_err(|_| DocumentError::parse(node_path(node), format!("bad y in {pair:?}")))?;
            Ok(Point::new(x.round() as i64, y.round() as i64))
        })
        .collect()
}

fn custom_reading_order(node: Node) -> Option<u32> {
    static RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"readingOrder\s*\{[^}]*index\s*:\s*(\d+)").unwrap());
    let custom = node.attribute("custom")?;
    RE.captures(custom)?.get(1)?.as_str().parse().ok()
}

fn text_of(node: Node) -> (String, Option<f32>) {
    match child(node, "TextEquiv") {
        Some(equiv) => {
            let text = child(equiv, "Unicode").and_then(|u| u.text()).unwrap_or("").to_string();
            let conf = equiv.attribute("conf").and_then(|c| c.parse::<f32>().ok());
            (text, conf)
        }
        None => (String::new(), None),
    }
}

fn parse_line(node: Node) -> Result<TextLine, DocumentError> {
    let id = node
        .attribute("id")
        .ok_or_else(|| DocumentError::parse(node_path(node), "TextLine without id"))?
        .to_string();
    let baseline = match child(node, "Baseline") {
        Some(b) => parse_points(b)?,
        None => {
            // fall back to the bottom edge of the line polygon
            let coords = child(node, "Coords")
                .ok_or_else(|| DocumentError::parse(node_path(node), "TextLine without Baseline or Coords"))?;
            let rect = bounding_rect(&parse_points(coords)?)
                .ok_or_else(|| DocumentError::parse(node_path(coords), "empty Coords"))?;
            vec![Point::new(rect.left, rect.bottom()), Point::new(rect.right(), rect.bottom())]
        }
    };
    let (text, confidence) = text_of(node);
    Ok(TextLine { id, baseline, text, confidence })
}

pub(crate) fn parse_page_xml(s: &str, fallback_scan: Option<&ScanId>) -> Result<ParsedDocument, DocumentError> {
    let tree = roxmltree::Document::parse(s).map_err(|e| DocumentError::parse("/", e.to_string()))?;
    let page = tree
        .descendants()
        .find(|n| is(n, "Page"))
        .ok_or_else(|| DocumentError::parse("/", "no Page element"))?;

    let dim = |attr: &str| -> Result<u32, DocumentError> {
        page.attribute(attr)
            .ok_or_else(|| DocumentError::parse(node_path(page), format!("missing {attr}")))?
            .parse()
            .map_err(|_| DocumentError::parse(node_path(page), format!("invalid {attr}")))
    };
    let page_width = dim("imageWidth")?;
    let page_height = dim("imageHeight")?;

    let scan_id = match page.attribute("imageFilename").map(ScanId::parse) {
        Some(Ok(id)) => id,
        Some(Err(e)) => match fallback_scan {
            Some(id) => id.clone(),
            None => return Err(DocumentError::parse(node_path(page), e.to_string())),
        },
        None => fallback_scan
            .cloned()
            .ok_or_else(|| DocumentError::parse(node_path(page), "missing imageFilename"))?,
    };

    let declared: HashMap<&str, u32> = page
        .descendants()
        .filter(|n| is(n, "RegionRefIndexed"))
        .filter_map(|n| Some((n.attribute("regionRef")?, n.attribute("index")?.parse().ok()?)))
        .collect();

    let mut regions = Vec::new();
    for node in page.descendants().filter(|n| is(n, "TextRegion")) {
        let id = node
            .attribute("id")
            .ok_or_else(|| DocumentError::parse(node_path(node), "TextRegion without id"))?
            .to_string();
        let coords = child(node, "Coords").ok_or_else(|| DocumentError::parse(node_path(node), "missing Coords"))?;
        let polygon = parse_points(coords)?;
        let declared_order = declared.get(id.as_str()).copied().or_else(|| custom_reading_order(node));
        let lines = node.children().filter(|c| is(c, "TextLine")).map(parse_line).collect::<Result<Vec<_>, _>>()?;
        regions.push(TextRegion { id, polygon, declared_order, lines });
    }

    HtrDocument { scan_id, page_width, page_height, regions }.validated("/PcGts/Page")
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn points(ps: &[Point]) -> String {
    ps.iter().map(|p| format!("{},{}", p.x, p.y)).collect::<Vec<_>>().join(" ")
}

/// Serialize to the same XML subset [`parse_page_xml`] reads. Declared
/// region order goes into a `ReadingOrder` group.
pub(crate) fn write_page_xml(doc: &HtrDocument) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str("<PcGts xmlns=\"http://schema.primaresearch.org/PAGE/gts/pagecontent/2013-07-15\">\n");
    let _ = writeln!(
        s,
        "  <Page imageFilename=\"{}\" imageWidth=\"{}\" imageHeight=\"{}\">",
        escape(&doc.scan_id.file_name()),
        doc.page_width,
        doc.page_height
    );
    let declared: Vec<(&str, u32)> =
        doc.regions.iter().filter_map(|r| Some((r.id.as_str(), r.declared_order?))).collect();
    if !declared.is_empty() {
        s.push_str("    <ReadingOrder><OrderedGroup id=\"ro\">\n");
        for (id, index) in declared {
            let _ = writeln!(s, "      <RegionRefIndexed index=\"{index}\" regionRef=\"{}\"/>", escape(id));
        }
        s.push_str("    </OrderedGroup></ReadingOrder>\n");
    }
    for region in &doc.regions {
        let _ = writeln!(s, "    <TextRegion id=\"{}\">", escape(&region.id));
        let _ = writeln!(s, "      <Coords points=\"{}\"/>", points(&region.polygon));
        for line in &region.lines {
            let _ = writeln!(s, "      <TextLine id=\"{}\">", escape(&line.id));
            let _ = writeln!(s, "        <Baseline points=\"{}\"/>", points(&line.baseline));
            let conf = line.confidence.map(|c| format!(" conf=\"{c}\"")).unwrap_or_default();
            let _ = writeln!(s, "        <TextEquiv{conf}><Unicode>{}</Unicode></TextEquiv>", escape(&line.text));
            s.push_str("      </TextLine>\n");
        }
        s.push_str("    </TextRegion>\n");
    }
    s.push_str("  </Page>\n</PcGts>\n");
    s
}
