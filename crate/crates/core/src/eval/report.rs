use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::metrics::{AccuracyReport, CerReport};
use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Text,
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "table" | "text-table" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(EvalError::UnknownFormat(other.to_string())),
        }
    }
}

fn pct(rate: f64) -> String {
    format!("{:.1}%", rate * 100.0)
}

fn text_table(reports: &[AccuracyReport]) -> String {
    let with_partial = reports.iter().any(|r| r.partial.is_some());
    let with_corrected = reports.iter().any(|r| r.corrected.is_some());
    let mut header = vec!["Metric".to_string(), "Found".into(), "Exact".into()];
    if with_partial {
        header.push("Partial".into());
    }
    if with_corrected {
        header.push("Corrected".into());
    }
    let mut rows = vec![header];
    for r in reports {
        let mut row = vec![format!("{} (n={})", r.metric, r.n), pct(r.found_rate), pct(r.exact_rate)];
        if with_partial {
            row.push(r.partial_rate.map_or("-".into(), pct));
        }
        if with_corrected {
            row.push(r.corrected_rate.map_or("-".into(), pct));
        }
        rows.push(row);
    }
    let widths: Vec<usize> =
        (0..rows[0].len()).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (cell, w))| if c == 0 { format!("{cell:<w$}") } else { format!("{cell:>w$}") })
            .collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        if i == 0 {
            let _ = writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
        }
    }
    out
}

const CSV_HEADER: [&str; 7] = ["metric", "n", "found", "exact", "partial", "corrected", "max_partial_distance"];

fn opt(v: Option<usize>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_table(reports: &[AccuracyReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in reports {
        w.write_record([
            r.metric.clone(),
            r.n.to_string(),
            r.found.to_string(),
            r.exact.to_string(),
            opt(r.partial),
            opt(r.corrected),
            opt(r.max_partial_distance),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

/// Render accuracy reports as an aligned table, a JSON array or CSV counts.
pub fn emit_report(reports: &[AccuracyReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => text_table(reports),
        ReportFormat::Json => crate::jsonio::to_sorted_pretty(&reports) + "\n",
        ReportFormat::Csv => csv_table(reports),
    }
}

/// Read back the CSV written by [`emit_report`].
pub fn parse_report_csv(s: &str) -> Result<Vec<AccuracyReport>, EvalError> {
    let mut reader = csv::Reader::from_reader(s.as_bytes());
    let headers = reader.headers().map_err(|e| EvalError::Csv(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(EvalError::Csv(format!("unexpected header {:?}", headers)));
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| EvalError::Csv(e.to_string()))?;
        let num = |i: usize| -> Result<usize, EvalError> {
            record[i].parse().map_err(|_| EvalError::Csv(format!("bad number {:?}", &record[i])))
        };
        let maybe = |i: usize| -> Result<Option<usize>, EvalError> {
            if record[i].is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        out.push(AccuracyReport::from_counts(&record[0], num(1)?, num(2)?, num(3)?, maybe(4)?, maybe(5)?, maybe(6)?));
    }
    Ok(out)
}

/// Aggregate line plus one line per document.
pub fn emit_cer(report: &CerReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => crate::jsonio::to_sorted_pretty(report) + "\n",
        ReportFormat::Text => {
            let mut out = format!(
                "CER {:.4} over {} documents ({} edits / {} characters)\n",
                report.aggregate, report.n, report.total_edits, report.total_reference_chars
            );
            for d in &report.documents {
                let _ = writeln!(out, "  {:.4}  {}", d.cer, d.id);
            }
            out
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["id", "edits", "reference_chars", "cer"]).expect("in-memory write");
            for d in &report.documents {
                w.write_record([d.id.clone(), d.edits.to_string(), d.reference_chars.to_string(), d.cer.to_string()])
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
        }
    }
}
