//! Deterministic JSON and line-delimited JSON helpers.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum JsonIoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} line {line}: {source}")]
    Json {
        path: String,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

fn sorted_value<T: Serialize + ?Sized>(value: &T) -> serde_json::Value {
    // serde_json's default map is a BTreeMap, so a round trip sorts keys
    serde_json::to_value(value).expect("serializable value")
}

/// Pretty JSON with object keys sorted.
pub fn to_sorted_pretty<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(&sorted_value(value)).expect("serializable value")
}

/// Single-line JSON with object keys sorted.
pub fn to_sorted_line<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(&sorted_value(value)).expect("serializable value")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> JsonIoError + '_ {
    move |source| JsonIoError::Io { path: path.display().to_string(), source }
}

/// Write pretty sorted JSON plus a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), JsonIoError> {
    std::fs::write(path, to_sorted_pretty(value) + "\n").map_err(io_err(path))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, JsonIoError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| JsonIoError::Json { path: path.display().to_string(), line: 0, source })
}

/// One sorted JSON object per line.
pub fn jsonl_string<T: Serialize>(items: &[T]) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&to_sorted_line(item));
        out.push('\n');
    }
    out
}

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<(), JsonIoError> {
    std::fs::write(path, jsonl_string(items)).map_err(io_err(path))
}

/// Append one line and flush it.
pub fn append_jsonl<T: Serialize>(file: &mut std::fs::File, path: &Path, item: &T) -> Result<(), JsonIoError> {
    let mut line = to_sorted_line(item);
    line.push('\n');
    file.write_all(line.as_bytes()).and_then(|_| file.sync_data()).map_err(io_err(path))
}

pub fn parse_jsonl<T: DeserializeOwned>(text: &str, path: &str) -> Result<Vec<T>, JsonIoError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|source| JsonIoError::Json { path: path.to_string(), line: i + 1, source })
        })
        .collect()
}

/// Read a JSONL file; a missing file reads as empty.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, JsonIoError> {
    let file = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(io_err(path)(e)),
    };
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line)
            .map_err(|source| JsonIoError::Json { path: path.display().to_string(), line: i + 1, source })?;
        out.push(item);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn keys_come_out_sorted() {
        let m: HashMap<&str, i32> = [("b", 1), ("a", 2), ("c", 3)].into_iter().collect();
        assert_eq!(to_sorted_line(&m), r#"{"a":2,"b":1,"c":3}"#);
    }

    #[test]
    fn jsonl_round_trip() {
        let items = vec![vec![1, 2], vec![3]];
        let back: Vec<Vec<i32>> = parse_jsonl(&jsonl_string(&items), "mem").unwrap();
        assert_eq!(back, items);
    }
}
