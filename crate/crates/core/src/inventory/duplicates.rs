use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ScanId;

/// One scan file with its content digest. `path` is relative to the corpus
/// root, `/`-separated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScanFile {
    pub path: String,
    pub digest: String,
    pub scan_id: ScanId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DuplicateKind {
    /// Byte-identical contents.
    IdenticalFile,
    /// Different bytes, same scan identity: the certificate was scanned twice.
    DuplicateScan,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DuplicateSet {
    pub kind: DuplicateKind,
    /// Sorted, at least two.
    pub members: Vec<String>,
    /// Lexicographically smallest member.
    pub keep: String,
}

impl DuplicateSet {
    fn new(kind: DuplicateKind, mut members: Vec<String>) -> Self {
        members.sort();
        members.dedup();
        let keep = members[0].clone();
        Self { kind, members, keep }
    }

    pub fn non_survivors(&self) -> impl Iterator<Item = &str> {
        self.members.iter().filter(move |m| **m != self.keep).map(String::as_str)
    }
}

/// SHA-256 of the full file contents, lower-case hex.
pub fn digest_file(path: &Path) -> std::io::Result<String> {
    let mut file = std::fs::File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Group byte-identical files, then group the remaining distinct-content
/// files that share a scan identity.
///
/// Non-survivors of an identical set never take part in a scan set, so each
/// file belongs to at most one set per kind.
pub fn find_duplicates(files: &[ScanFile]) -> Vec<DuplicateSet> {
    let mut by_digest: BTreeMap<&str, Vec<&ScanFile>> = BTreeMap::new();
    for f in files {
        by_digest.entry(f.digest.as_str()).or_default().push(f);
    }

    let mut sets = Vec::new();
    let mut representatives: Vec<&ScanFile> = Vec::new();
    for group in by_digest.values() {
        let paths: BTreeSet<&str> = group.iter().map(|f| f.path.as_str()).collect();
        let keep = *paths.iter().next().expect("non-empty group");
        if paths.len() >= 2 {
            sets.push(DuplicateSet::new(DuplicateKind::IdenticalFile, paths.iter().map(|p| p.to_string()).collect()));
        }
        representatives.push(group.iter().find(|f| f.path == keep).expect("keep is a member"));
    }

    let mut by_scan: BTreeMap<&ScanId, Vec<&str>> = BTreeMap::new();
    for f in representatives {
        by_scan.entry(&f.scan_id).or_default().push(f.path.as_str());
    }
    for paths in by_scan.into_values().filter(|p| p.len() >= 2) {
        sets.push(DuplicateSet::new(DuplicateKind::DuplicateScan, paths.into_iter().map(String::from).collect()));
    }

    sets.sort();
    sets
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(path: &str, digest: &str, name: &str) -> ScanFile {
        ScanFile { path: path.into(), digest: digest.into(), scan_id: ScanId::parse(name).unwrap() }
    }

    #[test]
    fn identical_contents() {
        let sets = find_duplicates(&[
            file("b/O.R. 1887 Stad 001.JPG", "aa", "O.R. 1887 Stad 001.JPG"),
            file("a/O.R. 1887 Stad 002.JPG", "aa", "O.R. 1887 Stad 002.JPG"),
        ]);
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].kind, DuplicateKind::IdenticalFile);
        assert_eq!(sets[0].keep, "a/O.R. 1887 Stad 002.JPG");
    }

    #[test]
    fn same_identity_different_bytes() {
        let sets = find_duplicates(&[
            file("x/O.R. 1887 Stad 001.JPG", "aa", "O.R. 1887 Stad 001.JPG"),
            file("y/O.R. 1887 Stad 001.JPG", "bb", "O.R. 1887 Stad 001.JPG"),
        ]);
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].kind, DuplicateKind::DuplicateScan);
        assert_eq!(sets[0].members.len(), 2);
    }

    #[test]
    fn identical_copies_do_not_double_as_scan_duplicates() {
        // a and b are identical; c shares the identity with different bytes
        let sets = find_duplicates(&[
            file("a", "11", "O.R. 1887 Stad 001.JPG"),
            file("b", "11", "O.R. 1887 Stad 001.JPG"),
            file("c", "22", "O.R. 1887 Stad 001.JPG"),
        ]);
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[0].members, vec!["a", "b"]);
        assert_eq!(sets[1].members, vec!["a", "c"]);
        assert_eq!(sets[1].keep, "a");
    }

    #[test]
    fn empty_input() {
        assert!(find_duplicates(&[]).is_empty());
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(digest_bytes(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
