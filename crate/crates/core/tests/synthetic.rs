use std::collections::{BTreeMap, BTreeSet};

use certpipe::extract::{ExtractedRecord, Provenance, Role};
use certpipe::jsonio::read_jsonl;
use certpipe::pipeline::{run_pipeline, PipelineConfig, ReviewStore};
use certpipe::synth::{generate, DEFAULT_DOCUMENTS, DEFAULT_SEED};

#[test]
fn pipeline_recovers_synthetic_truth() {
    for seed in [DEFAULT_SEED, 1, 2, 3, 42, 1831, 1950] {
        check_seed(seed);
    }
}

fn check_seed(seed: u64) {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generate(seed, DEFAULT_DOCUMENTS);
    corpus.write(dir.path()).unwrap();
    let config = PipelineConfig::load(&dir.path().join("certpipe.toml")).unwrap();
    let summary = run_pipeline(&config).unwrap();
    assert_eq!(summary.records, DEFAULT_DOCUMENTS);
    let records: Vec<ExtractedRecord> = read_jsonl(&dir.path().join("out/records.jsonl")).unwrap();
    let by_scan: BTreeMap<_, _> = records.iter().map(|r| (r.scan_id.clone(), r)).collect();
    let mut problems = Vec::new();
    for d in &corpus.documents {
        let t = &d.truth;
        let r = by_scan[&t.scan];
        if r.flags != t.expected_flags {
            problems.push(format!("{}: flags {:?} != {:?}\n  {}", t.scan, r.flags, t.expected_flags, r.text));
        }
        if t.defect.is_none() {
            let date = r.top_date().and_then(|d| d.date());
            if date != Some(t.death_date) {
                problems.push(format!("{}: date {:?} != {}\n  {}", t.scan, date, t.death_date, r.text));
            }
            let name = r.top_name().map(|m| m.name());
            if name != t.deceased {
                problems.push(format!("{}: name {:?} != {:?}\n  {}", t.scan, name, t.deceased, r.text));
            }
        }
        let mut found: Vec<(String, Role, Option<u32>, Option<String>)> = r
            .deceased_candidates
            .iter()
            .filter(|m| m.provenance == Provenance::Extracted)
            .take(1)
            .chain(&r.other_mentions)
            .map(|m| (m.name(), m.role, m.age, m.profession.clone()))
            .collect();
        let mut want: Vec<_> =
            t.mentions.iter().map(|m| (m.name.clone(), m.role, m.age, m.profession.clone())).collect();
        found.sort();
        want.sort();
        if found != want && t.defect.is_none() {
            problems.push(format!("{}: mentions\n  {:?}\n  {:?}", t.scan, found, want));
        }
    }
    assert!(problems.is_empty(), "seed {seed}:\n{}", problems.join("\n"));

    let store = ReviewStore::open(&config.review_dir()).unwrap();
    let queued: BTreeSet<String> = store.snapshot().items().map(|i| i.scan_id.key()).collect();
    let planted: BTreeSet<String> =
        corpus.documents.iter().filter(|d| d.truth.in_review_queue()).map(|d| d.truth.scan.key()).collect();
    assert_eq!(queued, planted, "seed {seed}");
}

#[test]
fn bundled_fixture_matches_generator() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic");
    let files = generate(DEFAULT_SEED, DEFAULT_DOCUMENTS).files();
    for (rel, body) in &files {
        let on_disk = std::fs::read_to_string(root.join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"));
        assert_eq!(&on_disk, body, "{rel} differs; regenerate with `certpipe synth fixtures/synthetic`");
    }
    let corpus: BTreeSet<String> = std::fs::read_dir(root.join("corpus"))
        .unwrap()
        .map(|e| format!("corpus/{}", e.unwrap().file_name().to_string_lossy()))
        .collect();
    let expected: BTreeSet<String> = files.iter().map(|f| f.0.clone()).filter(|p| p.starts_with("corpus/")).collect();
    assert_eq!(corpus, expected);
}
