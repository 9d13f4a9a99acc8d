#![cfg(feature = "cli")]

mod common;

use std::path::Path;
use std::process::{Command, Output};

use certpipe::eval::parse_report_csv;
use certpipe::inventory::InventoryReport;
use certpipe::linking::LinkGroup;
use certpipe::pipeline::{RunSummary, CONFIG_ENV, EVENTS_FILE, RECORDS_FILE};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{fixture, plant_scan_corpus};

fn certpipe(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_certpipe"))
        .args(args)
        .current_dir(cwd)
        .env_remove(CONFIG_ENV)
        .env_remove("CERTPIPE_LOG")
        .env_remove("CERTPIPE_TOKEN")
        .output()
        .unwrap()
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let out = certpipe(args, cwd);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn staged_commands_match_a_full_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["synth", "corpus-dir", "--seed", "7", "--documents", "30"], d);
    let cfg = "corpus-dir/certpipe.toml";

    let summary: RunSummary = serde_json::from_str(&ok(&["--config", cfg, "run", "--workers", "2"], d)).unwrap();
    assert_eq!(summary.records, 30);
    assert!(summary.eval.is_some());

    ok(&["--config", cfg, "extract", "corpus-dir/corpus", "--out", "staged/raw.jsonl"], d);
    ok(&["--config", cfg, "correct", "staged/raw.jsonl", "--out", "staged/records.jsonl"], d);
    let staged = std::fs::read(d.join("staged/records.jsonl")).unwrap();
    let full = std::fs::read(d.join("corpus-dir/out").join(RECORDS_FILE)).unwrap();
    assert!(staged == full, "staged records differ from the full run");

    ok(&["link", "staged/records.jsonl", "--out", "staged/groups.json", "--stats", "staged/stats.json"], d);
    let groups: Vec<LinkGroup> = serde_json::from_slice(&std::fs::read(d.join("staged/groups.json")).unwrap()).unwrap();
    assert_eq!(groups.len(), summary.groups);

    let csv = ok(
        &["eval", "--gold", "corpus-dir/gold.csv", "--pred", "staged/records.jsonl", "--metric", "dates", "--format", "csv"],
        d,
    );
    let reports = parse_report_csv(&csv).unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0].n, 30);
    let text = ok(&["eval", "--gold", "corpus-dir/gold.csv", "--pred", "staged/records.jsonl"], d);
    assert!(text.contains("names_corrected") && text.contains("CER"));

    ok(&["ingest", "corpus-dir/corpus", "--out", "staged/docs"], d);
    assert_eq!(std::fs::read_dir(d.join("staged/docs")).unwrap().count(), 30);
}

#[test]
fn example_csv_links_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let table = fixture("linking_example.csv");
    let stats = ok(&["link", table.to_str().unwrap(), "--out", "groups.json"], dir.path());
    let stats: serde_json::Value = serde_json::from_str(&stats).unwrap();
    assert_eq!((stats["groups"].as_u64(), stats["suspect_groups"].as_u64()), (Some(2), Some(1)));
}

#[test]
fn inventory_and_clean() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().join("scans");
    let planted = plant_scan_corpus(&mut ChaCha8Rng::seed_from_u64(5), &root);
    let stdout = ok(&["inventory", "scans", "--json", "inventory.json"], dir.path());
    let sets = planted.identical.len() + planted.rescans.len();
    assert!(stdout.contains(&format!("{sets} duplicate sets")), "{stdout}");
    let report: InventoryReport =
        serde_json::from_slice(&std::fs::read(dir.path().join("inventory.json")).unwrap()).unwrap();
    assert_eq!(report.duplicate_sets.len(), sets);

    let dry = ok(&["clean", "scans"], dir.path());
    assert_eq!(dry.lines().count(), sets);
    ok(&["clean", "scans", "--apply", "--log", "clean.jsonl"], dir.path());
    assert!(ok(&["inventory", "scans"], dir.path()).contains("0 duplicate sets"));
}

#[test]
fn merge_applies_review_events() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    common::copy_dir(&fixture("synthetic"), d);
    std::fs::remove_dir_all(d.join("out")).ok();
    ok(&["--config", "certpipe.toml", "run"], d);
    let items: Vec<serde_json::Value> = certpipe::jsonio::read_jsonl(&d.join("out/review/items.jsonl")).unwrap();
    let event = serde_json::json!({
        "schema": "certpipe-review/1", "seq": 1, "item_id": items[0]["id"], "action": "correct",
        "field": "deceased_name", "old_value": "", "new_value": "Rosa Koster", "reviewer": "r", "timestamp": "t"
    });
    std::fs::write(d.join("out/review").join(EVENTS_FILE), format!("{event}\n")).unwrap();
    let out = certpipe(
        &["merge", "out/records.jsonl", "--store", "out/review", "--lexicon", "names.csv", "--out", "merged.jsonl",
          "--lexicon-out", "names2.csv"],
        d,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 events, 2 confirmed tokens"));
    let lexicon = certpipe::lexicon::load_lexicon(&d.join("names2.csv")).unwrap().lexicon;
    assert!(lexicon.contains("Koster"));

    let out = certpipe(&["review-serve", "--store", "out/review", "--bind", "0.0.0.0:0"], d);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("without a token"));
}

#[test]
fn failures_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = certpipe(&["inventory", "absent"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert!(!certpipe(&["--config", "absent.toml", "run"], dir.path()).status.success());
    assert!(!certpipe(&["eval", "--gold", "g.csv", "--pred", "p.jsonl", "--format", "xml"], dir.path()).status.success());
    assert!(!certpipe(&["review-serve", "--store", "absent"], dir.path()).status.success());
}
