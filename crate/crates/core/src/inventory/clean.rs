use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::duplicates::DuplicateKind;
use super::report::{InventoryReport, SET_ASIDE_DIR};
use super::InventoryError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CleanMode {
    DryRun,
    Apply,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum CleanAction {
    /// Remove a byte-identical copy.
    Delete { path: String, duplicate_of: String },
    /// Set a second scan of the same certificate aside.
    Move { from: String, to: String, duplicate_of: String },
}

impl CleanAction {
    fn source(&self) -> &str {
        match self {
            CleanAction::Delete { path, .. } => path,
            CleanAction::Move { from, .. } => from,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanPlan {
    pub mode: CleanMode,
    pub actions: Vec<CleanAction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionStatus {
    Done,
    AlreadyDone,
    Failed,
}

/// One line of the action log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionLogEntry {
    pub seq: usize,
    #[serde(flatten)]
    pub action: CleanAction,
    pub status: ActionStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Deletions for identical copies and moves into `x-duplicates/` for second
/// scans. Survivors are never touched.
pub fn plan_clean(report: &InventoryReport) -> Vec<CleanAction> {
    let mut actions = Vec::new();
    for set in &report.duplicate_sets {
        for path in set.non_survivors() {
            actions.push(match set.kind {
                DuplicateKind::IdenticalFile => {
                    CleanAction::Delete { path: path.to_string(), duplicate_of: set.keep.clone() }
                }
                DuplicateKind::DuplicateScan => CleanAction::Move {
                    from: path.to_string(),
                    to: format!("{SET_ASIDE_DIR}/{path}"),
                    duplicate_of: set.keep.clone(),
                },
            });
        }
    }
    // a file can be in both an identical set and a scan set only as a survivor,
    // so sources are unique; sort for a stable log
    actions.sort_by(|a, b| a.source().cmp(b.source()));
    actions
}

fn abs(root: &Path, rel: &str) -> PathBuf {
    rel.split('/').fold(root.to_path_buf(), |p, c| p.join(c))
}

fn execute(root: &Path, action: &CleanAction) -> std::io::Result<ActionStatus> {
    match action {
        CleanAction::Delete { path, .. } => {
            let p = abs(root, path);
            if !p.exists() {
                return Ok(ActionStatus::AlreadyDone);
            }
            std::fs::remove_file(p)?;
        }
        CleanAction::Move { from, to, .. } => {
            let src = abs(root, from);
            let dst = abs(root, to);
            if !src.exists() && dst.exists() {
                return Ok(ActionStatus::AlreadyDone);
            }
            if dst.exists() {
                return Err(std::io::Error::new(
                    std::io::ErrorKind::AlreadyExists,
                    format!("{} already exists", dst.display()),
                ));
            }
            if let Some(parent) = dst.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::rename(src, dst)?;
        }
    }
    Ok(ActionStatus::Done)
}

/// Plan, and in apply mode execute, the clean-up for `report`.
///
/// Apply runs strictly in plan order and appends one JSON line per action to
/// `log`. A failure stops the run; actions already performed are recognised
/// as `already_done` when the same plan is applied again.
pub fn clean(
    root: &Path,
    report: &InventoryReport,
    mode: CleanMode,
    log: Option<&Path>,
) -> Result<CleanPlan, InventoryError> {
    let actions = plan_clean(report);
    if mode == CleanMode::DryRun {
        return Ok(CleanPlan { mode, actions });
    }

    let mut log_file = match log {
        Some(path) => {
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(|source| InventoryError::Filesystem {
                    path: parent.to_path_buf(),
                    completed: 0,
                    source,
                })?;
            }
            Some(OpenOptions::new().create(true).append(true).open(path).map_err(|source| {
                InventoryError::Filesystem { path: path.to_path_buf(), completed: 0, source }
            })?)
        }
        None => None,
    };
    let mut write_log = |entry: &ActionLogEntry| -> Result<(), InventoryError> {
        if let Some(f) = log_file.as_mut() {
            let line = serde_json::to_string(entry).expect("log entries serialize");
            writeln!(f, "{line}").map_err(|source| InventoryError::Filesystem {
                path: log.expect("log file implies path").to_path_buf(),
                completed: entry.seq,
                source,
            })?;
        }
        Ok(())
    };

    for (seq, action) in actions.iter().enumerate() {
        match execute(root, action) {
            Ok(status) => {
                log::info!("clean: {:?} {}", status, action.source());
                write_log(&ActionLogEntry { seq, action: action.clone(), status, error: None })?;
            }
            Err(source) => {
                write_log(&ActionLogEntry {
                    seq,
                    action: action.clone(),
                    status: ActionStatus::Failed,
                    error: Some(source.to_string()),
                })?;
                return Err(InventoryError::Filesystem { path: abs(root, action.source()), completed: seq, source });
            }
        }
    }
    Ok(CleanPlan { mode, actions })
}
