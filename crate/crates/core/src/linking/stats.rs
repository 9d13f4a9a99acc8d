use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::groups::{name_key, row_interval, LinkGroup, LinkOptions};
use super::rows::PersonRow;
use crate::extract::Role;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkStats {
    pub rows: usize,
    /// Rows with an age or a recorded birth year.
    pub linkable_rows: usize,
    /// Linkable rows that ended up in no group.
    pub singleton_rows: usize,
    pub groups: usize,
    pub suspect_groups: usize,
    /// Distinct names with at least one group.
    pub linked_names: usize,
    /// Linked names with a witness or informant member.
    pub reporter_names: usize,
    /// Reporter names whose group also holds exactly one deceased row.
    pub reporter_deceased_matches: usize,
    /// `reporter_deceased_matches / reporter_names`, 0 when there are none.
    pub reporter_match_fraction: f64,
    /// Per group with one deceased row: `"<role>->deceased"` for each other
    /// member.
    pub role_pairs: BTreeMap<String, usize>,
}

fn is_reporter(role: Role) -> bool {
    matches!(role, Role::Witness | Role::Informant)
}

pub fn link_stats(groups: &[LinkGroup], rows: &[PersonRow], options: &LinkOptions) -> LinkStats {
    let linkable_rows = rows.iter().filter(|r| row_interval(r).is_some() && !name_key(&r.name, options.any_order).is_empty()).count();
    let grouped_rows: usize = groups.iter().map(|g| g.members.len()).sum();

    let mut linked = BTreeSet::new();
    let mut reporters = BTreeSet::new();
    let mut matches = BTreeSet::new();
    let mut role_pairs = BTreeMap::new();
    for g in groups {
        linked.insert(g.key.name.as_str());
        let has_reporter = g.members.iter().any(|m| is_reporter(m.role));
        let deaths = g.members.iter().filter(|m| m.role == Role::Deceased).count();
        if has_reporter {
            reporters.insert(g.key.name.as_str());
            if deaths == 1 {
                matches.insert(g.key.name.as_str());
            }
        }
        if deaths == 1 {
            for m in g.members.iter().filter(|m| m.role != Role::Deceased) {
                *role_pairs.entry(format!("{}->deceased", m.role)).or_insert(0) += 1;
            }
        }
    }

    LinkStats {
        rows: rows.len(),
        linkable_rows,
        singleton_rows: linkable_rows.saturating_sub(grouped_rows),
        groups: groups.len(),
        suspect_groups: groups.iter().filter(|g| !g.reasons.is_empty()).count(),
        linked_names: linked.len(),
        reporter_names: reporters.len(),
        reporter_deceased_matches: matches.len(),
        reporter_match_fraction: if reporters.is_empty() { 0.0 } else { matches.len() as f64 / reporters.len() as f64 },
        role_pairs,
    }
}
