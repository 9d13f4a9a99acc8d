use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::rows::PersonRow;
use super::LinkError;
use crate::extract::Role;
use crate::text::fold;

/// Two-year birth window; `high == low + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BirthInterval {
    pub low: i32,
    pub high: i32,
}

impl BirthInterval {
    pub fn contains(&self, year: i32) -> bool {
        self.low <= year && year <= self.high
    }

    pub fn overlaps(&self, other: &BirthInterval, tolerance: u32) -> bool {
        let t = tolerance as i32;
        self.low <= other.high + t && other.low <= self.high + t
    }
}

/// `[cert_year - age - 1, cert_year - age]`: the birthday may fall before or
/// after the date of the event.
pub fn birth_interval(cert_year: i32, age: i64) -> Result<BirthInterval, LinkError> {
    if age < 0 {
        return Err(LinkError::NegativeAge(age));
    }
    let high = cert_year - age as i32;
    Ok(BirthInterval { low: high - 1, high })
}

/// Birth window of a row: from its age, else from a recorded birth year `b`
/// as `[b - 1, b]`. Rows with neither are not linkable.
pub fn row_interval(row: &PersonRow) -> Option<BirthInterval> {
    match (row.age, row.recorded_birth_year()) {
        (Some(age), _) => birth_interval(row.cert_year, age as i64).ok(),
        (None, Some(b)) => Some(BirthInterval { low: b - 1, high: b }),
        (None, None) => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkOptions {
    /// Years of slack when testing interval overlap.
    pub tolerance: u32,
    /// Compare names as token multisets instead of token sequences.
    pub any_order: bool,
}

impl Default for LinkOptions {
    fn default() -> Self {
        Self { tolerance: 0, any_order: false }
    }
}

/// Matching key of a name: folded tokens, sorted when `any_order` is set.
pub fn name_key<S: AsRef<str>>(name: &[S], any_order: bool) -> String {
    let mut tokens: Vec<String> = name.iter().map(|t| fold(t.as_ref())).filter(|t| !t.is_empty()).collect();
    if any_order {
        tokens.sort();
    }
    tokens.join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupVerdict {
    Plausible,
    Suspect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuspectReason {
    /// More than one death certificate for one person.
    MultipleDeaths,
    /// A non-deceased row dated after the person's death certificate.
    ActivityAfterDeath,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupKey {
    pub name: String,
    /// A year inside every member's birth window (with zero tolerance).
    pub birth_year: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkGroup {
    pub key: GroupKey,
    pub members: Vec<PersonRow>,
    pub verdict: GroupVerdict,
    pub reasons: Vec<SuspectReason>,
}

/// Plausibility of a group from its members alone.
pub fn validate_group(members: &[PersonRow]) -> (GroupVerdict, Vec<SuspectReason>) {
    let deaths: Vec<i32> = members.iter().filter(|m| m.role == Role::Deceased).map(|m| m.cert_year).collect();
    let mut reasons = Vec::new();
    if deaths.len() > 1 {
        reasons.push(SuspectReason::MultipleDeaths);
    }
    if let Some(&first_death) = deaths.iter().min() {
        if members.iter().any(|m| m.role != Role::Deceased && m.cert_year > first_death) {
            reasons.push(SuspectReason::ActivityAfterDeath);
        }
    }
    let verdict = if reasons.is_empty() { GroupVerdict::Plausible } else { GroupVerdict::Suspect };
    (verdict, reasons)
}

fn row_order_key(row: &PersonRow) -> impl Ord + '_ {
    (row.cert_year, row.role, &row.source, &row.name, row.age, &row.profession, &row.other)
}

/// Group linkable rows by exact name key and mutually overlapping birth
/// windows.
///
/// Per name, rows are taken in ascending window order; a row joins the open
/// group while its window overlaps every member's, otherwise it opens a new
/// group. Single-member groups are dropped. Output is sorted by key.
pub fn build_link_groups(rows: &[PersonRow], options: &LinkOptions) -> Vec<LinkGroup> {
    let mut by_name: BTreeMap<String, Vec<(BirthInterval, &PersonRow)>> = BTreeMap::new();
    for row in rows {
        if let Some(iv) = row_interval(row) {
            let key = name_key(&row.name, options.any_order);
            if !key.is_empty() {
                by_name.entry(key).or_default().push((iv, row));
            }
        }
    }

    let mut groups = Vec::new();
    for (name, mut entries) in by_name {
        entries.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| row_order_key(a.1).cmp(&row_order_key(b.1))));
        let mut current: Vec<(BirthInterval, &PersonRow)> = Vec::new();
        let mut min_high = i32::MAX;
        let mut flush = |current: &mut Vec<(BirthInterval, &PersonRow)>| {
            if current.len() >= 2 {
                let birth_year = current.iter().map(|(iv, _)| iv.low).max().expect("non-empty");
                let members: Vec<PersonRow> = current.iter().map(|(_, r)| (*r).clone()).collect();
                let (verdict, reasons) = validate_group(&members);
                groups.push(LinkGroup { key: GroupKey { name: name.clone(), birth_year }, members, verdict, reasons });
            }
            current.clear();
        };
        for (iv, row) in entries {
            if !current.is_empty() && iv.low > min_high + options.tolerance as i32 {
                flush(&mut current);
                min_high = i32::MAX;
            }
            min_high = min_high.min(iv.high);
            current.push((iv, row));
        }
        flush(&mut current);
    }
    groups.sort_by(|a, b| a.key.cmp(&b.key));
    groups
}
