use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::scan_id::{District, DistrictGroup, FIRST_YEAR, LAST_YEAR};
use super::ScanNameError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Era {
    /// 1831–1863
    NineDistricts,
    /// 1864–1924
    FiveDistricts,
    /// 1925–1950
    ThreeDistricts,
}

impl Era {
    pub fn for_year(year: i32) -> Result<Era, ScanNameError> {
        match year {
            1831..=1863 => Ok(Era::NineDistricts),
            1864..=1924 => Ok(Era::FiveDistricts),
            1925..=1950 => Ok(Era::ThreeDistricts),
            _ => Err(ScanNameError::YearOutOfRange(year)),
        }
    }

    pub fn years(self) -> std::ops::RangeInclusive<i32> {
        match self {
            Era::NineDistricts => FIRST_YEAR..=1863,
            Era::FiveDistricts => 1864..=1924,
            Era::ThreeDistricts => 1925..=LAST_YEAR,
        }
    }

    pub fn district_count(self) -> u8 {
        match self {
            Era::NineDistricts => 9,
            Era::FiveDistricts => 5,
            Era::ThreeDistricts => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistrictSchema {
    pub era: Era,
    /// City plus `Numbered(2..=count)`.
    pub expected_labels: BTreeSet<District>,
}

pub fn district_schema(year: i32) -> Result<DistrictSchema, ScanNameError> {
    let era = Era::for_year(year)?;
    let mut expected_labels = BTreeSet::from([District::City]);
    expected_labels.extend((2..=era.district_count()).map(District::Numbered));
    Ok(DistrictSchema { era, expected_labels })
}

/// Mapping between grouped outer districts (1831–1840) and numbered ones.
///
/// The default numbers east to west: Oost 1–3, Midden 1–2, West 3–1 become
/// districts 2–9. Swappable because at least one folder reversed West 1/3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    entries: Vec<(DistrictGroup, u8, u8)>,
}

impl Default for GroupTable {
    fn default() -> Self {
        use DistrictGroup::*;
        Self {
            entries: vec![
                (Oost, 1, 2),
                (Oost, 2, 3),
                (Oost, 3, 4),
                (Midden, 1, 5),
                (Midden, 2, 6),
                (West, 3, 7),
                (West, 2, 8),
                (West, 1, 9),
            ],
        }
    }
}

impl GroupTable {
    pub fn from_entries(entries: Vec<(DistrictGroup, u8, u8)>) -> Self {
        Self { entries }
    }

    pub fn to_numbered(&self, group: DistrictGroup, number: u8) -> Option<u8> {
        self.entries.iter().find(|(g, n, _)| *g == group && *n == number).map(|e| e.2)
    }

    pub fn to_grouped(&self, numbered: u8) -> Option<(DistrictGroup, u8)> {
        self.entries.iter().find(|e| e.2 == numbered).map(|e| (e.0, e.1))
    }

    /// Label used for schema comparison. Grouped labels without a mapping are
    /// returned unchanged and so always count as extra.
    pub fn normalize(&self, district: District) -> District {
        match district {
            District::Grouped { group, number } => {
                self.to_numbered(group, number).map(District::Numbered).unwrap_or(district)
            }
            other => other,
        }
    }
}
