use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ScanNameError;

pub const FIRST_YEAR: i32 = 1831;
pub const LAST_YEAR: i32 = 1950;
/// Last year in which outer districts were organised in groups.
pub const LAST_GROUPED_YEAR: i32 = 1840;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DistrictGroup {
    Midden,
    Oost,
    West,
}

impl DistrictGroup {
    pub const ALL: [DistrictGroup; 3] = [DistrictGroup::Midden, DistrictGroup::Oost, DistrictGroup::West];

    pub fn as_str(self) -> &'static str {
        match self {
            DistrictGroup::Midden => "Midden",
            DistrictGroup::Oost => "Oost",
            DistrictGroup::West => "West",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "midden" => Some(DistrictGroup::Midden),
            "oost" => Some(DistrictGroup::Oost),
            "west" => Some(DistrictGroup::West),
            _ => None,
        }
    }
}

/// A civil-registry district label as it appears in folder and file names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum District {
    /// `Stad`, the capital.
    City,
    /// `Buiten Ne distr`, N in 2..=10.
    Numbered(u8),
    /// `Buiten <Group> Ne distr`, only used 1831–1840.
    Grouped { group: DistrictGroup, number: u8 },
}

impl District {
    pub fn is_grouped(&self) -> bool {
        matches!(self, District::Grouped { .. })
    }

    /// Short identifier for keys and URLs: `stad`, `d9`, `west2`.
    pub fn slug(&self) -> String {
        match self {
            District::City => "stad".into(),
            District::Numbered(n) => format!("d{n}"),
            District::Grouped { group, number } => format!("{}{number}", group.as_str().to_ascii_lowercase()),
        }
    }
}

impl fmt::Display for District {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            District::City => f.write_str("Stad"),
            District::Numbered(n) => write!(f, "Buiten {n}e distr"),
            District::Grouped { group, number } => write!(f, "Buiten {} {number}e distr", group.as_str()),
        }
    }
}

impl FromStr for District {
    type Err = ScanNameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        static RE: LazyLock<Regex> = LazyLock::new(|| {
            Regex::new(r"(?i)^(?:(stad)|buiten\s+(?:(midden|oost|west)\s+)?(\d{1,2})e\s+distr)$").unwrap()
        });
        let caps = RE.captures(s.trim()).ok_or_else(|| ScanNameError::MalformedName(s.to_string()))?;
        if caps.get(1).is_some() {
            return Ok(District::City);
        }
        let number: u8 = caps[3].parse().map_err(|_| ScanNameError::InvalidDistrict(s.to_string()))?;
        match caps.get(2) {
            Some(g) => {
                let group = DistrictGroup::parse(g.as_str()).expect("regex alternation");
                if !(1..=3).contains(&number) {
                    return Err(ScanNameError::InvalidDistrict(s.to_string()));
                }
                Ok(District::Grouped { group, number })
            }
            None => {
                if !(2..=10).contains(&number) {
                    return Err(ScanNameError::InvalidDistrict(s.to_string()));
                }
                Ok(District::Numbered(number))
            }
        }
    }
}

impl Serialize for District {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for District {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_year(year: i32) -> Result<(), ScanNameError> {
    if (FIRST_YEAR..=LAST_YEAR).contains(&year) {
        Ok(())
    } else {
        Err(ScanNameError::YearOutOfRange(year))
    }
}

fn check_district_year(year: i32, district: &District) -> Result<(), ScanNameError> {
    if district.is_grouped() && year > LAST_GROUPED_YEAR {
        return Err(ScanNameError::GroupedOutsideEra { year, district: district.to_string() });
    }
    Ok(())
}

/// Identity of one certificate scan, e.g. `O.R. 1887 Stad 411.JPG`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScanId {
    pub year: i32,
    pub district: District,
    pub number: u32,
    /// Lower-case letter marking a note or letter attached to the certificate.
    pub note_suffix: Option<char>,
}

impl ScanId {
    pub fn new(year: i32, district: District, number: u32, note_suffix: Option<char>) -> Result<Self, ScanNameError> {
        check_year(year)?;
        check_district_year(year, &district)?;
        if number == 0 {
            return Err(ScanNameError::NumberZero);
        }
        if let Some(c) = note_suffix {
            if !c.is_ascii_lowercase() {
                return Err(ScanNameError::MalformedName(format!("note suffix {c:?}")));
            }
        }
        Ok(Self { year, district, number, note_suffix })
    }

    /// Parse a scan file name. Extension matching is case-insensitive and
    /// runs of spaces are accepted.
    pub fn parse(name: &str) -> Result<Self, ScanNameError> {
        let (stem, _) = split_scan_extension(name).ok_or_else(|| ScanNameError::MalformedName(name.to_string()))?;
        Self::parse_stem(stem).map_err(|e| match e {
            ScanNameError::MalformedName(_) => ScanNameError::MalformedName(name.to_string()),
            other => other,
        })
    }

    /// Parse a name without extension, e.g. a document file stem.
    pub fn parse_stem(stem: &str) -> Result<Self, ScanNameError> {
        static RE: LazyLock<Regex> = LazyLock::new(|| {
            Regex::new(r"^O\.\s*R\.\s+(\d{4})\s+(Stad|Buiten\s+(?:(?:Midden|Oost|West)\s+)?\d{1,2}e\s+distr)\s+(\d+)([a-z])?$")
                .unwrap()
        });
        let caps = RE.captures(stem.trim()).ok_or_else(|| ScanNameError::MalformedName(stem.to_string()))?;
        let year: i32 = caps[1].parse().expect("four digits");
        let district: District = caps[2].parse()?;
        let number: u32 = caps[3].parse().map_err(|_| ScanNameError::MalformedName(stem.to_string()))?;
        let suffix = caps.get(4).and_then(|m| m.as_str().chars().next());
        Self::new(year, district, number, suffix)
    }

    /// `O.R. 1887 Stad 411` (numbers zero-padded to three digits).
    pub fn stem(&self) -> String {
        let mut s = format!("O.R. {} {} {:03}", self.year, self.district, self.number);
        if let Some(c) = self.note_suffix {
            s.push(c);
        }
        s
    }

    /// Canonical scan file name with `.JPG` extension.
    pub fn file_name(&self) -> String {
        format!("{}.JPG", self.stem())
    }

    /// Compact identifier safe for URLs: `1887-stad-411`, `1835-west2-017a`.
    pub fn key(&self) -> String {
        let mut s = format!("{}-{}-{:03}", self.year, self.district.slug(), self.number);
        if let Some(c) = self.note_suffix {
            s.push(c);
        }
        s
    }

    pub fn is_note(&self) -> bool {
        self.note_suffix.is_some()
    }

    /// The same certificate without a note suffix.
    pub fn certificate(&self) -> ScanId {
        ScanId { note_suffix: None, ..self.clone() }
    }
}

impl fmt::Display for ScanId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.file_name())
    }
}

impl FromStr for ScanId {
    type Err = ScanNameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScanId::parse(s)
    }
}

impl Serialize for ScanId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ScanId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ScanId::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Canonical form of a scan file name (`format(parse(name))`).
pub fn canonical_scan_name(name: &str) -> Result<String, ScanNameError> {
    ScanId::parse(name).map(|id| id.file_name())
}

/// Split off a `.jpg`/`.jpeg` extension, any case.
pub fn split_scan_extension(name: &str) -> Option<(&str, &str)> {
    let (stem, ext) = name.rsplit_once('.')?;
    if ext.eq_ignore_ascii_case("jpg") || ext.eq_ignore_ascii_case("jpeg") {
        Some((stem, ext))
    } else {
        None
    }
}

/// A district folder such as `O.R. 1872 Buiten 2e distr2`.
///
/// `copy` carries the trailing digit of a second folder for the same district.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DistrictFolder {
    pub year: i32,
    pub district: District,
    pub copy: Option<u8>,
}

impl DistrictFolder {
    pub fn parse(name: &str) -> Result<Self, ScanNameError> {
        static RE: LazyLock<Regex> = LazyLock::new(|| {
            Regex::new(r"^O\.\s*R\.\s+(\d{4})\s+(Stad|Buiten\s+(?:(?:Midden|Oost|West)\s+)?\d{1,2}e\s+distr)([1-9])?$")
                .unwrap()
        });
        let caps = RE.captures(name.trim()).ok_or_else(|| ScanNameError::MalformedName(name.to_string()))?;
        let year: i32 = caps[1].parse().expect("four digits");
        check_year(year)?;
        let district: District = caps[2].parse()?;
        check_district_year(year, &district)?;
        let copy = caps.get(3).map(|m| m.as_str().parse::<u8>().expect("single digit"));
        Ok(Self { year, district, copy })
    }
}

impl fmt::Display for DistrictFolder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O.R. {} {}", self.year, self.district)?;
        if let Some(c) = self.copy {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Year folder `O.R. 1887`.
pub fn parse_year_folder(name: &str) -> Result<i32, ScanNameError> {
    static RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^O\.\s*R\.\s+(\d{4})$").unwrap());
    let caps = RE.captures(name.trim()).ok_or_else(|| ScanNameError::MalformedName(name.to_string()))?;
    let year: i32 = caps[1].parse().expect("four digits");
    check_year(year)?;
    Ok(year)
}
