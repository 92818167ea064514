//! Diary CSV parsing, quality filtering and work-location classification.
//!
//! The diary file has one row per participant-day with the header in
//! [`DIARY_HEADER`]. Row-level problems never abort parsing; they come back
//! as [`RejectedDay`]s with reason [`RejectReason::ParseError`].

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::Read;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Activity, DayType, DiaryDay, TransportMode};

pub const DIARY_HEADER: [&str; 12] = [
    "participant_id",
    "date",
    "location",
    "travel_min",
    "work_min",
    "chores_min",
    "leisure_min",
    "walk_min",
    "bike_min",
    "car_min",
    "pt_min",
    "other_mode_min",
];

const ACTIVITY_COLUMNS: [(&str, Activity); 4] = [
    ("travel_min", Activity::Travel),
    ("work_min", Activity::Work),
    ("chores_min", Activity::EverydayChores),
    ("leisure_min", Activity::Leisure),
];

const MODE_COLUMNS: [(&str, TransportMode); 5] = [
    ("walk_min", TransportMode::Walk),
    ("bike_min", TransportMode::Bike),
    ("car_min", TransportMode::Car),
    ("pt_min", TransportMode::PublicTransport),
    ("other_mode_min", TransportMode::Other),
];

/// Thresholds for discarding untypical or low-quality diary days.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QualityRules {
    pub min_work_minutes: f64,
    pub min_total_minutes: f64,
    pub max_mode_mismatch_minutes: f64,
    pub exclude_multi_location: bool,
}

impl Default for QualityRules {
    fn default() -> Self {
        QualityRules {
            min_work_minutes: 240.0,
            min_total_minutes: 480.0,
            max_mode_mismatch_minutes: 100.0,
            exclude_multi_location: true,
        }
    }
}

impl QualityRules {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("min_work_minutes", self.min_work_minutes),
            ("min_total_minutes", self.min_total_minutes),
            ("max_mode_mismatch_minutes", self.max_mode_mismatch_minutes),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidRules(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Why a day was dropped. Variant order is the reporting priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RejectReason {
    WorkTooShort,
    TotalTooShort,
    ModeMismatch,
    ExcludedLocation,
    ParseError,
}

impl RejectReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            RejectReason::WorkTooShort => "WORK_TOO_SHORT",
            RejectReason::TotalTooShort => "TOTAL_TOO_SHORT",
            RejectReason::ModeMismatch => "MODE_MISMATCH",
            RejectReason::ExcludedLocation => "EXCLUDED_LOCATION",
            RejectReason::ParseError => "PARSE_ERROR",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RejectedDay {
    pub row: Option<u64>,
    pub participant_id: String,
    /// Date as written in the source (may be unparsable).
    pub date: String,
    pub reason: RejectReason,
    /// Every rule the day failed, in priority order; `reason` is the first.
    pub failures: Vec<RejectReason>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub day: Option<DiaryDay>,
}

/// A location string outside the documented vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocationWarning {
    pub row: Option<u64>,
    pub location: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ParsedDiary {
    pub days: Vec<DiaryDay>,
    pub rejected: Vec<RejectedDay>,
    pub warnings: Vec<LocationWarning>,
}

impl ParsedDiary {
    pub fn row_count(&self) -> usize {
        self.days.len() + self.rejected.len()
    }
}

/// Maps the diary location vocabulary onto [`DayType`]. Unknown strings
/// fall back to `OtherLocation` and the second element is `true`.
pub fn classify_day(location: &str) -> (DayType, bool) {
    match location.trim() {
        "office" => (DayType::EmployerOffice, false),
        "coworking" => (DayType::Coworking, false),
        "home" => (DayType::Home, false),
        "other" => (DayType::OtherLocation, false),
        "multiple" => (DayType::MultiLocation, false),
        _ => (DayType::OtherLocation, true),
    }
}

/// Parses a diary CSV stream. Only a missing or malformed header aborts.
pub fn parse_diary_file<R: Read>(input: R) -> Result<ParsedDiary> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let header = reader.byte_headers()?.clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::Header("missing header row".into()));
    }
    let names = header
        .iter()
        .map(|h| std::str::from_utf8(h).map(str::to_string))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Header("header is not valid UTF-8".into()))?;
    let index = column_index(&names)?;

    let mut parsed = ParsedDiary::default();
    let mut record = csv::ByteRecord::new();
    loop {
        let line = reader.position().line();
        if !reader.read_byte_record(&mut record)? {
            break;
        }
        let row = record.position().map(|p| p.line()).unwrap_or(line);
        match parse_row(&record, &index, row) {
            Ok((day, warning)) => {
                if let Some(w) = warning {
                    parsed.warnings.push(w);
                }
                parsed.days.push(day);
            }
            Err(detail) => {
                let field = |name: &str| {
                    record
                        .get(index[name])
                        .map(|b| String::from_utf8_lossy(b).into_owned())
                        .unwrap_or_default()
                };
                parsed.rejected.push(RejectedDay {
                    row: Some(row),
                    participant_id: field("participant_id"),
                    date: field("date"),
                    reason: RejectReason::ParseError,
                    failures: vec![RejectReason::ParseError],
                    detail,
                    day: None,
                });
            }
        }
    }
    Ok(parsed)
}

fn column_index(names: &[String]) -> Result<BTreeMap<&'static str, usize>> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::Header(format!("duplicate column {n:?}")));
        }
    }
    let missing: Vec<_> = DIARY_HEADER.iter().filter(|c| !seen.contains(**c)).copied().collect();
    let extra: Vec<_> = names
        .iter()
        .filter(|n| !DIARY_HEADER.contains(&n.as_str()))
        .map(String::as_str)
        .collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(Error::Header(format!(
            "wrong column set (missing: [{}], unexpected: [{}]); expected {}",
            missing.join(","),
            extra.join(","),
            DIARY_HEADER.join(",")
        )));
    }
    Ok(DIARY_HEADER
        .iter()
        .map(|&c| (c, names.iter().position(|n| n == c).unwrap()))
        .collect())
}

fn parse_row(
    record: &csv::ByteRecord,
    index: &BTreeMap<&'static str, usize>,
    row: u64,
) -> std::result::Result<(DiaryDay, Option<LocationWarning>), String> {
    if record.len() != DIARY_HEADER.len() {
        return Err(format!("expected {} fields, found {}", DIARY_HEADER.len(), record.len()));
    }
    let field = |name: &str| -> std::result::Result<&str, String> {
        std::str::from_utf8(&record[index[name]]).map_err(|_| format!("{name} is not valid UTF-8"))
    };

    let participant_id = field("participant_id")?;
    if participant_id.is_empty() {
        return Err("participant_id is empty".into());
    }
    let raw_date = field("date")?;
    let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d")
        .map_err(|e| format!("date {raw_date:?} is not YYYY-MM-DD: {e}"))?;
    let location = field("location")?;
    let (day_type, unknown) = classify_day(location);

    let minutes = |name: &str| -> std::result::Result<f64, String> {
        let raw = field(name)?;
        let v: f64 = raw.parse().map_err(|_| format!("{name} {raw:?} is not a number"))?;
        if !v.is_finite() || v < 0.0 {
            return Err(format!("{name} must be a non-negative number, got {raw}"));
        }
        Ok(v)
    };
    let mut activity_minutes = BTreeMap::new();
    for (col, a) in ACTIVITY_COLUMNS {
        activity_minutes.insert(a, minutes(col)?);
    }
    let mut mode_minutes = BTreeMap::new();
    for (col, m) in MODE_COLUMNS {
        mode_minutes.insert(m, minutes(col)?);
    }

    let day = DiaryDay::new(participant_id, date, day_type, activity_minutes, mode_minutes)?.with_source_row(row);
    let warning = unknown.then(|| LocationWarning {
        row: Some(row),
        location: location.to_string(),
    });
    Ok((day, warning))
}

/// Returns every rule `day` fails, in priority order, with a description.
pub fn rule_failures(day: &DiaryDay, rules: &QualityRules) -> Vec<(RejectReason, String)> {
    let mut failures = Vec::new();
    let work = day.activity(Activity::Work);
    if work < rules.min_work_minutes {
        failures.push((
            RejectReason::WorkTooShort,
            format!("work {work} min < {}", rules.min_work_minutes),
        ));
    }
    let total = day.total_activity_minutes();
    if total < rules.min_total_minutes {
        failures.push((
            RejectReason::TotalTooShort,
            format!("total {total} min < {}", rules.min_total_minutes),
        ));
    }
    let travel = day.activity(Activity::Travel);
    let modes = day.total_mode_minutes();
    let mismatch = (travel - modes).abs();
    if mismatch > rules.max_mode_mismatch_minutes {
        failures.push((
            RejectReason::ModeMismatch,
            format!(
                "travel {travel} vs modes {modes}: |diff| {mismatch} > {}",
                rules.max_mode_mismatch_minutes
            ),
        ));
    }
    if rules.exclude_multi_location && matches!(day.day_type, DayType::OtherLocation | DayType::MultiLocation) {
        failures.push((RejectReason::ExcludedLocation, format!("location {}", day.day_type)));
    }
    failures
}

/// Splits `days` into kept and rejected, preserving input order in both.
pub fn apply_quality_filter(days: &[DiaryDay], rules: &QualityRules) -> (Vec<DiaryDay>, Vec<RejectedDay>) {
    let mut kept = Vec::new();
    let mut rejected = Vec::new();
    for day in days {
        let failures = rule_failures(day, rules);
        match failures.first() {
            None => kept.push(day.clone()),
            Some(&(reason, _)) => rejected.push(RejectedDay {
                row: day.source_row,
                participant_id: day.participant_id.clone(),
                date: day.date.to_string(),
                reason,
                failures: failures.iter().map(|(r, _)| *r).collect(),
                detail: failures.iter().map(|(_, d)| d.as_str()).collect::<Vec<_>>().join("; "),
                day: Some(day.clone()),
            }),
        }
    }
    (kept, rejected)
}
