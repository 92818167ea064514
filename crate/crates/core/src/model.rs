//! Domain vocabulary shared by every stage of the pipeline.
//!
//! Diary time is always in minutes and energy always in MJ. Unit
//! conversions (minutes to hours, km/h to km) happen only in
//! [`crate::energy`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minutes in a calendar day; upper bound for each diary total.
pub const MINUTES_PER_DAY: f64 = 1440.0;

macro_rules! string_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(format!(concat!("unknown ", stringify!($name), " {:?}"), other)),
                }
            }
        }
    };
}

/// Recorded diary activity. Time outside these four (sleep, etc.) is not
/// collected and simply absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activity {
    Travel,
    Work,
    EverydayChores,
    Leisure,
}

string_enum!(Activity {
    Travel => "travel",
    Work => "work",
    EverydayChores => "everyday_chores",
    Leisure => "leisure",
});

/// Transport mode. `Bike` includes e-bikes; `Other` covers boats and the like.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransportMode {
    Walk,
    Bike,
    Car,
    PublicTransport,
    Other,
}

string_enum!(TransportMode {
    Walk => "walk",
    Bike => "bike",
    Car => "car",
    PublicTransport => "public_transport",
    Other => "other",
});

/// Work location of a participant-day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DayType {
    EmployerOffice,
    Coworking,
    Home,
    OtherLocation,
    MultiLocation,
}

string_enum!(DayType {
    EmployerOffice => "employer_office",
    Coworking => "coworking",
    Home => "home",
    OtherLocation => "other_location",
    MultiLocation => "multi_location",
});

impl DayType {
    /// Day types that take part in aggregation and energy comparison.
    pub const COMPARED: [DayType; 3] = [DayType::EmployerOffice, DayType::Coworking, DayType::Home];

    pub fn is_compared(self) -> bool {
        Self::COMPARED.contains(&self)
    }
}

/// One participant-day from a time-use diary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiaryDay {
    pub participant_id: String,
    pub date: NaiveDate,
    pub day_type: DayType,
    #[serde(default)]
    pub activity_minutes: BTreeMap<Activity, f64>,
    #[serde(default)]
    pub mode_minutes: BTreeMap<TransportMode, f64>,
    /// Line in the source file, when the day was read from one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_row: Option<u64>,
}

impl DiaryDay {
    /// Builds a day and checks the minute invariants.
    pub fn new(
        participant_id: impl Into<String>,
        date: NaiveDate,
        day_type: DayType,
        activity_minutes: BTreeMap<Activity, f64>,
        mode_minutes: BTreeMap<TransportMode, f64>,
    ) -> std::result::Result<Self, String> {
        let day = DiaryDay {
            participant_id: participant_id.into(),
            date,
            day_type,
            activity_minutes,
            mode_minutes,
            source_row: None,
        };
        day.check()?;
        Ok(day)
    }

    pub fn with_source_row(mut self, row: u64) -> Self {
        self.source_row = Some(row);
        self
    }

    pub(crate) fn check(&self) -> std::result::Result<(), String> {
        for (a, &v) in &self.activity_minutes {
            if !(v.is_finite() && v >= 0.0) {
                return Err(format!("{a} minutes must be a non-negative number, got {v}"));
            }
        }
        for (m, &v) in &self.mode_minutes {
            if !(v.is_finite() && v >= 0.0) {
                return Err(format!("{m} minutes must be a non-negative number, got {v}"));
            }
        }
        let activity = self.total_activity_minutes();
        if activity > MINUTES_PER_DAY {
            return Err(format!("activity minutes sum to {activity} > {MINUTES_PER_DAY}"));
        }
        let modes = self.total_mode_minutes();
        if modes > MINUTES_PER_DAY {
            return Err(format!("mode minutes sum to {modes} > {MINUTES_PER_DAY}"));
        }
        Ok(())
    }

    pub fn activity(&self, activity: Activity) -> f64 {
        self.activity_minutes.get(&activity).copied().unwrap_or(0.0)
    }

    pub fn mode(&self, mode: TransportMode) -> f64 {
        self.mode_minutes.get(&mode).copied().unwrap_or(0.0)
    }

    pub fn total_activity_minutes(&self) -> f64 {
        Activity::ALL.iter().map(|&a| self.activity(a)).sum()
    }

    pub fn total_mode_minutes(&self) -> f64 {
        TransportMode::ALL.iter().map(|&m| self.mode(m)).sum()
    }
}

/// Component-wise energy change of one co-working day against a baseline
/// day type, per coworker, in MJ.
///
/// `credit_mj` is the (non-positive) floor-space credit injected by a
/// scenario; it is zero for plain comparisons so that `net_mj` is exactly
/// facility + equipment + travel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyDelta {
    pub baseline: DayType,
    pub facility_mj: f64,
    pub equipment_mj: f64,
    pub travel_mj: f64,
    #[serde(default)]
    pub credit_mj: f64,
    pub net_mj: f64,
}

impl EnergyDelta {
    pub fn new(baseline: DayType, facility_mj: f64, equipment_mj: f64, travel_mj: f64) -> Result<Self> {
        Self::with_credit(baseline, facility_mj, equipment_mj, travel_mj, 0.0)
    }

    /// `credit_mj` is the signed adjustment; pass a value ≤ 0.
    pub fn with_credit(
        baseline: DayType,
        facility_mj: f64,
        equipment_mj: f64,
        travel_mj: f64,
        credit_mj: f64,
    ) -> Result<Self> {
        if !(facility_mj.is_finite() && facility_mj >= 0.0) {
            return Err(Error::NonFinite {
                parameter: "facility_mj".into(),
                value: facility_mj,
            });
        }
        if !(equipment_mj.is_finite() && equipment_mj >= 0.0) {
            return Err(Error::NonFinite {
                parameter: "equipment_mj".into(),
                value: equipment_mj,
            });
        }
        if !travel_mj.is_finite() {
            return Err(Error::NonFinite {
                parameter: "travel_mj".into(),
                value: travel_mj,
            });
        }
        if !(credit_mj.is_finite() && credit_mj <= 0.0) {
            return Err(Error::NonFinite {
                parameter: "credit_mj".into(),
                value: credit_mj,
            });
        }
        Ok(EnergyDelta {
            baseline,
            facility_mj,
            equipment_mj,
            travel_mj,
            credit_mj,
            net_mj: facility_mj + equipment_mj + travel_mj + credit_mj,
        })
    }
}
