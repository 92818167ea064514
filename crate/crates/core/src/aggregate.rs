//! Per-day-type means of activity time and modal split.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Activity, DayType, DiaryDay, TransportMode};

/// Mean diary profile of one day type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayTypeProfile {
    pub day_type: DayType,
    pub day_count: usize,
    pub mean_activity_minutes: BTreeMap<Activity, f64>,
    pub mean_mode_minutes: BTreeMap<TransportMode, f64>,
    pub mode_share: BTreeMap<TransportMode, f64>,
}

impl DayTypeProfile {
    pub fn empty(day_type: DayType) -> Self {
        DayTypeProfile {
            day_type,
            day_count: 0,
            mean_activity_minutes: Activity::ALL.iter().map(|&a| (a, 0.0)).collect(),
            mean_mode_minutes: TransportMode::ALL.iter().map(|&m| (m, 0.0)).collect(),
            mode_share: TransportMode::ALL.iter().map(|&m| (m, 0.0)).collect(),
        }
    }

    /// Builds a profile from mean mode minutes alone; shares are derived.
    pub fn from_mode_minutes(day_type: DayType, day_count: usize, mean_mode_minutes: BTreeMap<TransportMode, f64>) -> Self {
        let mut profile = DayTypeProfile::empty(day_type);
        profile.day_count = day_count;
        for (m, v) in mean_mode_minutes {
            profile.mean_mode_minutes.insert(m, v);
        }
        profile.mode_share = shares(&profile.mean_mode_minutes);
        profile
    }

    pub fn activity(&self, a: Activity) -> f64 {
        self.mean_activity_minutes.get(&a).copied().unwrap_or(0.0)
    }

    pub fn mode(&self, m: TransportMode) -> f64 {
        self.mean_mode_minutes.get(&m).copied().unwrap_or(0.0)
    }

    pub fn share(&self, m: TransportMode) -> f64 {
        self.mode_share.get(&m).copied().unwrap_or(0.0)
    }

    pub fn require_days(&self) -> Result<&Self> {
        if self.day_count == 0 {
            Err(Error::MissingProfile(self.day_type))
        } else {
            Ok(self)
        }
    }
}

pub type Profiles = BTreeMap<DayType, DayTypeProfile>;

/// Share of each mode in the total of mean minutes; all zero when there is
/// no travel at all.
pub fn shares(mean_mode_minutes: &BTreeMap<TransportMode, f64>) -> BTreeMap<TransportMode, f64> {
    let total: f64 = TransportMode::ALL
        .iter()
        .map(|m| mean_mode_minutes.get(m).copied().unwrap_or(0.0))
        .sum();
    TransportMode::ALL
        .iter()
        .map(|&m| {
            let v = mean_mode_minutes.get(&m).copied().unwrap_or(0.0);
            (m, if total > 0.0 { v / total } else { 0.0 })
        })
        .collect()
}

#[derive(Default)]
struct Accumulator {
    days: usize,
    activity: [f64; 4],
    modes: [f64; 5],
}

/// Mean profiles for office, co-working and home days. Other day types in
/// the input are ignored; a compared type with no days gets an all-zero
/// profile with `day_count == 0`.
pub fn aggregate_profiles(days: &[DiaryDay]) -> Profiles {
    let mut acc: BTreeMap<DayType, Accumulator> = DayType::COMPARED.iter().map(|&d| (d, Accumulator::default())).collect();
    for day in days {
        let Some(a) = acc.get_mut(&day.day_type) else {
            continue;
        };
        a.days += 1;
        for (i, &act) in Activity::ALL.iter().enumerate() {
            a.activity[i] += day.activity(act);
        }
        for (i, &m) in TransportMode::ALL.iter().enumerate() {
            a.modes[i] += day.mode(m);
        }
    }

    acc.into_iter()
        .map(|(day_type, a)| {
            if a.days == 0 {
                return (day_type, DayTypeProfile::empty(day_type));
            }
            let n = a.days as f64;
            let mean_activity_minutes = Activity::ALL.iter().zip(a.activity).map(|(&k, s)| (k, s / n)).collect();
            let mean_mode_minutes: BTreeMap<_, _> = TransportMode::ALL.iter().zip(a.modes).map(|(&k, s)| (k, s / n)).collect();
            let mode_share = shares(&mean_mode_minutes);
            (
                day_type,
                DayTypeProfile {
                    day_type,
                    day_count: a.days,
                    mean_activity_minutes,
                    mean_mode_minutes,
                    mode_share,
                },
            )
        })
        .collect()
}

/// Per-activity minute change of a co-working day relative to `baseline`.
pub fn activity_deltas(coworking: &DayTypeProfile, baseline: &DayTypeProfile) -> Result<BTreeMap<Activity, f64>> {
    coworking.require_days()?;
    baseline.require_days()?;
    Ok(Activity::ALL
        .iter()
        .map(|&a| (a, coworking.activity(a) - baseline.activity(a)))
        .collect())
}

/// [`activity_deltas`] for each requested baseline day type.
pub fn profile_deltas(profiles: &Profiles, baselines: &[DayType]) -> Result<BTreeMap<DayType, BTreeMap<Activity, f64>>> {
    let lookup = |d: DayType| profiles.get(&d).ok_or(Error::MissingProfile(d));
    let cw = lookup(DayType::Coworking)?;
    baselines
        .iter()
        .map(|&b| Ok((b, activity_deltas(cw, lookup(b)?)?)))
        .collect()
}

/// Number of days per day type; every day type is present.
pub fn day_counts(days: &[DiaryDay]) -> BTreeMap<DayType, usize> {
    let mut counts: BTreeMap<DayType, usize> = DayType::ALL.iter().map(|&d| (d, 0)).collect();
    for day in days {
        *counts.entry(day.day_type).or_default() += 1;
    }
    counts
}
