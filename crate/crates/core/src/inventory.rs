//! Site inventory and energy factor table.
//!
//! The factor table ships with no default values: every coefficient is
//! required input. [`FactorTable::validate`] checks completeness against a
//! concrete inventory and yields [`Factors`], the only form the energy
//! engine accepts.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::TransportMode;

/// Kind of ICT device counted in the co-working space. Any name beyond the
/// four built-in kinds is accepted (coffee machine, projector, ...).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum DeviceKind {
    Screen,
    DesktopComputer,
    Printer,
    Tv,
    Named(String),
}

impl DeviceKind {
    pub fn as_str(&self) -> &str {
        match self {
            DeviceKind::Screen => "screen",
            DeviceKind::DesktopComputer => "desktop_computer",
            DeviceKind::Printer => "printer",
            DeviceKind::Tv => "tv",
            DeviceKind::Named(name) => name,
        }
    }
}

impl From<String> for DeviceKind {
    fn from(s: String) -> Self {
        match s.as_str() {
            "screen" => DeviceKind::Screen,
            "desktop_computer" => DeviceKind::DesktopComputer,
            "printer" => DeviceKind::Printer,
            "tv" => DeviceKind::Tv,
            _ => DeviceKind::Named(s),
        }
    }
}

impl From<&str> for DeviceKind {
    fn from(s: &str) -> Self {
        DeviceKind::from(s.to_string())
    }
}

impl From<DeviceKind> for String {
    fn from(kind: DeviceKind) -> Self {
        kind.as_str().to_string()
    }
}

impl fmt::Display for DeviceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Physical description of the co-working space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteInventory {
    pub floor_area_m2: f64,
    pub workplace_count: u32,
    #[serde(default)]
    pub device_counts: BTreeMap<DeviceKind, u32>,
    pub coworker_count: u32,
    /// Not a published quantity; always user-supplied.
    pub workdays_per_year: u32,
}

impl SiteInventory {
    pub fn validate(&self) -> Result<()> {
        if !(self.floor_area_m2.is_finite() && self.floor_area_m2 > 0.0) {
            return Err(Error::InvalidInventory(format!(
                "floor_area_m2 must be > 0, got {}",
                self.floor_area_m2
            )));
        }
        if self.workplace_count < 1 {
            return Err(Error::InvalidInventory("workplace_count must be >= 1".into()));
        }
        if self.coworker_count < 1 {
            return Err(Error::InvalidInventory("coworker_count must be >= 1".into()));
        }
        if !(1..=366).contains(&self.workdays_per_year) {
            return Err(Error::InvalidInventory(format!(
                "workdays_per_year must be in 1..=366, got {}",
                self.workdays_per_year
            )));
        }
        Ok(())
    }
}

/// Facility end use carried by the intensity table. Only the sum enters
/// the allocation; the split is kept for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacilityUse {
    Heating,
    Cooling,
    Lighting,
}

impl FacilityUse {
    pub const ALL: [FacilityUse; 3] = [FacilityUse::Heating, FacilityUse::Cooling, FacilityUse::Lighting];

    pub fn as_str(&self) -> &'static str {
        match self {
            FacilityUse::Heating => "heating",
            FacilityUse::Cooling => "cooling",
            FacilityUse::Lighting => "lighting",
        }
    }
}

/// Raw, possibly incomplete, factor table as read from configuration.
///
/// Units: facility intensity MJ/(m²·year), device energy MJ/(device·day),
/// speed km/h, mode energy MJ/person-km.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorTable {
    #[serde(default)]
    pub facility_intensity: BTreeMap<FacilityUse, f64>,
    #[serde(default)]
    pub device_daily_energy: BTreeMap<DeviceKind, f64>,
    #[serde(default)]
    pub mode_speed: BTreeMap<TransportMode, f64>,
    #[serde(default)]
    pub mode_energy: BTreeMap<TransportMode, f64>,
}

impl FactorTable {
    /// Checks that the table covers every transport mode, every facility
    /// end use, and every device kind counted in `inventory`. All missing
    /// keys are reported together.
    pub fn validate(self, inventory: &SiteInventory) -> Result<Factors> {
        let mut missing = Vec::new();
        for u in FacilityUse::ALL {
            if !self.facility_intensity.contains_key(&u) {
                missing.push(format!("facility_intensity.{}", u.as_str()));
            }
        }
        for kind in inventory.device_counts.keys() {
            if !self.device_daily_energy.contains_key(kind) {
                missing.push(format!("device_daily_energy.{kind}"));
            }
        }
        for m in TransportMode::ALL {
            if !self.mode_speed.contains_key(m) {
                missing.push(format!("mode_speed.{m}"));
            }
        }
        for m in TransportMode::ALL {
            if !self.mode_energy.contains_key(m) {
                missing.push(format!("mode_energy.{m}"));
            }
        }
        if !missing.is_empty() {
            return Err(Error::MissingFactor(missing));
        }

        let entries = self
            .facility_intensity
            .iter()
            .map(|(k, v)| (format!("facility_intensity.{}", k.as_str()), *v))
            .chain(self.device_daily_energy.iter().map(|(k, v)| (format!("device_daily_energy.{k}"), *v)))
            .chain(self.mode_speed.iter().map(|(k, v)| (format!("mode_speed.{k}"), *v)))
            .chain(self.mode_energy.iter().map(|(k, v)| (format!("mode_energy.{k}"), *v)));
        for (key, value) in entries {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::NegativeFactor(key));
            }
        }
        Ok(Factors(self))
    }
}

/// A factor table that passed [`FactorTable::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Factors(FactorTable);

impl Factors {
    pub fn table(&self) -> &FactorTable {
        &self.0
    }

    pub fn into_table(self) -> FactorTable {
        self.0
    }

    /// Sum of heating, cooling and lighting intensity, MJ/(m²·year).
    pub fn facility_intensity_total(&self) -> f64 {
        FacilityUse::ALL.iter().map(|u| self.0.facility_intensity[u]).sum()
    }

    pub fn facility_intensity(&self, end_use: FacilityUse) -> f64 {
        self.0.facility_intensity[&end_use]
    }

    pub fn device_daily_energy(&self, kind: &DeviceKind) -> Option<f64> {
        self.0.device_daily_energy.get(kind).copied()
    }

    pub fn mode_speed(&self, mode: TransportMode) -> f64 {
        self.0.mode_speed[&mode]
    }

    pub fn mode_energy(&self, mode: TransportMode) -> f64 {
        self.0.mode_energy[&mode]
    }

    /// Re-checks this table against another inventory (e.g. one with
    /// overridden device counts).
    pub fn revalidate(&self, inventory: &SiteInventory) -> Result<Factors> {
        self.0.clone().validate(inventory)
    }
}
