//! Per-coworker-day energy of the co-working space and of travel.
//!
//! Facility energy is annual floor-area energy split over coworkers and
//! workdays; equipment energy is daily device energy split over
//! workplaces; travel energy converts mean mode minutes to person-km via
//! mode speeds. Energy at the employer's office or at home is never
//! credited here.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::aggregate::DayTypeProfile;
use crate::error::{Error, Result};
use crate::inventory::{Factors, SiteInventory};
use crate::model::{EnergyDelta, TransportMode};

/// Operating energy of the co-working space attributed to one coworker-day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectComponents {
    pub facility_mj_per_coworker_day: f64,
    pub equipment_mj_per_coworker_day: f64,
}

impl DirectComponents {
    pub fn compute(inventory: &SiteInventory, factors: &Factors) -> Result<Self> {
        Ok(DirectComponents {
            facility_mj_per_coworker_day: facility_energy(inventory, factors)?,
            equipment_mj_per_coworker_day: equipment_energy(inventory, factors)?,
        })
    }
}

/// `annual_mj / (coworkers × workdays)`, with occupancy relaxed to reals.
pub fn allocate_annual(annual_mj: f64, coworkers: f64, workdays_per_year: f64) -> Result<f64> {
    if coworkers <= 0.0 {
        return Err(Error::DivisionDomain("coworker_count"));
    }
    if workdays_per_year <= 0.0 {
        return Err(Error::DivisionDomain("workdays_per_year"));
    }
    Ok(annual_mj / (coworkers * workdays_per_year))
}

/// Heating, cooling and lighting energy of the space per coworker-day, MJ.
pub fn facility_energy(inventory: &SiteInventory, factors: &Factors) -> Result<f64> {
    allocate_annual(
        inventory.floor_area_m2 * factors.facility_intensity_total(),
        f64::from(inventory.coworker_count),
        f64::from(inventory.workdays_per_year),
    )
}

/// Daily energy of all counted devices divided by the number of
/// workplaces, MJ.
pub fn equipment_energy(inventory: &SiteInventory, factors: &Factors) -> Result<f64> {
    if inventory.workplace_count == 0 {
        return Err(Error::DivisionDomain("workplace_count"));
    }
    let mut missing = Vec::new();
    let mut daily = 0.0;
    for (kind, &count) in &inventory.device_counts {
        match factors.device_daily_energy(kind) {
            Some(e) => daily += f64::from(count) * e,
            None => missing.push(format!("device_daily_energy.{kind}")),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingFactor(missing));
    }
    Ok(daily / f64::from(inventory.workplace_count))
}

/// Energy of a day's travel given minutes per mode, MJ.
pub fn travel_energy(mode_minutes: &BTreeMap<TransportMode, f64>, factors: &Factors) -> f64 {
    TransportMode::ALL
        .iter()
        .map(|&m| {
            let minutes = mode_minutes.get(&m).copied().unwrap_or(0.0);
            minutes / 60.0 * factors.mode_speed(m) * factors.mode_energy(m)
        })
        .sum()
}

/// Energy change of a co-working day against `baseline`: direct energy of
/// the space plus the difference in travel energy of the two mean profiles.
pub fn compare_day_types(
    coworking: &DayTypeProfile,
    baseline: &DayTypeProfile,
    direct: &DirectComponents,
    factors: &Factors,
) -> Result<EnergyDelta> {
    coworking.require_days()?;
    baseline.require_days()?;
    let travel = travel_energy(&coworking.mean_mode_minutes, factors) - travel_energy(&baseline.mean_mode_minutes, factors);
    EnergyDelta::new(
        baseline.day_type,
        direct.facility_mj_per_coworker_day,
        direct.equipment_mj_per_coworker_day,
        travel,
    )
}
