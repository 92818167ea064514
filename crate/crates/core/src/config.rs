//! JSON configuration: site inventory, factor table and quality rules.
//!
//! ```json
//! {
//!   "inventory": { "floor_area_m2": 170, "workplace_count": 14,
//!                  "device_counts": { "screen": 18 }, "coworker_count": 60,
//!                  "workdays_per_year": 220 },
//!   "factors": { "facility_intensity": { "heating": 1, "cooling": 0, "lighting": 1 },
//!                "device_daily_energy": { "screen": 1.2 },
//!                "mode_speed": { "walk": 5, ... }, "mode_energy": { "walk": 0, ... } },
//!   "quality_rules": { "min_work_minutes": 240 }
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::aggregate::Profiles;
use crate::error::{Error, Result};
use crate::ingest::QualityRules;
use crate::inventory::{FactorTable, Factors, SiteInventory};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub inventory: SiteInventory,
    pub factors: FactorTable,
    #[serde(default)]
    pub quality_rules: QualityRules,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub inventory: SiteInventory,
    pub factors: Factors,
    pub quality_rules: QualityRules,
    /// SHA-256 of the canonical re-serialization, so formatting-only edits
    /// keep the fingerprint while any value change alters it.
    pub fingerprint: String,
}

impl ConfigFile {
    pub fn into_config(self) -> Result<Config> {
        let fingerprint = sha256_hex(&serde_json::to_vec(&self).expect("config serializes"));
        self.inventory.validate()?;
        self.quality_rules.validate()?;
        let factors = self.factors.validate(&self.inventory)?;
        Ok(Config {
            inventory: self.inventory,
            factors,
            quality_rules: self.quality_rules,
            fingerprint,
        })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

pub fn parse_config(text: &[u8]) -> std::result::Result<ConfigFile, serde_json::Error> {
    serde_json::from_slice(text)
}

pub fn load_config(path: &Path) -> Result<Config> {
    let file = parse_config(&read(path)?).map_err(|e| Error::json(path, e))?;
    file.into_config()
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let scenario: Scenario = serde_json::from_slice(&read(path)?).map_err(|e| Error::json(path, e))?;
    scenario.validate()?;
    Ok(scenario)
}

/// Reads profiles previously written by the `profile` command.
pub fn load_profiles(path: &Path) -> Result<Profiles> {
    let profiles: Profiles = serde_json::from_slice(&read(path)?).map_err(|e| Error::json(path, e))?;
    for (day_type, p) in &profiles {
        let values = p
            .mean_activity_minutes
            .values()
            .chain(p.mean_mode_minutes.values())
            .chain(p.mode_share.values());
        if p.day_type != *day_type || values.into_iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidOverride(format!(
                "{}: profile for {day_type} is inconsistent",
                path.display()
            )));
        }
    }
    Ok(profiles)
}
