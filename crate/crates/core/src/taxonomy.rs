//! Three-layer classification of co-working effects.
//!
//! Only technology-layer operation (facility, equipment) and the travel
//! effects of the application layer are quantified by this crate; the rest
//! of the registry is descriptive.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    /// Infrastructure needed to set up and run the space.
    Technology,
    /// Individuals or organizations working from the space.
    Application,
    /// Society-wide adoption.
    Structural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignTendency {
    Increasing,
    Decreasing,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EffectClassification {
    pub layer: Layer,
    pub category: &'static str,
    pub quantified: bool,
    pub sign_tendency: SignTendency,
}

const fn entry(layer: Layer, category: &'static str, quantified: bool, sign_tendency: SignTendency) -> EffectClassification {
    EffectClassification {
        layer,
        category,
        quantified,
        sign_tendency,
    }
}

use Layer::*;
use SignTendency::*;

pub static REGISTRY: &[EffectClassification] = &[
    entry(Technology, "facility_construction", false, Increasing),
    entry(Technology, "facility_operation", true, Increasing),
    entry(Technology, "equipment_production", false, Increasing),
    entry(Technology, "equipment_use", true, Increasing),
    entry(Technology, "end_of_life_disposal", false, Increasing),
    entry(Application, "travel_substitution", true, Both),
    entry(Application, "modal_shift", true, Both),
    entry(Application, "induced_trips", false, Increasing),
    entry(Application, "income_rebound", false, Increasing),
    entry(Application, "time_use_rebound", false, Increasing),
    entry(Application, "office_space_change", false, Both),
    entry(Application, "ict_equipment_change", false, Increasing),
    entry(Structural, "land_use_change", false, Both),
    entry(Structural, "office_demand_change", false, Both),
    entry(Structural, "transport_demand_change", false, Both),
    entry(Structural, "economy_wide_rebound", false, Increasing),
];

/// Looks up a registered effect category, ignoring ASCII case.
pub fn classify_effect(category_name: &str) -> Result<EffectClassification> {
    let wanted = category_name.trim();
    REGISTRY
        .iter()
        .find(|e| e.category.eq_ignore_ascii_case(wanted))
        .copied()
        .ok_or_else(|| Error::UnknownCategory(category_name.to_string()))
}
