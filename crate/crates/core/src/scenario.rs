//! What-if evaluation: inventory overrides, modal-split overrides,
//! floor-space credits, one-parameter sweeps and break-even search.
//!
//! Integer parameters (`coworker_count`, `workdays_per_year`) must be whole
//! numbers in a sweep but are relaxed to reals for break-even search; the
//! returned root is also given rounded up as a planning value.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aggregate::{DayTypeProfile, Profiles};
use crate::energy::{allocate_annual, equipment_energy, travel_energy};
use crate::error::{Error, Result};
use crate::inventory::{DeviceKind, Factors, SiteInventory};
use crate::model::{DayType, EnergyDelta, TransportMode};

/// Any subset of [`SiteInventory`] fields.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InventoryOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor_area_m2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workplace_count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub device_counts: Option<BTreeMap<DeviceKind, u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coworker_count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workdays_per_year: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub overrides: InventoryOverrides,
    /// Replacement mean mode minutes for a day type.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modal_override: Option<BTreeMap<DayType, BTreeMap<TransportMode, f64>>>,
    /// Heated floor space removed elsewhere (employer office, home), m².
    #[serde(default)]
    pub floor_space_credit_m2: f64,
    /// MJ/(m²·year) of the removed floor space. Required when a credit is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub credit_intensity_mj_per_m2_year: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cw_days_per_week: Option<f64>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidOverride(msg));
        if !(self.floor_space_credit_m2.is_finite() && self.floor_space_credit_m2 >= 0.0) {
            return bad(format!("floor_space_credit_m2 must be >= 0, got {}", self.floor_space_credit_m2));
        }
        match self.credit_intensity_mj_per_m2_year {
            Some(v) if !(v.is_finite() && v >= 0.0) => {
                return bad(format!("credit_intensity_mj_per_m2_year must be >= 0, got {v}"));
            }
            None if self.floor_space_credit_m2 > 0.0 => {
                return bad("floor_space_credit_m2 > 0 requires credit_intensity_mj_per_m2_year".into());
            }
            _ => {}
        }
        if let Some(d) = self.cw_days_per_week {
            check_cw_days(d)?;
        }
        if let Some(modal) = &self.modal_override {
            for (day_type, modes) in modal {
                if !day_type.is_compared() {
                    return bad(format!("modal_override for non-compared day type {day_type}"));
                }
                for (m, &v) in modes {
                    if !(v.is_finite() && v >= 0.0) {
                        return bad(format!("modal_override.{day_type}.{m} must be >= 0, got {v}"));
                    }
                }
            }
        }
        Ok(())
    }

    fn credit_intensity(&self) -> f64 {
        self.credit_intensity_mj_per_m2_year.unwrap_or(0.0)
    }
}

fn check_cw_days(d: f64) -> Result<()> {
    if d.is_finite() && d > 0.0 && d <= 5.0 {
        Ok(())
    } else {
        Err(Error::InvalidOverride(format!("cw_days_per_week must be in (0, 5], got {d}")))
    }
}

/// Result of [`apply_scenario`].
#[derive(Debug, Clone, PartialEq)]
pub struct AppliedScenario {
    pub inventory: SiteInventory,
    pub factors: Factors,
    /// Magnitude of the floor-space credit, MJ per coworker-day (≥ 0). It
    /// enters [`EnergyDelta::credit_mj`] with a negative sign.
    pub credit_mj_per_coworker_day: f64,
}

/// Applies inventory overrides field by field and computes the floor-space
/// credit with the same per-coworker-day allocation as the facility.
pub fn apply_scenario(base: &SiteInventory, factors: &Factors, scenario: &Scenario) -> Result<AppliedScenario> {
    scenario.validate()?;
    let o = &scenario.overrides;
    let inventory = SiteInventory {
        floor_area_m2: o.floor_area_m2.unwrap_or(base.floor_area_m2),
        workplace_count: o.workplace_count.unwrap_or(base.workplace_count),
        device_counts: o.device_counts.clone().unwrap_or_else(|| base.device_counts.clone()),
        coworker_count: o.coworker_count.unwrap_or(base.coworker_count),
        workdays_per_year: o.workdays_per_year.unwrap_or(base.workdays_per_year),
    };
    inventory
        .validate()
        .map_err(|e| Error::InvalidOverride(e.to_string()))?;
    let factors = factors
        .revalidate(&inventory)
        .map_err(|e| Error::InvalidOverride(e.to_string()))?;
    let credit_mj_per_coworker_day = allocate_annual(
        scenario.floor_space_credit_m2 * scenario.credit_intensity(),
        f64::from(inventory.coworker_count),
        f64::from(inventory.workdays_per_year),
    )?;
    Ok(AppliedScenario {
        inventory,
        factors,
        credit_mj_per_coworker_day,
    })
}

/// Parameter that a sweep or break-even search varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    CoworkerCount,
    WorkdaysPerYear,
    FloorAreaM2,
    FloorSpaceCreditM2,
    CwDaysPerWeek,
}

impl Parameter {
    pub const ALL: [Parameter; 5] = [
        Parameter::CoworkerCount,
        Parameter::WorkdaysPerYear,
        Parameter::FloorAreaM2,
        Parameter::FloorSpaceCreditM2,
        Parameter::CwDaysPerWeek,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Parameter::CoworkerCount => "coworker_count",
            Parameter::WorkdaysPerYear => "workdays_per_year",
            Parameter::FloorAreaM2 => "floor_area_m2",
            Parameter::FloorSpaceCreditM2 => "floor_space_credit_m2",
            Parameter::CwDaysPerWeek => "cw_days_per_week",
        }
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, Parameter::CoworkerCount | Parameter::WorkdaysPerYear)
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Parameter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Parameter::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Parameter::ALL.iter().map(Parameter::as_str).collect();
                format!("unknown parameter {s:?} (expected one of {})", names.join(", "))
            })
    }
}

/// Everything needed to evaluate a co-working day against one baseline.
#[derive(Debug, Clone)]
pub struct BaseConfig {
    pub inventory: SiteInventory,
    pub factors: Factors,
    pub profiles: Profiles,
    pub baseline: DayType,
    pub scenario: Scenario,
}

/// Energy delta of one evaluated configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub delta: EnergyDelta,
    /// `cw_days_per_week × net_mj` when the scenario sets a weekly frequency.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weekly_net_mj: Option<f64>,
}

/// Real-valued allocation inputs that parameters act on.
#[derive(Debug, Clone, Copy)]
struct Basis {
    floor_area_m2: f64,
    coworkers: f64,
    workdays: f64,
    credit_m2: f64,
    cw_days: Option<f64>,
}

impl BaseConfig {
    /// Evaluates the scenario as given.
    pub fn evaluate(&self) -> Result<Evaluation> {
        let applied = apply_scenario(&self.inventory, &self.factors, &self.scenario)?;
        let basis = self.basis(&applied);
        self.evaluate_basis(&applied, basis)
    }

    /// Evaluates with `parameter` set to `value`. Integer parameters must be
    /// whole numbers.
    pub fn evaluate_at(&self, parameter: Parameter, value: f64) -> Result<Evaluation> {
        if parameter.is_integer() && (value.fract() != 0.0 || value < 1.0) {
            return Err(Error::InvalidOverride(format!("{parameter} must be a whole number >= 1, got {value}")));
        }
        self.evaluate_relaxed(parameter, value)
    }

    /// Like [`BaseConfig::evaluate_at`] but integer parameters may take any
    /// positive real value.
    pub fn evaluate_relaxed(&self, parameter: Parameter, value: f64) -> Result<Evaluation> {
        let applied = apply_scenario(&self.inventory, &self.factors, &self.scenario)?;
        let mut basis = self.basis(&applied);
        let invalid = |msg: &str| Err(Error::InvalidOverride(format!("{parameter} {msg}, got {value}")));
        if !value.is_finite() {
            return invalid("must be finite");
        }
        match parameter {
            Parameter::CoworkerCount => {
                if value <= 0.0 {
                    return invalid("must be > 0");
                }
                basis.coworkers = value;
            }
            Parameter::WorkdaysPerYear => {
                if value <= 0.0 || value > 366.0 {
                    return invalid("must be in (0, 366]");
                }
                basis.workdays = value;
            }
            Parameter::FloorAreaM2 => {
                if value <= 0.0 {
                    return invalid("must be > 0");
                }
                basis.floor_area_m2 = value;
            }
            Parameter::FloorSpaceCreditM2 => {
                if value < 0.0 {
                    return invalid("must be >= 0");
                }
                if value > 0.0 && self.scenario.credit_intensity_mj_per_m2_year.is_none() {
                    return Err(Error::InvalidOverride(
                        "floor_space_credit_m2 requires credit_intensity_mj_per_m2_year in the scenario".into(),
                    ));
                }
                basis.credit_m2 = value;
            }
            Parameter::CwDaysPerWeek => {
                check_cw_days(value)?;
                basis.cw_days = Some(value);
            }
        }
        self.evaluate_basis(&applied, basis)
    }

    fn basis(&self, applied: &AppliedScenario) -> Basis {
        Basis {
            floor_area_m2: applied.inventory.floor_area_m2,
            coworkers: f64::from(applied.inventory.coworker_count),
            workdays: f64::from(applied.inventory.workdays_per_year),
            credit_m2: self.scenario.floor_space_credit_m2,
            cw_days: self.scenario.cw_days_per_week,
        }
    }

    fn profile(&self, day_type: DayType) -> Result<DayTypeProfile> {
        let base = self
            .profiles
            .get(&day_type)
            .cloned()
            .unwrap_or_else(|| DayTypeProfile::empty(day_type));
        base.require_days()?;
        match self.scenario.modal_override.as_ref().and_then(|m| m.get(&day_type)) {
            Some(modes) => {
                let mut p = DayTypeProfile::from_mode_minutes(day_type, base.day_count, modes.clone());
                p.mean_activity_minutes = base.mean_activity_minutes;
                Ok(p)
            }
            None => Ok(base),
        }
    }

    fn evaluate_basis(&self, applied: &AppliedScenario, basis: Basis) -> Result<Evaluation> {
        let facility = allocate_annual(
            basis.floor_area_m2 * applied.factors.facility_intensity_total(),
            basis.coworkers,
            basis.workdays,
        )?;
        let equipment = equipment_energy(&applied.inventory, &applied.factors)?;
        let credit = allocate_annual(
            basis.credit_m2 * self.scenario.credit_intensity(),
            basis.coworkers,
            basis.workdays,
        )?;
        let cw = self.profile(DayType::Coworking)?;
        let baseline = self.profile(self.baseline)?;
        let travel = travel_energy(&cw.mean_mode_minutes, &applied.factors)
            - travel_energy(&baseline.mean_mode_minutes, &applied.factors);
        let delta = EnergyDelta::with_credit(self.baseline, facility, equipment, travel, -credit)?;
        Ok(Evaluation {
            delta,
            weekly_net_mj: basis.cw_days.map(|d| d * delta.net_mj),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    #[serde(flatten)]
    pub evaluation: Evaluation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub parameter: Parameter,
    pub baseline: DayType,
    pub points: Vec<SweepPoint>,
}

/// Evaluates every value independently. Points come back sorted by value;
/// `threads > 1` evaluates them on a dedicated pool without changing the
/// result.
pub fn sweep(base: &BaseConfig, parameter: Parameter, values: &[f64], threads: usize) -> Result<SweepResult> {
    if values.is_empty() {
        return Err(Error::InvalidOverride(format!("sweep over {parameter} needs at least one value")));
    }
    let mut values = values.to_vec();
    values.sort_by(f64::total_cmp);

    let point = |&value: &f64| -> Result<SweepPoint> {
        base.evaluate_at(parameter, value)
            .map(|evaluation| SweepPoint { value, evaluation })
            .map_err(|e| Error::SweepPoint {
                parameter: parameter.to_string(),
                value,
                source: Box::new(e),
            })
    };
    let points = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| values.par_iter().map(point).collect::<Result<Vec<_>>>())?
    } else {
        values.iter().map(point).collect::<Result<Vec<_>>>()?
    };
    Ok(SweepResult {
        parameter,
        baseline: base.baseline,
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub value: f64,
    pub iterations: u32,
}

const MAX_BISECTIONS: u32 = 2000;

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tolerance`; returns the bracket midpoint.
/// An endpoint where `f` is exactly zero is returned as is.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tolerance: f64) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidBounds(format!("need finite lo < hi, got [{lo}, {hi}]")));
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidBounds(format!("tolerance must be > 0, got {tolerance}")));
    }
    let non_finite = |value: f64| Error::NonFinite {
        parameter: "net_mj".into(),
        value,
    };
    let eval = |f: &mut F, x: f64, inside: bool| -> Result<f64> {
        match f(x) {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => Err(non_finite(x)),
            Err(_) if inside => Err(non_finite(x)),
            Err(e) => Err(e),
        }
    };

    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = eval(&mut f, lo, false)?;
    let f_hi = eval(&mut f, hi, false)?;
    if f_lo == 0.0 {
        return Ok(Root { value: lo, iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(Root { value: hi, iterations: 0 });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoRoot {
            lo,
            hi,
            net_lo: f_lo,
            net_hi: f_hi,
        });
    }

    let mut iterations = 0;
    while hi - lo >= tolerance && iterations < MAX_BISECTIONS {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f_mid = eval(&mut f, mid, true)?;
        if f_mid == 0.0 {
            return Ok(Root { value: mid, iterations });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(Root {
        value: lo + (hi - lo) / 2.0,
        iterations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakEven {
    pub parameter: Parameter,
    pub baseline: DayType,
    pub lo: f64,
    pub hi: f64,
    pub tolerance: f64,
    pub root: f64,
    pub iterations: u32,
    /// Integer parameters rounded up to the next whole number.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planning_value: Option<f64>,
    pub at_root: Evaluation,
}

/// Finds the parameter value where the net energy delta crosses zero.
/// Assumes the net delta is monotone in the parameter over the bounds.
pub fn break_even(base: &BaseConfig, parameter: Parameter, lo: f64, hi: f64, tolerance: f64) -> Result<BreakEven> {
    let root = bisect(
        |x| base.evaluate_relaxed(parameter, x).map(|e| e.delta.net_mj),
        lo,
        hi,
        tolerance,
    )?;
    let at_root = base.evaluate_relaxed(parameter, root.value)?;
    Ok(BreakEven {
        parameter,
        baseline: base.baseline,
        lo,
        hi,
        tolerance,
        root: root.value,
        iterations: root.iterations,
        planning_value: parameter.is_integer().then(|| root.value.ceil()),
        at_root,
    })
}
