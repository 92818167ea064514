//! Energy accounting for co-working.
//!
//! The pipeline reads time-use diaries ([`ingest`]), drops untypical days,
//! averages activity time and modal split per work-location day type
//! ([`aggregate`]), allocates the operating energy of the co-working space
//! to one coworker-day and prices travel by mode ([`energy`]), and compares
//! a co-working day with employer-office and home-office days. [`scenario`]
//! varies occupancy, workdays, floor area and floor-space credits and
//! searches for break-even points.

pub mod aggregate;
pub mod cli;
pub mod config;
pub mod energy;
pub mod error;
pub mod ingest;
pub mod inventory;
pub mod model;
pub mod report;
pub mod scenario;
pub mod taxonomy;

pub use aggregate::{aggregate_profiles, day_counts, profile_deltas, DayTypeProfile, Profiles};
pub use config::{load_config, Config, ConfigFile};
pub use energy::{compare_day_types, equipment_energy, facility_energy, travel_energy, DirectComponents};
pub use error::{Error, Result};
pub use ingest::{apply_quality_filter, classify_day, parse_diary_file, QualityRules, RejectReason, RejectedDay};
pub use inventory::{DeviceKind, FacilityUse, FactorTable, Factors, SiteInventory};
pub use model::{Activity, DayType, DiaryDay, EnergyDelta, TransportMode};
pub use scenario::{apply_scenario, break_even, sweep, BaseConfig, Parameter, Scenario};
pub use taxonomy::{classify_effect, EffectClassification, Layer, SignTendency};
