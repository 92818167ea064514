//! CSV and JSON emission.
//!
//! CSV values are rounded to a display precision (`None` keeps full
//! precision); JSON always carries full precision. Every emitter is a pure
//! function of its inputs so repeated runs are byte-identical.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::aggregate::Profiles;
use crate::ingest::{RejectReason, RejectedDay};
use crate::model::{Activity, DayType, EnergyDelta, TransportMode};
use crate::scenario::{BreakEven, Evaluation, Parameter, SweepResult};

pub const REJECTION_HEADER: &str = "row,participant_id,date,reason";
pub const PROFILE_HEADER: &str = "day_type,metric,key,value";
pub const PLOT_HEADER: &str = "day_type,series,key,value";
pub const DELTA_HEADER: &str = "baseline,facility_mj,equipment_mj,travel_mj,net_mj";
pub const SWEEP_HEADER: &str = "parameter,value,facility_mj,equipment_mj,travel_mj,credit_mj,net_mj";

/// Formats `v` with `round` decimals, or shortest round-trip form when
/// `round` is `None`. Never prints a negative zero.
pub fn fmt_num(v: f64, round: Option<usize>) -> String {
    let s = match round {
        Some(n) => format!("{v:.n$}"),
        None => format!("{v}"),
    };
    match s.strip_prefix('-') {
        Some(rest) if rest.chars().all(|c| c == '0' || c == '.') => rest.to_string(),
        _ => s,
    }
}

fn csv_string(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header.split(',')).expect("write to Vec");
    for row in rows {
        w.write_record(&row).expect("write to Vec");
    }
    String::from_utf8(w.into_inner().expect("flush Vec")).expect("csv output is UTF-8")
}

pub fn rejections_csv(rejected: &[RejectedDay]) -> String {
    csv_string(
        REJECTION_HEADER,
        rejected.iter().map(|r| {
            vec![
                r.row.map(|n| n.to_string()).unwrap_or_default(),
                r.participant_id.clone(),
                r.date.clone(),
                r.reason.to_string(),
            ]
        }),
    )
}

pub fn profiles_csv(profiles: &Profiles, round: Option<usize>) -> String {
    let mut rows = Vec::new();
    for (day_type, p) in profiles {
        let dt = day_type.to_string();
        rows.push(vec![dt.clone(), "day_count".into(), "days".into(), p.day_count.to_string()]);
        for a in Activity::ALL {
            rows.push(vec![dt.clone(), "mean_activity_minutes".into(), a.to_string(), fmt_num(p.activity(*a), round)]);
        }
        for m in TransportMode::ALL {
            rows.push(vec![dt.clone(), "mean_mode_minutes".into(), m.to_string(), fmt_num(p.mode(*m), round)]);
        }
        for m in TransportMode::ALL {
            rows.push(vec![dt.clone(), "mode_share".into(), m.to_string(), fmt_num(p.share(*m), round)]);
        }
    }
    csv_string(PROFILE_HEADER, rows)
}

/// Long-format table for stacked bars: minutes per activity, travel share
/// per mode (percent) and travel minutes per mode, per day type.
pub fn plot_data_csv(profiles: &Profiles, round: Option<usize>) -> String {
    let mut rows = Vec::new();
    for (day_type, p) in profiles.iter().filter(|(_, p)| p.day_count > 0) {
        let dt = day_type.to_string();
        for a in Activity::ALL {
            rows.push(vec![dt.clone(), "time_per_activity_min".into(), a.to_string(), fmt_num(p.activity(*a), round)]);
        }
        for m in TransportMode::ALL {
            rows.push(vec![dt.clone(), "travel_share_pct".into(), m.to_string(), fmt_num(100.0 * p.share(*m), round)]);
        }
        for m in TransportMode::ALL {
            rows.push(vec![dt.clone(), "travel_time_min".into(), m.to_string(), fmt_num(p.mode(*m), round)]);
        }
    }
    csv_string(PLOT_HEADER, rows)
}

pub fn deltas_csv(deltas: &[EnergyDelta], round: Option<usize>) -> String {
    csv_string(
        DELTA_HEADER,
        deltas.iter().map(|d| {
            vec![
                d.baseline.to_string(),
                fmt_num(d.facility_mj, round),
                fmt_num(d.equipment_mj, round),
                fmt_num(d.travel_mj, round),
                fmt_num(d.net_mj, round),
            ]
        }),
    )
}

fn sweep_row(parameter: Parameter, value: f64, e: &Evaluation, round: Option<usize>) -> Vec<String> {
    let d = &e.delta;
    vec![
        parameter.to_string(),
        fmt_num(value, None),
        fmt_num(d.facility_mj, round),
        fmt_num(d.equipment_mj, round),
        fmt_num(d.travel_mj, round),
        fmt_num(d.credit_mj, round),
        fmt_num(d.net_mj, round),
    ]
}

pub fn sweep_csv(result: &SweepResult, round: Option<usize>) -> String {
    csv_string(
        SWEEP_HEADER,
        result
            .points
            .iter()
            .map(|p| sweep_row(result.parameter, p.value, &p.evaluation, round)),
    )
}

/// One row at the root, in sweep layout; the root value keeps full precision.
pub fn break_even_csv(be: &BreakEven, round: Option<usize>) -> String {
    csv_string(SWEEP_HEADER, [sweep_row(be.parameter, be.root, &be.at_root, round)])
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct InputSummary {
    pub file: String,
    pub sha256: String,
    pub rows: usize,
    pub parsed: usize,
    pub kept: usize,
    pub rejected: usize,
    pub rejected_by_reason: BTreeMap<RejectReason, usize>,
    pub location_warnings: usize,
}

/// Machine-readable record of one run. Holds no timestamp; that goes to a
/// sidecar file so the report itself is reproducible.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_file: String,
    pub config_fingerprint: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diaries: Option<InputSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub day_counts: Option<BTreeMap<DayType, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profiles: Option<Profiles>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub deltas: Vec<EnergyDelta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<crate::scenario::Scenario>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweeps: Vec<SweepResult>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub break_even: Vec<BreakEven>,
}

impl RunReport {
    pub fn new(command: &str, config_file: String, config_fingerprint: String) -> Self {
        RunReport {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config_file,
            config_fingerprint,
            diaries: None,
            day_counts: None,
            profiles: None,
            deltas: Vec::new(),
            scenario: None,
            sweeps: Vec::new(),
            break_even: Vec::new(),
        }
    }
}
