//! Shared test helpers: the synthetic calibration diary, the factor
//! back-solve that produces the shipped calibration config, and naive
//! reference computations used as oracles.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use chrono::{Datelike, NaiveDate, Weekday};
use telework_impact::{
    Activity, ConfigFile, DayType, DeviceKind, DiaryDay, FacilityUse, FactorTable, QualityRules, SiteInventory,
    TransportMode,
};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn calibration_dir() -> PathBuf {
    fixtures_dir().join("calibration")
}

// Published per-coworker-day components of a co-working day versus an
// employer-office day, MJ.
pub const FACILITY_MJ: f64 = 23.97;
pub const EQUIPMENT_MJ: f64 = 2.03;
pub const TRAVEL_VS_OFFICE_MJ: f64 = -21.95;

// Published site inventory.
pub const FLOOR_AREA_M2: f64 = 170.0;
pub const WORKPLACES: u32 = 14;
pub const COWORKERS: u32 = 60;
pub const SCREENS: u32 = 18;

/// Assumed; the allocation needs it but no value is published.
pub const WORKDAYS_PER_YEAR: u32 = 220;

pub const KEPT_DAYS: usize = 250;

use TransportMode::*;

struct DayTypeTarget {
    day_type: DayType,
    location: &'static str,
    days: usize,
    work: f64,
    chores: f64,
    leisure: f64,
    modes: [(TransportMode, f64); 5],
}

/// Mean targets per day type. Travel minutes are the mode sums:
/// office 133, co-working 65 (−68), home 41 (−92). Office walk+bike is 27%
/// of travel and car 19%; home car share 80%; on co-working days car and
/// public transport are equal and walking plus biking is the largest.
const TARGETS: [DayTypeTarget; 3] = [
    DayTypeTarget {
        day_type: DayType::EmployerOffice,
        location: "office",
        days: 110,
        work: 522.0,
        chores: 60.0,
        leisure: 200.0,
        modes: [(Walk, 19.95), (Bike, 15.96), (Car, 25.27), (PublicTransport, 66.50), (Other, 5.32)],
    },
    DayTypeTarget {
        day_type: DayType::Coworking,
        location: "coworking",
        days: 80,
        work: 508.0,
        chores: 75.0,
        leisure: 230.0,
        modes: [(Walk, 14.30), (Bike, 15.60), (Car, 16.25), (PublicTransport, 16.25), (Other, 2.60)],
    },
    DayTypeTarget {
        day_type: DayType::Home,
        location: "home",
        days: 60,
        work: 508.0,
        chores: 110.0,
        leisure: 280.0,
        modes: [(Walk, 4.10), (Bike, 2.05), (Car, 32.80), (PublicTransport, 1.23), (Other, 0.82)],
    },
];

pub fn target_mode_minutes(day_type: DayType) -> BTreeMap<TransportMode, f64> {
    TARGETS
        .iter()
        .find(|t| t.day_type == day_type)
        .map(|t| t.modes.iter().copied().collect())
        .unwrap()
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

/// One diary row before participant and date are assigned.
#[derive(Clone)]
pub struct RowSpec {
    pub location: &'static str,
    pub activity: [f64; 4],
    pub modes: [f64; 5],
}

fn kept_rows() -> Vec<RowSpec> {
    let mut rows = Vec::new();
    for t in &TARGETS {
        assert_eq!(t.days % 2, 0);
        for j in 0..t.days {
            // Paired perturbations (+x on even, −x on odd days) keep the
            // type means on target.
            let k = j / 2;
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            let mut modes = [0.0; 5];
            for (i, (_, base)) in t.modes.iter().enumerate() {
                let f = ((k * 3 + i * 5) % 9) as f64 / 20.0;
                modes[i] = round2(base * (1.0 + s * f));
            }
            let mode_sum: f64 = modes.iter().sum();
            let travel = round2(mode_sum + s * (k % 4) as f64);
            let work = t.work + s * ((k * 7) % 11) as f64 * 5.0;
            let chores = t.chores + s * ((k * 5) % 7) as f64 * 5.0;
            let leisure = t.leisure + s * ((k * 3) % 13) as f64 * 6.0;
            rows.push(RowSpec {
                location: t.location,
                activity: [travel, work, chores, leisure],
                modes,
            });
        }
    }
    rows
}

/// Rows the default quality rules must drop, two or three per reason.
fn rejected_rows() -> Vec<RowSpec> {
    let ok_modes = [10.0, 10.0, 20.0, 30.0, 0.0];
    let row = |location, activity, modes| RowSpec {
        location,
        activity,
        modes,
    };
    vec![
        row("other", [70.0, 480.0, 60.0, 200.0], ok_modes),
        row("other", [70.0, 500.0, 80.0, 180.0], ok_modes),
        row("other", [70.0, 450.0, 90.0, 220.0], ok_modes),
        row("multiple", [70.0, 530.0, 50.0, 190.0], ok_modes),
        row("multiple", [70.0, 470.0, 70.0, 210.0], ok_modes),
        row("multiple", [70.0, 510.0, 40.0, 230.0], ok_modes),
        row("office", [130.0, 200.0, 90.0, 300.0], [20.0, 15.0, 25.0, 65.0, 5.0]),
        row("office", [130.0, 180.0, 100.0, 320.0], [20.0, 15.0, 25.0, 65.0, 5.0]),
        row("home", [30.0, 300.0, 50.0, 60.0], [5.0, 0.0, 25.0, 0.0, 0.0]),
        row("home", [30.0, 280.0, 60.0, 70.0], [5.0, 0.0, 25.0, 0.0, 0.0]),
        row("coworking", [180.0, 500.0, 70.0, 220.0], [10.0, 10.0, 10.0, 10.0, 0.0]),
        row("coworking", [170.0, 490.0, 80.0, 230.0], [10.0, 5.0, 10.0, 10.0, 0.0]),
    ]
}

fn workdays_from(start: NaiveDate) -> impl Iterator<Item = NaiveDate> {
    start
        .iter_days()
        .filter(|d| !matches!(d.weekday(), Weekday::Sat | Weekday::Sun))
}

/// The synthetic calibration diary as CSV text: 250 days that pass the
/// default quality rules plus 12 that do not.
pub fn calibration_diary_csv() -> String {
    let rows: Vec<RowSpec> = kept_rows().into_iter().chain(rejected_rows()).collect();
    let n = rows.len();
    // Fixed permutation so day types are interleaved across participants.
    let mut order = vec![0; n];
    for (i, slot) in order.iter_mut().enumerate() {
        *slot = (i * 97) % n;
    }
    let dates: Vec<_> = workdays_from(NaiveDate::from_ymd_opt(2019, 9, 16).unwrap())
        .take(n.div_ceil(20))
        .collect();

    let mut out = String::from(
        "participant_id,date,location,travel_min,work_min,chores_min,leisure_min,walk_min,bike_min,car_min,pt_min,other_mode_min\n",
    );
    let mut body: Vec<(NaiveDate, usize, String)> = Vec::with_capacity(n);
    for (pos, &src) in order.iter().enumerate() {
        let r = &rows[src];
        let participant = pos % 20 + 1;
        let date = dates[pos / 20];
        let nums: Vec<String> = r.activity.iter().chain(r.modes.iter()).map(|v| format!("{v}")).collect();
        body.push((date, participant, format!("P{participant:02},{date},{},{}\n", r.location, nums.join(","))));
    }
    body.sort_by_key(|r| (r.0, r.1));
    for (_, _, line) in body {
        out.push_str(&line);
    }
    out
}

/// Arithmetic mean of each mode's minutes over days of `day_type`,
/// computed directly from the rows.
pub fn naive_mode_means(days: &[DiaryDay], day_type: DayType) -> BTreeMap<TransportMode, f64> {
    let selected: Vec<_> = days.iter().filter(|d| d.day_type == day_type).collect();
    TransportMode::ALL
        .iter()
        .map(|&m| {
            let sum = selected.iter().fold(0.0, |acc, d| acc + d.mode_minutes.get(&m).copied().unwrap_or(0.0));
            (m, sum / selected.len() as f64)
        })
        .collect()
}

pub fn naive_activity_means(days: &[DiaryDay], day_type: DayType) -> BTreeMap<Activity, f64> {
    let selected: Vec<_> = days.iter().filter(|d| d.day_type == day_type).collect();
    Activity::ALL
        .iter()
        .map(|&a| {
            let sum = selected.iter().fold(0.0, |acc, d| acc + d.activity_minutes.get(&a).copied().unwrap_or(0.0));
            (a, sum / selected.len() as f64)
        })
        .collect()
}

/// Assumed mode speeds, km/h.
pub const SPEEDS: [(TransportMode, f64); 5] = [(Walk, 5.0), (Bike, 15.0), (Car, 40.0), (PublicTransport, 30.0), (Other, 20.0)];

/// Relative energy intensity of each mode, MJ/pkm before scaling.
pub const NOMINAL_MODE_ENERGY: [(TransportMode, f64); 5] =
    [(Walk, 0.0), (Bike, 0.1), (Car, 2.5), (PublicTransport, 0.6), (Other, 1.5)];

fn travel_mj(minutes: &BTreeMap<TransportMode, f64>, energy: &BTreeMap<TransportMode, f64>) -> f64 {
    SPEEDS
        .iter()
        .map(|(m, speed)| minutes[m] / 60.0 * speed * energy[m])
        .sum()
}

/// Back-solves a factor table so the engine reproduces the published
/// components on the calibration diary.
///
/// * facility: total intensity = 23.97 × coworkers × workdays / area, split
///   55 % heating, 5 % cooling, 40 % lighting;
/// * equipment: screen 1.2, desktop 3.0 and printer 2.0 MJ/day, the TV takes
///   the remainder of 2.03 × 14 MJ/day;
/// * travel: speeds fixed, nominal mode intensities scaled by one factor so
///   the co-working minus office travel energy is −21.95 MJ.
pub fn back_solve_config(kept: &[DiaryDay]) -> ConfigFile {
    let inventory = SiteInventory {
        floor_area_m2: FLOOR_AREA_M2,
        workplace_count: WORKPLACES,
        device_counts: BTreeMap::from([
            (DeviceKind::Screen, SCREENS),
            (DeviceKind::DesktopComputer, 1),
            (DeviceKind::Printer, 1),
            (DeviceKind::Tv, 1),
        ]),
        coworker_count: COWORKERS,
        workdays_per_year: WORKDAYS_PER_YEAR,
    };

    let intensity = FACILITY_MJ * f64::from(COWORKERS) * f64::from(WORKDAYS_PER_YEAR) / FLOOR_AREA_M2;
    let heating = 0.55 * intensity;
    let cooling = 0.05 * intensity;
    let lighting = intensity - heating - cooling;

    let (screen, desktop, printer) = (1.2, 3.0, 2.0);
    let device_total = EQUIPMENT_MJ * f64::from(WORKPLACES);
    let tv = device_total - f64::from(SCREENS) * screen - desktop - printer;

    let nominal: BTreeMap<_, _> = NOMINAL_MODE_ENERGY.into_iter().collect();
    let cw = naive_mode_means(kept, DayType::Coworking);
    let office = naive_mode_means(kept, DayType::EmployerOffice);
    let scale = TRAVEL_VS_OFFICE_MJ / (travel_mj(&cw, &nominal) - travel_mj(&office, &nominal));
    let mode_energy = nominal.iter().map(|(&m, &e)| (m, e * scale)).collect();

    ConfigFile {
        inventory,
        factors: FactorTable {
            facility_intensity: BTreeMap::from([
                (FacilityUse::Heating, heating),
                (FacilityUse::Cooling, cooling),
                (FacilityUse::Lighting, lighting),
            ]),
            device_daily_energy: BTreeMap::from([
                (DeviceKind::Screen, screen),
                (DeviceKind::DesktopComputer, desktop),
                (DeviceKind::Printer, printer),
                (DeviceKind::Tv, tv),
            ]),
            mode_speed: SPEEDS.into_iter().collect(),
            mode_energy,
        },
        quality_rules: QualityRules::default(),
    }
}

/// Independent facility allocation for the published inventory.
pub fn occupancy_net(coworkers: f64) -> f64 {
    FACILITY_MJ * f64::from(COWORKERS) / coworkers + EQUIPMENT_MJ + TRAVEL_VS_OFFICE_MJ
}

/// Root of `occupancy_net` by hand: 1438.2 / N = 21.95 − 2.03.
pub fn occupancy_root() -> f64 {
    FACILITY_MJ * f64::from(COWORKERS) / (-TRAVEL_VS_OFFICE_MJ - EQUIPMENT_MJ)
}

pub fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

/// Parses the shipped calibration diary and applies the default rules.
pub fn load_calibration_days() -> (Vec<DiaryDay>, Vec<telework_impact::RejectedDay>) {
    let bytes = std::fs::read(calibration_dir().join("diaries.csv")).unwrap();
    let parsed = telework_impact::parse_diary_file(&bytes[..]).unwrap();
    assert!(parsed.rejected.is_empty(), "calibration diary has parse errors");
    telework_impact::apply_quality_filter(&parsed.days, &QualityRules::default())
}

pub fn calibration_base(baseline: DayType) -> telework_impact::BaseConfig {
    let cfg = telework_impact::load_config(&calibration_dir().join("config.json")).unwrap();
    let (kept, _) = load_calibration_days();
    telework_impact::BaseConfig {
        inventory: cfg.inventory,
        factors: cfg.factors,
        profiles: telework_impact::aggregate_profiles(&kept),
        baseline,
        scenario: Default::default(),
    }
}

/// A random diary day that passes the default quality rules.
pub fn random_valid_day<R: rand::Rng>(rng: &mut R, index: usize) -> DiaryDay {
    let day_type = DayType::COMPARED[rng.gen_range(0..3)];
    let mut modes = BTreeMap::new();
    for m in TransportMode::ALL {
        let v = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..60.0) };
        modes.insert(*m, v);
    }
    let mode_sum: f64 = modes.values().sum();
    let travel = (mode_sum + rng.gen_range(-50.0..50.0)).max(0.0);
    let activity = BTreeMap::from([
        (Activity::Travel, travel),
        (Activity::Work, rng.gen_range(240.0..600.0)),
        (Activity::EverydayChores, rng.gen_range(0.0..200.0)),
        (Activity::Leisure, rng.gen_range(240.0..400.0)),
    ]);
    let date = date(2019, 9, 16) + chrono::Duration::days((index % 60) as i64);
    DiaryDay::new(format!("R{:03}", index % 200), date, day_type, activity, modes).unwrap()
}

/// A random valid inventory with one device of each listed kind count and
/// matching factors.
pub fn random_site<R: rand::Rng>(rng: &mut R) -> (SiteInventory, FactorTable) {
    let kinds = [DeviceKind::Screen, DeviceKind::DesktopComputer, DeviceKind::Printer, DeviceKind::Tv];
    let inventory = SiteInventory {
        floor_area_m2: rng.gen_range(10.0..2000.0),
        workplace_count: rng.gen_range(1..100),
        device_counts: kinds.iter().map(|k| (k.clone(), rng.gen_range(0..40))).collect(),
        coworker_count: rng.gen_range(1..500),
        workdays_per_year: rng.gen_range(1..=366),
    };
    let factors = FactorTable {
        facility_intensity: [FacilityUse::Heating, FacilityUse::Cooling, FacilityUse::Lighting]
            .into_iter()
            .map(|u| (u, rng.gen_range(0.0..1500.0)))
            .collect(),
        device_daily_energy: kinds.iter().map(|k| (k.clone(), rng.gen_range(0.0..5.0))).collect(),
        mode_speed: TransportMode::ALL.iter().map(|&m| (m, rng.gen_range(1.0..80.0))).collect(),
        mode_energy: TransportMode::ALL.iter().map(|&m| (m, rng.gen_range(0.0..4.0))).collect(),
    };
    (inventory, factors)
}

pub fn random_mode_minutes<R: rand::Rng>(rng: &mut R) -> BTreeMap<TransportMode, f64> {
    TransportMode::ALL.iter().map(|&m| (m, rng.gen_range(0.0..120.0))).collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
