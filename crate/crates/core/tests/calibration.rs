//! The calibration fixture is generated by `support`. Run with
//! `UPDATE_FIXTURES=1` to rewrite the shipped files.

mod support;

use support::*;
use telework_impact::{parse_diary_file, report::to_json, DayType, QualityRules};

fn check_or_write(name: &str, expected: &str) {
    let path = calibration_dir().join(name);
    if std::env::var_os("UPDATE_FIXTURES").is_some() {
        std::fs::create_dir_all(calibration_dir()).unwrap();
        std::fs::write(&path, expected).unwrap();
    }
    let shipped = std::fs::read_to_string(&path).unwrap();
    assert!(shipped == expected, "{name} is stale; rerun with UPDATE_FIXTURES=1");
}

#[test]
fn shipped_fixtures_match_generator() {
    let csv = calibration_diary_csv();
    let parsed = parse_diary_file(csv.as_bytes()).unwrap();
    assert!(parsed.rejected.is_empty());
    let (kept, rejected) = telework_impact::apply_quality_filter(&parsed.days, &QualityRules::default());
    assert_eq!(kept.len(), KEPT_DAYS);
    assert_eq!(rejected.len(), 12);
    check_or_write("diaries.csv", &csv);
    check_or_write("config.json", &to_json(&back_solve_config(&kept)));
}

#[test]
fn generated_means_hit_targets() {
    let parsed = parse_diary_file(calibration_diary_csv().as_bytes()).unwrap();
    let (kept, _) = telework_impact::apply_quality_filter(&parsed.days, &QualityRules::default());
    for dt in DayType::COMPARED {
        let got = naive_mode_means(&kept, dt);
        for (m, want) in target_mode_minutes(dt) {
            assert!((got[&m] - want).abs() < 0.01, "{dt} {m}: {} vs {want}", got[&m]);
        }
    }
}
