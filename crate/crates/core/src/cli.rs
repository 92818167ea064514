//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input or configuration error, 2 insufficient
//! data (no kept days, a required day type without days), 3 no break-even
//! root in the given bounds.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::aggregate::{aggregate_profiles, day_counts, Profiles};
use crate::config::{load_config, load_profiles, load_scenario, sha256_hex, Config};
use crate::energy::{compare_day_types, DirectComponents};
use crate::error::{Error, Result};
use crate::ingest::{apply_quality_filter, parse_diary_file, ParsedDiary, QualityRules, RejectedDay};
use crate::model::{DayType, DiaryDay};
use crate::report::{self, InputSummary, RunReport};
use crate::scenario::{break_even, sweep, BaseConfig, Parameter, Scenario};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_INSUFFICIENT: u8 = 2;
pub const EXIT_NO_ROOT: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "telework-impact", version, about = "Energy accounting for co-working days versus office and home-office days")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and quality-filter diaries; write the rejection report.
    Validate(ValidateArgs),
    /// Mean activity time and modal split per day type.
    Profile(ProfileArgs),
    /// Energy change of a co-working day against office and/or home days.
    Delta(DeltaArgs),
    /// Evaluate the energy change over a list of parameter values.
    Sweep(SweepArgs),
    /// Find the parameter value where the net energy change is zero.
    Breakeven(BreakevenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Baseline {
    Office,
    Home,
    Both,
}

impl Baseline {
    fn day_types(self) -> Vec<DayType> {
        match self {
            Baseline::Office => vec![DayType::EmployerOffice],
            Baseline::Home => vec![DayType::Home],
            Baseline::Both => vec![DayType::EmployerOffice, DayType::Home],
        }
    }
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Configuration JSON (inventory, factors, quality rules).
    #[arg(long, env = "TELEWORK_IMPACT_CONFIG")]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Directory for output files. Without it only stdout is written.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    pub format: Format,
    /// Decimals for CSV and console values; JSON keeps full precision.
    #[arg(long, default_value_t = 2)]
    pub round: usize,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub diaries: PathBuf,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub diaries: PathBuf,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    #[arg(long)]
    pub diaries: PathBuf,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub baseline: Baseline,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct ProfileSource {
    /// Diary CSV; profiles are recomputed through the full pipeline.
    #[arg(long, group = "source")]
    pub diaries: Option<PathBuf>,
    /// profiles.json written by the `profile` command.
    #[arg(long, group = "source")]
    pub profiles: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub source: ProfileSource,
    /// Scenario JSON; an empty scenario is used when omitted.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long)]
    pub parameter: Parameter,
    #[arg(long, value_enum, default_value = "office")]
    pub baseline: Baseline,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: ScenarioArgs,
    /// Comma-separated parameter values.
    #[arg(long, value_delimiter = ',', required_unless_present = "range", conflicts_with = "range")]
    pub values: Vec<f64>,
    /// `start:stop:count`, evenly spaced and inclusive.
    #[arg(long)]
    pub range: Option<String>,
    /// Worker threads for sweep points (1 = serial).
    #[arg(long, default_value_t = 1)]
    pub parallel: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BreakevenArgs {
    #[command(flatten)]
    pub common: ScenarioArgs,
    /// `lo,hi`
    #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
    pub bounds: Vec<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Maps an error to the process exit code.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::MissingProfile(_) => EXIT_INSUFFICIENT,
        Error::NoRoot { .. } => EXIT_NO_ROOT,
        Error::SweepPoint { source, .. } => exit_code(source),
        _ => EXIT_INPUT,
    }
}

/// Runs a parsed command, writing the primary table to `stdout` and
/// diagnostics to stderr. Returns the exit code for non-error outcomes.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<u8> {
    match &cli.command {
        Command::Validate(a) => cmd_validate(a, stdout),
        Command::Profile(a) => cmd_profile(a, stdout),
        Command::Delta(a) => cmd_delta(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Breakeven(a) => cmd_breakeven(a, stdout),
    }
}

struct Sink<'a> {
    output: &'a OutputArgs,
}

impl Sink<'_> {
    fn round(&self) -> Option<usize> {
        Some(self.output.round)
    }

    fn write(&self, name: &str, contents: &str) -> Result<()> {
        let Some(dir) = &self.output.out else {
            return Ok(());
        };
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))
    }

    fn csv(&self, stem: &str, contents: &str) -> Result<()> {
        if self.output.format.csv() {
            self.write(&format!("{stem}.csv"), contents)?;
        }
        Ok(())
    }

    fn json<T: Serialize + ?Sized>(&self, stem: &str, value: &T) -> Result<()> {
        if self.output.format.json() {
            self.write(&format!("{stem}.json"), &report::to_json(value))?;
        }
        Ok(())
    }

    /// Writes `report.json` and its sidecar carrying the wall-clock time.
    fn report(&self, report: &RunReport) -> Result<()> {
        let body = report::to_json(report);
        self.write("report.json", &body)?;
        #[derive(Serialize)]
        struct Meta {
            generated_at: String,
            report_sha256: String,
        }
        let meta = Meta {
            generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            report_sha256: sha256_hex(body.as_bytes()),
        };
        self.write("run_meta.json", &report::to_json(&meta))
    }
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<()> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

struct DiaryRun {
    kept: Vec<DiaryDay>,
    rejected: Vec<RejectedDay>,
    summary: InputSummary,
}

fn load_diaries(path: &Path, rules: &QualityRules) -> Result<DiaryRun> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let ParsedDiary {
        days,
        rejected: parse_rejects,
        warnings,
    } = parse_diary_file(bytes.as_slice()).map_err(|e| match e {
        Error::Header(msg) => Error::Header(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    for w in &warnings {
        eprintln!(
            "warning: {} row {}: unknown location {:?}, treated as other_location",
            path.display(),
            w.row.unwrap_or_default(),
            w.location
        );
    }
    let rows = days.len() + parse_rejects.len();
    let (kept, filter_rejects) = apply_quality_filter(&days, rules);
    let mut rejected: Vec<_> = parse_rejects.into_iter().chain(filter_rejects).collect();
    rejected.sort_by_key(|r| r.row);

    let mut rejected_by_reason = BTreeMap::new();
    for r in &rejected {
        *rejected_by_reason.entry(r.reason).or_insert(0) += 1;
    }
    let summary = InputSummary {
        file: file_name(path),
        sha256: sha256_hex(&bytes),
        rows,
        parsed: days.len(),
        kept: kept.len(),
        rejected: rejected.len(),
        rejected_by_reason,
        location_warnings: warnings.len(),
    };
    Ok(DiaryRun {
        kept,
        rejected,
        summary,
    })
}

fn base_report(command: &str, config_path: &Path, config: &Config) -> RunReport {
    RunReport::new(command, file_name(config_path), config.fingerprint.clone())
}

fn cmd_validate(args: &ValidateArgs, stdout: &mut dyn Write) -> Result<u8> {
    let config = load_config(&args.config.config)?;
    let run = load_diaries(&args.diaries, &config.quality_rules)?;
    let sink = Sink { output: &args.output };

    let csv = report::rejections_csv(&run.rejected);
    emit(stdout, &csv)?;
    sink.csv("rejections", &csv)?;
    sink.json("rejections", &run.rejected)?;

    let mut rep = base_report("validate", &args.config.config, &config);
    rep.day_counts = Some(day_counts(&run.kept));
    rep.diaries = Some(run.summary.clone());
    sink.report(&rep)?;

    eprintln!(
        "{}: {} rows, {} kept, {} rejected",
        args.diaries.display(),
        run.summary.rows,
        run.summary.kept,
        run.summary.rejected
    );
    if run.kept.is_empty() {
        eprintln!("error: every diary day was rejected");
        return Ok(EXIT_INSUFFICIENT);
    }
    Ok(EXIT_OK)
}

fn cmd_profile(args: &ProfileArgs, stdout: &mut dyn Write) -> Result<u8> {
    let config = load_config(&args.config.config)?;
    let run = load_diaries(&args.diaries, &config.quality_rules)?;
    let profiles = aggregate_profiles(&run.kept);
    let sink = Sink { output: &args.output };

    let csv = report::profiles_csv(&profiles, sink.round());
    emit(stdout, &csv)?;
    sink.csv("profiles", &csv)?;
    sink.json("profiles", &profiles)?;
    sink.csv("plot_data", &report::plot_data_csv(&profiles, sink.round()))?;

    let mut rep = base_report("profile", &args.config.config, &config);
    rep.day_counts = Some(day_counts(&run.kept));
    rep.diaries = Some(run.summary);
    rep.profiles = Some(profiles.clone());
    sink.report(&rep)?;

    let empty: Vec<_> = profiles
        .values()
        .filter(|p| p.day_count == 0)
        .map(|p| p.day_type.to_string())
        .collect();
    if !empty.is_empty() {
        eprintln!("error: no kept days for day type(s): {}", empty.join(", "));
        return Ok(EXIT_INSUFFICIENT);
    }
    Ok(EXIT_OK)
}

fn cmd_delta(args: &DeltaArgs, stdout: &mut dyn Write) -> Result<u8> {
    let config = load_config(&args.config.config)?;
    let run = load_diaries(&args.diaries, &config.quality_rules)?;
    let profiles = aggregate_profiles(&run.kept);
    let direct = DirectComponents::compute(&config.inventory, &config.factors)?;
    let sink = Sink { output: &args.output };

    let mut deltas = Vec::new();
    let mut missing = Vec::new();
    for baseline in args.baseline.day_types() {
        match compare_day_types(&profiles[&DayType::Coworking], &profiles[&baseline], &direct, &config.factors) {
            Ok(d) => deltas.push(d),
            Err(Error::MissingProfile(d)) => {
                if !missing.contains(&d) {
                    missing.push(d)
                }
            }
            Err(e) => return Err(e),
        }
    }

    let csv = report::deltas_csv(&deltas, sink.round());
    emit(stdout, &csv)?;
    sink.csv("delta", &csv)?;
    sink.json("delta", &deltas)?;

    let mut rep = base_report("delta", &args.config.config, &config);
    rep.day_counts = Some(day_counts(&run.kept));
    rep.diaries = Some(run.summary);
    rep.profiles = Some(profiles);
    rep.deltas = deltas;
    sink.report(&rep)?;

    if !missing.is_empty() {
        for d in missing {
            eprintln!("error: {}", Error::MissingProfile(d));
        }
        return Ok(EXIT_INSUFFICIENT);
    }
    Ok(EXIT_OK)
}

struct ScenarioInputs {
    config: Config,
    profiles: Profiles,
    scenario: Scenario,
    summary: Option<InputSummary>,
}

fn load_scenario_inputs(args: &ScenarioArgs) -> Result<ScenarioInputs> {
    let config = load_config(&args.config.config)?;
    let (profiles, summary) = match (&args.source.diaries, &args.source.profiles) {
        (Some(diaries), _) => {
            let run = load_diaries(diaries, &config.quality_rules)?;
            (aggregate_profiles(&run.kept), Some(run.summary))
        }
        (None, Some(path)) => (load_profiles(path)?, None),
        (None, None) => unreachable!("clap requires one profile source"),
    };
    let scenario = match &args.scenario {
        Some(path) => load_scenario(path)?,
        None => Scenario::default(),
    };
    Ok(ScenarioInputs {
        config,
        profiles,
        scenario,
        summary,
    })
}

impl ScenarioInputs {
    fn base(&self, baseline: DayType) -> BaseConfig {
        BaseConfig {
            inventory: self.config.inventory.clone(),
            factors: self.config.factors.clone(),
            profiles: self.profiles.clone(),
            baseline,
            scenario: self.scenario.clone(),
        }
    }

    fn report(&self, command: &str, args: &ScenarioArgs) -> RunReport {
        let mut rep = base_report(command, &args.config.config, &self.config);
        rep.diaries = self.summary.clone();
        rep.profiles = Some(self.profiles.clone());
        rep.scenario = Some(self.scenario.clone());
        rep
    }
}

fn parse_range(range: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidBounds(format!("range {range:?} must be start:stop:count"));
    let parts: Vec<_> = range.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(bad());
    };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
        .collect())
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<u8> {
    let inputs = load_scenario_inputs(&args.common)?;
    let values = match &args.range {
        Some(r) => parse_range(r)?,
        None => args.values.clone(),
    };
    let sink = Sink { output: &args.output };
    let mut rep = inputs.report("sweep", &args.common);

    for baseline in args.common.baseline.day_types() {
        let result = sweep(&inputs.base(baseline), args.common.parameter, &values, args.parallel.max(1))?;
        let csv = report::sweep_csv(&result, sink.round());
        emit(stdout, &csv)?;
        sink.csv(&format!("sweep_{baseline}"), &csv)?;
        sink.json(&format!("sweep_{baseline}"), &result)?;
        rep.sweeps.push(result);
    }
    sink.report(&rep)?;
    Ok(EXIT_OK)
}

fn cmd_breakeven(args: &BreakevenArgs, stdout: &mut dyn Write) -> Result<u8> {
    let [lo, hi] = args.bounds[..] else {
        return Err(Error::InvalidBounds(format!(
            "--bounds needs exactly two values lo,hi, got {}",
            args.bounds.len()
        )));
    };
    let inputs = load_scenario_inputs(&args.common)?;
    let sink = Sink { output: &args.output };
    let mut rep = inputs.report("breakeven", &args.common);

    for baseline in args.common.baseline.day_types() {
        let be = break_even(&inputs.base(baseline), args.common.parameter, lo, hi, args.tolerance)?;
        let csv = report::break_even_csv(&be, sink.round());
        emit(stdout, &csv)?;
        sink.csv(&format!("breakeven_{baseline}"), &csv)?;
        sink.json(&format!("breakeven_{baseline}"), &be)?;
        match be.planning_value {
            Some(plan) => eprintln!(
                "break-even vs {baseline}: {} = {} (round up for planning: {plan})",
                be.parameter, be.root
            ),
            None => eprintln!("break-even vs {baseline}: {} = {}", be.parameter, be.root),
        }
        rep.break_even.push(be);
    }
    sink.report(&rep)?;
    Ok(EXIT_OK)
}
