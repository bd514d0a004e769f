//! End-to-end anonymization pipeline: parse → automaton → ε calibration →
//! oversample → time noise → write log + report.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::dafsa::{ContingencyTable, Dafsa, StateAnnotatedLog, TransitionVariantLookup};
use crate::error::{Error, Result};
use crate::log::{
    parse_csv, parse_xes, relative_times, write_log, ColumnMapping, EventLog, LogFormat, TimeUnit,
};
use crate::metrics::{
    oversampling_ratio, pair_relative_times, smape_percent, variant_set_equal, EpsilonSummary,
    UtilityReport,
};
use crate::oversample::{draw_needed_noise, oversample};
use crate::risk::{residual_risk, time_epsilons, PrivacyConfig, DEFAULT_EPSILON_CAP};
use crate::timenoise::{adjust_epsilons, enforce_monotonic, expand_plan, inject_time_noise};

/// Input format selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormatChoice {
    #[default]
    Auto,
    Xes,
    Csv,
}

impl std::str::FromStr for FormatChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(FormatChoice::Auto),
            "xes" => Ok(FormatChoice::Xes),
            "csv" => Ok(FormatChoice::Csv),
            other => Err(format!("unknown format {other:?} (auto|xes|csv)")),
        }
    }
}

/// Everything one run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub format: FormatChoice,
    pub columns: ColumnMapping,
    pub output: PathBuf,
    pub report: PathBuf,
    pub delta: f64,
    pub precision: f64,
    pub time_unit: TimeUnit,
    pub seed: u64,
    pub monotonic: bool,
    pub epsilon_cap: f64,
    /// Write the anonymized log in this format instead of the input's.
    pub output_format: Option<LogFormat>,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, output: impl Into<PathBuf>, delta: f64) -> RunConfig {
        let output = output.into();
        let report = output.with_extension("report.json");
        RunConfig {
            input: input.into(),
            format: FormatChoice::Auto,
            columns: ColumnMapping::default(),
            output,
            report,
            delta,
            precision: 0.1,
            time_unit: TimeUnit::Hours,
            seed: 42,
            monotonic: false,
            epsilon_cap: DEFAULT_EPSILON_CAP,
            output_format: None,
        }
    }

    fn privacy(&self) -> PrivacyConfig {
        PrivacyConfig {
            delta: self.delta,
            precision: self.precision,
            time_unit: self.time_unit,
            seed: self.seed,
            epsilon_cap: self.epsilon_cap,
        }
    }
}

fn sniff_format(path: &Path, bytes: &[u8]) -> LogFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("xes") => return LogFormat::Xes,
        Some(ext) if ext.eq_ignore_ascii_case("csv") => return LogFormat::Csv,
        _ => {}
    }
    let head: &[u8] = &bytes[..bytes.len().min(256)];
    if head.trim_ascii_start().starts_with(b"<") {
        LogFormat::Xes
    } else {
        LogFormat::Csv
    }
}

/// Parse the input file according to the configured format choice.
pub fn load_input(config: &RunConfig) -> Result<EventLog> {
    let bytes = fs::read(&config.input).map_err(|source| Error::ReadInput {
        path: config.input.clone(),
        source,
    })?;
    let format = match config.format {
        FormatChoice::Xes => LogFormat::Xes,
        FormatChoice::Csv => LogFormat::Csv,
        FormatChoice::Auto => sniff_format(&config.input, &bytes),
    };
    match format {
        LogFormat::Xes => parse_xes(&bytes),
        LogFormat::Csv => parse_csv(&bytes, &config.columns),
    }
}

/// Outcome of [`anonymize`]: the published log plus its report.
#[derive(Debug)]
pub struct Anonymized {
    pub log: EventLog,
    pub report: UtilityReport,
}

/// Anonymize an in-memory log under `config`. Deterministic given the
/// seed: the same inputs produce the same outputs.
pub fn anonymize(log: &EventLog, config: &PrivacyConfig, monotonic: bool) -> Result<Anonymized> {
    config.validate()?;
    let started = Instant::now();

    let times = relative_times(log, config.time_unit)?;
    let dafsa = Dafsa::build(log.distinct_variants())?;
    let annotated = StateAnnotatedLog::annotate(log, &dafsa)?;
    let table = ContingencyTable::from_annotated(&annotated, &dafsa);
    let lookup = TransitionVariantLookup::build(log, &dafsa)?;

    let plan = time_epsilons(log, &annotated, &times, &dafsa, config)?;
    let risk = residual_risk(plan.count_epsilon, dafsa.transition_count());

    let mut sample_plan = draw_needed_noise(&dafsa, plan.count_epsilon, config.seed);
    let (sampled, record) = oversample(log, &lookup, &table, &mut sample_plan, config.seed);

    let expanded = expand_plan(&plan, &record)?;
    let group_sizes = sampled
        .traces
        .iter()
        .map(|t| (t.case_id.clone(), record.group_size(&t.case_id)))
        .collect();
    let adjusted = adjust_epsilons(&expanded, &group_sizes)?;

    let sampled_times = relative_times(&sampled, config.time_unit)?;
    let noised = inject_time_noise(&sampled, &sampled_times, &adjusted, config.seed)?;
    let mut published = noised.log;
    if monotonic {
        enforce_monotonic(&mut published);
    }

    let pairs = pair_relative_times(log, &times, &published, &record)?;
    let report = UtilityReport {
        smape_percent: smape_percent(pairs)?,
        oversampling_ratio: oversampling_ratio(log, &published)?,
        variant_set_preserved: variant_set_equal(log, &published),
        residual_risk: risk,
        epsilon_summary: EpsilonSummary::from_plan(&adjusted),
        runtime_seconds: started.elapsed().as_secs_f64(),
        delta: config.delta,
        precision: config.precision,
        time_unit: config.time_unit,
        seed: config.seed,
        original_cases: log.case_count() as u64,
        anonymized_cases: published.case_count() as u64,
        original_events: log.event_count() as u64,
        anonymized_events: published.event_count() as u64,
    };
    Ok(Anonymized {
        log: published,
        report,
    })
}

/// Run the full file-to-file pipeline, writing the anonymized log and the
/// JSON report. Returns the report.
pub fn run(config: &RunConfig) -> Result<UtilityReport> {
    config.privacy().validate()?;
    let log = load_input(config)?;
    if log.traces.is_empty() {
        return Err(Error::EmptyLog);
    }

    let result = anonymize(&log, &config.privacy(), config.monotonic)?;

    let out_format = config.output_format.unwrap_or(result.log.meta.format);
    let file = fs::File::create(&config.output).map_err(|source| Error::WriteOutput {
        path: config.output.clone(),
        source,
    })?;
    write_log(&result.log, out_format, file).map_err(|e| match e {
        Error::Io(source) => Error::WriteOutput {
            path: config.output.clone(),
            source,
        },
        other => other,
    })?;

    let json = serde_json::to_vec_pretty(&result.report)?;
    fs::write(&config.report, json).map_err(|source| Error::WriteOutput {
        path: config.report.clone(),
        source,
    })?;
    Ok(result.report)
}
