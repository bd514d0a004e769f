//! Command-line front end for the anonymization pipeline.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use logveil::log::{ColumnMapping, LogFormat, TimeUnit};
use logveil::pipeline::{run, FormatChoice, RunConfig};

/// Anonymize a business-process event log under a guessing-advantage
/// bound. The output keeps the exact set of case variants; cases are
/// oversampled and event times perturbed just enough to honor the bound.
#[derive(Debug, Parser)]
#[command(name = "logveil", version, about)]
struct Cli {
    /// Input event log (.xes or .csv)
    input: PathBuf,

    /// Path for the anonymized log [default: <input>.anonymized.<ext>]
    #[arg(short, long)]
    output: Option<PathBuf>,

    /// Path for the JSON run report [default: <output>.report.json]
    #[arg(long)]
    report: Option<PathBuf>,

    /// Maximum allowed guessing-advantage increase, in (0,1)
    #[arg(long)]
    delta: f64,

    /// Guess-window half-width as a fraction of the normalized time range
    #[arg(long, default_value_t = 0.1)]
    precision: f64,

    /// Unit for relative times
    #[arg(long, default_value = "hours")]
    time_unit: TimeUnit,

    /// Master seed; fixes every random decision
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Raise each event's noised time to its predecessor's so traces read
    /// chronologically
    #[arg(long)]
    monotonic: bool,

    /// Ceiling for calibrated epsilon values
    #[arg(long, default_value_t = 50.0)]
    epsilon_cap: f64,

    /// Input format
    #[arg(long, default_value = "auto")]
    format: FormatChoice,

    /// CSV column names as case,activity,timestamp
    #[arg(long, default_value = "case,activity,timestamp")]
    columns: ColumnMapping,

    /// Write the output in this format instead of the input's
    #[arg(long)]
    output_format: Option<FormatChoice>,
}

impl Cli {
    fn into_config(self) -> RunConfig {
        let output = self.output.unwrap_or_else(|| {
            let ext = self
                .input
                .extension()
                .and_then(|e| e.to_str())
                .unwrap_or("csv")
                .to_ascii_lowercase();
            self.input.with_extension(format!("anonymized.{ext}"))
        });
        let report = self
            .report
            .unwrap_or_else(|| output.with_extension("report.json"));
        let output_format = match self.output_format {
            Some(FormatChoice::Xes) => Some(LogFormat::Xes),
            Some(FormatChoice::Csv) => Some(LogFormat::Csv),
            Some(FormatChoice::Auto) | None => None,
        };
        RunConfig {
            input: self.input,
            format: self.format,
            columns: self.columns,
            output,
            report,
            delta: self.delta,
            precision: self.precision,
            time_unit: self.time_unit,
            seed: self.seed,
            monotonic: self.monotonic,
            epsilon_cap: self.epsilon_cap,
            output_format,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = cli.into_config();
    let output = config.output.clone();
    let report_path = config.report.clone();
    match run(&config) {
        Ok(report) => {
            println!(
                "anonymized {} -> {} (report {})",
                config.input.display(),
                output.display(),
                report_path.display()
            );
            println!(
                "  cases {} -> {} (oversampling ratio {:.3})",
                report.original_cases, report.anonymized_cases, report.oversampling_ratio
            );
            println!(
                "  smape {:.1}%  count-epsilon {:.6}  variants preserved: {}",
                report.smape_percent, report.epsilon_summary.count_epsilon,
                report.variant_set_preserved
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
