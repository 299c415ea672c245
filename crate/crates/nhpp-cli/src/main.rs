//! `nhpp` -- generate, validate, and benchmark non-homogeneous Poisson
//! point-process samples.
//!
//! Exit codes: 0 success, 2 usage, 3 domain or spec errors, 4 numeric
//! failures.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nhpp_cli::formats;
use nhpp_cli::illustration::{Illustration, DEFAULT_BINS, DEFAULT_INVERSE_STEP};
use nhpp_cli::runner::{self, CumAlgo, ReportSettings, SamplerConfig};
use nhpp_cli::spec_file::{self, SpecKind};
use nhpp_cli::CliError;
use nhpp_core::{CumulativeIntensity, IntensitySpec, Interval, SamplerOptions};

#[derive(Parser)]
#[command(
    name = "nhpp",
    version,
    about = "Samplers for non-homogeneous Poisson point processes",
    propagate_version = true,
    allow_negative_numbers = true
)]
struct Cli {
    /// Base seed for all random streams.
    #[arg(long, global = true, env = "NHPP_SEED", default_value_t = 1)]
    seed: u64,
    /// Worker threads for parallel runs (default: all cores). Output is
    /// identical for any value.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw event series and print them as CSV or JSON.
    Generate(GenerateArgs),
    /// Run the statistical validation suite and emit a metric report.
    Validate(ValidateArgs),
    /// Time the sampler configurations and emit a CSV table.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Thinning,
    Inversion,
    Orderstats,
    Step,
    Linear,
    Loglinear,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MajorizerChoice {
    Const,
    Lipschitz,
    Tight,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    /// Intensity spec file (.json or .csv).
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Use the bundled illustration intensity.
    #[arg(long)]
    illustration: bool,
    /// Inline step values, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Option<Vec<f64>>,
    /// Inline breakpoints for an irregular step grid, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    breakpoints: Option<Vec<f64>>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Sampling interval "a,b".
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    interval: Option<Interval>,
    #[arg(long)]
    runs: usize,
    /// Keep only the earliest event of each run.
    #[arg(long = "at-most-1")]
    at_most_1: bool,
    /// Condition each run on producing at least one event.
    #[arg(long = "at-least-1")]
    at_least_1: bool,
    /// Condition each run on producing at least this many events.
    #[arg(long = "min-events")]
    min_events: Option<u64>,
    /// Keep only the earliest k events of each run.
    #[arg(long = "at-most-k")]
    at_most_k: Option<usize>,
    /// Majorizer for thinning the illustration intensity.
    #[arg(long, value_enum, default_value = "tight")]
    majorizer: MajorizerChoice,
    /// Cells in automatically built majorizers.
    #[arg(long, default_value_t = DEFAULT_BINS)]
    majorizer_bins: usize,
    /// Scale factor for the self-majorizer of closed-form intensities.
    #[arg(long, default_value_t = 1.0)]
    majorizer_scale: f64,
    /// Invert the cumulative intensity with Brent instead of a table or
    /// closed form.
    #[arg(long = "numeric-inverse")]
    numeric_inverse: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Matrix layout: one row per run, padded, instead of long format.
    #[arg(long)]
    matrix: bool,
    /// Draw all runs through the vectorized sampler (regular step
    /// intensities only); implies matrix layout.
    #[arg(long)]
    batch: bool,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ValidateArgs {
    /// Validate the bundled illustration intensity.
    #[arg(long)]
    illustration: bool,
    /// Amplitude growth rate of the illustration intensity.
    #[arg(long, default_value_t = 0.2)]
    growth: f64,
    /// Oscillation frequency of the illustration intensity.
    #[arg(long, default_value_t = 1.0)]
    frequency: f64,
    /// Custom intensity spec file (.json or .csv).
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    runs: usize,
    /// Sampler configuration, or "all".
    #[arg(long, default_value = "all")]
    algo: String,
    /// Event-time histogram bins.
    #[arg(long, default_value_t = 70)]
    bins: usize,
    /// Bootstrap resamples for Wasserstein p-values (0 disables).
    #[arg(long, default_value_t = 1000)]
    bootstrap: u32,
    /// Use the Brent inverse instead of the precomputed table.
    #[arg(long = "numeric-inverse")]
    numeric_inverse: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct BenchArgs {
    /// Time first-event draws instead of whole series.
    #[arg(long = "first-only")]
    first_only: bool,
    /// Rows for the batch-versus-scalar comparison (0 skips it).
    #[arg(long, default_value_t = 10_000)]
    batch: usize,
    /// Timed repetitions per configuration.
    #[arg(long, default_value_t = 200)]
    reps: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_interval(text: &str) -> Result<Interval, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err("expected \"a,b\"".into());
    }
    let a: f64 = parts[0].trim().parse().map_err(|e| format!("start: {e}"))?;
    let b: f64 = parts[1].trim().parse().map_err(|e| format!("end: {e}"))?;
    Interval::new(a, b).map_err(|e| e.to_string())
}

fn main() {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // One global pool; per-run substreams keep results thread-agnostic.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(cli.seed, args),
        Command::Validate(args) => cmd_validate(cli.seed, args),
        Command::Bench(args) => cmd_bench(cli.seed, args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

/// The intensity a command operates on.
enum Target {
    Closed { spec: IntensitySpec, interval: Interval },
    Preset(Illustration),
}

fn resolve_target(args: &GenerateArgs) -> Result<Target, CliError> {
    if args.illustration {
        return Ok(Target::Preset(Illustration::default()));
    }
    if let Some(path) = &args.spec {
        let loaded = spec_file::load(path)?;
        return match loaded.spec {
            SpecKind::Illustration(ill) => Ok(Target::Preset(ill)),
            SpecKind::ClosedForm(spec) => {
                let interval = args
                    .interval
                    .or(loaded.interval)
                    .ok_or_else(|| CliError::Usage("this spec needs --interval a,b".into()))?;
                Ok(Target::Closed { spec, interval })
            }
        };
    }
    // Inline parameters, interpreted by the algo family.
    match args.algo {
        Algo::Step => {
            let values = args
                .values
                .clone()
                .ok_or_else(|| CliError::Usage("--algo step needs --values".into()))?;
            if let Some(breaks) = &args.breakpoints {
                let spec = IntensitySpec::step(values, breaks.clone()).map_err(CliError::from)?;
                let interval =
                    args.interval.or_else(|| spec.natural_interval()).expect("step span");
                Ok(Target::Closed { spec, interval })
            } else {
                let interval = args.interval.ok_or_else(|| {
                    CliError::Usage("--algo step needs --breakpoints or --interval".into())
                })?;
                let spec =
                    IntensitySpec::step_regular(values, interval).map_err(CliError::from)?;
                Ok(Target::Closed { spec, interval })
            }
        }
        Algo::Linear | Algo::Loglinear => {
            let (alpha, beta) = match (args.alpha, args.beta) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(CliError::Usage(
                        "linear and loglinear intensities need --alpha and --beta".into(),
                    ))
                }
            };
            let interval = args
                .interval
                .ok_or_else(|| CliError::Usage("this intensity needs --interval a,b".into()))?;
            let spec = if args.algo == Algo::Linear {
                IntensitySpec::linear(alpha, beta)
            } else {
                IntensitySpec::log_linear(alpha, beta)
            }
            .map_err(CliError::from)?;
            Ok(Target::Closed { spec, interval })
        }
        _ => Err(CliError::Usage(
            "--algo thinning/inversion/orderstats needs --spec or --illustration".into(),
        )),
    }
}

fn scale_spec(spec: &IntensitySpec, scale: f64) -> Result<IntensitySpec, CliError> {
    if scale < 1.0 || !scale.is_finite() {
        return Err(CliError::Usage("--majorizer-scale must be >= 1".into()));
    }
    let scaled = match spec {
        IntensitySpec::PiecewiseConstRegular { values, interval } => {
            IntensitySpec::step_regular(values.iter().map(|v| v * scale).collect(), *interval)
        }
        IntensitySpec::PiecewiseConstIrregular { values, breakpoints } => IntensitySpec::step(
            values.iter().map(|v| v * scale).collect(),
            breakpoints.clone(),
        ),
        IntensitySpec::Linear { alpha, beta } => {
            IntensitySpec::linear(alpha * scale, beta * scale)
        }
        IntensitySpec::LogLinear { alpha, beta } => {
            IntensitySpec::log_linear(alpha + scale.ln(), *beta)
        }
        IntensitySpec::Callable(_) => {
            return Err(CliError::Usage("cannot scale a callable intensity".into()))
        }
    };
    scaled.map_err(CliError::from)
}

fn cmd_generate(seed: u64, args: GenerateArgs) -> Result<(), CliError> {
    if args.runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    let min_events = match (args.min_events, args.at_least_1) {
        (Some(0), _) => return Err(CliError::Usage("--min-events must be at least 1".into())),
        (Some(m), _) => m,
        (None, true) => 1,
        (None, false) => 0,
    };
    let opts = SamplerOptions {
        at_most_1: args.at_most_1,
        at_least_1: min_events >= 1,
        at_most_k: args.at_most_k,
    };
    let target = resolve_target(&args)?;

    if args.batch {
        return generate_batch(seed, &args, &target, opts);
    }

    let runs = match (&target, args.algo) {
        (_, Algo::Thinning) => {
            if min_events > 1 {
                return Err(CliError::Usage(
                    "--min-events above 1 is not supported for thinning; use inversion or orderstats"
                        .into(),
                ));
            }
            let (lambda, majorizer, interval) = match &target {
                Target::Preset(ill) => {
                    let maj = match args.majorizer {
                        MajorizerChoice::Const => ill.majorizer_const(),
                        MajorizerChoice::Lipschitz => {
                            ill.majorizer_lipschitz(args.majorizer_bins)?.into()
                        }
                        MajorizerChoice::Tight => ill.majorizer_tight(args.majorizer_bins)?.into(),
                    };
                    (IntensitySpec::callable(ill.intensity_fn()), maj, ill.interval())
                }
                Target::Closed { spec, interval } => {
                    let maj = scale_spec(spec, args.majorizer_scale)?;
                    let lambda = scale_spec(spec, 1.0)?;
                    (lambda, maj, *interval)
                }
            };
            runner::generate_thinning(&lambda, &majorizer, interval, opts, args.runs, seed)?
        }
        (_, algo) => {
            let cum = build_cumulative(&target, args.numeric_inverse)?;
            let cum_algo = match algo {
                Algo::Inversion => CumAlgo::Inversion,
                Algo::Orderstats => CumAlgo::OrderStats,
                // Closed-form samplers draw through time transformation.
                _ => CumAlgo::Inversion,
            };
            runner::generate_from_cumulative(&cum, cum_algo, opts, min_events, args.runs, seed)?
        }
    };

    let mut out = open_output(args.out.as_deref())?;
    match (args.format, args.matrix) {
        (OutputFormat::Csv, false) => formats::write_runs_csv(&mut out, &runs)?,
        (OutputFormat::Csv, true) => formats::write_matrix_csv(&mut out, &runs)?,
        (OutputFormat::Json, _) => {
            serde_json::to_writer_pretty(&mut out, &formats::runs_to_json(&runs))
                .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn generate_batch(
    seed: u64,
    args: &GenerateArgs,
    target: &Target,
    opts: SamplerOptions,
) -> Result<(), CliError> {
    let (values, interval) = match target {
        Target::Closed { spec: IntensitySpec::PiecewiseConstRegular { values, interval }, .. } => {
            (values.clone(), *interval)
        }
        _ => {
            return Err(CliError::Usage(
                "--batch needs a regular step intensity (--values with --interval)".into(),
            ))
        }
    };
    let rates = nhpp_core::batch::RateMatrix::broadcast(&values, args.runs, interval)
        .map_err(CliError::from)?;
    let mut stream = nhpp_core::RngStream::new(seed);
    let matrix = nhpp_core::batch::draw_step_regular_batch(&mut stream, &rates, opts)
        .map_err(CliError::from)?;
    let mut out = open_output(args.out.as_deref())?;
    match args.format {
        OutputFormat::Csv => formats::write_event_matrix_csv(&mut out, &matrix)?,
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &formats::matrix_to_json(&matrix))
                .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn build_cumulative(target: &Target, numeric_inverse: bool) -> Result<CumulativeIntensity, CliError> {
    match target {
        Target::Preset(ill) => {
            if numeric_inverse {
                ill.cumulative().map_err(CliError::from)
            } else {
                ill.cumulative_tabulated(DEFAULT_INVERSE_STEP).map_err(CliError::from)
            }
        }
        Target::Closed { spec, interval } => {
            let cum = CumulativeIntensity::from_spec(spec, *interval).map_err(CliError::from)?;
            if numeric_inverse {
                runner::strip_inverse(cum, *interval)
            } else {
                Ok(cum)
            }
        }
    }
}

fn cmd_validate(seed: u64, args: ValidateArgs) -> Result<(), CliError> {
    if args.runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    if args.runs < 1000 {
        eprintln!(
            "note: metric noise scales like 1/sqrt(runs); below 1000 runs \
             expect loose agreement with theoretical values"
        );
    }
    let settings = ReportSettings {
        time_bins: args.bins,
        bootstrap: args.bootstrap,
        ..Default::default()
    };
    let reports = if let Some(path) = &args.spec {
        let loaded = spec_file::load(path)?;
        match loaded.spec {
            SpecKind::Illustration(ill) => validate_illustration(&ill, &args, seed, &settings)?,
            SpecKind::ClosedForm(spec) => {
                let interval = loaded
                    .interval
                    .ok_or_else(|| CliError::Usage("this spec needs an intrinsic interval".into()))?;
                validate_closed_form(&spec, interval, &args, seed, &settings)?
            }
        }
    } else {
        // The illustration preset is the default target.
        let ill = Illustration::new(args.growth, args.frequency);
        validate_illustration(&ill, &args, seed, &settings)?
    };

    let mut out = open_output(args.out.as_deref())?;
    match args.format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &formats::reports_to_json(&reports))
                .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
            writeln!(out)?;
        }
        OutputFormat::Csv => formats::write_reports_csv(&mut out, &reports)?,
    }
    Ok(())
}

fn validate_illustration(
    ill: &Illustration,
    args: &ValidateArgs,
    seed: u64,
    settings: &ReportSettings,
) -> Result<Vec<runner::SamplerReport>, CliError> {
    let configs = SamplerConfig::parse(&args.algo)
        .ok_or_else(|| CliError::Usage(format!("unknown --algo {}", args.algo)))?;
    let time_law = ill.cumulative_tabulated(DEFAULT_INVERSE_STEP)?;
    let mass = ill.mass();
    let mut reports = Vec::new();
    for config in configs {
        let output = runner::run_illustration(ill, config, args.runs, seed, args.numeric_inverse)?;
        reports.push(runner::build_report(
            config.label(),
            &output,
            mass,
            &time_law,
            settings,
            seed,
        )?);
    }
    Ok(reports)
}

fn validate_closed_form(
    spec: &IntensitySpec,
    interval: Interval,
    args: &ValidateArgs,
    seed: u64,
    settings: &ReportSettings,
) -> Result<Vec<runner::SamplerReport>, CliError> {
    let cum = CumulativeIntensity::from_spec(spec, interval).map_err(CliError::from)?;
    let mass = cum.mass();
    let mut reports = Vec::new();
    let selected: Vec<&str> = if args.algo == "all" {
        vec!["inversion", "orderstats", "thinning-auto"]
    } else {
        vec![args.algo.as_str()]
    };
    for label in selected {
        let runs = match label {
            "inversion" => {
                let cum = if args.numeric_inverse {
                    runner::strip_inverse(
                        CumulativeIntensity::from_spec(spec, interval).map_err(CliError::from)?,
                        interval,
                    )?
                } else {
                    CumulativeIntensity::from_spec(spec, interval).map_err(CliError::from)?
                };
                runner::generate_from_cumulative(
                    &cum,
                    CumAlgo::Inversion,
                    SamplerOptions::DEFAULT,
                    0,
                    args.runs,
                    seed,
                )?
            }
            "orderstats" => runner::generate_from_cumulative(
                &cum,
                CumAlgo::OrderStats,
                SamplerOptions::DEFAULT,
                0,
                args.runs,
                seed.wrapping_add(1),
            )?,
            "thinning-auto" => {
                let majorizer = scale_spec(spec, 1.25)?;
                let lambda = scale_spec(spec, 1.0)?;
                runner::generate_thinning(
                    &lambda,
                    &majorizer,
                    interval,
                    SamplerOptions::DEFAULT,
                    args.runs,
                    seed.wrapping_add(2),
                )?
            }
            other => {
                return Err(CliError::Usage(format!(
                    "--algo {other} is not applicable to a custom spec; use \
                     inversion, orderstats, thinning-auto, or all"
                )))
            }
        };
        let mut counts = Vec::with_capacity(runs.len());
        let mut times = Vec::new();
        for series in &runs {
            counts.push(series.len() as u64);
            times.extend_from_slice(series.times());
        }
        times.sort_unstable_by(f64::total_cmp);
        let output = runner::RunOutput { counts, times, thinning: None };
        reports.push(runner::build_report(label, &output, mass, &cum, settings, seed)?);
    }
    Ok(reports)
}

fn cmd_bench(seed: u64, args: BenchArgs) -> Result<(), CliError> {
    let rows = nhpp_cli::bench::bench_suite(seed, args.first_only, args.batch, args.reps)?;
    let mut out = open_output(args.out.as_deref())?;
    formats::write_bench_csv(&mut out, &rows)?;
    Ok(())
}

fn open_output(path: Option<&std::path::Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) => Ok(Box::new(std::io::BufWriter::new(std::fs::File::create(p)?))),
        None => Ok(Box::new(std::io::BufWriter::new(std::io::stdout()))),
    }
}
