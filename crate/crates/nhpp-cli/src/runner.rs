//! Simulation orchestration: repeated draws per sampler configuration,
//! deterministic under any degree of parallelism, plus report assembly.

use rayon::prelude::*;

use nhpp_core::general::{self, ThinningStats};
use nhpp_core::validation::{
    chi2_gof_counts, count_summary, event_time_gof, event_time_gof_with_bootstrap,
    wasserstein1_counts, wasserstein1_counts_with_p, CountSummary, GofChi2, TimeGof,
};
use nhpp_core::{
    CumulativeIntensity, EventSeries, IntensitySpec, RngStream, SamplerOptions,
};

use crate::error::CliError;
use crate::illustration::{Illustration, DEFAULT_BINS, DEFAULT_INVERSE_STEP};

/// The five sampler configurations exercised against the illustration
/// target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerConfig {
    /// Thinning under the constant bound.
    ThinningConst,
    /// Thinning under the Lipschitz-cone step envelope.
    ThinningLipschitz,
    /// Thinning under the per-cell supremum envelope.
    ThinningTight,
    /// Time transformation through the cumulative intensity.
    Inversion,
    /// Order statistics through the cumulative intensity.
    OrderStatistics,
}

impl SamplerConfig {
    pub const ALL: [SamplerConfig; 5] = [
        SamplerConfig::ThinningConst,
        SamplerConfig::ThinningLipschitz,
        SamplerConfig::ThinningTight,
        SamplerConfig::Inversion,
        SamplerConfig::OrderStatistics,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            SamplerConfig::ThinningConst => "thinning-const",
            SamplerConfig::ThinningLipschitz => "thinning-lipschitz",
            SamplerConfig::ThinningTight => "thinning-tight",
            SamplerConfig::Inversion => "inversion",
            SamplerConfig::OrderStatistics => "orderstats",
        }
    }

    pub fn parse(name: &str) -> Option<Vec<SamplerConfig>> {
        match name {
            "all" => Some(Self::ALL.to_vec()),
            _ => Self::ALL.iter().copied().find(|c| c.label() == name).map(|c| vec![c]),
        }
    }

    fn tag(&self) -> u64 {
        match self {
            SamplerConfig::ThinningConst => 1,
            SamplerConfig::ThinningLipschitz => 2,
            SamplerConfig::ThinningTight => 3,
            SamplerConfig::Inversion => 4,
            SamplerConfig::OrderStatistics => 5,
        }
    }
}

/// Pooled output of repeated runs of one sampler configuration.
pub struct RunOutput {
    pub counts: Vec<u64>,
    /// Pooled event times, sorted.
    pub times: Vec<f64>,
    pub thinning: Option<ThinningStats>,
}

/// Runs `runs` independent draws of `config` against the illustration.
///
/// Run `i` uses the substream keyed by `(config, i)`, so the output is
/// bit-identical for any thread count.
pub fn run_illustration(
    ill: &Illustration,
    config: SamplerConfig,
    runs: usize,
    seed: u64,
    numeric_inverse: bool,
) -> Result<RunOutput, CliError> {
    let interval = ill.interval();
    let lambda = ill.intensity_fn();

    let majorizer: Option<IntensitySpec> = match config {
        SamplerConfig::ThinningConst => Some(ill.majorizer_const()),
        SamplerConfig::ThinningLipschitz => {
            Some(ill.majorizer_lipschitz(DEFAULT_BINS).map_err(CliError::from)?.into())
        }
        SamplerConfig::ThinningTight => {
            Some(ill.majorizer_tight(DEFAULT_BINS).map_err(CliError::from)?.into())
        }
        _ => None,
    };
    let cumulative: Option<CumulativeIntensity> = match config {
        SamplerConfig::Inversion | SamplerConfig::OrderStatistics => Some(if numeric_inverse {
            ill.cumulative().map_err(CliError::from)?
        } else {
            ill.cumulative_tabulated(DEFAULT_INVERSE_STEP).map_err(CliError::from)?
        }),
        _ => None,
    };

    let results: Result<Vec<(EventSeries, Option<ThinningStats>)>, CliError> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let mut stream = stream_for(seed, config.tag(), run as u64);
            match (&majorizer, &cumulative) {
                (Some(maj), None) => {
                    let (series, stats) = general::draw_thinning_traced(
                        &mut stream,
                        &lambda,
                        maj,
                        interval,
                        SamplerOptions::DEFAULT,
                    )?;
                    Ok((series, Some(stats)))
                }
                (None, Some(cum)) => {
                    let series = if config == SamplerConfig::Inversion {
                        general::draw_inversion(&mut stream, cum, SamplerOptions::DEFAULT)?
                    } else {
                        general::draw_order_statistics(&mut stream, cum, SamplerOptions::DEFAULT)?
                    };
                    Ok((series, None))
                }
                _ => unreachable!("config selects exactly one sampling input"),
            }
        })
        .collect();
    let results = results?;

    let mut counts = Vec::with_capacity(runs);
    let mut times = Vec::new();
    let mut thinning: Option<ThinningStats> = None;
    for (series, stats) in results {
        counts.push(series.len() as u64);
        times.extend_from_slice(series.times());
        if let Some(s) = stats {
            let agg = thinning.get_or_insert(ThinningStats::default());
            agg.proposals += s.proposals;
            agg.accepted += s.accepted;
        }
    }
    times.sort_unstable_by(f64::total_cmp);
    Ok(RunOutput { counts, times, thinning })
}

fn stream_for(seed: u64, config_tag: u64, run: u64) -> RngStream {
    RngStream::with_substream(seed, (config_tag << 32) | run)
}

/// All validation metrics for one sampler configuration.
pub struct SamplerReport {
    pub label: String,
    pub runs: usize,
    pub theoretical_mass: f64,
    pub summary: CountSummary,
    pub count_gof: GofChi2,
    pub count_w1: f64,
    pub count_w1_p: Option<f64>,
    pub time_bins: usize,
    pub time_gof: TimeGof,
    pub efficiency: Option<f64>,
}

/// Settings for report assembly.
pub struct ReportSettings {
    pub time_bins: usize,
    /// Bootstrap resamples for the Wasserstein p-values; 0 disables them.
    pub bootstrap: u32,
    /// Cap on the per-resample sample size for the event-time bootstrap.
    pub bootstrap_max_sample: usize,
}

impl Default for ReportSettings {
    fn default() -> Self {
        ReportSettings { time_bins: 70, bootstrap: 1000, bootstrap_max_sample: 100_000 }
    }
}

pub fn build_report(
    label: &str,
    output: &RunOutput,
    mass: f64,
    time_law: &CumulativeIntensity,
    settings: &ReportSettings,
    seed: u64,
) -> Result<SamplerReport, CliError> {
    let summary = count_summary(&output.counts, mass).map_err(CliError::from)?;
    let count_gof = chi2_gof_counts(&output.counts, mass).map_err(CliError::from)?;
    let mut boot_stream = RngStream::with_substream(seed, u64::MAX);
    let (count_w1, count_w1_p) = if settings.bootstrap > 0 {
        let (w, p) =
            wasserstein1_counts_with_p(&mut boot_stream, &output.counts, mass, settings.bootstrap)
                .map_err(CliError::from)?;
        (w, Some(p))
    } else {
        (wasserstein1_counts(&output.counts, mass).map_err(CliError::from)?, None)
    };
    let time_gof = if settings.bootstrap > 0 && time_law.has_provided_inverse() {
        event_time_gof_with_bootstrap(
            &mut boot_stream,
            &output.times,
            time_law,
            settings.time_bins,
            settings.bootstrap.min(200),
            settings.bootstrap_max_sample,
        )
        .map_err(CliError::from)?
    } else {
        event_time_gof(&output.times, time_law, settings.time_bins).map_err(CliError::from)?
    };
    Ok(SamplerReport {
        label: label.into(),
        runs: output.counts.len(),
        theoretical_mass: mass,
        summary,
        count_gof,
        count_w1,
        count_w1_p,
        time_bins: settings.time_bins,
        time_gof,
        efficiency: output.thinning.map(|s| s.acceptance_fraction()),
    })
}

/// Which general sampler drives a cumulative-intensity generation task.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CumAlgo {
    Inversion,
    OrderStats,
}

/// Repeated thinning draws; run `i` uses the substream keyed by `i`.
pub fn generate_thinning(
    lambda: &IntensitySpec,
    majorizer: &IntensitySpec,
    interval: nhpp_core::Interval,
    opts: SamplerOptions,
    runs: usize,
    seed: u64,
) -> Result<Vec<EventSeries>, CliError> {
    (0..runs)
        .into_par_iter()
        .map(|run| {
            let mut stream = stream_for(seed, 0, run as u64);
            general::draw_thinning(
                &mut stream,
                |t| lambda.eval(t),
                majorizer,
                interval,
                opts,
            )
            .map_err(CliError::from)
        })
        .collect()
}

/// Repeated draws through a cumulative intensity; `min_events >= 1` routes
/// to the conditional sampler.
pub fn generate_from_cumulative(
    cum: &CumulativeIntensity,
    algo: CumAlgo,
    opts: SamplerOptions,
    min_events: u64,
    runs: usize,
    seed: u64,
) -> Result<Vec<EventSeries>, CliError> {
    (0..runs)
        .into_par_iter()
        .map(|run| {
            let mut stream = stream_for(seed, 0, run as u64);
            let series = if min_events > 1 {
                general::draw_conditional(&mut stream, cum, min_events, opts)?
            } else {
                match algo {
                    CumAlgo::Inversion => general::draw_inversion(&mut stream, cum, opts)?,
                    CumAlgo::OrderStats => {
                        general::draw_order_statistics(&mut stream, cum, opts)?
                    }
                }
            };
            Ok(series)
        })
        .collect()
}

/// Rebuilds a cumulative intensity with only the Brent fallback, dropping
/// any analytic or tabulated inverse.
pub fn strip_inverse(
    cum: CumulativeIntensity,
    interval: nhpp_core::Interval,
) -> Result<CumulativeIntensity, CliError> {
    CumulativeIntensity::from_fn(move |t| cum.value(t), interval).map_err(CliError::from)
}
