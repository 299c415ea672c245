//! Wall-clock benchmarking of the sampler configurations.

use std::time::Instant;

use nhpp_core::{batch, general, special, RngStream, SamplerOptions};

use crate::error::CliError;
use crate::formats::BenchRow;
use crate::illustration::{Illustration, DEFAULT_BINS, DEFAULT_INVERSE_STEP};

/// Times `reps` calls of `f`, one measurement per call, and reports the
/// median and quartiles in microseconds.
pub fn time_reps<F: FnMut()>(reps: u32, mut f: F) -> (f64, f64, f64) {
    let mut samples = Vec::with_capacity(reps as usize);
    for _ in 0..reps {
        let start = Instant::now();
        f();
        samples.push(start.elapsed().as_secs_f64() * 1e6);
    }
    samples.sort_unstable_by(f64::total_cmp);
    let q = |p: f64| samples[((p * (samples.len() - 1) as f64).round() as usize).min(samples.len() - 1)];
    (q(0.5), q(0.25), q(0.75))
}

fn row(name: &str, reps: u32, timing: (f64, f64, f64)) -> BenchRow {
    BenchRow { name: name.into(), reps, median_us: timing.0, q25_us: timing.1, q75_us: timing.2 }
}

/// Benchmarks: inversion with a precomputed inverse versus the Brent
/// fallback, order statistics, thinning under loose and tight envelopes,
/// step samplers on regular and irregular grids, and batch-versus-scalar
/// first-event draws at `batch_rows` rows.
pub fn bench_suite(
    seed: u64,
    first_only: bool,
    batch_rows: usize,
    reps: u32,
) -> Result<Vec<BenchRow>, CliError> {
    let ill = Illustration::default();
    let interval = ill.interval();
    let lambda = ill.intensity_fn();
    let tabulated = ill.cumulative_tabulated(DEFAULT_INVERSE_STEP)?;
    let brent = ill.cumulative()?;
    let maj_const = ill.majorizer_const();
    let maj_tight: nhpp_core::IntensitySpec = ill.majorizer_tight(DEFAULT_BINS)?.into();
    let opts =
        if first_only { SamplerOptions::at_most_one() } else { SamplerOptions::DEFAULT };

    let mut rows = Vec::new();
    let mut stream = RngStream::new(seed);

    rows.push(row(
        "inversion-tabulated",
        reps,
        time_reps(reps, || {
            general::draw_inversion(&mut stream, &tabulated, opts).unwrap();
        }),
    ));
    rows.push(row(
        "inversion-brent",
        reps,
        time_reps(reps, || {
            general::draw_inversion(&mut stream, &brent, opts).unwrap();
        }),
    ));
    rows.push(row(
        "orderstats-tabulated",
        reps,
        time_reps(reps, || {
            general::draw_order_statistics(&mut stream, &tabulated, opts).unwrap();
        }),
    ));
    rows.push(row(
        "thinning-const",
        reps,
        time_reps(reps, || {
            general::draw_thinning(&mut stream, &lambda, &maj_const, interval, opts).unwrap();
        }),
    ));
    rows.push(row(
        "thinning-tight",
        reps,
        time_reps(reps, || {
            general::draw_thinning(&mut stream, &lambda, &maj_tight, interval, opts).unwrap();
        }),
    ));

    // Regular versus irregular step grids at matched rates.
    let step_values: Vec<f64> = (0..32).map(|i| 0.5 + 0.05 * i as f64).collect();
    let step_iv = nhpp_core::Interval::new(0.0, 16.0).unwrap();
    let step_breaks: Vec<f64> = (0..=32).map(|i| 0.5 * i as f64).collect();
    rows.push(row(
        "step-regular",
        reps,
        time_reps(reps, || {
            special::draw_step_regular(&mut stream, &step_values, step_iv, opts).unwrap();
        }),
    ));
    rows.push(row(
        "step-irregular",
        reps,
        time_reps(reps, || {
            special::draw_step(&mut stream, &step_values, &step_breaks, opts).unwrap();
        }),
    ));

    // Batch versus a scalar loop over the same rows.
    if batch_rows > 0 {
        let lip: Vec<f64> = ill.majorizer_lipschitz(DEFAULT_BINS)?.values().into();
        let rates = batch::RateMatrix::broadcast(&lip, batch_rows, interval)?;
        let batch_opts = if first_only {
            SamplerOptions::at_most_one()
        } else {
            SamplerOptions::DEFAULT
        };
        let batch_reps = reps.min(16).max(3);
        rows.push(row(
            if first_only { "batch-step-first-event" } else { "batch-step-all-events" },
            batch_reps,
            time_reps(batch_reps, || {
                batch::draw_step_regular_batch(&mut stream, &rates, batch_opts).unwrap();
            }),
        ));
        rows.push(row(
            if first_only { "scalar-loop-first-event" } else { "scalar-loop-all-events" },
            batch_reps,
            time_reps(batch_reps, || {
                for _ in 0..batch_rows {
                    special::draw_step_regular(&mut stream, &lip, interval, batch_opts).unwrap();
                }
            }),
        ));
    }
    Ok(rows)
}
