//! Closed-form NHPP samplers: piecewise-constant, linear, and log-linear
//! intensities.
//!
//! Each sampler builds the analytic cumulative intensity for its family and
//! draws through time transformation; `at_least_1` switches to the
//! conditional order-statistics path, so the zero-truncated variants come
//! from the same entry points via [`SamplerOptions::at_least_one`].

use crate::error::{Error, Result};
use crate::general;
use crate::intensity::{CumulativeIntensity, IntensitySpec};
use crate::rng::RngStream;
use crate::types::{EventSeries, Interval, SamplerOptions};

/// Piecewise-constant intensity on an explicit breakpoint grid
/// (`values.len() + 1` strictly increasing breakpoints; unequal widths are
/// fine). Bin lookup during inversion is a binary search on the cumulative
/// mass table.
pub fn draw_step(
    stream: &mut RngStream,
    values: &[f64],
    breakpoints: &[f64],
    opts: SamplerOptions,
) -> Result<EventSeries> {
    let spec = IntensitySpec::step(values.into(), breakpoints.into())?;
    let interval = spec.natural_interval().expect("step specs have a span");
    draw_closed_form(stream, &spec, interval, opts)
}

/// Piecewise-constant intensity on `values.len()` equal subintervals of
/// `interval`; bin lookup is index arithmetic instead of a search.
pub fn draw_step_regular(
    stream: &mut RngStream,
    values: &[f64],
    interval: Interval,
    opts: SamplerOptions,
) -> Result<EventSeries> {
    let spec = IntensitySpec::step_regular(values.into(), interval)?;
    draw_closed_form(stream, &spec, interval, opts)
}

/// Clamped linear intensity `max(alpha + beta t, 0)`.
pub fn draw_linear(
    stream: &mut RngStream,
    alpha: f64,
    beta: f64,
    interval: Interval,
    opts: SamplerOptions,
) -> Result<EventSeries> {
    let spec = IntensitySpec::linear(alpha, beta)?;
    draw_closed_form(stream, &spec, interval, opts)
}

/// Log-linear intensity `exp(alpha + beta t)`.
pub fn draw_log_linear(
    stream: &mut RngStream,
    alpha: f64,
    beta: f64,
    interval: Interval,
    opts: SamplerOptions,
) -> Result<EventSeries> {
    let spec = IntensitySpec::log_linear(alpha, beta)?;
    draw_closed_form(stream, &spec, interval, opts)
}

fn draw_closed_form(
    stream: &mut RngStream,
    spec: &IntensitySpec,
    interval: Interval,
    opts: SamplerOptions,
) -> Result<EventSeries> {
    let cum = CumulativeIntensity::from_spec(spec, interval)?;
    if opts.at_least_1 && cum.mass() <= 0.0 {
        return Err(Error::ImpossibleCondition("the interval carries no intensity mass"));
    }
    if opts.at_least_1 {
        general::draw_conditional(stream, &cum, 1, opts)
    } else {
        general::draw_inversion(stream, &cum, opts)
    }
}
