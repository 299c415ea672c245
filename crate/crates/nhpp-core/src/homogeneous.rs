//! Constant-rate Poisson point process samplers on `(a, b]`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::{apply_cap, sort_times, EventSeries, Interval};

/// Sequential sampling through exponential inter-arrival times.
///
/// With `at_most = Some(k)` the loop stops after `k` events, which makes
/// first-event queries cheap. `rate == 0` yields an empty series.
pub fn draw_sequential(
    stream: &mut RngStream,
    interval: Interval,
    rate: f64,
    at_most: Option<usize>,
) -> Result<EventSeries> {
    if !rate.is_finite() || rate < 0.0 {
        return Err(Error::Domain("rate must be finite and non-negative"));
    }
    if rate == 0.0 || interval.is_empty() || at_most == Some(0) {
        return Ok(EventSeries::empty());
    }
    let mean = 1.0 / rate;
    let mut t = interval.start();
    let mut times = Vec::new();
    while t < interval.end() && at_most.map_or(true, |k| times.len() < k) {
        t += stream.exponential(mean)?;
        if t < interval.end() {
            times.push(t);
        }
    }
    Ok(EventSeries::from_sorted(times))
}

/// Order-statistics sampling: a Poisson count, then sorted uniform times.
///
/// With `at_most = Some(k)` the earliest `k` events are returned; the full
/// count still has to be drawn to place the order statistics correctly.
pub fn draw_order_statistics(
    stream: &mut RngStream,
    interval: Interval,
    rate: f64,
    at_most: Option<usize>,
) -> Result<EventSeries> {
    if !rate.is_finite() || rate < 0.0 {
        return Err(Error::Domain("rate must be finite and non-negative"));
    }
    let n = stream.poisson(rate * interval.width())?;
    Ok(uniform_times(stream, interval, n as usize, at_most))
}

/// Exactly `n` events, uniformly placed and sorted.
pub fn draw_exact(stream: &mut RngStream, interval: Interval, n: usize) -> EventSeries {
    uniform_times(stream, interval, n, None)
}

/// At least `min_events` events: a truncated Poisson count, then sorted
/// uniform times. The count floor applies before any `at_most` truncation.
pub fn draw_at_least(
    stream: &mut RngStream,
    interval: Interval,
    rate: f64,
    min_events: u64,
    at_most: Option<usize>,
) -> Result<EventSeries> {
    if !rate.is_finite() {
        return Err(Error::Domain("rate must be finite"));
    }
    if rate <= 0.0 {
        return Err(Error::ImpossibleCondition(
            "a non-positive rate cannot produce the required events",
        ));
    }
    let n = stream.truncated_poisson(rate * interval.width(), min_events)?;
    Ok(uniform_times(stream, interval, n as usize, at_most))
}

/// `n` iid uniform points on `(a, b]`, sorted, optionally capped to the
/// earliest `k`. The map `t = b - width * u` with `u` in `[0, 1)` keeps the
/// left endpoint strictly excluded.
pub(crate) fn uniform_times(
    stream: &mut RngStream,
    interval: Interval,
    n: usize,
    at_most: Option<usize>,
) -> EventSeries {
    if interval.is_empty() {
        return EventSeries::empty();
    }
    let mut times = Vec::with_capacity(n);
    for _ in 0..n {
        times.push(interval.end() - interval.width() * stream.uniform01());
    }
    sort_times(&mut times);
    EventSeries::from_sorted(apply_cap(times, at_most))
}
