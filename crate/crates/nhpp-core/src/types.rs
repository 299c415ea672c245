use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{Error, Result};

/// Half-open time interval `(a, b]`.
///
/// `a == b` is permitted and denotes the empty interval; `a > b` is rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain("interval endpoints must be finite"));
        }
        if a > b {
            return Err(Error::Domain("interval start exceeds its end"));
        }
        Ok(Interval { a, b })
    }

    #[inline]
    pub fn start(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn end(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.a == self.b
    }

    /// Membership under the `(a, b]` convention.
    #[inline]
    pub fn contains(&self, t: f64) -> bool {
        self.a < t && t <= self.b
    }
}

/// A strictly increasing sequence of event times inside a sampling interval.
///
/// Ties between adjacent times have probability zero under every sampler in
/// this crate; an equal adjacent pair indicates a bug upstream.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventSeries(Vec<f64>);

impl EventSeries {
    pub fn empty() -> Self {
        EventSeries(Vec::new())
    }

    /// Wraps a vector that is already sorted in increasing order.
    pub(crate) fn from_sorted(times: Vec<f64>) -> Self {
        debug_assert!(times.windows(2).all(|w| w[0] <= w[1]));
        EventSeries(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<f64> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<f64> {
        self.0.last().copied()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for EventSeries {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl<'a> IntoIterator for &'a EventSeries {
    type Item = &'a f64;
    type IntoIter = core::slice::Iter<'a, f64>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Output-shaping options shared by the NHPP samplers.
///
/// `at_most_1` keeps only the earliest event, `at_least_1` conditions the
/// draw on producing one or more events, and `at_most_k` keeps the earliest
/// `k`. Setting both `at_most_1` and `at_least_1` yields exactly one event.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SamplerOptions {
    pub at_most_1: bool,
    pub at_least_1: bool,
    pub at_most_k: Option<usize>,
}

impl SamplerOptions {
    pub const DEFAULT: SamplerOptions =
        SamplerOptions { at_most_1: false, at_least_1: false, at_most_k: None };

    pub fn at_most_one() -> Self {
        SamplerOptions { at_most_1: true, ..Self::DEFAULT }
    }

    pub fn at_least_one() -> Self {
        SamplerOptions { at_least_1: true, ..Self::DEFAULT }
    }

    pub fn exactly_one() -> Self {
        SamplerOptions { at_most_1: true, at_least_1: true, at_most_k: None }
    }

    /// Effective cap on the number of returned events.
    pub(crate) fn cap(&self) -> Option<usize> {
        match (self.at_most_1, self.at_most_k) {
            (true, Some(k)) => Some(k.min(1)),
            (true, None) => Some(1),
            (false, k) => k,
        }
    }
}

pub(crate) fn sort_times(times: &mut [f64]) {
    times.sort_unstable_by(f64::total_cmp);
}

/// Truncates to the earliest `cap` events when a cap applies.
pub(crate) fn apply_cap(mut times: Vec<f64>, cap: Option<usize>) -> Vec<f64> {
    if let Some(k) = cap {
        times.truncate(k);
    }
    times
}
