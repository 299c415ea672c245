//! General NHPP samplers: thinning, time transformation (inversion), order
//! statistics, conditional draws, and an argument-driven dispatcher.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::intensity::{CumulativeIntensity, IntensitySpec};
use crate::rng::RngStream;
use crate::types::{apply_cap, sort_times, EventSeries, Interval, SamplerOptions};

/// Relative slack allowed before a proposal counts as a majorization
/// violation; covers honest floating-point noise, nothing more.
const DOMINANCE_SLACK: f64 = 1e-12;
/// Whole-series retry budget for at-least-one thinning.
const AT_LEAST_ONE_RETRY_CAP: u32 = 1_000_000;

/// Acceptance bookkeeping for a thinning run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ThinningStats {
    pub proposals: u64,
    pub accepted: u64,
}

impl ThinningStats {
    pub fn acceptance_fraction(&self) -> f64 {
        if self.proposals == 0 {
            return f64::NAN;
        }
        self.accepted as f64 / self.proposals as f64
    }
}

/// Thinning (acceptance/rejection) against a majorizing intensity.
///
/// Proposals are drawn exactly from `majorizer` -- any closed-form
/// [`IntensitySpec`] -- and each proposal `z` is kept with probability
/// `lambda(z) / majorizer(z)`. Dominance is re-checked at every proposal and
/// a violation is a hard error rather than a silently biased sample.
///
/// With `at_least_1`, proposals come from the zero-truncated majorizer
/// process and the whole series is redrawn until at least one proposal is
/// accepted, which preserves the conditional law exactly.
pub fn draw_thinning<F: Fn(f64) -> f64>(
    stream: &mut RngStream,
    lambda: F,
    majorizer: &IntensitySpec,
    interval: Interval,
    opts: SamplerOptions,
) -> Result<EventSeries> {
    Ok(draw_thinning_traced(stream, lambda, majorizer, interval, opts)?.0)
}

/// [`draw_thinning`] plus proposal/acceptance counts.
pub fn draw_thinning_traced<F: Fn(f64) -> f64>(
    stream: &mut RngStream,
    lambda: F,
    majorizer: &IntensitySpec,
    interval: Interval,
    opts: SamplerOptions,
) -> Result<(EventSeries, ThinningStats)> {
    if matches!(majorizer, IntensitySpec::Callable(_)) {
        return Err(Error::InvalidArgument(
            "the majorizer must be a closed-form intensity so proposals can be sampled exactly",
        ));
    }
    let proposal_cum = CumulativeIntensity::from_spec(majorizer, interval)?;
    let mut stats = ThinningStats::default();
    let cap = opts.cap();

    if opts.at_least_1 {
        for _ in 0..AT_LEAST_ONE_RETRY_CAP {
            let proposals = draw_conditional(stream, &proposal_cum, 1, SamplerOptions::DEFAULT)?;
            let mut kept = Vec::new();
            for &z in proposals.times() {
                stats.proposals += 1;
                if accept(stream, &lambda, majorizer, z, None)? {
                    stats.accepted += 1;
                    kept.push(z);
                }
            }
            if !kept.is_empty() {
                return Ok((EventSeries::from_sorted(apply_cap(kept, cap)), stats));
            }
        }
        return Err(Error::NonConvergence { iterations: AT_LEAST_ONE_RETRY_CAP });
    }

    // Unconditional path: stream proposals in time order and stop as soon as
    // the cap is filled.
    let (tau_a, tau_b) = proposal_cum.range();
    let mut kept = Vec::new();
    let mut z_mass = tau_a;
    loop {
        if cap.is_some_and(|k| kept.len() >= k) {
            break;
        }
        z_mass += stream.exponential(1.0)?;
        if z_mass > tau_b {
            break;
        }
        let z = proposal_cum.invert(z_mass)?;
        stats.proposals += 1;
        if accept(stream, &lambda, majorizer, z, None)? {
            stats.accepted += 1;
            kept.push(z);
        }
    }
    Ok((EventSeries::from_sorted(kept), stats))
}

pub(crate) fn accept<F: Fn(f64) -> f64>(
    stream: &mut RngStream,
    lambda: &F,
    majorizer: &IntensitySpec,
    z: f64,
    row: Option<usize>,
) -> Result<bool> {
    let lam = lambda(z);
    let bound = majorizer.eval(z);
    if !lam.is_finite() || lam < 0.0 {
        return Err(Error::Domain("intensity must evaluate finite and non-negative"));
    }
    if lam > bound * (1.0 + DOMINANCE_SLACK) {
        return Err(Error::MajorizationViolation { t: z, lambda: lam, majorizer: bound, row });
    }
    if bound == 0.0 {
        return Ok(false);
    }
    Ok(stream.uniform01() < lam / bound)
}

/// Time-transformation sampling: a unit-rate process on
/// `(Lambda(a), Lambda(b)]` mapped back through the inverse.
///
/// With `at_most_1` only the first unit-rate arrival is drawn and mapped,
/// so first-event queries do constant work. With `at_least_1` the unit-rate
/// count is drawn zero-truncated.
pub fn draw_inversion(
    stream: &mut RngStream,
    cum: &CumulativeIntensity,
    opts: SamplerOptions,
) -> Result<EventSeries> {
    if opts.at_least_1 {
        return draw_conditional(stream, cum, 1, opts);
    }
    let (tau_a, tau_b) = cum.range();
    let cap = opts.cap();
    let mut times = Vec::new();
    let mut z = tau_a;
    loop {
        if cap.is_some_and(|k| times.len() >= k) {
            break;
        }
        z += stream.exponential(1.0)?;
        if z > tau_b {
            break;
        }
        times.push(cum.invert(z)?);
    }
    Ok(EventSeries::from_sorted(times))
}

/// Order-statistics sampling: a Poisson count `N` with the interval's mass,
/// then `N` uniforms on the mass scale mapped through the inverse and sorted.
pub fn draw_order_statistics(
    stream: &mut RngStream,
    cum: &CumulativeIntensity,
    opts: SamplerOptions,
) -> Result<EventSeries> {
    if opts.at_least_1 {
        return draw_conditional(stream, cum, 1, opts);
    }
    let n = stream.poisson(cum.mass())?;
    mapped_uniform_times(stream, cum, n as usize, opts.cap())
}

/// Order-statistics sampling conditioned on at least `min_events` events.
///
/// The count floor applies before any cap, so `min_events = 1` with
/// `at_most_1` yields exactly the first event of a non-empty series.
pub fn draw_conditional(
    stream: &mut RngStream,
    cum: &CumulativeIntensity,
    min_events: u64,
    opts: SamplerOptions,
) -> Result<EventSeries> {
    if cum.mass() <= 0.0 && min_events > 0 {
        return Err(Error::ImpossibleCondition(
            "the interval carries no intensity mass",
        ));
    }
    let n = stream.truncated_poisson(cum.mass(), min_events)?;
    mapped_uniform_times(stream, cum, n as usize, opts.cap())
}

/// Exactly `n` events placed by the conditional uniform law on the mass
/// scale.
pub fn draw_exact(
    stream: &mut RngStream,
    cum: &CumulativeIntensity,
    n: usize,
) -> Result<EventSeries> {
    if n > 0 && cum.mass() <= 0.0 {
        return Err(Error::ImpossibleCondition(
            "the interval carries no intensity mass",
        ));
    }
    mapped_uniform_times(stream, cum, n, None)
}

fn mapped_uniform_times(
    stream: &mut RngStream,
    cum: &CumulativeIntensity,
    n: usize,
    cap: Option<usize>,
) -> Result<EventSeries> {
    let (tau_a, tau_b) = cum.range();
    let mass = tau_b - tau_a;
    let mut times = Vec::with_capacity(n);
    for _ in 0..n {
        // u in [0, 1) maps to mass values in (tau_a, tau_b], never tau_a.
        let z = tau_b - mass * stream.uniform01();
        times.push(cum.invert(z)?);
    }
    sort_times(&mut times);
    Ok(EventSeries::from_sorted(apply_cap(times, cap)))
}

/// Which specialized sampler [`draw`] routes to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Cumulative intensity with a provided inverse: order statistics.
    OrderStatistics,
    /// Cumulative intensity without an inverse: inversion with Brent.
    InversionNumeric,
    /// Intensity plus majorizer: thinning.
    Thinning,
}

/// Arguments for the [`draw`] dispatcher.
///
/// Supply either a cumulative intensity, or an intensity function together
/// with a majorizer and interval; the cumulative route wins when both are
/// present.
#[derive(Default)]
pub struct DrawArgs<'a> {
    pub lambda: Option<&'a (dyn Fn(f64) -> f64 + Sync)>,
    pub majorizer: Option<&'a IntensitySpec>,
    pub interval: Option<Interval>,
    pub cumulative: Option<&'a CumulativeIntensity>,
    pub opts: SamplerOptions,
}

/// The routing rule applied by [`draw`], exposed for inspection.
pub fn dispatch_route(args: &DrawArgs<'_>) -> Result<Route> {
    if let Some(cum) = args.cumulative {
        return Ok(if cum.has_provided_inverse() {
            Route::OrderStatistics
        } else {
            Route::InversionNumeric
        });
    }
    if args.lambda.is_some() {
        if args.majorizer.is_none() || args.interval.is_none() {
            return Err(Error::InvalidArgument(
                "thinning needs an intensity, a majorizer, and an interval",
            ));
        }
        return Ok(Route::Thinning);
    }
    Err(Error::InvalidArgument(
        "supply a cumulative intensity or an intensity with a majorizer",
    ))
}

/// Wrapper that dispatches on the supplied arguments; see [`dispatch_route`].
pub fn draw(stream: &mut RngStream, args: &DrawArgs<'_>) -> Result<EventSeries> {
    match dispatch_route(args)? {
        Route::OrderStatistics => draw_order_statistics(stream, args.cumulative.unwrap(), args.opts),
        Route::InversionNumeric => draw_inversion(stream, args.cumulative.unwrap(), args.opts),
        Route::Thinning => draw_thinning(
            stream,
            args.lambda.unwrap(),
            args.majorizer.unwrap(),
            args.interval.unwrap(),
            args.opts,
        ),
    }
}
