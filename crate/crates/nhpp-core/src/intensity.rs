//! Intensity functions and their integrated (cumulative) form.
//!
//! [`IntensitySpec`] is a tagged description of an intensity `lambda(t)`:
//! an arbitrary callable, a piecewise-constant step function on a regular or
//! irregular grid, a clamped linear function `max(alpha + beta t, 0)`, or a
//! log-linear function `exp(alpha + beta t)`.
//!
//! [`CumulativeIntensity`] carries `Lambda(t)` together with a way to invert
//! it: an analytic inverse for the closed forms, an interpolation table, or
//! the Brent-based numeric fallback from [`crate::numeric`].

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::majorizer::MajorizerSpec;
use crate::numeric::{invert_monotone, DEFAULT_INVERSION_TOL};
use crate::types::Interval;

/// Near-zero slope threshold below which linear and log-linear forms
/// degenerate to a constant rate, avoiding catastrophic cancellation.
const FLAT_SLOPE: f64 = 1e-12;

type DynFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Tagged description of an intensity function.
pub enum IntensitySpec {
    /// Arbitrary non-negative callable.
    Callable(Box<DynFn>),
    /// Piecewise constant on equal-width subintervals of `interval`.
    PiecewiseConstRegular { values: Vec<f64>, interval: Interval },
    /// Piecewise constant on an explicit strictly increasing grid of
    /// `values.len() + 1` breakpoints.
    PiecewiseConstIrregular { values: Vec<f64>, breakpoints: Vec<f64> },
    /// `max(alpha + beta t, 0)`.
    Linear { alpha: f64, beta: f64 },
    /// `exp(alpha + beta t)`.
    LogLinear { alpha: f64, beta: f64 },
}

impl core::fmt::Debug for IntensitySpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            IntensitySpec::Callable(_) => f.write_str("Callable(..)"),
            IntensitySpec::PiecewiseConstRegular { values, interval } => f
                .debug_struct("PiecewiseConstRegular")
                .field("values", values)
                .field("interval", interval)
                .finish(),
            IntensitySpec::PiecewiseConstIrregular { values, breakpoints } => f
                .debug_struct("PiecewiseConstIrregular")
                .field("values", values)
                .field("breakpoints", breakpoints)
                .finish(),
            IntensitySpec::Linear { alpha, beta } => {
                f.debug_struct("Linear").field("alpha", alpha).field("beta", beta).finish()
            }
            IntensitySpec::LogLinear { alpha, beta } => {
                f.debug_struct("LogLinear").field("alpha", alpha).field("beta", beta).finish()
            }
        }
    }
}

impl IntensitySpec {
    pub fn callable<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        IntensitySpec::Callable(Box::new(f))
    }

    pub fn step_regular(values: Vec<f64>, interval: Interval) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("step intensity needs at least one value"));
        }
        if interval.is_empty() {
            return Err(Error::Domain("step intensity needs a non-empty interval"));
        }
        validate_rates(&values)?;
        Ok(IntensitySpec::PiecewiseConstRegular { values, interval })
    }

    pub fn step(values: Vec<f64>, breakpoints: Vec<f64>) -> Result<Self> {
        if values.is_empty() || breakpoints.len() != values.len() + 1 {
            return Err(Error::Domain("need exactly one more breakpoint than step values"));
        }
        validate_rates(&values)?;
        if breakpoints.iter().any(|b| !b.is_finite())
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::Domain("breakpoints must be finite and strictly increasing"));
        }
        Ok(IntensitySpec::PiecewiseConstIrregular { values, breakpoints })
    }

    pub fn linear(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Domain("linear coefficients must be finite"));
        }
        Ok(IntensitySpec::Linear { alpha, beta })
    }

    pub fn log_linear(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Domain("log-linear coefficients must be finite"));
        }
        Ok(IntensitySpec::LogLinear { alpha, beta })
    }

    /// Pointwise evaluation. Piecewise specs are zero outside their grid.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            IntensitySpec::Callable(f) => f(t),
            IntensitySpec::PiecewiseConstRegular { values, interval } => {
                let (a, b) = (interval.start(), interval.end());
                if t < a || t > b {
                    return 0.0;
                }
                let h = interval.width() / values.len() as f64;
                let m = (libm::floor((t - a) / h) as usize).min(values.len() - 1);
                values[m]
            }
            IntensitySpec::PiecewiseConstIrregular { values, breakpoints } => {
                if t < breakpoints[0] || t > breakpoints[values.len()] {
                    return 0.0;
                }
                let idx = breakpoints.partition_point(|&e| e <= t);
                values[idx.saturating_sub(1).min(values.len() - 1)]
            }
            IntensitySpec::Linear { alpha, beta } => (alpha + beta * t).max(0.0),
            IntensitySpec::LogLinear { alpha, beta } => libm::exp(alpha + beta * t),
        }
    }

    /// The grid span for piecewise specs; other variants have no intrinsic
    /// sampling interval.
    pub fn natural_interval(&self) -> Option<Interval> {
        match self {
            IntensitySpec::PiecewiseConstRegular { interval, .. } => Some(*interval),
            IntensitySpec::PiecewiseConstIrregular { values, breakpoints } => {
                Interval::new(breakpoints[0], breakpoints[values.len()]).ok()
            }
            _ => None,
        }
    }
}

impl From<MajorizerSpec> for IntensitySpec {
    fn from(spec: MajorizerSpec) -> Self {
        let (values, breakpoints) = spec.into_parts();
        IntensitySpec::PiecewiseConstIrregular { values, breakpoints }
    }
}

impl From<&MajorizerSpec> for IntensitySpec {
    fn from(spec: &MajorizerSpec) -> Self {
        IntensitySpec::PiecewiseConstIrregular {
            values: spec.values().into(),
            breakpoints: spec.breakpoints().into(),
        }
    }
}

fn validate_rates(values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::Domain("intensity values must be finite and non-negative"));
    }
    Ok(())
}

/// Piecewise-linear cumulative table for step intensities.
#[derive(Debug, Clone)]
struct StepTable {
    edges: Vec<f64>,
    values: Vec<f64>,
    cum: Vec<f64>,
    regular: Option<f64>, // bin width when the grid is equispaced
}

impl StepTable {
    fn new(values: &[f64], edges: Vec<f64>, regular: Option<f64>) -> Self {
        let mut cum = Vec::with_capacity(edges.len());
        cum.push(0.0);
        let mut acc = 0.0;
        for (m, v) in values.iter().enumerate() {
            acc += v * (edges[m + 1] - edges[m]);
            cum.push(acc);
        }
        StepTable { edges, values: values.into(), cum, regular }
    }

    fn total(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    fn forward(&self, t: f64) -> f64 {
        let n = self.values.len();
        if t <= self.edges[0] {
            return 0.0;
        }
        if t >= self.edges[n] {
            return self.total();
        }
        let m = match self.regular {
            Some(h) => (libm::floor((t - self.edges[0]) / h) as usize).min(n - 1),
            None => self.edges.partition_point(|&e| e <= t) - 1,
        };
        self.cum[m] + self.values[m] * (t - self.edges[m])
    }

    /// Left-continuous inverse: the smallest `t` with `forward(t) >= z`.
    fn invert(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return self.edges[0];
        }
        let total = self.total();
        if z >= total {
            // Smallest t reaching the full mass: walk back over any trailing
            // zero-rate bins.
            let mut m = self.values.len();
            while m > 0 && self.cum[m - 1] >= total {
                m -= 1;
            }
            return self.edges[m];
        }
        let m = self.cum[1..].partition_point(|&c| c < z);
        // Minimality of m guarantees cum[m] < z <= cum[m + 1], so the bin has
        // positive rate.
        self.edges[m] + (z - self.cum[m]) / self.values[m]
    }
}

enum InverseKind {
    Numeric,
    Analytic(Box<DynFn>),
    Tabulated { z_grid: Vec<f64>, t_grid: Vec<f64> },
}

/// `Lambda(t)` on an interval, with a pluggable inverse.
pub struct CumulativeIntensity {
    forward: Box<DynFn>,
    inverse: InverseKind,
    interval: Interval,
    range: (f64, f64),
    inv_tol: f64,
}

impl core::fmt::Debug for CumulativeIntensity {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let kind = match self.inverse {
            InverseKind::Numeric => "numeric",
            InverseKind::Analytic(_) => "analytic",
            InverseKind::Tabulated { .. } => "tabulated",
        };
        f.debug_struct("CumulativeIntensity")
            .field("interval", &self.interval)
            .field("range", &self.range)
            .field("inverse", &kind)
            .finish()
    }
}

impl CumulativeIntensity {
    /// Wraps a cumulative intensity with no inverse; inversion falls back to
    /// Brent's method.
    pub fn from_fn<F>(forward: F, interval: Interval) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::build(Box::new(forward), InverseKind::Numeric, interval)
    }

    /// Wraps a cumulative intensity together with its analytic inverse.
    ///
    /// The inverse maps a cumulative value `z` in `[Lambda(a), Lambda(b)]`
    /// back to a time.
    pub fn from_fn_with_inverse<F, G>(forward: F, inverse: G, interval: Interval) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::build(Box::new(forward), InverseKind::Analytic(Box::new(inverse)), interval)
    }

    /// Analytic cumulative for a closed-form spec, restricted to `interval`.
    ///
    /// For piecewise specs the interval must lie inside the grid span.
    /// `Callable` has no closed form; wrap it with [`Self::from_fn`] instead.
    pub fn from_spec(spec: &IntensitySpec, interval: Interval) -> Result<Self> {
        match spec {
            IntensitySpec::Callable(_) => Err(Error::InvalidArgument(
                "a callable intensity has no closed-form cumulative; integrate it and use from_fn",
            )),
            IntensitySpec::PiecewiseConstRegular { values, interval: span } => {
                let n = values.len();
                let h = span.width() / n as f64;
                let edges: Vec<f64> = (0..=n)
                    .map(|i| if i == n { span.end() } else { span.start() + i as f64 * h })
                    .collect();
                Self::from_step_table(StepTable::new(values, edges, Some(h)), interval)
            }
            IntensitySpec::PiecewiseConstIrregular { values, breakpoints } => {
                Self::from_step_table(StepTable::new(values, breakpoints.clone(), None), interval)
            }
            IntensitySpec::Linear { alpha, beta } => Self::linear(*alpha, *beta, interval),
            IntensitySpec::LogLinear { alpha, beta } => Self::log_linear(*alpha, *beta, interval),
        }
    }

    fn from_step_table(table: StepTable, interval: Interval) -> Result<Self> {
        let span_lo = table.edges[0];
        let span_hi = *table.edges.last().unwrap();
        let slack = 1e-9 * (span_hi - span_lo).abs().max(1.0);
        if interval.start() < span_lo - slack || interval.end() > span_hi + slack {
            return Err(Error::Domain("sampling interval extends beyond the step grid"));
        }
        let table = Arc::new(table);
        let base = table.forward(interval.start());
        let fwd_table = Arc::clone(&table);
        let inv_table = Arc::clone(&table);
        let a = interval.start();
        let b = interval.end();
        Self::build(
            Box::new(move |t| fwd_table.forward(t) - base),
            InverseKind::Analytic(Box::new(move |z| {
                inv_table.invert(z + base).clamp(a, b)
            })),
            interval,
        )
    }

    fn linear(alpha: f64, beta: f64, interval: Interval) -> Result<Self> {
        let (a, b) = (interval.start(), interval.end());
        let prim = move |t: f64| alpha * t + 0.5 * beta * t * t;
        if beta.abs() < FLAT_SLOPE {
            let rate = alpha.max(0.0);
            return Self::build(
                Box::new(move |t| rate * (t.clamp(a, b) - a)),
                InverseKind::Analytic(Box::new(move |z| {
                    if rate == 0.0 {
                        a
                    } else {
                        (a + z / rate).clamp(a, b)
                    }
                })),
                interval,
            );
        }
        // Support boundary of the clamped rate.
        let root = -alpha / beta;
        if beta > 0.0 {
            let start = root.max(a);
            let base = prim(start);
            Self::build(
                Box::new(move |t| {
                    let t = t.clamp(a, b);
                    if t <= start {
                        0.0
                    } else {
                        prim(t) - base
                    }
                }),
                InverseKind::Analytic(Box::new(move |z| {
                    if z <= 0.0 {
                        return a;
                    }
                    let disc = (alpha * alpha + 2.0 * beta * (z + base)).max(0.0);
                    ((-alpha + libm::sqrt(disc)) / beta).clamp(a, b)
                })),
                interval,
            )
        } else {
            let stop = root.min(b);
            let base = prim(a);
            Self::build(
                Box::new(move |t| {
                    let t = t.clamp(a, b);
                    if t <= stop {
                        prim(t) - base
                    } else if a >= stop {
                        0.0
                    } else {
                        prim(stop) - base
                    }
                }),
                InverseKind::Analytic(Box::new(move |z| {
                    if z <= 0.0 {
                        return a;
                    }
                    let disc = (alpha * alpha + 2.0 * beta * (z + base)).max(0.0);
                    ((-alpha + libm::sqrt(disc)) / beta).clamp(a, b)
                })),
                interval,
            )
        }
    }

    fn log_linear(alpha: f64, beta: f64, interval: Interval) -> Result<Self> {
        let (a, b) = (interval.start(), interval.end());
        if beta.abs() < FLAT_SLOPE {
            let rate = libm::exp(alpha);
            if !rate.is_finite() {
                return Err(Error::Domain("log-linear intensity overflows"));
            }
            return Self::build(
                Box::new(move |t| rate * (t.clamp(a, b) - a)),
                InverseKind::Analytic(Box::new(move |z| (a + z / rate).clamp(a, b))),
                interval,
            );
        }
        let ea = libm::exp(alpha + beta * a);
        let eb = libm::exp(alpha + beta * b);
        if !ea.is_finite() || !eb.is_finite() {
            return Err(Error::Domain("log-linear intensity overflows on the interval"));
        }
        Self::build(
            Box::new(move |t| (libm::exp(alpha + beta * t.clamp(a, b)) - ea) / beta),
            InverseKind::Analytic(Box::new(move |z| {
                if z <= 0.0 {
                    return a;
                }
                ((libm::log(ea + beta * z) - alpha) / beta).clamp(a, b)
            })),
            interval,
        )
    }

    fn build(forward: Box<DynFn>, inverse: InverseKind, interval: Interval) -> Result<Self> {
        let lam_a = forward(interval.start());
        let lam_b = forward(interval.end());
        if !lam_a.is_finite() || !lam_b.is_finite() {
            return Err(Error::Domain("cumulative intensity must be finite at the endpoints"));
        }
        if lam_a > lam_b {
            return Err(Error::Domain("cumulative intensity must be non-decreasing"));
        }
        Ok(CumulativeIntensity {
            forward,
            inverse,
            interval,
            range: (lam_a, lam_b),
            inv_tol: DEFAULT_INVERSION_TOL,
        })
    }

    /// Replaces the inverse with an interpolation table of the given time
    /// step, precomputed from the forward map.
    pub fn with_tabulated_inverse(mut self, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::Domain("table step must be positive"));
        }
        let n = libm::ceil(self.interval.width() / step) as usize;
        if n > 100_000_000 {
            return Err(Error::Domain("inverse table would be unreasonably large"));
        }
        let mut t_grid = Vec::with_capacity(n + 1);
        let mut z_grid = Vec::with_capacity(n + 1);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=n {
            let t = if i == n {
                self.interval.end()
            } else {
                self.interval.start() + i as f64 * step
            };
            let z = (self.forward)(t).max(prev);
            prev = z;
            t_grid.push(t);
            z_grid.push(z);
        }
        self.inverse = InverseKind::Tabulated { z_grid, t_grid };
        Ok(self)
    }

    /// Adjusts the relative tolerance used by the numeric inverse.
    pub fn with_inversion_tolerance(mut self, tol: f64) -> Self {
        self.inv_tol = tol;
        self
    }

    pub fn value(&self, t: f64) -> f64 {
        (self.forward)(t)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// `(Lambda(a), Lambda(b))`.
    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    /// Total mass `Lambda(b) - Lambda(a)` of the interval.
    pub fn mass(&self) -> f64 {
        self.range.1 - self.range.0
    }

    /// Whether an analytic or tabulated inverse is available (as opposed to
    /// the Brent fallback).
    pub fn has_provided_inverse(&self) -> bool {
        !matches!(self.inverse, InverseKind::Numeric)
    }

    /// Maps a cumulative value `z` in `[Lambda(a), Lambda(b)]` to a time.
    pub fn invert(&self, z: f64) -> Result<f64> {
        let (za, zb) = self.range;
        let ftol = self.inv_tol * z.abs().max(1.0);
        if z < za - ftol || z > zb + ftol {
            return Err(Error::Bracket { target: z, lo: za, hi: zb });
        }
        let z = z.clamp(za, zb);
        match &self.inverse {
            InverseKind::Analytic(inv) => {
                Ok(inv(z).clamp(self.interval.start(), self.interval.end()))
            }
            InverseKind::Tabulated { z_grid, t_grid } => {
                let i = z_grid.partition_point(|&v| v < z);
                if i == 0 {
                    return Ok(t_grid[0]);
                }
                if i == z_grid.len() {
                    return Ok(*t_grid.last().unwrap());
                }
                let (z0, z1) = (z_grid[i - 1], z_grid[i]);
                let (t0, t1) = (t_grid[i - 1], t_grid[i]);
                let w = if z1 > z0 { (z - z0) / (z1 - z0) } else { 1.0 };
                Ok(t0 + w * (t1 - t0))
            }
            InverseKind::Numeric => invert_monotone(
                &self.forward,
                z,
                self.interval.start(),
                self.interval.end(),
                self.inv_tol,
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let n = if n % 2 == 0 { n } else { n + 1 };
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 0 { 2.0 } else { 4.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn unit_rate_step_is_identity() {
        let spec = IntensitySpec::step_regular(vec![1.0, 1.0, 1.0], Interval::new(0.0, 3.0).unwrap())
            .unwrap();
        let cum = CumulativeIntensity::from_spec(&spec, Interval::new(0.0, 3.0).unwrap()).unwrap();
        for t in [0.0, 0.4, 1.5, 2.9, 3.0] {
            assert!((cum.value(t) - t).abs() < 1e-12);
            assert!((cum.invert(t).unwrap() - t).abs() < 1e-12);
        }
        assert!(cum.has_provided_inverse());
    }

    #[test]
    fn linear_negative_slope_mass_and_support() {
        let iv = Interval::new(0.0, 10.0).unwrap();
        let spec = IntensitySpec::linear(3.0, -0.5).unwrap();
        let cum = CumulativeIntensity::from_spec(&spec, iv).unwrap();
        assert!((cum.mass() - 9.0).abs() < 1e-12);
        // Matches quadrature of the clamped rate.
        let oracle = simpson(|t| (3.0 - 0.5 * t).max(0.0), 0.0, 6.0, 20_000);
        assert!((cum.mass() - oracle).abs() < 1e-9);
        // Support ends at t = 6: the full mass inverts to 6, not 10.
        assert!((cum.invert(9.0).unwrap() - 6.0).abs() < 1e-9);
        // Forward is flat past the support boundary.
        assert_eq!(cum.value(7.0), cum.value(10.0));
    }

    #[test]
    fn linear_positive_slope_clips_left() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        let spec = IntensitySpec::linear(-1.0, 2.0).unwrap(); // positive after t = 0.5
        let cum = CumulativeIntensity::from_spec(&spec, iv).unwrap();
        let oracle = simpson(|t| (2.0 * t - 1.0f64).max(0.0), 0.0, 1.0, 20_000);
        assert!((cum.mass() - oracle).abs() < 1e-9);
        assert_eq!(cum.value(0.5), 0.0);
        let t = cum.invert(cum.mass() / 2.0).unwrap();
        assert!(t > 0.5 && t < 1.0);
    }

    #[test]
    fn log_linear_matches_quadrature() {
        let iv = Interval::new(8.0, 10.0).unwrap();
        let spec = IntensitySpec::log_linear(1.0, -0.02).unwrap();
        let cum = CumulativeIntensity::from_spec(&spec, iv).unwrap();
        let oracle = simpson(|t| libm::exp(1.0 - 0.02 * t), 8.0, 10.0, 40_000);
        assert!((cum.mass() - oracle).abs() <= 1e-10 * oracle);
        // Round trip through the analytic inverse.
        for i in 0..50 {
            let z = cum.mass() * i as f64 / 49.0;
            let t = cum.invert(z).unwrap();
            assert!((cum.value(t) - z).abs() < 1e-10);
        }
    }

    #[test]
    fn log_linear_flat_slope_is_constant_rate() {
        let iv = Interval::new(0.0, 2.0).unwrap();
        let spec = IntensitySpec::log_linear(1.0, 0.0).unwrap();
        let cum = CumulativeIntensity::from_spec(&spec, iv).unwrap();
        assert!((cum.mass() - 2.0 * libm::exp(1.0)).abs() < 1e-12);
        let overflow = IntensitySpec::log_linear(1.0, 100.0).unwrap();
        assert!(CumulativeIntensity::from_spec(&overflow, Interval::new(0.0, 10.0).unwrap())
            .is_err());
    }

    #[test]
    fn analytic_and_numeric_inverses_agree() {
        let iv = Interval::new(0.5, 5.9).unwrap();
        let spec = IntensitySpec::step(
            vec![1.0, 2.0, 3.0, 4.0, 5.0],
            vec![0.5, 1.0, 2.4, 3.1, 4.9, 5.9],
        )
        .unwrap();
        let analytic = CumulativeIntensity::from_spec(&spec, iv).unwrap();
        let forward = {
            let spec2 = IntensitySpec::step(
                vec![1.0, 2.0, 3.0, 4.0, 5.0],
                vec![0.5, 1.0, 2.4, 3.1, 4.9, 5.9],
            )
            .unwrap();
            let cum = CumulativeIntensity::from_spec(&spec2, iv).unwrap();
            move |t: f64| cum.value(t)
        };
        let numeric = CumulativeIntensity::from_fn(forward, iv).unwrap();
        assert!(!numeric.has_provided_inverse());
        for i in 0..200 {
            let z = numeric.mass() * i as f64 / 199.0;
            let ta = analytic.invert(z).unwrap();
            let tn = numeric.invert(z).unwrap();
            assert!((ta - tn).abs() < 1e-6, "z={z}: {ta} vs {tn}");
        }
    }

    #[test]
    fn tabulated_inverse_tracks_analytic() {
        let iv = Interval::new(8.0, 10.0).unwrap();
        let spec = IntensitySpec::log_linear(1.0, -0.02).unwrap();
        let exact = CumulativeIntensity::from_spec(&spec, iv).unwrap();
        let tab = CumulativeIntensity::from_spec(&spec, iv)
            .unwrap()
            .with_tabulated_inverse(1e-3)
            .unwrap();
        assert!(tab.has_provided_inverse());
        for i in 0..100 {
            let z = exact.mass() * i as f64 / 99.0;
            assert!((tab.invert(z).unwrap() - exact.invert(z).unwrap()).abs() < 1e-5);
        }
    }

    #[test]
    fn monotone_forward_on_dense_grid() {
        let iv = Interval::new(-2.0, 4.0).unwrap();
        let specs = [
            IntensitySpec::linear(1.0, -0.8).unwrap(),
            IntensitySpec::linear(-0.5, 0.7).unwrap(),
            IntensitySpec::log_linear(0.3, 0.4).unwrap(),
        ];
        for spec in specs {
            let cum = CumulativeIntensity::from_spec(&spec, iv).unwrap();
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=4000 {
                let t = -2.0 + 6.0 * i as f64 / 4000.0;
                let v = cum.value(t);
                assert!(v >= prev - 1e-12, "non-monotone at {t}");
                prev = v;
            }
        }
    }

    #[test]
    fn callable_has_no_closed_form() {
        let spec = IntensitySpec::callable(|t: f64| t * t);
        assert!(matches!(
            CumulativeIntensity::from_spec(&spec, Interval::new(0.0, 1.0).unwrap()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn step_restriction_to_subinterval() {
        let spec = IntensitySpec::step_regular(
            vec![2.0, 0.0, 1.0],
            Interval::new(0.0, 3.0).unwrap(),
        )
        .unwrap();
        let sub = Interval::new(1.0, 3.0).unwrap();
        let cum = CumulativeIntensity::from_spec(&spec, sub).unwrap();
        assert_eq!(cum.value(1.0), 0.0);
        assert!((cum.mass() - 1.0).abs() < 1e-12);
        // The zero bin forms a plateau; its mass boundary inverts leftmost.
        assert!((cum.invert(0.0).unwrap() - 1.0).abs() < 1e-12);
        let outside = Interval::new(-1.0, 2.0).unwrap();
        assert!(CumulativeIntensity::from_spec(&spec, outside).is_err());
    }

    #[test]
    fn step_eval_conventions() {
        let spec = IntensitySpec::step(vec![1.0, 3.0], vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(spec.eval(-0.1), 0.0);
        assert_eq!(spec.eval(0.5), 1.0);
        assert_eq!(spec.eval(1.5), 3.0);
        assert_eq!(spec.eval(2.0), 3.0);
        assert_eq!(spec.eval(2.1), 0.0);
        let reg = IntensitySpec::step_regular(vec![1.0, 3.0], Interval::new(0.0, 2.0).unwrap())
            .unwrap();
        for t in [-0.1, 0.5, 1.5, 2.0, 2.1] {
            assert_eq!(spec.eval(t), reg.eval(t), "mismatch at {t}");
        }
    }
}
