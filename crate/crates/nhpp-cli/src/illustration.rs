//! The bundled illustration target: an oscillating intensity with
//! exponentially growing amplitude,
//!
//! ```text
//! lambda(t) = exp(r t) * (1 + sin(w t))        on (0, 6 pi]
//! Lambda(t) = (exp(r t) (r sin wt - w cos wt) + w) / (r^2 + w^2)
//!             + (exp(r t) - 1) / r
//! ```
//!
//! `Lambda` has no elementary inverse, which makes this a good exercise for
//! every sampling route: thinning under three majorizers of increasing
//! tightness, inversion through a tabulated or Brent inverse, and order
//! statistics. The default parameters are `r = 0.2`, `w = 1`.

use nhpp_core::numeric::brent_root;
use nhpp_core::{CumulativeIntensity, IntensitySpec, Interval, MajorizerSpec, Result};

/// Constant majorizer level used by the default preset (an upper bound for
/// the intensity maximum of about 43.376 at the right endpoint).
pub const DEFAULT_CONST_BOUND: f64 = 43.38;
/// Lipschitz constant used by the default preset (the slope bound is about
/// 52.0515, attained at the right endpoint).
pub const DEFAULT_LIPSCHITZ: f64 = 52.05;
/// Majorizer grid resolution used by the default preset.
pub const DEFAULT_BINS: usize = 20;
/// Time step of the precomputed inverse table.
pub const DEFAULT_INVERSE_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Illustration {
    /// Exponential amplitude growth rate `r`.
    pub growth: f64,
    /// Oscillation frequency `w`.
    pub frequency: f64,
}

impl Default for Illustration {
    fn default() -> Self {
        Illustration { growth: 0.2, frequency: 1.0 }
    }
}

impl Illustration {
    pub fn new(growth: f64, frequency: f64) -> Self {
        Illustration { growth, frequency }
    }

    fn is_default(&self) -> bool {
        self.growth == 0.2 && self.frequency == 1.0
    }

    pub fn interval(&self) -> Interval {
        Interval::new(0.0, 6.0 * std::f64::consts::PI).expect("fixed interval")
    }

    pub fn intensity(&self, t: f64) -> f64 {
        (self.growth * t).exp() * (1.0 + (self.frequency * t).sin())
    }

    fn intensity_derivative(&self, t: f64) -> f64 {
        let (r, w) = (self.growth, self.frequency);
        (r * t).exp() * (r * (1.0 + (w * t).sin()) + w * (w * t).cos())
    }

    pub fn cumulative_value(&self, t: f64) -> f64 {
        let (r, w) = (self.growth, self.frequency);
        let e = (r * t).exp();
        (e * (r * (w * t).sin() - w * (w * t).cos()) + w) / (r * r + w * w) + (e - 1.0) / r
    }

    /// Total expected number of events on the interval.
    pub fn mass(&self) -> f64 {
        self.cumulative_value(self.interval().end()) - self.cumulative_value(0.0)
    }

    pub fn intensity_fn(&self) -> impl Fn(f64) -> f64 + Clone + Send + Sync + 'static {
        let ill = *self;
        move |t| ill.intensity(t)
    }

    /// Cumulative intensity with the Brent fallback as its inverse.
    pub fn cumulative(&self) -> Result<CumulativeIntensity> {
        let ill = *self;
        CumulativeIntensity::from_fn(move |t| ill.cumulative_value(t), self.interval())
    }

    /// Cumulative intensity with a precomputed interpolation inverse.
    pub fn cumulative_tabulated(&self, step: f64) -> Result<CumulativeIntensity> {
        self.cumulative()?.with_tabulated_inverse(step)
    }

    /// Upper bound for the intensity on the interval.
    pub fn intensity_bound(&self) -> f64 {
        if self.is_default() {
            DEFAULT_CONST_BOUND
        } else {
            // Headroom over the numeric supremum keeps dominance strict.
            self.supremum(|t| self.intensity(t)) * (1.0 + 1e-9)
        }
    }

    /// Upper bound for the intensity slope on the interval.
    pub fn lipschitz_bound(&self) -> f64 {
        if self.is_default() {
            DEFAULT_LIPSCHITZ
        } else {
            self.supremum(|t| self.intensity_derivative(t).abs()) * (1.0 + 1e-9)
        }
    }

    fn supremum<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let iv = self.interval();
        let mut best = f64::NEG_INFINITY;
        for i in 0..=20_000 {
            best = best.max(f(iv.start() + iv.width() * i as f64 / 20_000.0));
        }
        best
    }

    /// Constant (single-cell) majorizer at [`Self::intensity_bound`].
    pub fn majorizer_const(&self) -> IntensitySpec {
        IntensitySpec::step_regular(vec![self.intensity_bound()], self.interval())
            .expect("constant bound is a valid step spec")
    }

    /// Piecewise-constant majorizer from endpoint maxima plus the Lipschitz
    /// cone correction on `bins` equal cells.
    pub fn majorizer_lipschitz(&self, bins: usize) -> Result<MajorizerSpec> {
        let breaks = self.equal_breaks(bins);
        nhpp_core::majorizer::step_majorizer(
            self.intensity_fn(),
            &breaks,
            false,
            Some(self.lipschitz_bound()),
        )
    }

    /// Tight piecewise-constant majorizer: the least upper bound of the
    /// intensity on each of `bins` equal cells, found from the stationary
    /// points of the intensity.
    pub fn majorizer_tight(&self, bins: usize) -> Result<MajorizerSpec> {
        let breaks = self.equal_breaks(bins);
        let mut values = Vec::with_capacity(bins);
        for cell in breaks.windows(2) {
            values.push(self.cell_supremum(cell[0], cell[1]));
        }
        MajorizerSpec::new(values, breaks)
    }

    fn equal_breaks(&self, bins: usize) -> Vec<f64> {
        let iv = self.interval();
        (0..=bins)
            .map(|i| {
                if i == bins {
                    iv.end()
                } else {
                    iv.start() + iv.width() * i as f64 / bins as f64
                }
            })
            .collect()
    }

    fn cell_supremum(&self, lo: f64, hi: f64) -> f64 {
        let mut best = self.intensity(lo).max(self.intensity(hi));
        // Interior maxima sit at sign changes of the derivative.
        const SCAN: usize = 64;
        let mut prev_t = lo;
        let mut prev_g = self.intensity_derivative(lo);
        for i in 1..=SCAN {
            let t = lo + (hi - lo) * i as f64 / SCAN as f64;
            let g = self.intensity_derivative(t);
            if prev_g == 0.0 {
                best = best.max(self.intensity(prev_t));
            } else if prev_g * g < 0.0 {
                if let Ok(root) =
                    brent_root(|x| self.intensity_derivative(x), prev_t, t, 1e-13)
                {
                    best = best.max(self.intensity(root));
                }
            }
            prev_t = t;
            prev_g = g;
        }
        best
    }
}
