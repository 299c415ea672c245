//! Automatic piecewise-constant majorizers for thinning proposals.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A piecewise-constant upper bound for an intensity function.
///
/// Built by [`step_majorizer`]: on each grid cell the bound is the larger
/// endpoint value plus, for non-monotone inputs, half the cell width times
/// the Lipschitz constant (the worst interior excursion a `K`-Lipschitz
/// function can make above its endpoints).
#[derive(Debug, Clone, PartialEq)]
pub struct MajorizerSpec {
    values: Vec<f64>,
    breakpoints: Vec<f64>,
    lipschitz_k: Option<f64>,
    is_monotone: bool,
}

impl MajorizerSpec {
    /// Wraps explicitly computed bound values on a breakpoint grid.
    ///
    /// For callers that construct their own envelope (for example from known
    /// cell suprema) instead of going through [`step_majorizer`].
    pub fn new(values: Vec<f64>, breakpoints: Vec<f64>) -> Result<Self> {
        if values.is_empty() || breakpoints.len() != values.len() + 1 {
            return Err(Error::Domain("need exactly one more breakpoint than values"));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Domain("majorizer values must be finite and non-negative"));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::Domain("breakpoints must be finite and strictly increasing"));
        }
        Ok(MajorizerSpec { values, breakpoints, lipschitz_k: None, is_monotone: false })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn lipschitz_k(&self) -> Option<f64> {
        self.lipschitz_k
    }

    pub fn is_monotone(&self) -> bool {
        self.is_monotone
    }

    pub(crate) fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.values, self.breakpoints)
    }

    /// Total mass of the bound, `sum_m values[m] * width[m]`.
    pub fn integral(&self) -> f64 {
        self.values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(v, w)| v * (w[1] - w[0]))
            .sum()
    }

    /// Pointwise evaluation; zero outside the grid.
    pub fn eval(&self, t: f64) -> f64 {
        if t < self.breakpoints[0] || t > self.breakpoints[self.values.len()] {
            return 0.0;
        }
        let idx = self.breakpoints.partition_point(|&e| e <= t);
        self.values[idx.saturating_sub(1).min(self.values.len() - 1)]
    }
}

/// Builds a piecewise-constant majorizer for `fun` on the given grid.
///
/// `fun` must be monotone (then `lipschitz_k` is ignored and may be `None`)
/// or `K`-Lipschitz with `lipschitz_k = Some(K)`. For functions that are
/// neither, the result is not a valid bound; detecting that is the caller's
/// responsibility. The thinning sampler re-checks dominance at every
/// proposal, so a bad bound fails loudly downstream.
pub fn step_majorizer<F: Fn(f64) -> f64>(
    fun: F,
    breaks: &[f64],
    is_monotone: bool,
    lipschitz_k: Option<f64>,
) -> Result<MajorizerSpec> {
    if breaks.len() < 2 {
        return Err(Error::Domain("need at least two breakpoints"));
    }
    if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("breakpoints must be finite and strictly increasing"));
    }
    let cone_slope = if is_monotone {
        0.0
    } else {
        match lipschitz_k {
            Some(k) if k >= 0.0 && k.is_finite() => k,
            Some(_) => return Err(Error::Domain("Lipschitz constant must be non-negative")),
            None => {
                return Err(Error::InvalidArgument(
                    "a non-monotone intensity needs a Lipschitz constant",
                ))
            }
        }
    };
    let mut values = Vec::with_capacity(breaks.len() - 1);
    for w in breaks.windows(2) {
        let v = fun(w[0]).max(fun(w[1])) + cone_slope * (w[1] - w[0]) / 2.0;
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Domain("majorizer values must be finite and non-negative"));
        }
        values.push(v);
    }
    Ok(MajorizerSpec {
        values,
        breakpoints: breaks.into(),
        lipschitz_k: if is_monotone { lipschitz_k } else { Some(cone_slope) },
        is_monotone,
    })
}
