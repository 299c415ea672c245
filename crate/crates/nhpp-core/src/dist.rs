//! Distribution functions shared by the samplers and the validation suite.
//!
//! Everything here is deterministic math: regularized incomplete gamma,
//! chi-square tails, Poisson pmf/cdf/quantiles, and the Kolmogorov statistic
//! distribution used for KS p-values.

use crate::error::{Error, Result};

const MAX_SERIES_ITER: u32 = 600;
const SERIES_EPS: f64 = 1e-15;

/// Regularized lower incomplete gamma `P(a, x)`.
///
/// Series expansion for `x < a + 1`, Lentz continued fraction otherwise.
pub fn lower_reg_gamma(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_series(a, x)
    } else {
        1.0 - gamma_cont_fraction(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn upper_reg_gamma(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_series(a, x)
    } else {
        gamma_cont_fraction(a, x)
    }
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut n = a;
    for _ in 0..MAX_SERIES_ITER {
        n += 1.0;
        term *= x / n;
        sum += term;
        if term.abs() < sum.abs() * SERIES_EPS {
            break;
        }
    }
    let log_prefactor = -x + a * libm::log(x) - libm::lgamma(a);
    (sum * libm::exp(log_prefactor)).clamp(0.0, 1.0)
}

fn gamma_cont_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_SERIES_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < SERIES_EPS {
            break;
        }
    }
    let log_prefactor = -x + a * libm::log(x) - libm::lgamma(a);
    (libm::exp(log_prefactor) * h).clamp(0.0, 1.0)
}

/// `P(X <= x)` for a chi-square variable with `df` degrees of freedom.
pub fn chi2_cdf(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    lower_reg_gamma(df / 2.0, x / 2.0)
}

/// `P(X >= x)` for a chi-square variable with `df` degrees of freedom.
pub fn chi2_survival(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    upper_reg_gamma(df / 2.0, x / 2.0)
}

/// Poisson probability mass `P(N = k)` with mean `mass`, computed in log space.
pub fn poisson_pmf(k: u64, mass: f64) -> f64 {
    if mass <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let k_f = k as f64;
    libm::exp(-mass + k_f * libm::log(mass) - libm::lgamma(k_f + 1.0))
}

/// Poisson cumulative `P(N <= k)` with mean `mass`.
///
/// Uses the gamma-function identity `P(N <= k) = Q(k + 1, mass)`, which keeps
/// both tails accurate.
pub fn poisson_cdf(k: u64, mass: f64) -> f64 {
    if mass <= 0.0 {
        return 1.0;
    }
    upper_reg_gamma(k as f64 + 1.0, mass)
}

/// `P(N >= k)` with mean `mass`, accurate in the lower tail.
pub fn poisson_sf_geq(k: u64, mass: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if mass <= 0.0 {
        return 0.0;
    }
    lower_reg_gamma(k as f64, mass)
}

/// Smallest `k` with `P(N <= k) >= p` for `N ~ Poisson(mass)`.
pub fn poisson_quantile(p: f64, mass: f64) -> Result<u64> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::Domain("quantile level must lie in [0, 1]"));
    }
    if !mass.is_finite() || mass < 0.0 {
        return Err(Error::Domain("Poisson mass must be finite and non-negative"));
    }
    if mass == 0.0 || p <= 0.0 {
        return Ok(0);
    }
    if p >= 1.0 {
        return Err(Error::Domain("quantile level 1 has no finite Poisson quantile"));
    }
    // Bracket around the mean, then binary search on the cdf.
    let sd = libm::sqrt(mass);
    let mut hi = libm::ceil(mass + 10.0 * sd + 10.0) as u64;
    let mut grow = 0;
    while poisson_cdf(hi, mass) < p {
        hi = hi.saturating_mul(2).max(hi + 1);
        grow += 1;
        if grow > 60 {
            return Err(Error::NonConvergence { iterations: grow });
        }
    }
    let mut lo = 0u64;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if poisson_cdf(mid, mass) >= p {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Survival function of the Kolmogorov statistic distribution,
/// `Q(x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2)`.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100u32 {
        let j2 = (j * j) as f64;
        let term = libm::exp(-2.0 * j2 * x * x);
        sum += sign * term;
        if term < 1e-18 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
