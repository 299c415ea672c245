//! Bracketed root finding and inversion of monotone functions.

use crate::error::{Error, Result};

/// Default relative tolerance on the function value for monotone inversion.
pub const DEFAULT_INVERSION_TOL: f64 = 1e-10;
/// Iteration budget for Brent's method.
pub const MAX_BRENT_ITER: u32 = 200;

/// Brent's method: root of `f` inside `[lo, hi]`, which must bracket a sign
/// change. Combines bisection, secant, and inverse quadratic interpolation.
pub fn brent_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::Bracket { target: 0.0, lo, hi });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_BRENT_ITER {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Try secant / inverse quadratic interpolation.
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(Error::NonConvergence { iterations: MAX_BRENT_ITER })
}

/// Inverts a non-decreasing function: finds `t` in `[lo, hi]` with
/// `|f(t) - target| <= rel_tol * max(1, |target|)`.
///
/// When the preimage of `target` is an interval (a flat span of `f`), the
/// left edge is returned, so inversion is deterministic on plateaus.
pub fn invert_monotone<F: Fn(f64) -> f64>(
    f: F,
    target: f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> Result<f64> {
    let ftol = rel_tol * target.abs().max(1.0);
    let f_lo = f(lo);
    let f_hi = f(hi);
    if target < f_lo - ftol || target > f_hi + ftol {
        return Err(Error::Bracket { target, lo: f_lo, hi: f_hi });
    }
    if f_lo >= target - ftol {
        return Ok(lo);
    }
    let root = if f_hi <= target {
        hi
    } else {
        let xtol = (hi - lo).abs().max(1.0) * 1e-14;
        brent_root(|t| f(t) - target, lo, hi, xtol)?
    };
    // A flat span just left of the root means the whole plateau maps to the
    // target; walk back to its left edge with a monotone bisection.
    let probe = root - (hi - lo).abs().max(1.0) * 1e-7;
    if probe > lo && f(probe) >= target {
        let mut left = lo;
        let mut right = probe;
        for _ in 0..200 {
            let mid = 0.5 * (left + right);
            if f(mid) >= target {
                right = mid;
            } else {
                left = mid;
            }
            if right - left <= (hi - lo).abs().max(1.0) * 1e-14 {
                break;
            }
        }
        return Ok(right);
    }
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_simple_roots() {
        let r = brent_root(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - libm::sqrt(2.0)).abs() < 1e-12);
        let r = brent_root(|x| libm::cos(x), 0.0, 3.0, 1e-14).unwrap();
        assert!((r - core::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(brent_root(|x| x + 10.0, 0.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn invert_identity() {
        let t = invert_monotone(|x| x, 3.5, 0.0, 10.0, 1e-12).unwrap();
        assert!((t - 3.5).abs() < 1e-10);
    }

    #[test]
    fn invert_rejects_out_of_bracket() {
        assert!(matches!(
            invert_monotone(|x| x, 11.0, 0.0, 10.0, 1e-12),
            Err(Error::Bracket { .. })
        ));
        assert!(invert_monotone(|x| x, -0.5, 0.0, 10.0, 1e-12).is_err());
    }

    #[test]
    fn invert_plateau_returns_left_edge() {
        // Piecewise linear with a flat middle span on [2, 5].
        let f = |t: f64| {
            if t < 2.0 {
                t
            } else if t < 5.0 {
                2.0
            } else {
                2.0 + (t - 5.0)
            }
        };
        let t = invert_monotone(f, 2.0, 0.0, 10.0, 1e-12).unwrap();
        assert!((t - 2.0).abs() < 1e-9, "plateau inverse {t}");
        // A target above the plateau maps past it.
        let t = invert_monotone(f, 2.5, 0.0, 10.0, 1e-12).unwrap();
        assert!((t - 5.5).abs() < 1e-9);
    }

    #[test]
    fn roundtrip_accuracy() {
        let f = |t: f64| libm::exp(0.2 * t) - 1.0;
        for i in 0..1000 {
            let z = (i as f64 / 999.0) * (libm::exp(2.0) - 1.0);
            let t = invert_monotone(f, z, 0.0, 10.0, 1e-10).unwrap();
            assert!((f(t) - z).abs() <= 1e-10 * z.abs().max(1.0));
        }
    }
}
