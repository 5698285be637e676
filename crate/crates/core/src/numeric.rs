//! Small scalar helpers: bracketed roots, extremum refinement, angle bookkeeping.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const TAU: f64 = 2.0 * PI;

pub type Vec2 = [f64; 2];

#[inline]
pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Counter-clockwise quarter turn `(x1, x2) -> (-x2, x1)`.
#[inline]
pub fn perp(a: Vec2) -> Vec2 {
    [-a[1], a[0]]
}

#[inline]
pub fn unit(t: f64) -> Vec2 {
    let (s, c) = t.sin_cos();
    [c, s]
}

#[inline]
pub fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

/// Representative of `t` in `[0, 2π)`.
pub fn wrap(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed distance `a - b` reduced to `(-π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

pub fn linspace_periodic(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| TAU * i as f64 / n as f64)
}

/// Plain bisection on a sign change, down to bracket width `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64, context: &str) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.signum() != fhi.signum()) || flo.is_nan() || fhi.is_nan() {
        return Err(Error::Bracket { lo, hi, context: context.to_string() });
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection to width 1e-6, then Newton polish kept inside the bracket.
pub fn bisect_newton<F, D>(f: F, df: D, lo: f64, hi: f64, context: &str) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.is_nan() || fhi.is_nan() || flo.signum() == fhi.signum() {
        return Err(Error::Bracket { lo, hi, context: context.to_string() });
    }
    let (mut a, mut b) = (lo, hi);
    let sa = flo.signum();
    while b - a > 1e-6 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..60 {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == sa {
            a = x;
        } else {
            b = x;
        }
        let d = df(x);
        let mut next = x - fx / d;
        if !next.is_finite() || next <= a || next >= b {
            next = 0.5 * (a + b);
        }
        let step = (next - x).abs();
        x = next;
        if step <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            break;
        }
    }
    Ok(x)
}

/// Golden-section search for a local maximum of `f` on `[a, b]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    let mut best = (x, fx);
    for (t, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (t, v);
        }
    }
    best
}

/// Maximum of a periodic function: uniform scan followed by golden refinement
/// around the best cell. Returns `(argmax, max)`.
pub fn periodic_max<F: Fn(f64) -> f64>(f: F, grid_n: usize) -> (f64, f64) {
    let h = TAU / grid_n as f64;
    let mut best = (0.0, f64::NEG_INFINITY);
    for t in linspace_periodic(grid_n) {
        let v = f(t);
        if v > best.1 || best.1.is_nan() {
            best = (t, v);
        }
    }
    let refined = golden_max(&f, best.0 - h, best.0 + h, 1e-13);
    if refined.1 > best.1 {
        refined
    } else {
        best
    }
}

/// Relative equality with tolerance `tol` on the larger magnitude.
pub fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= tol * scale || a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_newton_finds_cos_root() {
        let r = bisect_newton(|x| x.cos(), |x| -x.sin(), 1.0, 2.0, "test").unwrap();
        assert!((r - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn bisect_rejects_missing_sign_change() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, "test").is_err());
    }

    #[test]
    fn angle_helpers() {
        assert!((angle_diff(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
        assert!((wrap(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        assert_eq!(perp([1.0, 0.0]), [0.0, 1.0]);
    }

    #[test]
    fn periodic_max_locates_peak() {
        let (t, v) = periodic_max(|t| (t - 1.234).cos(), 64);
        assert!((t - 1.234).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-14);
    }
}
