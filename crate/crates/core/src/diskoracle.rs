//! Homogeneous disk: Bessel kernel, per-mode matching determinant and its zeros.
//!
//! Inside a disk of radius `a` a mode-`n` field regular at the origin is
//! `A J_n(√q k r) e^{inθ}`; the mode-`n` Herglotz wave is `B J_n(k r) e^{inθ}`
//! up to a constant. Equal Cauchy data on `r = a` for some `(A, B) ≠ 0` needs
//! `J_n(ka)·√q J_n'(√q ka) − J_n'(ka)·J_n(√q ka) = 0`, which is `disk_determinant`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{bisect, unit};
use crate::oscillatory::{herglotz_with_gradient, Density};

const SERIES_LIMIT: f64 = 8.0;
const MAX_ARG: f64 = 1e5;
const MAX_ORDER: i64 = 100_000;

fn check_args(n: i64, x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > MAX_ARG || n.abs() > MAX_ORDER {
        return Err(Error::InvalidInput(format!("Bessel arguments out of range: n = {n}, x = {x}")));
    }
    Ok(())
}

fn series(n: usize, x: f64) -> f64 {
    let half = x / 2.0;
    let mut lead = 1.0;
    for i in 1..=n {
        lead *= half / i as f64;
        if lead == 0.0 {
            return 0.0;
        }
    }
    let y = -half * half;
    let mut term = lead;
    let mut sum = lead;
    for m in 1..200 {
        term *= y / (m as f64 * (m + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `J_0..=J_nmax` at `x ≥ SERIES_LIMIT` by normalized backward recurrence.
fn miller(nmax: usize, x: f64) -> Vec<f64> {
    let top = nmax.max(x as usize);
    let mut m = top + 40 + (50.0 * top as f64).sqrt() as usize;
    m += m % 2;
    let mut out = vec![0.0; nmax + 1];
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    for k in (1..=m).rev() {
        // j holds J_k, jp1 holds J_{k+1}
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        if k - 1 <= nmax {
            out[k - 1] = j;
        }
        if (k - 1) % 2 == 0 {
            norm += if k == 1 { j } else { 2.0 * j };
        }
        if j.abs() > 1e250 {
            jp1 *= 1e-250;
            j *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    out.iter().map(|v| v / norm).collect()
}

/// `J_0(x), …, J_nmax(x)` for `x ≥ 0`.
pub fn bessel_j_all(nmax: usize, x: f64) -> Result<Vec<f64>> {
    check_args(nmax as i64, x)?;
    if x < 0.0 {
        return Err(Error::InvalidInput(format!("bessel_j_all needs x >= 0, got {x}")));
    }
    if x < SERIES_LIMIT {
        Ok((0..=nmax).map(|n| series(n, x)).collect())
    } else {
        Ok(miller(nmax, x))
    }
}

/// First-kind Bessel function `J_n(x)`, any integer order and real argument.
pub fn bessel_j(n: i64, x: f64) -> Result<f64> {
    check_args(n, x)?;
    let m = n.unsigned_abs() as usize;
    let mut sign = if n < 0 && m % 2 == 1 { -1.0 } else { 1.0 };
    if x < 0.0 && m % 2 == 1 {
        sign = -sign;
    }
    let ax = x.abs();
    let v = if ax < SERIES_LIMIT { series(m, ax) } else { miller(m, ax)[m] };
    Ok(sign * v)
}

/// `J_n'(x) = (J_{n−1}(x) − J_{n+1}(x)) / 2`.
pub fn bessel_jp(n: i64, x: f64) -> Result<f64> {
    Ok(0.5 * (bessel_j(n - 1, x)? - bessel_j(n + 1, x)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskMedium {
    pub a: f64,
    pub q: f64,
}

impl DiskMedium {
    pub fn new(a: f64, q: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidInput(format!("disk radius must be positive, got {a}")));
        }
        if !(q > 0.0 && q.is_finite()) || q == 1.0 {
            return Err(Error::InvalidInput(format!("contrast must be positive and differ from 1, got {q}")));
        }
        Ok(DiskMedium { a, q })
    }
}

/// `d_n(k) = √q J_n(ka) J_n'(√q ka) − J_n'(ka) J_n(√q ka)`.
pub fn disk_determinant(medium: &DiskMedium, n: i64, k: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidInput(format!("wavenumber must be positive, got {k}")));
    }
    let sq = medium.q.sqrt();
    let (x, y) = (k * medium.a, sq * k * medium.a);
    Ok(sq * bessel_j(n, x)? * bessel_jp(n, y)? - bessel_jp(n, x)? * bessel_j(n, y)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeZeros {
    pub n: i64,
    pub zeros: Vec<f64>,
}

pub const ZERO_SCAN_START: f64 = 1e-3;
pub const MAX_SCAN_K: f64 = 300.0;

/// All sign changes of `d_n` on `(1e-3, k_max]`, refined to `1e-10`.
pub fn find_nonscattering(medium: &DiskMedium, n: i64, k_max: f64) -> Result<ModeZeros> {
    if !(k_max > ZERO_SCAN_START && k_max <= MAX_SCAN_K) {
        return Err(Error::InvalidInput(format!("k_max must lie in ({ZERO_SCAN_START}, {MAX_SCAN_K}], got {k_max}")));
    }
    // about 60 samples per oscillation of the faster factor
    let steps = ((k_max * medium.a * (1.0 + medium.q.sqrt()) * 20.0).ceil() as usize).max(400);
    let h = (k_max - ZERO_SCAN_START) / steps as f64;
    let ks: Vec<f64> = (0..=steps).map(|i| ZERO_SCAN_START + h * i as f64).collect();
    let vals: Vec<f64> = ks.par_iter().map(|&k| disk_determinant(medium, n, k)).collect::<Result<_>>()?;
    let brackets: Vec<(f64, f64)> = (0..steps)
        .filter(|&i| vals[i] != 0.0 && vals[i].signum() != vals[i + 1].signum())
        .map(|i| (ks[i], ks[i + 1]))
        .collect();
    let mut zeros: Vec<f64> = brackets
        .par_iter()
        .map(|&(lo, hi)| {
            let f = |k: f64| disk_determinant(medium, n, k).unwrap_or(f64::NAN);
            bisect(f, lo, hi, 1e-10, "disk determinant zero")
        })
        .collect::<Result<_>>()?;
    zeros.dedup_by(|a, b| (*a - *b).abs() <= 1e-6);
    Ok(ModeZeros { n, zeros })
}

/// Relative mismatch, after the best complex scaling, between the Cauchy data
/// `(u, ∂_r u / k)` of the incident mode-`n` Herglotz wave at `k` and of the
/// interior field at `√q k` (the same Herglotz wave at the interior
/// wavenumber), sampled on `r = a`. Both come from plane-wave quadrature, not
/// from the Bessel kernel, so a small value confirms `disk_determinant`.
pub fn cauchy_residual(medium: &DiskMedium, n: i64, k: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidInput(format!("wavenumber must be positive, got {k}")));
    }
    let density = Density::mode(n);
    let kq = medium.q.sqrt() * k;
    let mut worst = 0.0f64;
    for t in [0.0, 1.0, 2.5] {
        let r_hat = unit(t);
        let x = [medium.a * r_hat[0], medium.a * r_hat[1]];
        let data = |kk: f64| {
            let (v, g) = herglotz_with_gradient(&density, kk, x);
            [v, (g[0] * r_hat[0] + g[1] * r_hat[1]) / k]
        };
        let out = data(k);
        let inn = data(kq);
        let nn: f64 = inn.iter().map(|c| c.norm_sqr()).sum();
        let no: f64 = out.iter().map(|c| c.norm_sqr()).sum();
        if nn == 0.0 || no == 0.0 {
            return Err(Error::DegenerateSet(format!("vanishing Cauchy data for mode {n} at k = {k}")));
        }
        let alpha: Complex64 = inn.iter().zip(&out).map(|(i, o)| i.conj() * o).sum::<Complex64>() / nn;
        let res: f64 = out.iter().zip(&inn).map(|(o, i)| (o - alpha * i).norm_sqr()).sum();
        worst = worst.max((res / no).sqrt());
    }
    Ok(worst)
}
