//! Closed-form critical points for an ellipse with a focus at the origin.

use std::f64::consts::PI;

use serde::Serialize;

use super::{assemble_point, l_shift, sign_pow, StationarySet, INDICES};
use crate::error::{ensure_finite, Error, Result};
use crate::medium::Medium;
use crate::numeric::{angle_diff, wrap};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipseAux {
    pub a_aux: f64,
    pub b_aux: f64,
    /// `sqrt((1−q)(1−q/e²))`, defined when `q < e²`.
    pub c_qe: Option<f64>,
}

/// `B = 1/e² + 1/q − 2cos s/(e√q)` and `A = sqrt(B − sin² s)` for the rotated
/// probe angle `s`.
pub fn ellipse_aux(q: f64, e: f64, s: f64) -> EllipseAux {
    let sq = q.sqrt();
    let (sn, cs) = s.sin_cos();
    let b = 1.0 / (e * e) + 1.0 / q - 2.0 * cs / (e * sq);
    let a = (b - sn * sn).max(0.0).sqrt();
    let c_qe = if q < e * e { Some(((1.0 - q) * (1.0 - q / (e * e))).sqrt()) } else { None };
    EllipseAux { a_aux: a, b_aux: b, c_qe }
}

/// `(cos θ_{j}, sin θ_{j})` for the rotated probe angle `s`.
pub fn ellipse_angle(q: f64, e: f64, s: f64, j: u8) -> (f64, f64) {
    let sq = q.sqrt();
    let aux = ellipse_aux(q, e, s);
    let sig = sign_pow(j);
    let (sn, cs) = s.sin_cos();
    let den = e * aux.b_aux;
    let c = (-sn * sn + sig * (cs - e / sq) * aux.a_aux) / den;
    let si = sn * (cs - e / sq + sig * aux.a_aux) / den;
    (c, si)
}

/// `e sin θ + e√q sin s − √q sin(θ − s)`.
pub fn ellipse_residual(q: f64, e: f64, theta: f64, s: f64) -> f64 {
    let sq = q.sqrt();
    e * theta.sin() + e * sq * s.sin() - sq * (theta - s).sin()
}

fn is_degenerate(q: f64, e: f64, s: f64) -> bool {
    (q - e * e).abs() <= 1e-12 * q.max(e * e) && s.sin().abs() <= 1e-12 && s.cos() > 0.0
}

/// The four critical points for probe direction `theta_eta`.
pub fn ellipse_stationary_points(medium: &Medium, theta_eta: f64) -> Result<StationarySet> {
    ensure_finite("theta_eta", theta_eta)?;
    let Some((_, e)) = medium.profile.as_ellipse() else {
        return Err(Error::InvalidInput("closed-form points need an ellipse_focus profile".into()));
    };
    let q = medium.q;
    let mut points = Vec::with_capacity(4);
    let mut degenerate = false;
    for (j, l) in INDICES {
        let s = theta_eta + l_shift(l);
        if is_degenerate(q, e, s) {
            degenerate = true;
            continue;
        }
        let (c, si) = ellipse_angle(q, e, s, j);
        let raw = si.atan2(c);
        let theta = if j == 1 { s + angle_diff(raw, s) } else { s + wrap(raw - s) };
        points.push(assemble_point(q, &medium.profile, theta_eta, j, l, theta));
    }
    Ok(StationarySet { points, degenerate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeKind {
    FullCircle,
    Closed,
    Open,
}

/// Range of `Θ_η ↦ θ_{j,l}` over all probe directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaRange {
    pub lo: f64,
    pub hi: f64,
    pub kind: RangeKind,
    /// The map is monotone (and a bijection when the range is the full circle).
    pub monotone: bool,
}

pub fn ellipse_theta_range(q: f64, e: f64, j: u8, _l: u8) -> ThetaRange {
    let e2 = e * e;
    let sig = sign_pow(j);
    if (q - e2).abs() <= 1e-12 * q.max(e2) {
        let ac = e.acos();
        return ThetaRange { lo: sig * (PI - ac), hi: PI + sig * ac, kind: RangeKind::Open, monotone: true };
    }
    if q > e2 {
        return ThetaRange { lo: 0.0, hi: 2.0 * PI, kind: RangeKind::FullCircle, monotone: true };
    }
    let c = ((1.0 - q) * (1.0 - q / e2)).sqrt();
    let ac = (q / e + sig * c).clamp(-1.0, 1.0).acos();
    let (a, b) = (sig * (PI - ac), PI + sig * ac);
    ThetaRange { lo: a.min(b), hi: a.max(b), kind: RangeKind::Closed, monotone: false }
}
