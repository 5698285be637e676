//! Root-found critical points for admissible star domains and the maps
//! `Θ_η ↦ θ_{j,l}` with their explicit left inverses.

use std::f64::consts::PI;

use serde::Serialize;

use super::{assemble_point, l_shift, sign_pow, StationaryPoint, INDICES};
use crate::admissibility::{check_q, h_vals, search_theta12, Theta12Search, DEFAULT_GRID};
use crate::error::{ensure_finite, Error, Result};
use crate::geometry::{varrho_from, RadiusProfile};
use crate::medium::Medium;
use crate::numeric::{bisect_newton, TAU};

/// The four branch maps of a star medium with cached brackets
/// `(−θ1, θ1)` and `(θ2, 2π − θ2)`.
#[derive(Debug, Clone)]
pub struct StationaryMap {
    medium: Medium,
    sq: f64,
    theta1: f64,
    theta2: f64,
}

/// A grid cell where a lifted map failed to increase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotonicityDefect {
    pub j: u8,
    pub l: u8,
    pub t: f64,
    pub step: f64,
}

impl StationaryMap {
    pub fn new(medium: &Medium) -> Result<Self> {
        check_q(medium.q)?;
        match search_theta12(medium.q, &medium.profile, DEFAULT_GRID)? {
            Theta12Search::Found { theta1, theta2 } => Ok(Self::with_brackets(medium, theta1, theta2)),
            Theta12Search::ConditionViolated { reason } => {
                Err(Error::Precondition(format!("no bracketing angles: condition violated ({reason})")))
            }
            Theta12Search::SearchExhausted { reason } => {
                Err(Error::Precondition(format!("no bracketing angles: search exhausted ({reason})")))
            }
        }
    }

    pub fn with_brackets(medium: &Medium, theta1: f64, theta2: f64) -> Self {
        StationaryMap { medium: medium.clone(), sq: medium.q.sqrt(), theta1, theta2 }
    }

    pub fn medium(&self) -> &Medium {
        &self.medium
    }

    pub fn brackets(&self) -> (f64, f64) {
        (self.theta1, self.theta2)
    }

    /// Offset `θ − Θ_{η_l}` of branch `j` around the rotated probe angle `s`.
    fn offset(&self, j: u8, s: f64) -> Result<f64> {
        let p = &self.medium.profile;
        let sq = self.sq;
        let f = |t: f64| p.eval(s + t).log_d1 - h_vals(sq, t).h;
        let df = |t: f64| p.eval(s + t).log_d2 - h_vals(sq, t).d1;
        let (lo, hi) = if j == 1 { (-self.theta1, self.theta1) } else { (self.theta2, TAU - self.theta2) };
        let t = bisect_newton(f, df, lo, hi, &format!("solving branch j = {j} at probe angle {s}"))?;
        if f(t).abs() >= 1e-10 {
            return Err(Error::Bracket { lo, hi, context: format!("residual {} too large for branch j = {j}", f(t)) });
        }
        Ok(t)
    }

    /// Continuous lift of `θ_{j,l}(Θ_η)`.
    pub fn map(&self, j: u8, l: u8, theta_eta: f64) -> Result<f64> {
        ensure_finite("theta_eta", theta_eta)?;
        let s = theta_eta + l_shift(l);
        Ok(s + self.offset(j, s)?)
    }

    pub fn points(&self, theta_eta: f64) -> Result<Vec<StationaryPoint>> {
        INDICES
            .iter()
            .map(|&(j, l)| {
                let theta = self.map(j, l, theta_eta)?;
                Ok(assemble_point(self.medium.q, &self.medium.profile, theta_eta, j, l, theta))
            })
            .collect()
    }

    /// Inverse of the `(1,1)` branch by bisection on its lift.
    pub fn inverse11(&self, x: f64) -> Result<f64> {
        let g = |y: f64| self.map(1, 1, y).map(|v| v - x);
        let (mut lo, mut hi) = (x - self.theta1, x + self.theta1);
        let (glo, ghi) = (g(lo)?, g(hi)?);
        if glo > 0.0 || ghi < 0.0 {
            return Err(Error::Bracket { lo, hi, context: "inverting the (1,1) branch".into() });
        }
        for _ in 0..200 {
            if hi - lo <= 1e-15 * (1.0 + x.abs()) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if g(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Grid cells on which a lifted branch fails to increase.
    pub fn monotonicity_defects(&self, grid_n: usize) -> Result<Vec<MonotonicityDefect>> {
        let mut out = Vec::new();
        for (j, l) in INDICES {
            let mut prev = self.map(j, l, 0.0)?;
            for i in 1..=grid_n {
                let t = TAU * i as f64 / grid_n as f64;
                let cur = self.map(j, l, t)?;
                if cur <= prev {
                    out.push(MonotonicityDefect { j, l, t, step: cur - prev });
                }
                prev = cur;
            }
        }
        Ok(out)
    }
}

/// The four root-found points for an admissible star medium.
pub fn star_stationary_points(medium: &Medium, theta_eta: f64) -> Result<Vec<StationaryPoint>> {
    StationaryMap::new(medium)?.points(theta_eta)
}

/// Explicit left inverse of the `(j, l)` branch:
/// `θ − γ − (−1)^{j−1} arcsin(sin γ/√q)`, plus `π` when `j ≠ l`,
/// with `γ = arctan ρ_n'(θ)`.
pub fn s_inverse(q: f64, profile: &RadiusProfile, theta: f64, j: u8, l: u8) -> Result<f64> {
    check_q(q)?;
    ensure_finite("theta", theta)?;
    let v = profile.eval(theta);
    let gamma = v.log_d1.atan();
    let arg = gamma.sin() / q.sqrt();
    if arg.abs() > 1.0 {
        return Err(Error::InadmissibleSlope { t: theta, radicand: q - (1.0 - q) * v.log_d1 * v.log_d1 });
    }
    let offset = if j != l { PI } else { 0.0 };
    Ok(theta - gamma - sign_pow(j) * arg.asin() + offset)
}

/// Derivative of `s_inverse`: `1 − s(1−q)ρ_n''/(ϱ(1 − sϱ))`, `s = (−1)^{j−1}`.
pub fn s_prime(q: f64, profile: &RadiusProfile, theta: f64, j: u8) -> Result<f64> {
    check_q(q)?;
    let v = profile.eval(theta);
    let vr = varrho_from(q, v.log_d1, theta)?;
    let s = sign_pow(j);
    Ok(1.0 - s * (1.0 - q) * v.log_d2 / (vr * (1.0 - s * vr)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::angle_diff;

    #[test]
    fn circle_roots_are_exact() {
        let m = Medium::new(0.25, RadiusProfile::circle(1.0).unwrap()).unwrap();
        let pts = star_stationary_points(&m, 0.7).unwrap();
        for p in pts {
            let expect = 0.7 + l_shift(p.l) + if p.j == 2 { PI } else { 0.0 };
            assert!(angle_diff(p.theta, expect).abs() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn circle_inverse_is_identity_for_first_branch() {
        let c = RadiusProfile::circle(1.0).unwrap();
        assert!((s_inverse(0.25, &c, 1.3, 1, 1).unwrap() - 1.3).abs() < 1e-15);
    }
}
