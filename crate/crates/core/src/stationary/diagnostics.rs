//! Weights, modulus ratios between stationary points, and the composite map
//! whose only fixed points on `[0, s0]` are the endpoints.

use super::{ellipse_stationary_points, PointSolver, StationaryMap, StationaryPoint};
use crate::error::{Error, Result};
use crate::geometry::RadiusProfile;
use crate::medium::Medium;
use crate::numeric::TAU;

/// `f = η⊥·y(θ) = ρ(θ) sin(θ − Θ_η)`.
pub fn weight_f(medium: &Medium, theta_eta: f64, point: &StationaryPoint) -> f64 {
    medium.profile.eval(point.theta).rho * (point.theta - theta_eta).sin()
}

/// Number of distinct values among the four ellipse weights (relative tolerance 1e-9).
pub fn count_distinct_weights(q: f64, e: f64, theta_eta: f64) -> Result<usize> {
    let medium = Medium::new(q, RadiusProfile::ellipse_focus(1.0, e)?)?;
    let set = ellipse_stationary_points(&medium, theta_eta)?;
    if set.degenerate {
        return Err(Error::DegenerateSet(format!("q = e^2 at theta_eta = {theta_eta}")));
    }
    let values: Vec<f64> = set.points.iter().map(|p| p.weight).collect();
    Ok(count_distinct(&values, 1e-9))
}

pub(crate) fn count_distinct(values: &[f64], tol: f64) -> usize {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut count = 0;
    let mut anchor = f64::NAN;
    for v in sorted {
        let same = !anchor.is_nan() && (v - anchor).abs() <= tol * v.abs().max(anchor.abs()).max(1e-3 * scale);
        if !same {
            count += 1;
            anchor = v;
        }
    }
    count
}

/// `|det D²ψ / Ψ²|` at `idx1` times `|Ψ² / det D²ψ|` at `idx2`, probe angle `t`.
pub fn g_ratio(medium: &Medium, t: f64, idx1: (u8, u8), idx2: (u8, u8)) -> Result<f64> {
    if idx1 == idx2 {
        return Ok(1.0);
    }
    let points = PointSolver::new(medium)?.nondegenerate_points(t)?;
    let find = |(j, l): (u8, u8)| {
        points
            .iter()
            .find(|p| p.j == j && p.l == l)
            .ok_or_else(|| Error::InvalidInput(format!("no stationary point ({j},{l})")))
    };
    let (a, b) = (find(idx1)?, find(idx2)?);
    let r = |p: &StationaryPoint| (p.hess_det / (p.amplitude * p.amplitude)).abs();
    Ok(r(a) / r(b))
}

/// One step of `x ↦ T21 ∘ T11⁻¹ ∘ T21 ∘ T11⁻¹ (x)`, reduced to the lift near `x`.
pub fn u_map(map: &StationaryMap, x: f64) -> Result<f64> {
    let y1 = map.inverse11(x)?;
    let x1 = map.map(2, 1, y1)?;
    let y2 = map.inverse11(x1)?;
    let x2 = map.map(2, 1, y2)?;
    Ok(x2 - TAU * ((x2 - x) / TAU).round())
}

/// Iterates of the composite map from `t0`; requires `ρ' > 0` on `(0, s0)` with
/// `ρ'(0) = ρ'(s0) = 0`. Iteration stops early once an iterate drops below 1e-12.
pub fn u_iteration(q: f64, profile: &RadiusProfile, s0: f64, t0: f64, m_max: usize) -> Result<Vec<f64>> {
    let medium = Medium::new(q, profile.clone())?;
    if !(s0 > 0.0 && s0 < TAU) {
        return Err(Error::InvalidInput(format!("s0 must lie in (0, 2π), got {s0}")));
    }
    if !(t0 > 0.0 && t0 < s0) {
        return Err(Error::InvalidInput(format!("t0 must lie in (0, s0), got {t0}")));
    }
    let scale = profile.max_radius();
    for (name, t) in [("0", 0.0), ("s0", s0)] {
        let d = profile.eval(t).d1;
        if d.abs() > 1e-9 * scale {
            return Err(Error::Precondition(format!("rho' at {name} is {d}, expected 0")));
        }
    }
    for i in 1..256 {
        let t = s0 * i as f64 / 256.0;
        if profile.eval(t).d1 <= 0.0 {
            return Err(Error::Precondition(format!("rho' is not positive at t = {t}")));
        }
    }
    let map = StationaryMap::new(&medium)?;
    let mut seq = vec![t0];
    let mut x = t0;
    for _ in 0..m_max {
        let next = u_map(&map, x)?;
        if !(next >= -1e-12 && next <= s0 + 1e-12) {
            return Err(Error::Precondition(format!("iterate {next} left [0, s0]")));
        }
        seq.push(next);
        x = next;
        if x < 1e-12 {
            break;
        }
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distinct_counting() {
        assert_eq!(count_distinct(&[1.0, 1.0 + 1e-12, 2.0, -3.0], 1e-9), 3);
        assert_eq!(count_distinct(&[0.0, 0.0, 0.0, 0.0], 1e-9), 1);
    }

    #[test]
    fn circle_ratio_is_nine() {
        let m = Medium::new(0.25, RadiusProfile::circle(1.0).unwrap()).unwrap();
        let g = g_ratio(&m, 0.4, (1, 1), (2, 1)).unwrap();
        assert!((g - 9.0).abs() < 1e-10, "{g}");
        assert_eq!(g_ratio(&m, 0.4, (1, 2), (1, 2)).unwrap(), 1.0);
    }
}
