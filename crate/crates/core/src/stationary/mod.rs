//! Stationary points of the boundary phase `ψ(θ, Θ_ξ) = (√q η + ξ)·y(θ)`.
//!
//! Points are labelled `(j, l)`: `l` selects `ξ = (−1)^{l−1}θ⃗` (so `Θ_ξ = θ`
//! or `θ + π`), and `j = 1` is the root near the probe direction
//! `Θ_η + (l−1)π` while `j = 2` is the one near its antipode.

mod diagnostics;
mod ellipse;
mod hessian;
mod spatial;
mod star;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{frame_from, RadiusProfile};
use crate::medium::Medium;
use crate::numeric::{dot, perp, unit};

pub use diagnostics::{count_distinct_weights, g_ratio, u_iteration, u_map, weight_f};
pub use ellipse::{
    ellipse_angle, ellipse_aux, ellipse_residual, ellipse_stationary_points, ellipse_theta_range, EllipseAux,
    RangeKind, ThetaRange,
};
pub use hessian::{
    det_critical_form, det_ellipse_form, det_star_form, hessian_at, hessian_matrix, signature, HessianInfo, Signature,
};
pub use spatial::{stationary3d, Spatial3d, SpatialPoint};
pub use star::{s_inverse, s_prime, star_stationary_points, MonotonicityDefect, StationaryMap};

/// The four `(j, l)` labels in the order used throughout the crate.
pub const INDICES: [(u8, u8); 4] = [(1, 1), (1, 2), (2, 1), (2, 2)];

/// One critical point of the phase for a fixed probe direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryPoint {
    pub j: u8,
    pub l: u8,
    /// Boundary angle; a continuous lift, not reduced mod 2π.
    pub theta: f64,
    /// Direction angle of `ξ`, equal to `theta + (l−1)π`.
    pub theta_xi: f64,
    pub psi_value: f64,
    pub amplitude: f64,
    pub hess: [[f64; 2]; 2],
    pub hess_det: f64,
    /// `−2`, `0` or `2`.
    pub hess_sig: i8,
    /// Smallest eigenvalue modulus below `1e-10·‖H‖`.
    pub degenerate: bool,
    pub weight: f64,
}

/// Points for one probe direction, in `INDICES` order (degenerate pairs omitted).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationarySet {
    pub points: Vec<StationaryPoint>,
    pub degenerate: bool,
}

impl StationarySet {
    pub fn get(&self, j: u8, l: u8) -> Option<&StationaryPoint> {
        self.points.iter().find(|p| p.j == j && p.l == l)
    }
}

pub(crate) fn sign_pow(k: u8) -> f64 {
    if k % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Offset `(l−1)π` of the rotated probe direction.
pub(crate) fn l_shift(l: u8) -> f64 {
    if l == 2 {
        PI
    } else {
        0.0
    }
}

pub(crate) fn assemble_point(
    q: f64,
    profile: &RadiusProfile,
    theta_eta: f64,
    j: u8,
    l: u8,
    theta: f64,
) -> StationaryPoint {
    let v = profile.eval(theta);
    let fr = frame_from(theta, &v);
    let sq = q.sqrt();
    let eta = unit(theta_eta);
    let theta_xi = theta + l_shift(l);
    let xi = unit(theta_xi);
    let plus = [sq * eta[0] + xi[0], sq * eta[1] + xi[1]];
    let minus = [sq * eta[0] - xi[0], sq * eta[1] - xi[1]];
    let hess = hessian_matrix(q, &fr, eta, xi);
    let sig = signature(hess);
    StationaryPoint {
        j,
        l,
        theta,
        theta_xi,
        psi_value: dot(plus, fr.y),
        amplitude: -dot(minus, fr.y_prime_perp),
        hess,
        hess_det: hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0],
        hess_sig: sig.sig,
        degenerate: sig.degenerate,
        weight: dot(perp(eta), fr.y),
    }
}

/// Critical points through whichever pathway fits the medium: closed form for
/// focal ellipses, bracketed roots otherwise.
#[derive(Debug, Clone)]
pub enum PointSolver {
    Ellipse(Medium),
    Star(StationaryMap),
}

impl PointSolver {
    pub fn new(medium: &Medium) -> Result<Self> {
        if medium.profile.as_ellipse().is_some() {
            Ok(PointSolver::Ellipse(medium.clone()))
        } else {
            Ok(PointSolver::Star(StationaryMap::new(medium)?))
        }
    }

    pub fn medium(&self) -> &Medium {
        match self {
            PointSolver::Ellipse(m) => m,
            PointSolver::Star(map) => map.medium(),
        }
    }

    pub fn points(&self, theta_eta: f64) -> Result<StationarySet> {
        match self {
            PointSolver::Ellipse(m) => ellipse_stationary_points(m, theta_eta),
            PointSolver::Star(map) => Ok(StationarySet { points: map.points(theta_eta)?, degenerate: false }),
        }
    }

    /// Like `points` but fails on any degenerate pair or Hessian.
    pub fn nondegenerate_points(&self, theta_eta: f64) -> Result<Vec<StationaryPoint>> {
        let set = self.points(theta_eta)?;
        if set.degenerate {
            return Err(Error::DegenerateSet(format!(
                "q = e^2 with the rotated probe direction at angle 0 (theta_eta = {theta_eta})"
            )));
        }
        for p in &set.points {
            if p.degenerate {
                let lambda_min = signature(p.hess).lambda_min;
                return Err(Error::DegenerateHessian { j: p.j, l: p.l, theta: p.theta, lambda_min });
            }
        }
        Ok(set.points)
    }
}
