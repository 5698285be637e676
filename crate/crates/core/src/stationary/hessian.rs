use serde::Serialize;

use super::{l_shift, sign_pow, StationaryPoint};
use crate::error::{Error, Result};
use crate::geometry::{frame_from, BoundaryFrame, RadiusValues};
use crate::medium::Medium;
use crate::numeric::{dot, perp, unit, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HessianInfo {
    pub matrix: [[f64; 2]; 2],
    pub det: f64,
    pub sig: i8,
}

/// Second derivatives of the phase in `(θ, Θ_ξ)`.
pub fn hessian_matrix(q: f64, fr: &BoundaryFrame, eta: Vec2, xi: Vec2) -> [[f64; 2]; 2] {
    let sq = q.sqrt();
    let plus = [sq * eta[0] + xi[0], sq * eta[1] + xi[1]];
    let off = dot(perp(xi), fr.y_prime);
    [[dot(plus, fr.y_dprime), off], [off, -dot(xi, fr.y)]]
}

/// Eigenvalue-sign summary of a symmetric 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Signature {
    pub sig: i8,
    pub lambda_min: f64,
    /// An eigenvalue fell below `1e-10·‖H‖`.
    pub degenerate: bool,
}

pub fn signature(h: [[f64; 2]; 2]) -> Signature {
    let (a, b, d) = (h[0][0], 0.5 * (h[0][1] + h[1][0]), h[1][1]);
    let mean = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let (l1, l2) = (mean + rad, mean - rad);
    let fro = (a * a + 2.0 * b * b + d * d).sqrt();
    let lambda_min = l1.abs().min(l2.abs());
    let degenerate = lambda_min < 1e-10 * fro || fro == 0.0;
    let s = |x: f64| if x > 0.0 { 1 } else { -1 };
    Signature { sig: if degenerate { 0 } else { (s(l1) + s(l2)) as i8 }, lambda_min, degenerate }
}

/// Hessian re-assembled from the boundary frame at `point`.
pub fn hessian_at(medium: &Medium, theta_eta: f64, point: &StationaryPoint) -> Result<HessianInfo> {
    let v = medium.profile.eval(point.theta);
    let fr = frame_from(point.theta, &v);
    let xi = unit(point.theta + l_shift(point.l));
    let m = hessian_matrix(medium.q, &fr, unit(theta_eta), xi);
    let s = signature(m);
    if s.degenerate {
        return Err(Error::DegenerateHessian { j: point.j, l: point.l, theta: point.theta, lambda_min: s.lambda_min });
    }
    Ok(HessianInfo { matrix: m, det: m[0][0] * m[1][1] - m[0][1] * m[1][0], sig: s.sig })
}

/// Determinant from the reduced matrix valid at critical points:
/// `ρ²[(√q cos(θ − Θ_{η_l}) + 1)(1 + ρ_n'² − ρ_n'') − 1]`.
pub fn det_critical_form(q: f64, v: &RadiusValues, theta: f64, theta_eta: f64, l: u8) -> f64 {
    let c = (theta - theta_eta - l_shift(l)).cos();
    let g = 1.0 + v.log_d1 * v.log_d1 - v.log_d2;
    v.rho * v.rho * ((q.sqrt() * c + 1.0) * g - 1.0)
}

/// Star-domain form `s(ϱ − s(1−q)ρ_n''/(1 − sϱ))ρ²` with `s = (−1)^{j−1}`.
pub fn det_star_form(q: f64, v: &RadiusValues, j: u8) -> f64 {
    let s = sign_pow(j);
    let vr = (q - (1.0 - q) * v.log_d1 * v.log_d1).sqrt();
    s * (vr - s * (1.0 - q) * v.log_d2 / (1.0 - s * vr)) * v.rho * v.rho
}

/// Ellipse form `(−1)^{j−1} e√q A ρ² / (1 + e cos θ)`.
pub fn det_ellipse_form(q: f64, e: f64, a_aux: f64, theta: f64, rho: f64, j: u8) -> f64 {
    sign_pow(j) * e * q.sqrt() * a_aux * rho * rho / (1.0 + e * theta.cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RadiusProfile;
    use crate::stationary::assemble_point;

    #[test]
    fn circle_point_example() {
        let c = RadiusProfile::circle(1.0).unwrap();
        let p = assemble_point(0.25, &c, 0.0, 1, 1, 0.0);
        assert!((p.hess[0][0] + 1.5).abs() < 1e-15);
        assert!((p.hess[0][1] - 1.0).abs() < 1e-15);
        assert!((p.hess[1][1] + 1.0).abs() < 1e-15);
        assert!((p.hess_det - 0.5).abs() < 1e-15);
        assert_eq!(p.hess_sig, -2);
        let v = c.eval(0.0);
        assert!((det_star_form(0.25, &v, 1) - 0.5).abs() < 1e-15);
        assert!((det_critical_form(0.25, &v, 0.0, 0.0, 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn signature_flags_degenerate() {
        assert!(signature([[1.0, 0.0], [0.0, 1e-12]]).degenerate);
        let saddle = signature([[1.0, 0.0], [0.0, -1.0]]);
        assert!(!saddle.degenerate);
        assert_eq!(saddle.sig, 0);
        assert_eq!(signature([[2.0, 1.0], [1.0, 2.0]]).sig, 2);
    }
}
