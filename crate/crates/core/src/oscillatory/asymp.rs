use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::Serialize;

use super::density::{AngularFn, Density};
use crate::error::{Error, Result};
use crate::medium::Medium;
use crate::stationary::{stationary3d, PointSolver, Spatial3d};

/// Contribution of one stationary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsympTerm {
    pub j: u8,
    pub l: u8,
    pub theta_xi: f64,
    /// `φ(Θ_ξ) Ψ e^{iπσ/4 + ikψ} / |det|^{1/2}`.
    pub z: Complex64,
    /// Unit-modulus phase `e^{iπσ/4 + ikψ}`.
    pub omega: Complex64,
    pub weight: f64,
    /// `|Ψ| / |det|^{1/2}`, so that `|z| = |φ(Θ_ξ)|·scale`.
    pub scale: f64,
    /// `(2π/k)(ik√q)^N z f^N`.
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Asymptotic {
    pub value: Complex64,
    pub terms: Vec<AsympTerm>,
}

/// Leading-order stationary-phase value of `ℐ_k^{(N)}(Θ_η)`.
pub fn asymp_i(medium: &Medium, density: &Density, k: f64, theta_eta: f64, order: u32) -> Result<Asymptotic> {
    asymp_i_with(&PointSolver::new(medium)?, density, k, theta_eta, order)
}

/// As `asymp_i`, reusing a prepared solver across many directions.
pub fn asymp_i_with(solver: &PointSolver, density: &Density, k: f64, theta_eta: f64, order: u32) -> Result<Asymptotic> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidInput(format!("wavenumber must be positive, got {k}")));
    }
    let points = solver.nondegenerate_points(theta_eta)?;
    let sq = solver.medium().sqrt_q();
    let pre = Complex64::new(0.0, k * sq).powu(order) * (2.0 * PI / k);
    let terms: Vec<AsympTerm> = points
        .iter()
        .map(|p| {
            let omega = Complex64::cis(FRAC_PI_4 * p.hess_sig as f64 + k * p.psi_value);
            let z = density.eval(p.theta_xi) * omega * (p.amplitude / p.hess_det.abs().sqrt());
            AsympTerm {
                j: p.j,
                l: p.l,
                theta_xi: p.theta_xi,
                z,
                omega,
                weight: p.weight,
                scale: p.amplitude.abs() / p.hess_det.abs().sqrt(),
                value: pre * z * p.weight.powi(order as i32),
            }
        })
        .collect();
    Ok(Asymptotic { value: terms.iter().map(|t| t.value).sum(), terms })
}

/// Leading-order value of `∫ ℐ_k(Θ) g(Θ) dΘ` from the critical points of the
/// phase in all three angles.
pub fn asymp_triple(medium: &Medium, density: &Density, k: f64, testfn: &dyn AngularFn) -> Result<Complex64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidInput(format!("wavenumber must be positive, got {k}")));
    }
    let points = match stationary3d(medium)? {
        Spatial3d::DegenerateFamily => {
            return Err(Error::DegenerateSet("constant radius: every angle is critical".into()))
        }
        Spatial3d::Points(p) => p,
    };
    let scale = (2.0 * PI / k).powf(1.5);
    let mut acc = Complex64::new(0.0, 0.0);
    for p in &points {
        let g = testfn.at(p.theta_eta());
        if g == Complex64::new(0.0, 0.0) {
            continue;
        }
        if p.degenerate {
            return Err(Error::DegenerateHessian { j: 0, l: 0, theta: p.theta, lambda_min: 0.0 });
        }
        let omega = Complex64::cis(FRAC_PI_4 * p.sig as f64 + k * p.psi_value);
        acc += density.eval(p.theta_xi()) * g * omega * (p.amplitude / p.det3.abs().sqrt());
    }
    Ok(acc * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RadiusProfile;

    #[test]
    fn zero_density() {
        let m = Medium::new(0.36, RadiusProfile::ellipse_focus(1.0, 0.5).unwrap()).unwrap();
        let a = asymp_i(&m, &Density::zero(), 40.0, 1.0, 2).unwrap();
        assert_eq!(a.value, Complex64::new(0.0, 0.0));
        assert_eq!(a.terms.len(), 4);
    }

    #[test]
    fn degenerate_direction_fails() {
        let m = Medium::new(0.25, RadiusProfile::ellipse_focus(1.0, 0.5).unwrap()).unwrap();
        assert!(asymp_i(&m, &Density::mode(1), 40.0, 0.0, 0).is_err());
    }
}
