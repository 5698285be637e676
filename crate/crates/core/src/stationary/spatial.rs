//! Stationary points of the phase in all three angles `(θ, Θ_ξ, Θ_η)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{frame_from, RadiusProfile};
use crate::medium::Medium;
use crate::numeric::{bisect_newton, dot, linspace_periodic, perp, unit, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpatialPoint {
    pub theta: f64,
    pub xi_sign: i8,
    pub eta_sign: i8,
    pub psi_value: f64,
    pub amplitude: f64,
    pub hess: [[f64; 3]; 3],
    /// Determinant of `hess`.
    pub det3: f64,
    /// `(−1)^{j−1}√q(1 + (−1)^{j−l}√q) ρ_n'' ρ³` with `j`, `l` read off the signs.
    pub det3_reduced: f64,
    pub sig: i8,
    pub degenerate: bool,
}

impl SpatialPoint {
    pub fn theta_xi(&self) -> f64 {
        self.theta + if self.xi_sign < 0 { PI } else { 0.0 }
    }

    pub fn theta_eta(&self) -> f64 {
        self.theta + if self.eta_sign < 0 { PI } else { 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "points", rename_all = "snake_case")]
pub enum Spatial3d {
    /// `ρ' ≡ 0`: every angle is critical.
    DegenerateFamily,
    Points(Vec<SpatialPoint>),
}

fn critical_angles(profile: &RadiusProfile, grid_n: usize) -> Vec<f64> {
    let f = |t: f64| profile.eval(t).log_d1;
    let df = |t: f64| profile.eval(t).log_d2;
    let h = TAU / grid_n as f64;
    let mut roots = Vec::new();
    let grid: Vec<f64> = linspace_periodic(grid_n).collect();
    let tiny = 1e-14;
    for &t in &grid {
        let a = f(t);
        let b = f(t + h);
        if a.abs() <= tiny {
            roots.push(t);
        } else if b.abs() > tiny && a.signum() != b.signum() {
            if let Ok(r) = bisect_newton(f, df, t, t + h, "scanning rho'") {
                roots.push(r.rem_euclid(TAU));
            }
        }
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    roots
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inertia of a symmetric 3×3 matrix via leading principal minors with a
/// fallback to eigenvalues from the characteristic cubic.
fn signature3(m: &[[f64; 3]; 3]) -> (i8, bool) {
    let p1 = m[0][1].powi(2) + m[0][2].powi(2) + m[1][2].powi(2);
    let tr = m[0][0] + m[1][1] + m[2][2];
    let qm = tr / 3.0;
    let p2 = (m[0][0] - qm).powi(2) + (m[1][1] - qm).powi(2) + (m[2][2] - qm).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let fro = (m.iter().flatten().map(|x| x * x).sum::<f64>()).sqrt();
    let eig = if p == 0.0 {
        [qm, qm, qm]
    } else {
        let mut b = [[0.0; 3]; 3];
        for i in 0..3 {
            for k in 0..3 {
                b[i][k] = (m[i][k] - if i == k { qm } else { 0.0 }) / p;
            }
        }
        let r = (det3(&b) / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let e1 = qm + 2.0 * p * phi.cos();
        let e3 = qm + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
        [e1, 3.0 * qm - e1 - e3, e3]
    };
    let degenerate = eig.iter().any(|e| e.abs() < 1e-10 * fro);
    let sig = eig.iter().map(|&e| if e > 0.0 { 1 } else { -1 }).sum::<i32>() as i8;
    (if degenerate { 0 } else { sig }, degenerate)
}

/// Critical angles `ρ'(θ) = 0` paired with `ξ = ±θ⃗`, `η = ±θ⃗`.
pub fn stationary3d(medium: &Medium) -> Result<Spatial3d> {
    let profile = &medium.profile;
    let q = medium.q;
    let sq = q.sqrt();
    let slope = (0..1024).map(|i| profile.eval(TAU * i as f64 / 1024.0).log_d1.abs()).fold(0.0, f64::max);
    if profile.is_trivially_constant() || slope < 1e-13 {
        return Ok(Spatial3d::DegenerateFamily);
    }
    let mut out = Vec::new();
    for theta in critical_angles(profile, 4096) {
        let v = profile.eval(theta);
        let fr = frame_from(theta, &v);
        for eta_sign in [1i8, -1] {
            for xi_sign in [1i8, -1] {
                let th = unit(theta);
                let xi = [xi_sign as f64 * th[0], xi_sign as f64 * th[1]];
                let eta = [eta_sign as f64 * th[0], eta_sign as f64 * th[1]];
                let plus = [sq * eta[0] + xi[0], sq * eta[1] + xi[1]];
                let minus = [sq * eta[0] - xi[0], sq * eta[1] - xi[1]];
                let a = dot(perp(xi), fr.y_prime);
                let b = sq * dot(perp(eta), fr.y_prime);
                let hess = [[dot(plus, fr.y_dprime), a, b], [a, -dot(xi, fr.y), 0.0], [b, 0.0, -sq * dot(eta, fr.y)]];
                let s_jl = (xi_sign * eta_sign) as f64;
                let det3_reduced = eta_sign as f64 * sq * (1.0 + s_jl * sq) * v.log_d2 * v.rho.powi(3);
                let (sig, degenerate) = signature3(&hess);
                out.push(SpatialPoint {
                    theta,
                    xi_sign,
                    eta_sign,
                    psi_value: dot(plus, fr.y),
                    amplitude: -dot(minus, fr.y_prime_perp),
                    hess,
                    det3: det3(&hess),
                    det3_reduced,
                    sig,
                    degenerate: degenerate || v.d2.abs() < 1e-10 * v.rho,
                });
            }
        }
    }
    Ok(Spatial3d::Points(out))
}
