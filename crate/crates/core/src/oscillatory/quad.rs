use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::density::{AngularFn, Density};
use crate::error::{ensure_finite, Error, Result};
use crate::geometry::{frame_from, BoundaryFrame};
use crate::medium::Medium;
use crate::numeric::{dot, norm, unit, Vec2, TAU};

/// Node count override for the periodic trapezoid rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes_per_dim: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub nodes: usize,
    /// Auto-size threshold for this `k`.
    pub threshold: usize,
}

impl QuadResult {
    pub fn under_resolved(&self) -> bool {
        self.nodes < self.threshold
    }
}

/// `max(256, ⌈8k(1+√q)·max|y'|⌉)`; `max|y'| ≥ max ρ`.
pub fn auto_nodes(medium: &Medium, k: f64) -> usize {
    let bound = 8.0 * k.abs() * (1.0 + medium.sqrt_q()) * medium.profile.max_speed();
    256usize.max(bound.ceil() as usize)
}

fn node_count(medium: &Medium, k: f64, spec: QuadratureSpec) -> (usize, usize) {
    let threshold = auto_nodes(medium, k);
    (spec.nodes_per_dim.unwrap_or(threshold), threshold)
}

fn boundary_nodes(medium: &Medium, n: usize) -> Vec<BoundaryFrame> {
    (0..n)
        .map(|i| {
            let t = TAU * i as f64 / n as f64;
            frame_from(t, &medium.profile.eval(t))
        })
        .collect()
}

fn direction_nodes(density: &Density, n: usize) -> (Vec<Vec2>, Vec<Complex64>) {
    (0..n)
        .map(|m| {
            let t = TAU * m as f64 / n as f64;
            (unit(t), density.eval(t))
        })
        .unzip()
}

/// Herglotz wave `∫ φ(ξ) e^{ikξ·x} dΘ_ξ` and its gradient.
pub fn herglotz_with_gradient(density: &Density, k: f64, x: Vec2) -> (Complex64, [Complex64; 2]) {
    let r = norm(x);
    let n = 128usize.max((4.0 * k.abs() * r).ceil() as usize + 4 * density.bandwidth() + 64);
    let w = TAU / n as f64;
    let mut v = Complex64::new(0.0, 0.0);
    let mut g = [Complex64::new(0.0, 0.0); 2];
    for m in 0..n {
        let t = TAU * m as f64 / n as f64;
        let xi = unit(t);
        let term = density.eval(t) * Complex64::cis(k * dot(xi, x));
        v += term;
        g[0] += term * xi[0];
        g[1] += term * xi[1];
    }
    let ik = Complex64::new(0.0, k);
    (v * w, [g[0] * ik * w, g[1] * ik * w])
}

pub fn herglotz_eval(density: &Density, k: f64, x: Vec2) -> Result<Complex64> {
    if k.is_nan() || k < 0.0 {
        return Err(Error::InvalidInput(format!("wavenumber must be non-negative, got {k}")));
    }
    Ok(herglotz_with_gradient(density, k, x).0)
}

/// Trapezoid sum of `Ψ φ e^{±ikψ}` over `[0, 2π)²`, evaluated cell by cell.
pub fn quad_i_phase(
    medium: &Medium,
    density: &Density,
    k: f64,
    theta_eta: f64,
    spec: QuadratureSpec,
    phase_sign: f64,
) -> Result<QuadResult> {
    ensure_finite("theta_eta", theta_eta)?;
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::InvalidInput(format!("wavenumber must be non-negative, got {k}")));
    }
    let (n, threshold) = node_count(medium, k, spec);
    let sq = medium.sqrt_q();
    let eta = unit(theta_eta);
    let se = [sq * eta[0], sq * eta[1]];
    let frames = boundary_nodes(medium, n);
    let (xis, phis) = direction_nodes(density, n);
    let rows: Vec<Complex64> = frames
        .par_iter()
        .map(|fr| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (xi, phi) in xis.iter().zip(&phis) {
                let psi = dot([se[0] + xi[0], se[1] + xi[1]], fr.y);
                let amp = -dot([se[0] - xi[0], se[1] - xi[1]], fr.y_prime_perp);
                acc += phi * amp * Complex64::cis(phase_sign * k * psi);
            }
            acc
        })
        .collect();
    let w = (TAU / n as f64).powi(2);
    Ok(QuadResult { value: rows.iter().sum::<Complex64>() * w, nodes: n, threshold })
}

/// `ℐ_k(Θ_η)` by the two-dimensional periodic trapezoid rule.
pub fn quad_i(medium: &Medium, density: &Density, k: f64, theta_eta: f64, spec: QuadratureSpec) -> Result<QuadResult> {
    quad_i_phase(medium, density, k, theta_eta, spec, 1.0)
}

/// The same trapezoid sum with the direction integral done once per boundary
/// node, so that many probe directions cost `O(n)` each.
#[derive(Debug, Clone)]
pub struct IntegralKernel {
    k: f64,
    sq: f64,
    n: usize,
    threshold: usize,
    rows: Vec<(Vec2, Vec2, Complex64, [Complex64; 2])>,
}

impl IntegralKernel {
    pub fn new(medium: &Medium, density: &Density, k: f64, spec: QuadratureSpec) -> Result<Self> {
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::InvalidInput(format!("wavenumber must be non-negative, got {k}")));
        }
        let (n, threshold) = node_count(medium, k, spec);
        let frames = boundary_nodes(medium, n);
        let (xis, phis) = direction_nodes(density, n);
        let rows = frames
            .par_iter()
            .map(|fr| {
                let mut h = Complex64::new(0.0, 0.0);
                let mut g = [Complex64::new(0.0, 0.0); 2];
                for (xi, phi) in xis.iter().zip(&phis) {
                    let t = phi * Complex64::cis(k * dot(*xi, fr.y));
                    h += t;
                    g[0] += t * xi[0];
                    g[1] += t * xi[1];
                }
                (fr.y, fr.y_prime_perp, h, g)
            })
            .collect();
        Ok(IntegralKernel { k, sq: medium.sqrt_q(), n, threshold, rows })
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn value(&self, theta_eta: f64) -> QuadResult {
        let eta = unit(theta_eta);
        let se = [self.sq * eta[0], self.sq * eta[1]];
        let mut acc = Complex64::new(0.0, 0.0);
        for (y, yp, h, g) in &self.rows {
            let a = -dot(se, *yp);
            let inner = h * a + g[0] * yp[0] + g[1] * yp[1];
            acc += inner * Complex64::cis(self.k * dot(se, *y));
        }
        let w = (TAU / self.n as f64).powi(2);
        QuadResult { value: acc * w, nodes: self.n, threshold: self.threshold }
    }
}

/// Smallest uniform probe grid accepted by `quad_i_derivs`.
pub fn required_eta_grid(medium: &Medium, k: f64, n_max: usize) -> usize {
    (4.0 * (k * medium.profile.max_radius() * medium.sqrt_q() + n_max as f64)).ceil() as usize
}

/// `ℐ_k^{(N)}` on a uniform probe grid: `values[N][i]` at `Θ_i = 2πi/grid_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivTable {
    pub theta_eta: Vec<f64>,
    pub values: Vec<Vec<Complex64>>,
    pub nodes: usize,
    pub threshold: usize,
}

/// Samples `ℐ_k` on the grid and differentiates spectrally up to `n_max`.
pub fn quad_i_derivs(
    medium: &Medium,
    density: &Density,
    k: f64,
    grid_n: usize,
    n_max: usize,
    spec: QuadratureSpec,
) -> Result<DerivTable> {
    let required = required_eta_grid(medium, k, n_max);
    if grid_n < required.max(2) {
        return Err(Error::GridTooCoarse { got: grid_n, required: required.max(2) });
    }
    let kernel = IntegralKernel::new(medium, density, k, spec)?;
    let theta_eta: Vec<f64> = (0..grid_n).map(|i| TAU * i as f64 / grid_n as f64).collect();
    let base: Vec<Complex64> = theta_eta.par_iter().map(|&t| kernel.value(t).value).collect();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(grid_n);
    let inv = planner.plan_fft_inverse(grid_n);
    let mut spectrum = base.clone();
    fwd.process(&mut spectrum);
    let mut values = vec![base];
    for order in 1..=n_max {
        let mut buf: Vec<Complex64> = spectrum
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                if grid_n.is_multiple_of(2) && 2 * idx == grid_n {
                    return Complex64::new(0.0, 0.0);
                }
                let m = if 2 * idx < grid_n { idx as f64 } else { idx as f64 - grid_n as f64 };
                c * Complex64::new(0.0, m).powu(order as u32)
            })
            .collect();
        inv.process(&mut buf);
        values.push(buf.into_iter().map(|v| v / grid_n as f64).collect());
    }
    Ok(DerivTable { theta_eta, values, nodes: kernel.n, threshold: kernel.threshold })
}

/// `∮ (w ∂_ν H − H ∂_ν w) dσ` with `w = e^{ik√q η·x}`, `H` the Herglotz wave,
/// and `ν dσ = y'⊥ dθ`.
pub fn boundary_identity(
    medium: &Medium,
    density: &Density,
    k: f64,
    theta_eta: f64,
    spec: QuadratureSpec,
) -> Result<QuadResult> {
    ensure_finite("theta_eta", theta_eta)?;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidInput(format!("wavenumber must be positive, got {k}")));
    }
    let (n, threshold) = node_count(medium, k, spec);
    let sq = medium.sqrt_q();
    let eta = unit(theta_eta);
    let frames = boundary_nodes(medium, n);
    let rows: Vec<Complex64> = frames
        .par_iter()
        .map(|fr| {
            let speed = norm(fr.y_prime);
            let nu = [fr.y_prime_perp[0] / speed, fr.y_prime_perp[1] / speed];
            let w = Complex64::cis(k * sq * dot(eta, fr.y));
            let dw = w * Complex64::new(0.0, k * sq * dot(eta, nu));
            let (h, grad) = herglotz_with_gradient(density, k, fr.y);
            let dh = grad[0] * nu[0] + grad[1] * nu[1];
            (w * dh - h * dw) * speed
        })
        .collect();
    Ok(QuadResult { value: rows.iter().sum::<Complex64>() * (TAU / n as f64), nodes: n, threshold })
}

/// `∫ ℐ_k(Θ) g(Θ) dΘ` by a trapezoid rule over `eta_nodes` probe angles
/// (default `max(64, ⌈8(k√q·max ρ + 8)⌉)`).
pub fn triple_quad(
    medium: &Medium,
    density: &Density,
    k: f64,
    testfn: &dyn AngularFn,
    eta_nodes: Option<usize>,
    spec: QuadratureSpec,
) -> Result<QuadResult> {
    let m = eta_nodes.unwrap_or_else(|| {
        64usize.max((8.0 * (k * medium.sqrt_q() * medium.profile.max_radius() + 8.0)).ceil() as usize)
    });
    let kernel = IntegralKernel::new(medium, density, k, spec)?;
    let terms: Vec<Complex64> = (0..m)
        .into_par_iter()
        .map(|i| {
            let t = TAU * i as f64 / m as f64;
            kernel.value(t).value * testfn.at(t)
        })
        .collect();
    Ok(QuadResult {
        value: terms.iter().sum::<Complex64>() * (TAU / m as f64),
        nodes: kernel.n,
        threshold: kernel.threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RadiusProfile;

    #[test]
    fn zero_density_gives_zero() {
        let m = Medium::new(0.5, RadiusProfile::circle(1.0).unwrap()).unwrap();
        let z = Density::zero();
        assert_eq!(quad_i(&m, &z, 5.0, 0.3, QuadratureSpec::default()).unwrap().value, Complex64::new(0.0, 0.0));
        assert_eq!(boundary_identity(&m, &z, 5.0, 0.3, QuadratureSpec::default()).unwrap().value.norm(), 0.0);
    }

    #[test]
    fn herglotz_at_origin() {
        let d = Density::from_coeffs(vec![(0, Complex64::new(0.7, -0.2)), (3, Complex64::new(1.0, 0.0))]);
        let v = herglotz_eval(&d, 3.0, [0.0, 0.0]).unwrap();
        assert!((v - Complex64::new(0.7, -0.2) * TAU).norm() < 1e-13);
    }

    #[test]
    fn kernel_matches_direct_sum() {
        let m = Medium::new(0.4, RadiusProfile::log_fourier(vec![[2.0, 0.03, 0.01]]).unwrap()).unwrap();
        let d = Density::from_coeffs(vec![(1, Complex64::new(1.0, 0.5)), (-2, Complex64::new(0.2, 0.0))]);
        let spec = QuadratureSpec::default();
        let ker = IntegralKernel::new(&m, &d, 7.0, spec).unwrap();
        for t in [0.0, 1.1, 4.5] {
            let a = ker.value(t).value;
            let b = quad_i(&m, &d, 7.0, t, spec).unwrap().value;
            assert!((a - b).norm() < 1e-12 * b.norm().max(1.0));
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let m = Medium::new(0.4, RadiusProfile::ellipse_focus(1.0, 0.3).unwrap()).unwrap();
        let d = Density::from_coeffs(vec![(1, Complex64::new(1.0, 0.5)), (2, Complex64::new(0.0, -0.3))]);
        let spec = QuadratureSpec::default();
        let a = quad_i(&m, &d, 6.0, 0.8, spec).unwrap().value;
        let b = quad_i_phase(&m, &d.conj(), 6.0, 0.8, spec, -1.0).unwrap().value;
        assert!((a.conj() - b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn coarse_probe_grid_is_refused() {
        let m = Medium::new(0.5, RadiusProfile::circle(1.0).unwrap()).unwrap();
        let err = quad_i_derivs(&m, &Density::mode(1), 20.0, 16, 1, QuadratureSpec::default()).unwrap_err();
        assert!(matches!(err, Error::GridTooCoarse { .. }));
    }

    #[test]
    fn under_resolution_is_reported() {
        let m = Medium::new(0.5, RadiusProfile::circle(1.0).unwrap()).unwrap();
        let r = quad_i(&m, &Density::mode(1), 40.0, 0.0, QuadratureSpec { nodes_per_dim: Some(64) }).unwrap();
        assert!(r.under_resolved());
    }
}
