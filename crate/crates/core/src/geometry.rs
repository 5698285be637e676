//! Radius functions of star-shaped boundaries and the boundary frame.
//!
//! The boundary is `y(θ) = ρ(θ)(cos θ, sin θ)` with `ρ > 0` and 2π-periodic.
//! Log-derivatives refer to `ρ_n = ln ρ`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::numeric::{dot, norm, perp, unit, Vec2, TAU};

/// Serialized description of a radius function, as it appears in job configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProfileSpec {
    /// Ellipse with one focus at the origin; `a` is the semi-major axis.
    EllipseFocus { a: f64, e: f64 },
    /// `ln ρ(θ) = Re Σ (re + i·im) e^{inθ}` over the listed `[n, re, im]` triples.
    LogFourier { coeffs: Vec<[f64; 3]> },
    /// Uniform samples of `ρ` on `[0, 2π)`, trigonometrically interpolated.
    Tabulated { samples: Vec<f64> },
}

/// `Σ a cos(kθ) + b sin(kθ)` with value and first two derivatives.
#[derive(Debug, Clone, PartialEq)]
struct TrigSeries {
    terms: Vec<(f64, f64, f64)>,
}

impl TrigSeries {
    fn eval(&self, t: f64) -> (f64, f64, f64) {
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for &(k, a, b) in &self.terms {
            let (s, c) = (k * t).sin_cos();
            v += a * c + b * s;
            d1 += k * (b * c - a * s);
            d2 -= k * k * (a * c + b * s);
        }
        (v, d1, d2)
    }

    fn is_constant(&self) -> bool {
        self.terms.iter().all(|&(k, a, b)| k == 0.0 || (a == 0.0 && b == 0.0))
    }

    fn from_samples(samples: &[f64]) -> TrigSeries {
        let m = samples.len();
        let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let scale = 1.0 / m as f64;
        let mut terms = vec![(0.0, buf[0].re * scale, 0.0)];
        let half = m / 2;
        for (k, x) in buf.iter().enumerate().take(half + 1).skip(1) {
            if m.is_multiple_of(2) && k == half {
                terms.push((k as f64, x.re * scale, 0.0));
            } else {
                terms.push((k as f64, 2.0 * x.re * scale, -2.0 * x.im * scale));
            }
        }
        TrigSeries { terms }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Ellipse {
        a: f64,
        e: f64,
    },
    /// Series for `ln ρ`.
    LogSeries(TrigSeries),
    /// Series for `ρ` itself.
    Samples(TrigSeries),
}

/// A validated radius function with exact derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileSpec", into = "ProfileSpec")]
pub struct RadiusProfile {
    spec: ProfileSpec,
    repr: Repr,
}

/// `ρ`, its derivatives, and the derivatives of `ln ρ` at one angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusValues {
    pub rho: f64,
    pub d1: f64,
    pub d2: f64,
    pub log_d1: f64,
    pub log_d2: f64,
}

/// Boundary point and its derivatives with respect to the polar angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFrame {
    pub y: Vec2,
    pub y_prime: Vec2,
    pub y_dprime: Vec2,
    /// Quarter turn of `y_prime`, equal to `-(θ⃗ - ρ_n' θ⃗⊥)ρ`.
    pub y_prime_perp: Vec2,
}

impl TryFrom<ProfileSpec> for RadiusProfile {
    type Error = Error;

    fn try_from(spec: ProfileSpec) -> Result<Self> {
        let repr = match &spec {
            ProfileSpec::EllipseFocus { a, e } => {
                if !(a.is_finite() && *a > 0.0) {
                    return Err(Error::InvalidInput(format!("ellipse a must be positive, got {a}")));
                }
                if !(e.is_finite() && *e > 0.0 && *e < 1.0) {
                    return Err(Error::InvalidInput(format!("ellipse e must lie in (0,1), got {e}")));
                }
                Repr::Ellipse { a: *a, e: *e }
            }
            ProfileSpec::LogFourier { coeffs } => {
                let mut terms = Vec::with_capacity(coeffs.len());
                for &[n, re, im] in coeffs {
                    if !(n.is_finite() && n.fract() == 0.0 && re.is_finite() && im.is_finite()) {
                        return Err(Error::InvalidInput(format!(
                            "log_fourier entry [{n}, {re}, {im}] must be an integer index with finite parts"
                        )));
                    }
                    if n == 0.0 {
                        terms.push((0.0, re, 0.0));
                    } else {
                        terms.push((n, re, -im));
                    }
                }
                Repr::LogSeries(TrigSeries { terms })
            }
            ProfileSpec::Tabulated { samples } => {
                if samples.len() < 4 {
                    return Err(Error::InvalidInput("tabulated profile needs at least 4 samples".into()));
                }
                if samples.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
                    return Err(Error::InvalidInput("tabulated samples must be finite and positive".into()));
                }
                let series = TrigSeries::from_samples(samples);
                let check_n = 8 * samples.len();
                for i in 0..check_n {
                    let t = TAU * (i as f64 + 0.5) / check_n as f64;
                    if series.eval(t).0 <= 0.0 {
                        return Err(Error::InvalidInput(format!(
                            "trigonometric interpolant of the samples is not positive near t = {t}"
                        )));
                    }
                }
                Repr::Samples(series)
            }
        };
        Ok(RadiusProfile { spec, repr })
    }
}

impl From<RadiusProfile> for ProfileSpec {
    fn from(p: RadiusProfile) -> Self {
        p.spec
    }
}

impl RadiusProfile {
    pub fn ellipse_focus(a: f64, e: f64) -> Result<Self> {
        ProfileSpec::EllipseFocus { a, e }.try_into()
    }

    pub fn log_fourier(coeffs: Vec<[f64; 3]>) -> Result<Self> {
        ProfileSpec::LogFourier { coeffs }.try_into()
    }

    pub fn tabulated(samples: Vec<f64>) -> Result<Self> {
        ProfileSpec::Tabulated { samples }.try_into()
    }

    /// Disk of radius `a` centred at the origin.
    pub fn circle(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidInput(format!("circle radius must be positive, got {a}")));
        }
        Self::log_fourier(vec![[0.0, a.ln(), 0.0]])
    }

    pub fn spec(&self) -> &ProfileSpec {
        &self.spec
    }

    /// `(a, e)` for focal ellipses.
    pub fn as_ellipse(&self) -> Option<(f64, f64)> {
        match self.repr {
            Repr::Ellipse { a, e } => Some((a, e)),
            _ => None,
        }
    }

    /// True when the representation is constant by construction.
    pub fn is_trivially_constant(&self) -> bool {
        match &self.repr {
            Repr::Ellipse { .. } => false,
            Repr::LogSeries(s) | Repr::Samples(s) => s.is_constant(),
        }
    }

    pub fn eval(&self, t: f64) -> RadiusValues {
        match &self.repr {
            Repr::Ellipse { a, e } => {
                let (s, c) = t.sin_cos();
                let den = 1.0 + e * c;
                let rho = a * (1.0 - e * e) / den;
                let log_d1 = e * s / den;
                let log_d2 = e * (e + c) / (den * den);
                RadiusValues { rho, d1: rho * log_d1, d2: rho * (log_d2 + log_d1 * log_d1), log_d1, log_d2 }
            }
            Repr::LogSeries(series) => {
                let (v, l1, l2) = series.eval(t);
                let rho = v.exp();
                RadiusValues { rho, d1: rho * l1, d2: rho * (l2 + l1 * l1), log_d1: l1, log_d2: l2 }
            }
            Repr::Samples(series) => {
                let (rho, d1, d2) = series.eval(t);
                let l1 = d1 / rho;
                RadiusValues { rho, d1, d2, log_d1: l1, log_d2: d2 / rho - l1 * l1 }
            }
        }
    }

    /// `max ρ` sampled on a fine grid.
    pub fn max_radius(&self) -> f64 {
        self.sample_max(|v| v.rho)
    }

    /// `max |y'| = max ρ·sqrt(1 + ρ_n'^2)` sampled on a fine grid.
    pub fn max_speed(&self) -> f64 {
        self.sample_max(|v| v.rho * (1.0 + v.log_d1 * v.log_d1).sqrt())
    }

    fn sample_max<F: Fn(&RadiusValues) -> f64>(&self, f: F) -> f64 {
        let n = 2048;
        (0..n).map(|i| f(&self.eval(TAU * i as f64 / n as f64))).fold(0.0, f64::max)
    }
}

/// `(ρ, ρ', ρ'', ρ_n', ρ_n'')` at angle `t`.
pub fn radius_eval(profile: &RadiusProfile, t: f64) -> Result<RadiusValues> {
    ensure_finite("angle", t)?;
    Ok(profile.eval(t))
}

pub(crate) fn frame_from(t: f64, v: &RadiusValues) -> BoundaryFrame {
    let th = unit(t);
    let thp = perp(th);
    let (rho, r1, r2) = (v.rho, v.log_d1, v.log_d2);
    let y = [rho * th[0], rho * th[1]];
    let y_prime = [(r1 * th[0] + thp[0]) * rho, (r1 * th[1] + thp[1]) * rho];
    let a = 1.0 - r1 * r1 - r2;
    let y_dprime = [-(a * th[0] - 2.0 * r1 * thp[0]) * rho, -(a * th[1] - 2.0 * r1 * thp[1]) * rho];
    let y_prime_perp = [-(th[0] - r1 * thp[0]) * rho, -(th[1] - r1 * thp[1]) * rho];
    BoundaryFrame { y, y_prime, y_dprime, y_prime_perp }
}

pub fn boundary_frame(profile: &RadiusProfile, t: f64) -> Result<BoundaryFrame> {
    let v = radius_eval(profile, t)?;
    Ok(frame_from(t, &v))
}

impl BoundaryFrame {
    pub fn speed(&self) -> f64 {
        norm(self.y_prime)
    }

    /// `y' · y'⊥`, zero up to rounding.
    pub fn orthogonality_defect(&self) -> f64 {
        dot(self.y_prime, self.y_prime_perp)
    }
}

/// `sqrt(q - (1-q)ρ_n'(t)^2)`.
pub fn varrho(q: f64, profile: &RadiusProfile, t: f64) -> Result<f64> {
    let v = radius_eval(profile, t)?;
    varrho_from(q, v.log_d1, t)
}

pub(crate) fn varrho_from(q: f64, log_d1: f64, t: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidInput(format!("varrho needs q in (0,1), got {q}")));
    }
    let radicand = q - (1.0 - q) * log_d1 * log_d1;
    if radicand < 0.0 {
        return Err(Error::InadmissibleSlope { t, radicand });
    }
    Ok(radicand.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ellipse_values_at_apses() {
        let p = RadiusProfile::ellipse_focus(1.0, 0.5).unwrap();
        let v = p.eval(0.0);
        assert!((v.rho - 0.5).abs() < 1e-15);
        assert!(v.log_d1.abs() < 1e-15);
        assert!((v.log_d2 - 1.0 / 3.0).abs() < 1e-15);
        let v = p.eval(PI);
        assert!((v.rho - 1.5).abs() < 1e-14);
        assert!(v.log_d1.abs() < 1e-15);
        assert!((v.log_d2 + 1.0).abs() < 1e-13);
    }

    #[test]
    fn log_fourier_sine_peak() {
        let p = RadiusProfile::log_fourier(vec![[2.0, 0.0, -0.05]]).unwrap();
        let v = p.eval(PI / 4.0);
        assert!((v.rho - 0.05f64.exp()).abs() < 1e-15);
        assert!(v.log_d1.abs() < 1e-15);
        assert!((v.log_d2 + 0.2).abs() < 1e-15);
    }

    #[test]
    fn circle_frame() {
        let p = RadiusProfile::circle(1.0).unwrap();
        let f = boundary_frame(&p, 0.0).unwrap();
        assert_eq!(f.y, [1.0, 0.0]);
        assert!((f.y_prime[0]).abs() < 1e-15 && (f.y_prime[1] - 1.0).abs() < 1e-15);
        assert!((f.y_dprime[0] + 1.0).abs() < 1e-15 && f.y_dprime[1].abs() < 1e-15);
        assert!((f.y_prime_perp[0] + 1.0).abs() < 1e-15 && f.y_prime_perp[1].abs() < 1e-15);
    }

    #[test]
    fn ellipse_frame_at_periapsis() {
        let p = RadiusProfile::ellipse_focus(1.0, 0.5).unwrap();
        let f = boundary_frame(&p, 0.0).unwrap();
        assert!((f.y[0] - 0.5).abs() < 1e-15);
        assert!((f.y_prime[1] - 0.5).abs() < 1e-15 && f.y_prime[0].abs() < 1e-15);
        assert!((f.y_prime_perp[0] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn tabulated_reproduces_samples() {
        let n = 32;
        let samples: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * (3.0 * TAU * i as f64 / n as f64).cos()).collect();
        let p = RadiusProfile::tabulated(samples.clone()).unwrap();
        for (i, s) in samples.iter().enumerate() {
            assert!((p.eval(TAU * i as f64 / n as f64).rho - s).abs() < 1e-13);
        }
        let v = p.eval(0.3);
        assert!((v.d1 + 0.3 * (0.9f64).sin()).abs() < 1e-12);
    }

    #[test]
    fn varrho_limits() {
        let c = RadiusProfile::circle(1.0).unwrap();
        assert!((varrho(0.25, &c, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(varrho_from(0.5, 1.0, 0.0).unwrap(), 0.0);
        assert!(matches!(varrho_from(0.5, 1.1, 0.0), Err(Error::InadmissibleSlope { .. })));
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(RadiusProfile::ellipse_focus(1.0, 1.0).is_err());
        assert!(RadiusProfile::tabulated(vec![1.0, -1.0, 1.0, 1.0]).is_err());
        assert!(RadiusProfile::log_fourier(vec![[0.5, 1.0, 0.0]]).is_err());
        assert!(radius_eval(&RadiusProfile::circle(1.0).unwrap(), f64::NAN).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let json = r#"{"type":"ellipse_focus","a":1.0,"e":0.5}"#;
        let p: RadiusProfile = serde_json::from_str(json).unwrap();
        assert_eq!(p.as_ellipse(), Some((1.0, 0.5)));
        let back = serde_json::to_string(&p).unwrap();
        assert_eq!(back, json);
    }
}
