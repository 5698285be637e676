use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything that can be sampled on the circle.
pub trait AngularFn: Sync {
    fn at(&self, t: f64) -> Complex64;
}

impl<F: Fn(f64) -> Complex64 + Sync> AngularFn for F {
    fn at(&self, t: f64) -> Complex64 {
        self(t)
    }
}

/// Config form: `coeffs` as `[n, re, im]` triples for `c_n e^{inΘ}`, or
/// `samples` as `[re, im]` pairs on a uniform grid of `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coeffs: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 2]>>,
}

/// Herglotz density `φ(Θ) = Σ c_n e^{inΘ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensitySpec", into = "DensitySpec")]
pub struct Density {
    coeffs: Vec<(i64, Complex64)>,
}

impl TryFrom<DensitySpec> for Density {
    type Error = Error;

    fn try_from(spec: DensitySpec) -> Result<Self> {
        if let Some(samples) = spec.samples {
            if !spec.coeffs.is_empty() {
                return Err(Error::InvalidInput("density takes either coeffs or samples, not both".into()));
            }
            if samples.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("density samples must be finite".into()));
            }
            let z: Vec<Complex64> = samples.iter().map(|s| Complex64::new(s[0], s[1])).collect();
            return Density::from_samples(&z);
        }
        let mut coeffs = Vec::with_capacity(spec.coeffs.len());
        for [n, re, im] in spec.coeffs {
            if !(n.is_finite() && n.fract() == 0.0 && re.is_finite() && im.is_finite()) {
                return Err(Error::InvalidInput(format!("density entry [{n}, {re}, {im}] is malformed")));
            }
            coeffs.push((n as i64, Complex64::new(re, im)));
        }
        Ok(Density::from_coeffs(coeffs))
    }
}

impl From<Density> for DensitySpec {
    fn from(d: Density) -> Self {
        DensitySpec { coeffs: d.coeffs.iter().map(|(n, c)| [*n as f64, c.re, c.im]).collect(), samples: None }
    }
}

impl Density {
    pub fn from_coeffs(mut coeffs: Vec<(i64, Complex64)>) -> Self {
        coeffs.sort_by_key(|c| c.0);
        let mut merged: Vec<(i64, Complex64)> = Vec::with_capacity(coeffs.len());
        for (n, c) in coeffs {
            match merged.last_mut() {
                Some(last) if last.0 == n => last.1 += c,
                _ => merged.push((n, c)),
            }
        }
        Density { coeffs: merged }
    }

    /// `e^{inΘ}`.
    pub fn mode(n: i64) -> Self {
        Density { coeffs: vec![(n, Complex64::new(1.0, 0.0))] }
    }

    pub fn zero() -> Self {
        Density { coeffs: Vec::new() }
    }

    /// Trigonometric interpolant of uniform samples on `[0, 2π)`.
    pub fn from_samples(samples: &[Complex64]) -> Result<Self> {
        let m = samples.len();
        if m == 0 {
            return Err(Error::InvalidInput("density needs at least one sample".into()));
        }
        let mut buf = samples.to_vec();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let scale = 1.0 / m as f64;
        let mut coeffs = Vec::with_capacity(m);
        for (k, x) in buf.iter().enumerate() {
            let n = if 2 * k < m {
                k as i64
            } else if 2 * k == m {
                // Nyquist term split evenly between ±m/2.
                coeffs.push((-(k as i64), *x * 0.5 * scale));
                coeffs.push((k as i64, *x * 0.5 * scale));
                continue;
            } else {
                k as i64 - m as i64
            };
            coeffs.push((n, *x * scale));
        }
        Ok(Density::from_coeffs(coeffs))
    }

    pub fn coeffs(&self) -> &[(i64, Complex64)] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.coeffs.iter().map(|(n, c)| c * Complex64::cis(*n as f64 * t)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|(_, c)| c.norm() == 0.0)
    }

    /// Largest `|n|` with a nonzero coefficient.
    pub fn bandwidth(&self) -> usize {
        self.coeffs.iter().filter(|(_, c)| c.norm() > 0.0).map(|(n, _)| n.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Density whose values are the complex conjugates of this one.
    pub fn conj(&self) -> Self {
        Density::from_coeffs(self.coeffs.iter().map(|(n, c)| (-n, c.conj())).collect())
    }
}

impl AngularFn for Density {
    fn at(&self, t: f64) -> Complex64 {
        self.eval(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::TAU;

    #[test]
    fn samples_round_trip() {
        let f = |t: f64| Complex64::new((2.0 * t).cos(), (3.0 * t).sin()) + 0.5;
        for m in [15usize, 16] {
            let s: Vec<Complex64> = (0..m).map(|i| f(TAU * i as f64 / m as f64)).collect();
            let d = Density::from_samples(&s).unwrap();
            for t in [0.1, 1.7, 4.0] {
                assert!((d.eval(t) - f(t)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn conj_values() {
        let d = Density::from_coeffs(vec![(1, Complex64::new(1.0, 2.0)), (-2, Complex64::new(0.3, 0.0))]);
        assert!((d.conj().eval(0.9) - d.eval(0.9).conj()).norm() < 1e-15);
    }

    #[test]
    fn spec_parsing() {
        let d: Density = serde_json::from_str(r#"{"coeffs": [[1, 1.0, 0.0]]}"#).unwrap();
        assert_eq!(d, Density::mode(1));
        assert!(serde_json::from_str::<Density>(r#"{"coeffs": [[0.5, 1.0, 0.0]]}"#).is_err());
    }
}
