//! The auxiliary function `h`, the admissibility inequalities, and the search
//! for the bracketing angles `θ1`, `θ2` used by the star root-finder.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{RadiusProfile, RadiusValues};
use crate::numeric::{bisect, golden_max, linspace_periodic, periodic_max, TAU};

pub const DEFAULT_GRID: usize = 4096;

/// `h`, `h'`, `h''` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HValues {
    pub h: f64,
    pub d1: f64,
    pub d2: f64,
}

pub(crate) fn h_vals(sq: f64, t: f64) -> HValues {
    let (s, c) = t.sin_cos();
    let den = 1.0 + sq * c;
    HValues {
        h: sq * s / den,
        d1: sq * (sq + c) / (den * den),
        d2: sq * s * (2.0 * sq * sq - 1.0 + sq * c) / (den * den * den),
    }
}

/// `h(t) = √q sin t / (1 + √q cos t)` and its first two derivatives.
pub fn h_eval(q: f64, t: f64) -> Result<HValues> {
    check_q(q)?;
    if !t.is_finite() {
        return Err(Error::InvalidInput(format!("angle must be finite, got {t}")));
    }
    Ok(h_vals(q.sqrt(), t))
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if q.is_finite() && q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("contrast must lie in (0,1) here, got {q}")))
    }
}

/// `arccos √q`.
pub fn theta_q(q: f64) -> f64 {
    q.sqrt().acos()
}

/// `π − arccos √q`, the positive zero of `h'`.
pub fn theta_tilde_q(q: f64) -> f64 {
    PI - theta_q(q)
}

/// Interior maximiser of `h'` on `(0, θ̃_q)` when `q > 1/4`.
pub fn h_prime_peak(q: f64) -> Option<f64> {
    if q > 0.25 && q < 1.0 {
        Some(((1.0 - 2.0 * q) / q.sqrt()).acos())
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `|ρ_n'| < √q/√(1−q)`
    Slope,
    /// `ρ_n'' < √q/(1+√q)`
    CurvatureUpper,
    /// `−√q/(1−√q) < ρ_n''`
    CurvatureLower,
    /// `(1−q)ρ_n'' < ϱ(1−ϱ)`
    MonotoneFirst,
    /// `−(1−q)ρ_n'' < ϱ(1+ϱ)`
    MonotoneSecond,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::Slope,
        Condition::CurvatureUpper,
        Condition::CurvatureLower,
        Condition::MonotoneFirst,
        Condition::MonotoneSecond,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Condition::Slope => "slope",
            Condition::CurvatureUpper => "curvature_upper",
            Condition::CurvatureLower => "curvature_lower",
            Condition::MonotoneFirst => "monotone_j1",
            Condition::MonotoneSecond => "monotone_j2",
        }
    }

    /// `(lhs, rhs)` of the strict inequality `lhs < rhs`.
    fn sides(self, q: f64, v: &RadiusValues) -> (f64, f64) {
        let sq = q.sqrt();
        let radicand = q - (1.0 - q) * v.log_d1 * v.log_d1;
        let vr = if radicand >= 0.0 { radicand.sqrt() } else { f64::NAN };
        match self {
            Condition::Slope => (v.log_d1.abs(), sq / (1.0 - q).sqrt()),
            Condition::CurvatureUpper => (v.log_d2, sq / (1.0 + sq)),
            Condition::CurvatureLower => (-sq / (1.0 - sq), v.log_d2),
            Condition::MonotoneFirst => ((1.0 - q) * v.log_d2, vr * (1.0 - vr)),
            Condition::MonotoneSecond => (-(1.0 - q) * v.log_d2, vr * (1.0 + vr)),
        }
    }
}

/// Worst-case sample of one inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl Violation {
    pub fn margin(&self) -> f64 {
        let m = self.rhs - self.lhs;
        if m.is_nan() {
            f64::NEG_INFINITY
        } else {
            m
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Theta12Search {
    Found {
        theta1: f64,
        theta2: f64,
    },
    /// A necessary inequality fails, so no pair can exist.
    ConditionViolated {
        reason: String,
    },
    /// The bisection construction found no pair; this does not prove absence.
    SearchExhausted {
        reason: String,
    },
}

impl Theta12Search {
    pub fn pair(&self) -> Option<(f64, f64)> {
        match self {
            Theta12Search::Found { theta1, theta2 } => Some((*theta1, *theta2)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub non_constant: bool,
    /// Worst offending sample of every violated condition.
    pub violations: Vec<Violation>,
    /// Worst sample of every condition, violated or not.
    pub margins: Vec<Violation>,
    pub theta_q: f64,
    pub theta_tilde_q: f64,
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
    pub theta12: Theta12Search,
}

fn worst_sample(q: f64, profile: &RadiusProfile, cond: Condition, grid_n: usize) -> Violation {
    let margin = |t: f64| {
        let (l, r) = cond.sides(q, &profile.eval(t));
        let m = r - l;
        if m.is_nan() {
            f64::NEG_INFINITY
        } else {
            m
        }
    };
    let h = TAU / grid_n as f64;
    let mut best = (0.0, f64::INFINITY);
    for t in linspace_periodic(grid_n) {
        let m = margin(t);
        if m < best.1 {
            best = (t, m);
        }
    }
    if best.1.is_finite() {
        let (t, neg) = golden_max(|t| -margin(t), best.0 - h, best.0 + h, 1e-12);
        if -neg < best.1 {
            best = (t, -neg);
        }
    }
    let (lhs, rhs) = cond.sides(q, &profile.eval(best.0));
    Violation { condition: cond, t: best.0, lhs, rhs }
}

/// Samples the five strict inequalities on `grid_n` points with refinement
/// around each worst margin.
pub fn check_admissible(q: f64, profile: &RadiusProfile, grid_n: usize) -> Result<AdmissibilityReport> {
    check_q(q)?;
    if grid_n < 360 {
        return Err(Error::InvalidInput(format!("grid_n must be at least 360, got {grid_n}")));
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for t in linspace_periodic(grid_n) {
        let r = profile.eval(t).rho;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let non_constant = hi - lo > 1e-12 * hi;
    let margins: Vec<Violation> = Condition::ALL.iter().map(|&c| worst_sample(q, profile, c, grid_n)).collect();
    let violations: Vec<Violation> = margins.iter().copied().filter(|v| v.margin() <= 0.0).collect();
    let theta12 = search_theta12(q, profile, grid_n)?;
    let pair = theta12.pair();
    Ok(AdmissibilityReport {
        admissible: non_constant && violations.is_empty(),
        non_constant,
        violations,
        margins,
        theta_q: theta_q(q),
        theta_tilde_q: theta_tilde_q(q),
        theta1: pair.map(|p| p.0),
        theta2: pair.map(|p| p.1),
        theta12,
    })
}

/// The sufficient condition with constant `c_rho`: `ρ_n'^2 ≤ (1−c)q/(1−q)` and
/// `−√(cq)(1+√(cq))/(1−q) < ρ_n'' < min(√q/(1+√q), √(cq)(1−√(cq))/(1−q))`.
pub fn check_sufficient(q: f64, profile: &RadiusProfile, c_rho: f64, grid_n: usize) -> Result<bool> {
    check_q(q)?;
    if !(c_rho > 0.0 && c_rho < 1.0) {
        return Err(Error::InvalidInput(format!("c_rho must lie in (0,1), got {c_rho}")));
    }
    let sq = q.sqrt();
    let scq = (c_rho * q).sqrt();
    let slope_cap = (1.0 - c_rho) * q / (1.0 - q);
    let upper = (sq / (1.0 + sq)).min(scq * (1.0 - scq) / (1.0 - q));
    let lower = -scq * (1.0 + scq) / (1.0 - q);
    let slope = periodic_max(|t| profile.eval(t).log_d1.powi(2), grid_n).1;
    let kmax = periodic_max(|t| profile.eval(t).log_d2, grid_n).1;
    let kmin = -periodic_max(|t| -profile.eval(t).log_d2, grid_n).1;
    Ok(slope <= slope_cap && kmax < upper && kmin > lower)
}

/// Extremes of `|ρ_n'|` and `ρ_n''` over the circle.
#[derive(Debug, Clone, Copy)]
struct Extremes {
    slope: f64,
    kmax: f64,
    kmin: f64,
}

fn extremes(profile: &RadiusProfile, grid_n: usize) -> Extremes {
    Extremes {
        slope: periodic_max(|t| profile.eval(t).log_d1.abs(), grid_n).1,
        kmax: periodic_max(|t| profile.eval(t).log_d2, grid_n).1,
        kmin: -periodic_max(|t| -profile.eval(t).log_d2, grid_n).1,
    }
}

/// Bracketing angles for the star root-finder, or `None`.
pub fn find_theta12(q: f64, profile: &RadiusProfile) -> Result<Option<(f64, f64)>> {
    Ok(search_theta12(q, profile, DEFAULT_GRID)?.pair())
}

/// Bisection construction of `θ1 ∈ (0, θ̃_q)`, `θ2 ∈ (θ̃_q, π)` with
/// `max|ρ_n'| < min(h(θ1), h(θ2))` and
/// `h'(θ2) < min ρ_n'' ≤ max ρ_n'' < min(h'(0), h'(θ1))`.
pub fn search_theta12(q: f64, profile: &RadiusProfile, grid_n: usize) -> Result<Theta12Search> {
    check_q(q)?;
    let ex = extremes(profile, grid_n);
    Ok(construct_theta12(q, ex))
}

fn construct_theta12(q: f64, ex: Extremes) -> Theta12Search {
    let sq = q.sqrt();
    let tt = theta_tilde_q(q);
    let hmax = sq / (1.0 - q).sqrt();
    let h = |t: f64| h_vals(sq, t).h;
    let hp = |t: f64| h_vals(sq, t).d1;
    let violated = |reason: String| Theta12Search::ConditionViolated { reason };
    if ex.slope >= hmax {
        return violated(format!("max |rho_n'| = {} is not below {}", ex.slope, hmax));
    }
    if ex.kmax >= sq / (1.0 + sq) {
        return violated(format!("max rho_n'' = {} is not below h'(0) = {}", ex.kmax, sq / (1.0 + sq)));
    }
    let hp_pi = -sq / (1.0 - sq);
    if ex.kmin <= hp_pi {
        return violated(format!("min rho_n'' = {} is not above h'(pi) = {}", ex.kmin, hp_pi));
    }
    let tol = 1e-14;
    let solve = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| bisect(f, a, b, tol, "theta12 search").ok();
    let exhausted = |reason: &str| Theta12Search::SearchExhausted { reason: reason.to_string() };

    let peak = h_prime_peak(q).unwrap_or(0.0);
    let t1_high = if ex.kmax <= 0.0 { Some(tt) } else { solve(&|t| hp(t) - ex.kmax, peak, tt) };
    let t1_low = if ex.slope == 0.0 { Some(0.0) } else { solve(&|t| h(t) - ex.slope, 0.0, tt) };
    let (Some(t1_low), Some(t1_high)) = (t1_low, t1_high) else {
        return exhausted("no monotone stretch for theta1");
    };
    if t1_low >= t1_high {
        return exhausted("slope and curvature windows for theta1 do not overlap");
    }
    let target1 = ex.slope + 0.1 * (h(t1_high) - ex.slope);
    let Some(theta1) = solve(&|t| h(t) - target1, 0.0, tt) else {
        return exhausted("theta1 target not bracketed");
    };

    let t2_low = if ex.kmin >= 0.0 { Some(tt) } else { solve(&|t| hp(t) - ex.kmin, tt, PI) };
    let t2_high = if ex.slope == 0.0 { Some(PI) } else { solve(&|t| h(t) - ex.slope, tt, PI) };
    let (Some(t2_low), Some(t2_high)) = (t2_low, t2_high) else {
        return exhausted("no monotone stretch for theta2");
    };
    if t2_low >= t2_high {
        return exhausted("slope and curvature windows for theta2 do not overlap");
    }
    let target2 = ex.slope + 0.1 * (h(t2_low) - ex.slope);
    let Some(theta2) = solve(&|t| h(t) - target2, tt, PI) else {
        return exhausted("theta2 target not bracketed");
    };

    let ok = theta1 > 0.0
        && theta1 < tt
        && theta2 > tt
        && theta2 < PI
        && ex.slope < h(theta1).min(h(theta2))
        && hp(theta2) < ex.kmin
        && ex.kmax < hp(0.0).min(hp(theta1));
    if ok {
        Theta12Search::Found { theta1, theta2 }
    } else {
        exhausted("constructed pair failed verification")
    }
}
