//! Job configuration files (JSON) and their validation.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use nonscatter_core::admissibility::{check_admissible, DEFAULT_GRID};
use nonscatter_core::diskoracle::MAX_SCAN_K;
use nonscatter_core::oscillatory::Density;
use nonscatter_core::{Medium, ProfileSpec, RadiusProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Sweep,
    Admissibility,
    CriticalPoints,
    Diagnose,
    DiskZeros,
    HCurves,
}

impl Task {
    pub const ALL: [Task; 6] =
        [Task::Sweep, Task::Admissibility, Task::CriticalPoints, Task::Diagnose, Task::DiskZeros, Task::HCurves];

    pub fn id(self) -> &'static str {
        match self {
            Task::Sweep => "sweep",
            Task::Admissibility => "admissibility",
            Task::CriticalPoints => "critical-points",
            Task::Diagnose => "diagnose",
            Task::DiskZeros => "disk-zeros",
            Task::HCurves => "h-curves",
        }
    }

    fn scattering(self) -> bool {
        matches!(self, Task::Sweep | Task::Diagnose)
    }

    fn uses_stationary_points(self) -> bool {
        matches!(self, Task::Sweep | Task::Diagnose | Task::CriticalPoints)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Task::ALL.into_iter().find(|t| t.id() == s).ok_or_else(|| format!("unknown task {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    pub q: f64,
    pub geometry: ProfileSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KSpacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub k_steps: usize,
    pub eta_steps: usize,
    #[serde(default)]
    pub n_max_derivative: usize,
    #[serde(default)]
    pub k_spacing: KSpacing,
    /// Explicit probe angles replacing the uniform grid (order 0 only).
    #[serde(default)]
    pub theta_eta: Option<Vec<f64>>,
}

impl SweepConfig {
    pub fn wavenumbers(&self) -> Vec<f64> {
        if self.k_steps <= 1 {
            return vec![self.k_min];
        }
        let n = self.k_steps - 1;
        (0..=n)
            .map(|i| {
                let s = i as f64 / n as f64;
                match self.k_spacing {
                    KSpacing::Linear => self.k_min + (self.k_max - self.k_min) * s,
                    KSpacing::Log => self.k_min * (self.k_max / self.k_min).powf(s),
                }
            })
            .collect()
    }

    pub fn probe_angles(&self) -> Vec<f64> {
        match &self.theta_eta {
            Some(v) => v.clone(),
            None => (0..self.eta_steps).map(|i| std::f64::consts::TAU * i as f64 / self.eta_steps as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    #[serde(default)]
    pub nodes_per_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskConfig {
    #[serde(default = "one")]
    pub a: f64,
    pub modes: Vec<i64>,
    pub k_max: f64,
}

fn one() -> f64 {
    1.0
}

fn default_h_points() -> usize {
    720
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HCurveConfig {
    #[serde(default = "default_h_points")]
    pub points: usize,
}

impl Default for HCurveConfig {
    fn default() -> Self {
        HCurveConfig { points: default_h_points() }
    }
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdmissibilityConfig {
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Constant for the sufficient condition; skipped when absent.
    #[serde(default)]
    pub c_rho: Option<f64>,
}

impl Default for AdmissibilityConfig {
    fn default() -> Self {
        AdmissibilityConfig { grid: DEFAULT_GRID, c_rho: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default)]
    pub task: Option<Task>,
    pub medium: MediumConfig,
    #[serde(default)]
    pub density: Option<Density>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub disk: Option<DiskConfig>,
    #[serde(default)]
    pub h_curves: HCurveConfig,
    #[serde(default)]
    pub admissibility: AdmissibilityConfig,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn profile(&self) -> Option<RadiusProfile> {
        RadiusProfile::try_from(self.medium.geometry.clone()).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Issue {
    pub severity: Severity,
    pub field: String,
    pub message: String,
}

impl Issue {
    fn error(field: &str, message: impl Into<String>) -> Self {
        Issue { severity: Severity::Error, field: field.into(), message: message.into() }
    }

    fn warning(field: &str, message: impl Into<String>) -> Self {
        Issue { severity: Severity::Warning, field: field.into(), message: message.into() }
    }
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// Structural checks plus the admissibility pre-flight for tasks that locate
/// stationary points on non-ellipse media. Violations are values, never panics.
pub fn validate(config: &JobConfig, task: Task) -> Vec<Issue> {
    let mut out = Vec::new();
    if let Some(t) = config.task {
        if t != task {
            out.push(Issue::error("task", format!("config names task {t} but {task} was requested")));
        }
    }
    let q = config.medium.q;
    if !positive(q) {
        out.push(Issue::error("medium.q", format!("contrast must be positive and finite, got {q}")));
    } else if q == 1.0 {
        out.push(Issue::error("medium.q", "contrast must differ from 1"));
    }
    let profile = match RadiusProfile::try_from(config.medium.geometry.clone()) {
        Ok(p) => Some(p),
        Err(e) => {
            out.push(Issue::error("medium.geometry", e.to_string()));
            None
        }
    };

    if matches!(task, Task::Sweep | Task::Diagnose | Task::CriticalPoints) {
        match &config.sweep {
            None => out.push(Issue::error("sweep", format!("task {task} needs a sweep section"))),
            Some(s) => validate_sweep(s, task, &mut out),
        }
    }
    if task.scattering() {
        match &config.density {
            None => out.push(Issue::error("density", "a density is required for this task")),
            Some(d) if d.is_zero() => out.push(Issue::error("density", "density must be nontrivial")),
            _ => {}
        }
    }
    if let Some(n) = config.quadrature.nodes_per_dim {
        if n < 16 {
            out.push(Issue::error("quadrature.nodes_per_dim", format!("need at least 16 nodes, got {n}")));
        }
    }

    match task {
        Task::HCurves => {
            if positive(q) && q >= 1.0 {
                out.push(Issue::error("medium.q", "h-curves need q in (0,1)"));
            }
            if config.h_curves.points < 8 {
                out.push(Issue::error("h_curves.points", "need at least 8 points"));
            }
        }
        Task::DiskZeros => match &config.disk {
            None => out.push(Issue::error("disk", "disk-zeros needs a disk section")),
            Some(d) => {
                if !positive(d.a) {
                    out.push(Issue::error("disk.a", format!("radius must be positive, got {}", d.a)));
                }
                if d.modes.is_empty() {
                    out.push(Issue::error("disk.modes", "list at least one mode"));
                }
                if d.modes.iter().any(|&n| n < 0) {
                    out.push(Issue::error("disk.modes", "modes must be non-negative"));
                }
                if !(d.k_max > 1e-3 && d.k_max <= MAX_SCAN_K) {
                    out.push(Issue::error("disk.k_max", format!("k_max must lie in (0.001, {MAX_SCAN_K}]")));
                }
            }
        },
        Task::Admissibility => {
            if positive(q) && q >= 1.0 {
                out.push(Issue::error("medium.q", "admissibility is defined for q in (0,1)"));
            }
            if config.admissibility.grid < 360 {
                out.push(Issue::error("admissibility.grid", "grid must have at least 360 points"));
            }
            if let Some(c) = config.admissibility.c_rho {
                if !(c > 0.0 && c < 1.0) {
                    out.push(Issue::error("admissibility.c_rho", "c_rho must lie in (0,1)"));
                }
            }
        }
        _ => {}
    }

    let star_task = task.uses_stationary_points();
    if let (true, Some(p), true) = (star_task, profile, positive(q) && q != 1.0) {
        if p.as_ellipse().is_none() {
            star_preflight(q, &p, config.admissibility.grid.max(360), &mut out);
        }
    }
    out
}

fn validate_sweep(s: &SweepConfig, task: Task, out: &mut Vec<Issue>) {
    if !positive(s.k_min) {
        out.push(Issue::error("sweep.k_min", format!("k_min must be positive, got {}", s.k_min)));
    }
    if !(s.k_max.is_finite() && s.k_max >= s.k_min) {
        out.push(Issue::error("sweep.k_max", "k_max must be finite and at least k_min"));
    }
    if s.k_steps < 1 {
        out.push(Issue::error("sweep.k_steps", "k_steps must be at least 1"));
    }
    match &s.theta_eta {
        Some(list) => {
            if list.is_empty() || list.iter().any(|t| !t.is_finite()) {
                out.push(Issue::error("sweep.theta_eta", "explicit probe angles must be finite and non-empty"));
            }
            if s.n_max_derivative > 0 && task == Task::Sweep {
                out.push(Issue::error("sweep.theta_eta", "explicit probe angles only support n_max_derivative = 0"));
            }
        }
        None => {
            if s.eta_steps < 8 {
                out.push(Issue::error("sweep.eta_steps", format!("eta_steps must be at least 8, got {}", s.eta_steps)));
            }
        }
    }
    if s.n_max_derivative > 16 {
        out.push(Issue::error("sweep.n_max_derivative", "derivative order above 16 is not supported"));
    }
}

fn star_preflight(q: f64, p: &RadiusProfile, grid: usize, out: &mut Vec<Issue>) {
    if q >= 1.0 {
        out.push(Issue::error("medium.q", "non-ellipse media need q in (0,1) to locate stationary points"));
        return;
    }
    match check_admissible(q, p, grid) {
        Err(e) => out.push(Issue::error("medium", e.to_string())),
        Ok(r) => {
            if !r.non_constant {
                out.push(Issue::warning("medium.geometry", "not admissible: constant rho"));
            }
            for v in &r.violations {
                out.push(Issue::error(
                    "medium",
                    format!("not admissible: {} fails at t = {:.6} ({} >= {})", v.condition.id(), v.t, v.lhs, v.rhs),
                ));
            }
        }
    }
}

/// Builds the medium once validation has passed.
pub fn build_medium(config: &JobConfig) -> nonscatter_core::Result<Medium> {
    Medium::new(config.medium.q, RadiusProfile::try_from(config.medium.geometry.clone())?)
}
