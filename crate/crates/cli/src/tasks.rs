//! One function per task. Each returns a table plus the soft problems hit on
//! the way; hard failures come back as `RunError`.

use num_complex::Complex64;
use rayon::prelude::*;

use nonscatter_core::admissibility::{check_admissible, check_sufficient, h_eval, Theta12Search};
use nonscatter_core::diskoracle::{cauchy_residual, disk_determinant, find_nonscattering, DiskMedium};
use nonscatter_core::numeric::TAU;
use nonscatter_core::oscillatory::{
    asymp_i_with, quad_i_derivs, required_eta_grid, Density, IntegralKernel, QuadratureSpec,
};
use nonscatter_core::stationary::{PointSolver, INDICES};
use nonscatter_core::vandermonde::{density_diagnostic, sign_law_pattern, DiagnosticReport, Relation};
use nonscatter_core::{Error, Medium};

use crate::config::{build_medium, JobConfig, SweepConfig, Task};
use crate::csv::{format_float, Cell, Table};
use crate::RunError;

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub table: Table,
    pub warnings: Vec<String>,
    /// Numeric degeneracies met at individual cells; the table is still written.
    pub degeneracies: Vec<String>,
}

impl Output {
    fn new(table: Table) -> Self {
        Output { table, warnings: Vec::new(), degeneracies: Vec::new() }
    }
}

pub fn dispatch(task: Task, config: &JobConfig) -> Result<Output, RunError> {
    match task {
        Task::Sweep => sweep(config),
        Task::Admissibility => admissibility(config),
        Task::CriticalPoints => critical_points(config),
        Task::Diagnose => diagnose(config),
        Task::DiskZeros => disk_zeros(config),
        Task::HCurves => h_curves(config),
    }
}

fn is_degeneracy(e: &Error) -> bool {
    matches!(e, Error::DegenerateHessian { .. } | Error::DegenerateSet(_))
}

fn sweep_section(config: &JobConfig) -> &SweepConfig {
    config.sweep.as_ref().expect("validated sweep section")
}

fn density(config: &JobConfig) -> &Density {
    config.density.as_ref().expect("validated density")
}

fn spec(config: &JobConfig) -> QuadratureSpec {
    QuadratureSpec { nodes_per_dim: config.quadrature.nodes_per_dim }
}

/// Smallest multiple of `base` at or above `need`.
fn fine_grid(base: usize, need: usize) -> usize {
    base * need.div_ceil(base).max(1)
}

pub fn sweep(config: &JobConfig) -> Result<Output, RunError> {
    let s = sweep_section(config);
    let medium = build_medium(config)?;
    let phi = density(config);
    let solver = PointSolver::new(&medium)?;
    let angles = s.probe_angles();
    let mut out = Output::new(Table::new(
        Task::Sweep.id(),
        &["k", "theta_eta", "N", "quad_re", "quad_im", "asymp_re", "asymp_im", "abs_err"],
    ));

    for k in s.wavenumbers() {
        let quad = quad_columns(&medium, phi, k, s, &angles, spec(config), &mut out)?;
        let asym: Vec<Vec<Result<Complex64, Error>>> = angles
            .par_iter()
            .map(|&t| {
                (0..=s.n_max_derivative as u32).map(|n| asymp_i_with(&solver, phi, k, t, n).map(|a| a.value)).collect()
            })
            .collect();
        for (n, qcol) in quad.iter().enumerate() {
            for (i, &t) in angles.iter().enumerate() {
                let a = match &asym[i][n] {
                    Ok(v) => *v,
                    Err(e) if is_degeneracy(e) => {
                        out.degeneracies.push(format!("k = {k}, theta_eta = {t}, N = {n}: {e}"));
                        Complex64::new(f64::NAN, f64::NAN)
                    }
                    Err(e) => return Err(e.clone().into()),
                };
                let qv = qcol[i];
                out.table.push(vec![
                    k.into(),
                    t.into(),
                    n.into(),
                    qv.re.into(),
                    qv.im.into(),
                    a.re.into(),
                    a.im.into(),
                    (qv - a).norm().into(),
                ]);
            }
        }
    }
    Ok(out)
}

/// Quadrature values `[N][angle]` at one wavenumber.
fn quad_columns(
    medium: &Medium,
    phi: &Density,
    k: f64,
    s: &SweepConfig,
    angles: &[f64],
    spec: QuadratureSpec,
    out: &mut Output,
) -> Result<Vec<Vec<Complex64>>, RunError> {
    if s.n_max_derivative == 0 {
        let kernel = IntegralKernel::new(medium, phi, k, spec)?;
        let vals: Vec<_> = angles.par_iter().map(|&t| kernel.value(t)).collect();
        if let Some(r) = vals.first().filter(|r| r.under_resolved()) {
            out.warnings.push(format!("k = {k}: {} nodes is below the auto size {}", r.nodes, r.threshold));
        }
        return Ok(vec![vals.into_iter().map(|r| r.value).collect()]);
    }
    let grid = fine_grid(s.eta_steps, required_eta_grid(medium, k, s.n_max_derivative));
    let stride = grid / s.eta_steps;
    let table = quad_i_derivs(medium, phi, k, grid, s.n_max_derivative, spec)?;
    if table.nodes < table.threshold {
        out.warnings.push(format!("k = {k}: {} nodes is below the auto size {}", table.nodes, table.threshold));
    }
    Ok(table.values.iter().map(|col| col.iter().step_by(stride).copied().collect()).collect())
}

pub fn admissibility(config: &JobConfig) -> Result<Output, RunError> {
    let q = config.medium.q;
    let profile = config.profile().expect("validated profile");
    let grid = config.admissibility.grid;
    let r = check_admissible(q, &profile, grid)?;
    let mut out = Output::new(Table::new(Task::Admissibility.id(), &["key", "value"]));
    let mut kv = |k: &str, v: Cell| out.table.push(vec![k.into(), v]);
    kv("admissible", r.admissible.into());
    kv("non_constant", r.non_constant.into());
    kv("theta_q", r.theta_q.into());
    kv("theta_tilde_q", r.theta_tilde_q.into());
    kv("theta1", r.theta1.unwrap_or(f64::NAN).into());
    kv("theta2", r.theta2.unwrap_or(f64::NAN).into());
    let (status, reason) = match &r.theta12 {
        Theta12Search::Found { .. } => ("found", String::new()),
        Theta12Search::ConditionViolated { reason } => ("condition_violated", reason.clone()),
        Theta12Search::SearchExhausted { reason } => ("search_exhausted", reason.clone()),
    };
    kv("theta12_status", status.into());
    kv("theta12_reason", reason.into());
    for m in &r.margins {
        let id = m.condition.id();
        kv(&format!("margin_{id}"), m.margin().into());
        kv(&format!("worst_t_{id}"), m.t.into());
    }
    for v in &r.violations {
        kv(
            &format!("violation_{}", v.condition.id()),
            format!("t={} lhs={} rhs={}", format_float(v.t), format_float(v.lhs), format_float(v.rhs)).into(),
        );
    }
    if let Some(c) = config.admissibility.c_rho {
        kv("sufficient", check_sufficient(q, &profile, c, grid)?.into());
    }
    if !r.non_constant {
        out.warnings.push("not admissible: constant rho".into());
    }
    Ok(out)
}

pub fn critical_points(config: &JobConfig) -> Result<Output, RunError> {
    let medium = build_medium(config)?;
    let solver = PointSolver::new(&medium)?;
    let angles = sweep_section(config).probe_angles();
    let sets: Vec<_> = angles.par_iter().map(|&t| solver.points(t)).collect();
    let mut out = Output::new(Table::new(
        Task::CriticalPoints.id(),
        &["theta_eta", "j", "l", "theta", "theta_xi", "f", "det", "sig", "degenerate"],
    ));
    for (&t, set) in angles.iter().zip(sets) {
        let set = set?;
        if set.degenerate {
            out.degeneracies.push(format!("theta_eta = {t}: a pair of stationary points is not isolated"));
        }
        for p in &set.points {
            if p.degenerate {
                out.degeneracies.push(format!("theta_eta = {t}: degenerate Hessian at ({},{})", p.j, p.l));
            }
            out.table.push(vec![
                t.into(),
                p.j.into(),
                p.l.into(),
                p.theta.rem_euclid(TAU).into(),
                p.theta_xi.rem_euclid(TAU).into(),
                p.weight.into(),
                p.hess_det.into(),
                p.hess_sig.into(),
                (p.degenerate || set.degenerate).into(),
            ]);
        }
    }
    Ok(out)
}

fn label(i: usize) -> String {
    let (j, l) = INDICES[i];
    format!("{j}{l}")
}

fn render_relation(r: &Relation) -> String {
    let terms: Vec<String> = r.0.iter().map(|&i| format!("z{}", label(i))).collect();
    format!("{}=0", terms.join("+"))
}

fn join(items: impl IntoIterator<Item = String>) -> String {
    items.into_iter().collect::<Vec<_>>().join(" ")
}

pub fn diagnose(config: &JobConfig) -> Result<Output, RunError> {
    let s = sweep_section(config);
    let medium = build_medium(config)?;
    let phi = density(config);
    let solver = PointSolver::new(&medium)?;
    let k = s.k_min;
    let angles = s.probe_angles();
    let star = matches!(solver, PointSolver::Star(_));

    let reports: Vec<Result<DiagnosticReport, Error>> = angles
        .par_iter()
        .map(|&t| {
            let asym = (0..4u32).map(|n| asymp_i_with(&solver, phi, k, t, n)).collect::<Result<Vec<_>, _>>()?;
            density_diagnostic(phi, k, medium.sqrt_q(), medium.profile.max_radius(), t, &asym)
        })
        .collect();
    let patterns: Vec<Option<Result<_, Error>>> =
        angles.par_iter().map(|&t| star.then(|| sign_law_pattern(&solver, phi, t))).collect();

    let mut out = Output::new(Table::new(
        Task::Diagnose.id(),
        &[
            "theta_eta",
            "status",
            "min_gap",
            "f11",
            "f12",
            "f21",
            "f22",
            "constraints",
            "forced_zero",
            "pairs",
            "moments_vanish",
            "pattern",
            "pattern_residuals",
        ],
    ));
    for ((&t, rep), pat) in angles.iter().zip(reports).zip(patterns) {
        let (pattern, pattern_res) = match pat {
            None => (String::new(), String::new()),
            Some(Ok(p)) => (
                serde_json::to_value(p.pattern).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                join(p.relations.iter().map(|r| format_float(r.residual()))),
            ),
            Some(Err(e)) if is_degeneracy(&e) => ("degenerate".into(), String::new()),
            Some(Err(e)) => return Err(e.into()),
        };
        let rep = match rep {
            Ok(r) => r,
            Err(e) if is_degeneracy(&e) => {
                out.degeneracies.push(format!("theta_eta = {t}: {e}"));
                let nan = f64::NAN;
                out.table.push(vec![
                    t.into(),
                    "degenerate".into(),
                    nan.into(),
                    nan.into(),
                    nan.into(),
                    nan.into(),
                    nan.into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    pattern.into(),
                    pattern_res.into(),
                ]);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let status =
            serde_json::to_value(rep.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let forced = join(rep.forced_zero.iter().map(|((j, l), th)| format!("{j}{l}@{}", format_float(*th))));
        let pairs = join(rep.pair_relations.iter().map(|p| {
            format!("{}{}~{}{}:g={}:res={}", p.a.0, p.a.1, p.b.0, p.b.1, format_float(p.g), format_float(p.residual()))
        }));
        let w = rep.weights;
        out.table.push(vec![
            t.into(),
            status.into(),
            rep.min_gap.into(),
            w[0].into(),
            w[1].into(),
            w[2].into(),
            w[3].into(),
            join(rep.constraints.iter().map(render_relation)).into(),
            forced.into(),
            pairs.into(),
            rep.moments_vanish.into(),
            pattern.into(),
            pattern_res.into(),
        ]);
    }
    Ok(out)
}

pub fn disk_zeros(config: &JobConfig) -> Result<Output, RunError> {
    let d = config.disk.as_ref().expect("validated disk section");
    let disk = DiskMedium::new(d.a, config.medium.q)?;
    let found: Vec<_> = d.modes.par_iter().map(|&n| find_nonscattering(&disk, n, d.k_max)).collect();
    let mut out = Output::new(Table::new(Task::DiskZeros.id(), &["n", "k_zero", "det_residual", "cauchy_residual"]));
    for z in found {
        let z = z?;
        if z.zeros.is_empty() {
            out.warnings.push(format!("mode {}: no zeros below k = {}", z.n, d.k_max));
        }
        for &k in &z.zeros {
            out.table.push(vec![
                z.n.into(),
                k.into(),
                disk_determinant(&disk, z.n, k)?.abs().into(),
                cauchy_residual(&disk, z.n, k)?.into(),
            ]);
        }
    }
    Ok(out)
}

pub fn h_curves(config: &JobConfig) -> Result<Output, RunError> {
    let q = config.medium.q;
    let m = config.h_curves.points;
    let mut out = Output::new(Table::new(Task::HCurves.id(), &["t", "h", "h_prime", "h_double_prime"]));
    for i in 0..m {
        let t = -std::f64::consts::PI + TAU * i as f64 / m as f64;
        let v = h_eval(q, t)?;
        out.table.push(vec![t.into(), v.h.into(), v.d1.into(), v.d2.into()]);
    }
    Ok(out)
}
