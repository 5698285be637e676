//! Null spaces of the 4×4 Vandermonde system `Σ z_{j,l} a_{j,l}^N = 0`,
//! `N = 0..3`, and the density constraints they imply.
//!
//! Unknowns and nodes are always ordered `(1,1), (1,2), (2,1), (2,2)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oscillatory::{Asymptotic, Density};
use crate::stationary::{PointSolver, INDICES};

/// Relative tolerance under which two nodes count as equal.
pub const NODE_TOL: f64 = 1e-9;
/// Upper edge of the band in which nodes are too close to call.
pub const NEAR_TOL: f64 = 1e-6;

/// Nodes `a_{1,1}, a_{1,2}, a_{2,1}, a_{2,2}` with `a_{1,1} > 0 > a_{2,2}` and
/// `a_{2,1} ≥ 0 ≥ a_{1,2}`, the last two vanishing together.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VanderInput {
    a: [f64; 4],
}

impl VanderInput {
    pub fn new(a: [f64; 4]) -> Result<Self> {
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("nodes must be finite, got {a:?}")));
        }
        let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let zero = |x: f64| x.abs() <= NODE_TOL * scale;
        let [a11, a12, a21, a22] = a;
        let ok = a11 > 0.0
            && a22 < 0.0
            && !zero(a11)
            && !zero(a22)
            && (a21 >= 0.0 || zero(a21))
            && (a12 <= 0.0 || zero(a12))
            && zero(a21) == zero(a12);
        if !ok {
            return Err(Error::SignPattern(format!(
                "need a11 > 0 > a22 and a21 >= 0 >= a12 with a21, a12 vanishing together; got {a:?}"
            )));
        }
        Ok(VanderInput { a })
    }

    pub fn nodes(&self) -> [f64; 4] {
        self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NullCase {
    /// Four distinct nodes: only `z = 0`.
    Nonsingular,
    #[serde(rename = "pair_11_21_and_12_22")]
    PairBoth,
    #[serde(rename = "pair_11_21_only")]
    Pair1121Only,
    #[serde(rename = "pair_12_22_only")]
    Pair1222Only,
    /// `a_{1,2} = a_{2,1} = 0`.
    ZeroColumnPair,
}

impl NullCase {
    pub fn id(self) -> &'static str {
        match self {
            NullCase::Nonsingular => "nonsingular",
            NullCase::PairBoth => "pair_11_21_and_12_22",
            NullCase::Pair1121Only => "pair_11_21_only",
            NullCase::Pair1222Only => "pair_12_22_only",
            NullCase::ZeroColumnPair => "zero_column_pair",
        }
    }
}

/// `Σ_{i ∈ indices} z_i = 0`; a single index means `z_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Relation(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullClassification {
    pub case: NullCase,
    /// Sorted; together they cut out the null space exactly.
    pub constraints: Vec<Relation>,
}

impl NullClassification {
    pub fn null_dim(&self) -> usize {
        4 - self.constraints.len()
    }
}

fn nodes_equal(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= NODE_TOL * scale
}

pub fn classify_null(input: &VanderInput) -> NullClassification {
    let [a11, a12, a21, a22] = input.a;
    let scale = input.a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let rel = |v: &[usize]| Relation(v.to_vec());
    let (case, mut constraints) = if a21.abs() <= NODE_TOL * scale {
        (NullCase::ZeroColumnPair, vec![rel(&[1, 2]), rel(&[0]), rel(&[3])])
    } else {
        match (nodes_equal(a11, a21, scale), nodes_equal(a12, a22, scale)) {
            (true, true) => (NullCase::PairBoth, vec![rel(&[0, 2]), rel(&[1, 3])]),
            (true, false) => (NullCase::Pair1121Only, vec![rel(&[0, 2]), rel(&[1]), rel(&[3])]),
            (false, true) => (NullCase::Pair1222Only, vec![rel(&[1, 3]), rel(&[0]), rel(&[2])]),
            (false, false) => (NullCase::Nonsingular, (0..4).map(|i| Relation(vec![i])).collect()),
        }
    };
    constraints.sort();
    NullClassification { case, constraints }
}

/// Groups of equal nodes, each sorted, ordered by first member.
pub fn node_groups(nodes: [f64; 4], tol: f64) -> Vec<Vec<usize>> {
    groups_at_scale(nodes, tol, nodes.iter().fold(0.0f64, |m, x| m.max(x.abs())))
}

fn groups_at_scale(nodes: [f64; 4], tol: f64, scale: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..4 {
        match groups.iter_mut().find(|g| (nodes[g[0]] - nodes[i]).abs() <= tol * scale) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
}

/// Null-space constraints for arbitrary nodes: each group of equal nodes sums to zero.
pub fn null_constraints(nodes: [f64; 4]) -> Vec<Relation> {
    let mut out: Vec<Relation> = node_groups(nodes, NODE_TOL).into_iter().map(Relation).collect();
    out.sort();
    out
}

/// Rows `N = 0..3`, columns the nodes.
pub fn vandermonde_matrix(nodes: [f64; 4]) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for (n, row) in m.iter_mut().enumerate() {
        for (c, a) in row.iter_mut().zip(nodes) {
            *c = a.powi(n as i32);
        }
    }
    m
}

/// Moments `Σ z_i a_i^N`, `N = 0..3`.
pub fn synthesize_moments(nodes: [f64; 4], z: [Complex64; 4]) -> [Complex64; 4] {
    let m = vandermonde_matrix(nodes);
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (o, row) in out.iter_mut().zip(&m) {
        *o = row.iter().zip(&z).map(|(a, zi)| zi * a).sum();
    }
    out
}

/// Gaussian elimination with partial pivoting.
pub fn solve_vandermonde(nodes: [f64; 4], moments: [Complex64; 4]) -> Result<[Complex64; 4]> {
    let v = vandermonde_matrix(nodes);
    let mut a: Vec<Vec<Complex64>> = v
        .iter()
        .zip(&moments)
        .map(|(row, b)| row.iter().map(|&x| Complex64::new(x, 0.0)).chain(std::iter::once(*b)).collect())
        .collect();
    let scale = v.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).unwrap_or(col);
        if a[piv][col].norm() <= 1e-14 * scale {
            return Err(Error::DegenerateSet(format!("coincident Vandermonde nodes {nodes:?}")));
        }
        a.swap(col, piv);
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            let pivot_row = a[col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                *x -= f * p;
            }
        }
    }
    let mut z = [Complex64::new(0.0, 0.0); 4];
    for r in (0..4).rev() {
        let s: Complex64 = (r + 1..4).map(|c| a[r][c] * z[c]).sum();
        z[r] = (a[r][4] - s) / a[r][r];
    }
    Ok(z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    Distinct,
    Coincident,
    /// Closest pair in the band `(NODE_TOL, NEAR_TOL]`; no constraints reported.
    NearDegenerate,
}

/// `|φ(Θ_a)|² = g·|φ(Θ_b)|²` as forced by `z_a + z_b = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairRelation {
    pub a: (u8, u8),
    pub b: (u8, u8),
    pub theta_a: f64,
    pub theta_b: f64,
    pub g: f64,
    /// `|φ|²` of the supplied density at both angles.
    pub phi_sq_a: f64,
    pub phi_sq_b: f64,
}

impl PairRelation {
    pub fn residual(&self) -> f64 {
        self.phi_sq_a - self.g * self.phi_sq_b
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticReport {
    pub theta_eta: f64,
    pub weights: [f64; 4],
    pub status: NodeStatus,
    /// Smallest pairwise node gap relative to the largest node.
    pub min_gap: f64,
    pub constraints: Vec<Relation>,
    /// Direction angles `Θ_ξ` at which `φ` must vanish if all four moments do.
    pub forced_zero: Vec<((u8, u8), f64)>,
    pub pair_relations: Vec<PairRelation>,
    /// Unknowns solved from the supplied moments (distinct nodes only).
    pub recovered_z: Option<[Complex64; 4]>,
    /// `|φ|` at the four `Θ_ξ` implied by `recovered_z`.
    pub recovered_phi_abs: Option<[f64; 4]>,
    pub moments: [Complex64; 4],
    pub moments_vanish: bool,
}

/// Unknowns read off one asymptotic expansion, in node order.
fn ordered_terms(asym: &Asymptotic) -> Result<[crate::oscillatory::AsympTerm; 4]> {
    let mut out = Vec::with_capacity(4);
    for (j, l) in INDICES {
        let t = asym
            .terms
            .iter()
            .find(|t| t.j == j && t.l == l)
            .ok_or_else(|| Error::InvalidInput(format!("missing stationary term ({j},{l})")))?;
        out.push(*t);
    }
    Ok([out[0], out[1], out[2], out[3]])
}

/// Builds the Vandermonde system from expansions of `ℐ^{(N)}`, `N = 0..3`, at
/// one probe direction and reports what it forces on `φ`.
///
/// Node gaps are measured relative to `max(length, max |f|)`; pass the largest
/// boundary radius so that directions where every weight is nearly zero are
/// recognised as fully coincident.
pub fn density_diagnostic(
    density: &Density,
    k: f64,
    sqrt_q: f64,
    length: f64,
    theta_eta: f64,
    asym: &[Asymptotic],
) -> Result<DiagnosticReport> {
    if asym.len() != 4 {
        return Err(Error::InvalidInput(format!("need expansions for N = 0..3, got {}", asym.len())));
    }
    let terms = ordered_terms(&asym[0])?;
    let weights = terms.map(|t| t.weight);
    let mut moments = [Complex64::new(0.0, 0.0); 4];
    for (n, a) in asym.iter().enumerate() {
        let pre = Complex64::new(0.0, k * sqrt_q).powu(n as u32) * (2.0 * PI / k);
        moments[n] = a.value / pre;
    }

    let scale = weights.iter().fold(length.abs(), |m, x| m.max(x.abs()));
    let mut min_gap = f64::INFINITY;
    for i in 0..4 {
        for j in i + 1..4 {
            min_gap = min_gap.min((weights[i] - weights[j]).abs() / scale);
        }
    }
    let status = if min_gap <= NODE_TOL {
        NodeStatus::Coincident
    } else if min_gap <= NEAR_TOL {
        NodeStatus::NearDegenerate
    } else {
        NodeStatus::Distinct
    };

    let groups = groups_at_scale(weights, NODE_TOL, scale);
    if groups.iter().any(|g| g.len() > 2) {
        return Err(Error::DegenerateSet(format!("three or more coincident nodes {weights:?}")));
    }
    let z_scale: f64 = terms.iter().map(|t| t.z.norm() * (1.0 + t.weight.abs()).powi(3)).sum();
    let moments_vanish = moments.iter().all(|m| m.norm() <= 1e-12 * z_scale.max(f64::MIN_POSITIVE));

    let mut report = DiagnosticReport {
        theta_eta,
        weights,
        status,
        min_gap,
        constraints: Vec::new(),
        forced_zero: Vec::new(),
        pair_relations: Vec::new(),
        recovered_z: None,
        recovered_phi_abs: None,
        moments,
        moments_vanish,
    };
    if status == NodeStatus::NearDegenerate {
        return Ok(report);
    }
    report.constraints = groups.iter().cloned().map(Relation).collect();
    report.constraints.sort();
    for g in &groups {
        let a = &terms[g[0]];
        match g.as_slice() {
            [_] => report.forced_zero.push(((a.j, a.l), a.theta_xi)),
            [_, ib] => {
                let b = &terms[*ib];
                report.pair_relations.push(PairRelation {
                    a: (a.j, a.l),
                    b: (b.j, b.l),
                    theta_a: a.theta_xi,
                    theta_b: b.theta_xi,
                    g: (b.scale / a.scale).powi(2),
                    phi_sq_a: density.eval(a.theta_xi).norm_sqr(),
                    phi_sq_b: density.eval(b.theta_xi).norm_sqr(),
                });
            }
            _ => unreachable!(),
        }
    }
    if status == NodeStatus::Distinct {
        let z = solve_vandermonde(weights, moments)?;
        let mut phi = [0.0; 4];
        for i in 0..4 {
            phi[i] = z[i].norm() / terms[i].scale;
        }
        report.recovered_z = Some(z);
        report.recovered_phi_abs = Some(phi);
    }
    Ok(report)
}

/// Which pairing of equal weights the sign law selects on a star medium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingPattern {
    /// `f11 = f21`, `f22 = f12`; `ρ'` at the `(1,2)` point has the sign of `ρ'(t)`.
    Cross,
    /// `f11 = f12`, `f22 = f21`; opposite signs.
    Straight,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternReport {
    pub t: f64,
    pub pattern: PairingPattern,
    /// `sgn ρ'` at `t` and at the `(1,2)` and `(2,1)` points.
    pub slope_signs: [i8; 3],
    /// Weight differences of the two selected pairs.
    pub weight_gaps: [f64; 2],
    pub relations: [PairRelation; 2],
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Evaluates the weight-pairing pattern chosen by the sign law and its
/// `|φ|² = G|φ|²` relations for the supplied density.
pub fn sign_law_pattern(solver: &PointSolver, density: &Density, t: f64) -> Result<PatternReport> {
    let points = solver.nondegenerate_points(t)?;
    let profile = &solver.medium().profile;
    let get = |j: u8, l: u8| {
        points
            .iter()
            .find(|p| p.j == j && p.l == l)
            .ok_or_else(|| Error::InvalidInput(format!("missing stationary point ({j},{l})")))
    };
    let (p11, p12, p21, p22) = (get(1, 1)?, get(1, 2)?, get(2, 1)?, get(2, 2)?);
    let s0 = sign(profile.eval(t).log_d1);
    let s12 = sign(profile.eval(p12.theta).log_d1);
    let s21 = sign(profile.eval(p21.theta).log_d1);
    let pattern = if s12 == s0 { PairingPattern::Cross } else { PairingPattern::Straight };
    let (pairs, gaps) = match pattern {
        PairingPattern::Cross => ([(p11, p21), (p22, p12)], [p11.weight - p21.weight, p22.weight - p12.weight]),
        PairingPattern::Straight => ([(p11, p12), (p22, p21)], [p11.weight - p12.weight, p22.weight - p21.weight]),
    };
    let scale = |p: &crate::stationary::StationaryPoint| p.amplitude.abs() / p.hess_det.abs().sqrt();
    let rel = |(a, b): (&crate::stationary::StationaryPoint, &crate::stationary::StationaryPoint)| PairRelation {
        a: (a.j, a.l),
        b: (b.j, b.l),
        theta_a: a.theta_xi,
        theta_b: b.theta_xi,
        g: (scale(b) / scale(a)).powi(2),
        phi_sq_a: density.eval(a.theta_xi).norm_sqr(),
        phi_sq_b: density.eval(b.theta_xi).norm_sqr(),
    };
    Ok(PatternReport {
        t,
        pattern,
        slope_signs: [s0, s12, s21],
        weight_gaps: gaps,
        relations: [rel(pairs[0]), rel(pairs[1])],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rels(v: &[&[usize]]) -> Vec<Relation> {
        let mut r: Vec<Relation> = v.iter().map(|x| Relation(x.to_vec())).collect();
        r.sort();
        r
    }

    #[test]
    fn lemma_examples() {
        let c = classify_null(&VanderInput::new([2.0, -1.0, 1.0, -3.0]).unwrap());
        assert_eq!(c.case, NullCase::Nonsingular);
        assert_eq!(c.null_dim(), 0);
        let c = classify_null(&VanderInput::new([1.0, -2.0, 1.0, -3.0]).unwrap());
        assert_eq!(c.case, NullCase::Pair1121Only);
        assert_eq!(c.constraints, rels(&[&[0, 2], &[1], &[3]]));
        let c = classify_null(&VanderInput::new([1.0, 0.0, 0.0, -1.0]).unwrap());
        assert_eq!(c.case, NullCase::ZeroColumnPair);
        assert_eq!(c.constraints, rels(&[&[1, 2], &[0], &[3]]));
    }

    #[test]
    fn sign_pattern_rejected() {
        assert!(VanderInput::new([-1.0, -2.0, 1.0, -3.0]).is_err());
        assert!(VanderInput::new([1.0, 0.0, 0.5, -3.0]).is_err());
        assert!(VanderInput::new([1.0, 0.5, 0.5, -3.0]).is_err());
    }

    #[test]
    fn grouping_agrees_with_lemma() {
        for a in [[2.0, -1.0, 1.0, -3.0], [1.0, -2.0, 1.0, -3.0], [1.0, 0.0, 0.0, -1.0], [1.0, -1.0, 1.0, -1.0]] {
            let c = classify_null(&VanderInput::new(a).unwrap());
            assert_eq!(c.constraints, null_constraints(a));
        }
    }

    #[test]
    fn solve_round_trip() {
        let nodes = [0.7, -0.2, 0.3, -0.9];
        let z =
            [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.1), Complex64::new(0.0, -1.0), Complex64::new(3.0, 0.0)];
        let back = solve_vandermonde(nodes, synthesize_moments(nodes, z)).unwrap();
        for (a, b) in back.iter().zip(&z) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(solve_vandermonde([1.0, 1.0, 0.0, -1.0], [Complex64::new(0.0, 0.0); 4]).is_err());
    }
}
