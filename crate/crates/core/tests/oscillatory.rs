use std::f64::consts::PI;

use nonscatter_core::diskoracle::bessel_j;
use nonscatter_core::geometry::boundary_frame;
use nonscatter_core::numeric::{dot, perp, unit, TAU};
use nonscatter_core::oscillatory::{
    asymp_i, auto_nodes, boundary_identity, herglotz_eval, quad_i, quad_i_derivs, required_eta_grid, triple_quad,
    Density, IntegralKernel, QuadratureSpec,
};
use nonscatter_core::{Medium, RadiusProfile};
use num_complex::Complex64;

fn ellipse(e: f64, q: f64) -> Medium {
    Medium::new(q, RadiusProfile::ellipse_focus(1.0, e).unwrap()).unwrap()
}

fn star() -> Medium {
    Medium::new(0.5, RadiusProfile::log_fourier(vec![[2.0, 0.0, -0.05]]).unwrap()).unwrap()
}

fn sample_density() -> Density {
    Density::from_coeffs(vec![
        (-1, Complex64::new(0.3, -0.1)),
        (0, Complex64::new(0.5, 0.0)),
        (2, Complex64::new(0.0, 0.8)),
    ])
}

/// Trapezoid rule over `[0, 2π)²` for an arbitrary integrand in `(θ, Θ_ξ)`.
fn direct<F: Fn(f64, f64) -> Complex64>(n: usize, f: F) -> Complex64 {
    let h = TAU / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for m in 0..n {
            acc += f(h * i as f64, h * m as f64);
        }
    }
    acc * h * h
}

#[test]
fn herglotz_matches_jacobi_anger() {
    let k = 7.5;
    for n in [0i64, 1, 3, -2] {
        let d = Density::mode(n);
        for (r, tx) in [(0.4f64, 0.3f64), (1.7, 2.2), (3.0, -1.0)] {
            let x = [r * tx.cos(), r * tx.sin()];
            let got = herglotz_eval(&d, k, x).unwrap();
            let want = Complex64::new(0.0, 1.0).powi(n as i32)
                * bessel_j(n, k * r).unwrap()
                * Complex64::cis(n as f64 * tx)
                * TAU;
            assert!((got - want).norm() < 1e-10, "n={n} r={r}: {got} vs {want}");
        }
    }
}

#[test]
fn herglotz_series_expansion() {
    let d = sample_density();
    let (k, r, tx) = (12.0, 1.3, 0.9f64);
    let x = [r * tx.cos(), r * tx.sin()];
    let got = herglotz_eval(&d, k, x).unwrap();
    let mut want = Complex64::new(0.0, 0.0);
    for &(n, c) in d.coeffs() {
        want +=
            c * Complex64::new(0.0, 1.0).powi(n as i32) * bessel_j(n, k * r).unwrap() * Complex64::cis(n as f64 * tx);
    }
    want *= TAU;
    assert!((got - want).norm() < 1e-8 * want.norm());
}

#[test]
fn plane_wave_laplacian() {
    // w = e^{ik√q η·x}: second differences approximate -k²q·w
    let (k, q, t) = (3.0, 0.4f64, 0.7);
    let eta = unit(t);
    let w = |x: [f64; 2]| Complex64::cis(k * q.sqrt() * dot(eta, x));
    let x0 = [0.3, -0.2];
    let h = 1e-3;
    let lap = (w([x0[0] + h, x0[1]]) + w([x0[0] - h, x0[1]]) + w([x0[0], x0[1] + h]) + w([x0[0], x0[1] - h])
        - w(x0) * 4.0)
        / (h * h);
    assert!((lap + w(x0) * (k * k * q)).norm() < 1e-5);
}

#[test]
fn quadrature_converges_past_threshold() {
    let d = sample_density();
    for m in [ellipse(0.5, 0.36), star()] {
        let k = 25.0;
        let n = auto_nodes(&m, k);
        let a = quad_i(&m, &d, k, 0.4, QuadratureSpec::default()).unwrap();
        assert!(!a.under_resolved());
        let b = quad_i(&m, &d, k, 0.4, QuadratureSpec { nodes_per_dim: Some(2 * n) }).unwrap();
        assert!((a.value - b.value).norm() < 1e-8 * b.value.norm());
    }
}

#[test]
fn quad_is_periodic_in_probe_angle() {
    let m = star();
    let d = sample_density();
    let a = quad_i(&m, &d, 10.0, 1.2, QuadratureSpec::default()).unwrap().value;
    let b = quad_i(&m, &d, 10.0, 1.2 + TAU, QuadratureSpec::default()).unwrap().value;
    assert!((a - b).norm() < 1e-11 * a.norm());
}

#[test]
fn boundary_identity_equals_ik_quad() {
    let d = sample_density();
    for m in [ellipse(0.5, 0.36), star(), ellipse(0.3, 1.5)] {
        for (k, t) in [(20.0, 0.3), (35.0, 2.0)] {
            let lhs = boundary_identity(&m, &d, k, t, QuadratureSpec::default()).unwrap().value;
            let rhs = quad_i(&m, &d, k, t, QuadratureSpec::default()).unwrap().value * Complex64::new(0.0, k);
            assert!((lhs - rhs).norm() < 1e-8 * rhs.norm(), "{lhs} vs {rhs}");
        }
    }
}

fn first_derivative_direct(m: &Medium, d: &Density, k: f64, t: f64, with_i: bool) -> Complex64 {
    let sq = m.sqrt_q();
    let eta = unit(t);
    let se = [sq * eta[0], sq * eta[1]];
    let n = auto_nodes(m, k);
    let frames: Vec<_> = (0..n).map(|i| boundary_frame(&m.profile, TAU * i as f64 / n as f64).unwrap()).collect();
    let corr = if with_i { Complex64::new(0.0, 1.0 / k) } else { Complex64::new(1.0 / k, 0.0) };
    direct(n, |th, txi| {
        let fr = &frames[(th / (TAU / n as f64)).round() as usize % n];
        let xi = unit(txi);
        let psi = dot([se[0] + xi[0], se[1] + xi[1]], fr.y);
        let amp = -dot([se[0] - xi[0], se[1] - xi[1]], fr.y_prime_perp);
        let inner = Complex64::new(dot(perp(eta), fr.y) * amp, 0.0) + corr * dot(eta, fr.y_prime);
        Complex64::new(0.0, k * sq) * inner * d.eval(txi) * Complex64::cis(k * psi)
    })
}

#[test]
fn first_derivative_matches_direct_integrand() {
    let m = star();
    let d = sample_density();
    let k = 12.0;
    let grid = required_eta_grid(&m, k, 2).max(64);
    let table = quad_i_derivs(&m, &d, k, grid, 2, QuadratureSpec::default()).unwrap();
    for i in [0, grid / 5, grid / 2] {
        let t = table.theta_eta[i];
        let want = first_derivative_direct(&m, &d, k, t, true);
        assert!((table.values[1][i] - want).norm() < 1e-6 * want.norm());
        let n0 = quad_i(&m, &d, k, t, QuadratureSpec::default()).unwrap().value;
        assert!((table.values[0][i] - n0).norm() < 1e-12 * n0.norm());
    }
}

#[test]
fn derivative_display_without_imaginary_unit_disagrees() {
    let m = star();
    let d = sample_density();
    let k = 12.0;
    let grid = required_eta_grid(&m, k, 1).max(64);
    let table = quad_i_derivs(&m, &d, k, grid, 1, QuadratureSpec::default()).unwrap();
    let t = table.theta_eta[grid / 5];
    let literal = first_derivative_direct(&m, &d, k, t, false);
    assert!((table.values[1][grid / 5] - literal).norm() > 1e-3 * literal.norm());
}

#[test]
fn second_derivative_matches_finite_difference() {
    let m = ellipse(0.5, 0.36);
    let d = sample_density();
    let k = 15.0;
    let grid = required_eta_grid(&m, k, 2).max(64);
    let table = quad_i_derivs(&m, &d, k, grid, 2, QuadratureSpec::default()).unwrap();
    let ker = IntegralKernel::new(&m, &d, k, QuadratureSpec::default()).unwrap();
    let h = 1e-3;
    for i in [1, grid / 3] {
        let t = table.theta_eta[i];
        let fd = (ker.value(t + h).value - ker.value(t).value * 2.0 + ker.value(t - h).value) / (h * h);
        let want = table.values[2][i];
        assert!((fd - want).norm() < 1e-5 * want.norm(), "{fd} vs {want}");
    }
}

#[test]
fn stationary_phase_error_decays() {
    let m = ellipse(0.5, 0.36);
    let d = Density::mode(1);
    let t = PI / 3.0;
    let errs: Vec<f64> = [40.0, 80.0, 160.0]
        .iter()
        .map(|&k| {
            let q = quad_i(&m, &d, k, t, QuadratureSpec::default()).unwrap().value;
            let a = asymp_i(&m, &d, k, t, 0).unwrap().value;
            (q - a).norm()
        })
        .collect();
    let xs = [40f64.ln(), 80f64.ln(), 160f64.ln()];
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let xm = xs.iter().sum::<f64>() / 3.0;
    let ym = ys.iter().sum::<f64>() / 3.0;
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum::<f64>()
        / xs.iter().map(|x| (x - xm).powi(2)).sum::<f64>();
    assert!((-2.7..=-1.3).contains(&slope), "slope {slope}, errors {errs:?}");
}

#[test]
fn triple_with_unit_testfn_is_trapezoid_of_quad() {
    let m = star();
    let d = sample_density();
    let k = 6.0;
    let one = |_t: f64| Complex64::new(1.0, 0.0);
    let got = triple_quad(&m, &d, k, &one, Some(32), QuadratureSpec::default()).unwrap().value;
    let want: Complex64 = (0..32)
        .map(|i| quad_i(&m, &d, k, TAU * i as f64 / 32.0, QuadratureSpec::default()).unwrap().value)
        .sum::<Complex64>()
        * (TAU / 32.0);
    assert!((got - want).norm() < 1e-11 * want.norm());
    let zero = triple_quad(&m, &Density::zero(), k, &one, Some(32), QuadratureSpec::default()).unwrap();
    assert_eq!(zero.value.norm(), 0.0);
}

/// Smooth bump of half-width `w` centred at angle 0.
fn bump(w: f64) -> impl Fn(f64) -> Complex64 + Sync {
    move |t: f64| {
        let x = nonscatter_core::numeric::angle_diff(t, 0.0) / w;
        if x.abs() >= 1.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new((1.0 - 1.0 / (1.0 - x * x)).exp(), 0.0)
        }
    }
}

#[test]
fn triple_integral_scales_like_k_to_minus_three_halves() {
    let m = ellipse(0.5, 0.36);
    let d = Density::mode(1);
    let g = bump(1.5);
    let ks = [20.0 * PI, 40.0 * PI];
    let vals: Vec<(Complex64, Complex64)> = ks
        .iter()
        .map(|&k| {
            let q = triple_quad(&m, &d, k, &g, None, QuadratureSpec::default()).unwrap().value;
            let a = nonscatter_core::oscillatory::asymp_triple(&m, &d, k, &g).unwrap();
            (q, a)
        })
        .collect();
    let slope = (vals[1].0.norm() / vals[0].0.norm()).ln() / 2f64.ln();
    assert!((slope + 1.5).abs() < 0.3, "slope {slope}, {vals:?}");
    // leading-order agreement improves with k
    let rel: Vec<f64> = vals.iter().map(|(q, a)| (q - a).norm() / a.norm()).collect();
    assert!(rel[1] < 0.6 * rel[0] && rel[1] < 0.2, "{rel:?}");
}
