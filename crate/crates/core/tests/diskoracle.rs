use nonscatter_core::diskoracle::{
    bessel_j, bessel_j_all, bessel_jp, cauchy_residual, disk_determinant, find_nonscattering, DiskMedium,
};
use nonscatter_core::numeric::{bisect, TAU};
use nonscatter_core::oscillatory::{quad_i, Density, QuadratureSpec};
use nonscatter_core::{Medium, RadiusProfile};

/// `J_n(x) = (1/2π) ∫ cos(nt − x sin t) dt` by the periodic trapezoid rule.
fn bessel_integral(n: i64, x: f64) -> f64 {
    let m = 1024;
    (0..m)
        .map(|i| {
            let t = TAU * i as f64 / m as f64;
            (n as f64 * t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / m as f64
}

#[test]
fn bessel_matches_integral_representation() {
    let mut worst = 0.0f64;
    for n in 0..=10 {
        for i in 0..=200 {
            let x = 50.0 * i as f64 / 200.0;
            worst = worst.max((bessel_j(n, x).unwrap() - bessel_integral(n, x)).abs());
        }
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn bessel_accurate_at_high_order_and_argument() {
    let mut worst = 0.0f64;
    for n in [20, 40, 59, 60] {
        for x in [7.9, 8.0, 30.0, 59.0, 61.0, 120.0, 200.0] {
            worst = worst.max((bessel_j(n, x).unwrap() - bessel_integral(n, x)).abs());
        }
    }
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn table_and_single_values_agree() {
    for x in [0.5, 9.0, 75.0] {
        let all = bessel_j_all(30, x).unwrap();
        for (n, v) in all.iter().enumerate() {
            assert!((v - bessel_j(n as i64, x).unwrap()).abs() < 1e-14);
        }
    }
}

#[test]
fn first_zero_of_j0() {
    let z = bisect(|x| bessel_j(0, x).unwrap(), 2.0, 3.0, 1e-14, "J0").unwrap();
    assert!((z - 2.404_825_557_695_773).abs() < 1e-12);
}

#[test]
fn three_term_recurrence() {
    for n in 1..30 {
        for i in 1..=60 {
            let x = 0.5 * i as f64;
            let lhs = bessel_j(n + 1, x).unwrap();
            let rhs = 2.0 * n as f64 / x * bessel_j(n, x).unwrap() - bessel_j(n - 1, x).unwrap();
            assert!((lhs - rhs).abs() < 1e-10, "n={n} x={x}");
        }
    }
}

#[test]
fn derivative_is_finite_difference() {
    for n in [0, 1, 5] {
        let x = 6.3;
        let h = 1e-5;
        let fd = (bessel_j(n, x + h).unwrap() - bessel_j(n, x - h).unwrap()) / (2.0 * h);
        assert!((fd - bessel_jp(n, x).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn determinant_vanishes_near_zero_wavenumber() {
    let d = DiskMedium::new(1.0, 0.5).unwrap();
    let a = disk_determinant(&d, 0, 1e-6).unwrap().abs();
    let b = disk_determinant(&d, 0, 1e-9).unwrap().abs();
    assert!(a < 1e-6 && b < 2e-3 * a);
}

#[test]
fn mode_one_zeros_and_residuals() {
    let d = DiskMedium::new(1.0, 0.5).unwrap();
    // only two sign changes lie below k = 30; the third is near 31.3
    assert_eq!(find_nonscattering(&d, 1, 30.0).unwrap().zeros.len(), 2);
    let zs = find_nonscattering(&d, 1, 40.0).unwrap();
    assert!(zs.zeros.len() >= 3, "{:?}", zs.zeros);
    assert!((zs.zeros[0] - 11.291_52).abs() < 1e-4);
    assert!(zs.zeros.windows(2).all(|w| w[1] - w[0] > 1e-6));
    for &k in &zs.zeros {
        let lo = disk_determinant(&d, 1, k - 1e-6).unwrap();
        let hi = disk_determinant(&d, 1, k + 1e-6).unwrap();
        assert!(lo * hi < 0.0);
        assert!(cauchy_residual(&d, 1, k).unwrap() < 1e-8, "k = {k}");
    }
    // away from a zero the two Cauchy data are far from proportional
    let off = 0.5 * (zs.zeros[0] + zs.zeros[1]);
    assert!(cauchy_residual(&d, 1, off).unwrap() > 1e-3);
}

#[test]
fn boundary_integral_dips_at_zeros_and_is_rotation_invariant() {
    let d = DiskMedium::new(1.0, 0.5).unwrap();
    let k0 = find_nonscattering(&d, 1, 12.0).unwrap().zeros[0];
    let m = Medium::new(0.5, RadiusProfile::circle(1.0).unwrap()).unwrap();
    let phi = Density::mode(1);
    let at = |k: f64, t: f64| quad_i(&m, &phi, k, t, QuadratureSpec::default()).unwrap().value.norm();
    let peak = (0..=20).map(|i| at(k0 - 0.5 + 0.05 * i as f64, 0.0)).fold(0.0, f64::max);
    assert!(at(k0, 0.0) < 0.05 * peak);
    let k = k0 + 0.3;
    let base = at(k, 0.0);
    for t in [0.7, 2.0, 4.4] {
        assert!((at(k, t) - base).abs() < 1e-6 * base);
    }
}
