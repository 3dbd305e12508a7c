//! Library values against independent oracles.

mod common;

use nvscatter::discretization::{cell_average, log_cell_average};
use nvscatter::special_functions::{ei, ei_sym, euler_gamma, regime, Regime};
use nvscatter::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn fixed_point_oracle_basics() {
    let pi = common::pi().to_f64();
    assert_eq!(pi, std::f64::consts::PI);
    let ln10 = common::ln(&common::Fx::from_f64(10.0)).to_f64();
    assert_eq!(ln10, std::f64::consts::LN_10);
    let a = common::atan2(&common::Fx::from_f64(-2.0), &common::Fx::from_f64(-1.0)).to_f64();
    assert!((a - (-2.0f64).atan2(-1.0)).abs() < 1e-15);
}

#[test]
fn ei_minus_one() {
    let o = common::ei_oracle(c(-1.0, 0.0));
    assert!((o.re - (-0.219_383_934_395_520_27)).abs() < 1e-15);
    assert_eq!(o.im, 0.0);
    let v = ei(c(-1.0, 0.0)).unwrap();
    assert!(rel(v, o) < 1e-13, "{v} vs {o}");
}

#[test]
fn ei_matches_extended_precision_series_in_every_regime() {
    let pts = [
        c(0.5, 0.5),
        c(1.0, 1.0),
        c(-1.5, 0.2),
        c(5.0, 3.0),
        c(2.0, 8.0),
        c(-10.0, 20.0),
        c(-20.0, 0.5),
        c(30.0, -10.0),
        c(-30.0, 5.0),
        c(12.0, -35.0),
        c(45.0, 10.0),
        c(-41.0, 0.5),
        c(0.5, 50.0),
        c(-55.0, -20.0),
    ];
    let mut seen = [false; 3];
    for &z in &pts {
        seen[match regime(z) {
            Regime::Series => 0,
            Regime::ContinuedFraction => 1,
            Regime::Asymptotic => 2,
        }] = true;
        let want = common::ei_oracle(z);
        let got = ei(z).unwrap();
        assert!(rel(got, want) < 1e-12, "z={z}: {got} vs {want}, rel {}", rel(got, want));
    }
    assert_eq!(seen, [true; 3]);
}

#[test]
fn ei_sym_matches_oracle_on_and_off_the_positive_axis() {
    for &z in &[c(1.0, 0.0), c(3.0, 0.0), c(25.0, 0.0), c(0.7, -0.2), c(-4.0, 4.0), c(1e-8, 0.0)] {
        let want = common::ei_sym_oracle(z);
        let got = ei_sym(z).unwrap();
        assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "z={z}: {got} vs {want}");
    }
    let one = common::ei_sym_oracle(c(1.0, 0.0));
    assert!((one - 3.790_235_632_711_873_5).abs() < 1e-15);
}

#[test]
fn gamma_matches_defining_integral() {
    let q = common::gamma_by_quadrature();
    assert!((q - euler_gamma()).abs() < 1e-14, "{q}");
    assert!((common::gamma().to_f64() - euler_gamma()).abs() < 1e-16);
}

#[test]
fn ei_of_i_matches_contour_integral() {
    for &z in &[c(0.0, 1.0), c(1.5, -2.0), c(-3.0, 0.5)] {
        let q = common::ei_by_contour(z);
        let v = ei(z).unwrap();
        assert!(rel(v, q) < 1e-12, "z={z}: {v} vs {q}");
    }
}

#[test]
fn log_cell_average_matches_quadrature() {
    for &h in &[0.25, 1.0 / 3.0, 0.5, 1.0, 2.0] {
        let q = common::log_cell_average_by_quadrature(h);
        assert!((log_cell_average(h) - q).abs() < 1e-13, "h={h}");
        let p = cell_average(h, 24, |w| Complex64::new(w.norm().ln(), 0.0)).re;
        assert!((p - q).abs() < 1e-12, "h={h}: product rule {p} vs {q}");
    }
}

#[test]
fn cell_average_of_smooth_function() {
    // Mean of e^{x}cos(y) over [-h/2, h/2]² is (2 sinh(h/2)/h)(2 sin(h/2)/h).
    let h = 0.8;
    let want = (2.0 * (h / 2.0f64).sinh() / h) * (2.0 * (h / 2.0f64).sin() / h);
    let got = cell_average(h, 16, |w| Complex64::new(w.re.exp() * w.im.cos(), 0.0));
    assert!((got.re - want).abs() < 1e-13 && got.im.abs() < 1e-15);
}
