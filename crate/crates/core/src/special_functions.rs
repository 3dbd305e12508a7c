//! Exponential integral on the complex plane.
//!
//! `ei(z) = γ + ln(-z) + Σ zⁿ/(n·n!)` with the principal logarithm, so the
//! cut of `ei` lies on the positive real axis. `ei_sym(z) = ei(z) + ei(z̄)`
//! is real and extends continuously across that cut.

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

/// Beyond this modulus the asymptotic expansion is used everywhere.
pub const ASYMPTOTIC_RADIUS: f64 = 40.0;
/// Inside this modulus the power series is used everywhere.
pub const SERIES_RADIUS: f64 = 2.0;
/// Between the two radii the series is also used when `|z| - Re z` is below
/// this bound, i.e. close to the positive real axis where the terms do not
/// cancel badly and where the continued fraction converges slowly.
pub const SERIES_CANCELLATION_BOUND: f64 = 6.0;

const MAX_SERIES_TERMS: usize = 400;
const MAX_CF_ITERATIONS: usize = 20_000;

pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Series,
    ContinuedFraction,
    Asymptotic,
}

pub fn regime(z: Complex64) -> Regime {
    let r = z.norm();
    if r >= ASYMPTOTIC_RADIUS {
        Regime::Asymptotic
    } else if r <= SERIES_RADIUS || r - z.re <= SERIES_CANCELLATION_BOUND {
        Regime::Series
    } else {
        Regime::ContinuedFraction
    }
}

/// `Σ_{n≥1} zⁿ/(n·n!)`.
pub fn ei_series_sum(z: Complex64) -> Complex64 {
    let r = z.norm();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..=MAX_SERIES_TERMS {
        let nf = n as f64;
        term *= z / nf;
        let contrib = term / nf;
        sum += contrib;
        if nf > r && contrib.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// `e^{-z} Ei(z)` away from the series regime.
fn scaled_far(z: Complex64) -> Complex64 {
    match regime(z) {
        Regime::Asymptotic => scaled_asymptotic(z),
        _ => -e1_continued_fraction(-z),
    }
}

fn scaled_asymptotic(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let mut term = inv;
    let mut sum = inv;
    let mut prev = term.norm();
    for k in 1..200 {
        let next = term * (k as f64) * inv;
        let m = next.norm();
        if m >= prev {
            break;
        }
        sum += next;
        term = next;
        prev = m;
        if m <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// `e^{u} E1(u)` by the modified Lentz algorithm.
fn e1_continued_fraction(u: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let tiny = Complex64::new(TINY, 0.0);
    let mut b = u + 1.0;
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..MAX_CF_ITERATIONS {
        let an = -((i * i) as f64);
        b += 2.0;
        let mut den = d * an + b;
        if den.norm() < TINY {
            den = tiny;
        }
        d = den.inv();
        c = b + c.inv() * an;
        if c.norm() < TINY {
            c = tiny;
        }
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h
}

fn check_argument(z: Complex64) -> Result<()> {
    ensure_finite("z", z)?;
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("Ei is singular at z = 0".into()));
    }
    Ok(())
}

fn finite_or_overflow(z: Complex64, value: Complex64) -> Result<Complex64> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("Ei({z}) overflows")))
    }
}

/// Principal `Ei(z) = -E1(-z)`, cut along the positive real axis.
pub fn ei(z: Complex64) -> Result<Complex64> {
    check_argument(z)?;
    if z.im == 0.0 && z.re > 0.0 {
        return Err(Error::Domain(format!(
            "z = {} lies on the branch cut of Ei (positive real axis)",
            z.re
        )));
    }
    let value = match regime(z) {
        Regime::Series => EULER_GAMMA + (-z).ln() + ei_series_sum(z),
        _ => {
            if z.re < -745.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            z.exp() * scaled_far(z)
        }
    };
    finite_or_overflow(z, value)
}

/// `Ei(z) + Ei(z̄)`, real and continuous across the positive real axis.
pub fn ei_sym(z: Complex64) -> Result<f64> {
    check_argument(z)?;
    let value = match regime(z) {
        Regime::Series => 2.0 * EULER_GAMMA + 2.0 * z.norm().ln() + 2.0 * ei_series_sum(z).re,
        _ => {
            if z.re < -745.0 {
                return Ok(0.0);
            }
            2.0 * (z.exp() * scaled_far(z)).re
        }
    };
    finite_or_overflow(z, Complex64::new(value, 0.0)).map(|v| v.re)
}

/// `e^{-z}(Ei(z) + Ei(z̄))`, which stays bounded by `C/|z|` for large `|z|`
/// and never overflows.
pub fn ei_sym_scaled(z: Complex64) -> Result<Complex64> {
    check_argument(z)?;
    match regime(z) {
        Regime::Series => Ok((-z).exp() * ei_sym(z)?),
        _ => {
            let f = scaled_far(z);
            let phase = Complex64::from_polar(1.0, -2.0 * z.im);
            Ok(f + phase * f.conj())
        }
    }
}
