//! Regularized Faddeev Green's function at zero energy.
//!
//! `g^r(z,λ) = (1/16π) e^{-iλz}(Ei(iλz) + Ei(-iλ̄z̄)) - (1/16π)(1 + X(z,λ)) 𝒢(λ)`
//! with `X(z,λ) = exp(-iλz - iλ̄z̄)` and
//! `𝒢(λ) = ¼(e^{-iλ} + e^{iλ̄})(Ei(iλ) + Ei(-iλ̄))`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};
use crate::special_functions::{ei_series_sum, ei_sym, ei_sym_scaled, EULER_GAMMA};

pub const INV_16PI: f64 = 1.0 / (16.0 * PI);
const INV_8PI: f64 = 1.0 / (8.0 * PI);

/// Below this value of `|λz|` the series form of `g^r` is used.
pub const SERIES_SEAM: f64 = 0.5;
/// Below this `|λ|` the λ-dependent logarithm is grouped with its
/// (vanishing) coefficient instead of being cancelled against `𝒢(λ)`.
const GROUPING_RADIUS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSplit {
    /// Coefficient of `ln|z|` near `z = 0`; always `1/(8π)`.
    pub log_coeff: f64,
    /// `lim_{z→0} g^r(z,λ) - log_coeff·ln|z|`; real.
    pub remainder_at_zero: Complex64,
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

fn nonzero(what: &str, z: Complex64) -> Result<()> {
    ensure_finite(what, z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain(format!("{what} must be nonzero")));
    }
    Ok(())
}

/// `exp(-iλz - iλ̄z̄) = exp(-2i Re(λz))`.
pub fn x_phase(z: Complex64, lambda: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, -2.0 * (lambda * z).re)
}

/// `½ e^{Im λ} cos(Re λ)`, the real prefactor `¼(e^{-iλ} + e^{iλ̄})`.
fn half_cos(lambda: Complex64) -> f64 {
    0.5 * lambda.im.exp() * lambda.re.cos()
}

pub fn g_cal(lambda: Complex64) -> Result<f64> {
    nonzero("lambda", lambda)?;
    let w = i() * lambda;
    if lambda.norm() < 40.0 {
        Ok(half_cos(lambda) * ei_sym(w)?)
    } else {
        let pre = 0.25 * (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, 2.0 * lambda.re));
        Ok((pre * ei_sym_scaled(w)?).re)
    }
}

/// Closed form of `∂𝒢/∂λ̄`:
/// `(i/4) e^{iλ̄}(Ei(iλ)+Ei(-iλ̄)) + ¼(e^{-iλ}+e^{iλ̄}) e^{-iλ̄}/λ̄`.
pub fn g_cal_dbar(lambda: Complex64) -> Result<Complex64> {
    nonzero("lambda", lambda)?;
    let s = ei_sym_scaled(i() * lambda)?;
    let first = 0.25 * i() * Complex64::from_polar(1.0, 2.0 * lambda.re) * s;
    let second = (1.0 + Complex64::from_polar(1.0, -2.0 * lambda.re)) / (4.0 * lambda.conj());
    Ok(first + second)
}

pub fn green_reg(z: Complex64, lambda: Complex64) -> Result<Complex64> {
    nonzero("z", z)?;
    ensure_finite("lambda", lambda)?;
    if lambda == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(INV_16PI * (z.norm_sqr()).ln(), 0.0));
    }
    let w = i() * lambda * z;
    let x = x_phase(z, lambda);
    if w.norm() > SERIES_SEAM {
        return Ok(INV_16PI * (ei_sym_scaled(w)? - (1.0 + x) * g_cal(lambda)?));
    }
    let ew = (-w).exp();
    let sigma_w = ei_series_sum(w).re;
    if lambda.norm() <= GROUPING_RADIUS {
        let c = half_cos(lambda);
        let log_lambda = 2.0 * EULER_GAMMA + 2.0 * lambda.norm().ln();
        let sigma_l = ei_series_sum(i() * lambda).re;
        let grouped = log_lambda * (ew - (1.0 + x) * c);
        let rest = ew * (2.0 * z.norm().ln() + 2.0 * sigma_w) - (1.0 + x) * (2.0 * c * sigma_l);
        Ok(INV_16PI * (grouped + rest))
    } else {
        let head = ew * (2.0 * EULER_GAMMA + 2.0 * w.norm().ln() + 2.0 * sigma_w);
        Ok(INV_16PI * (head - (1.0 + x) * g_cal(lambda)?))
    }
}

/// `∂g^r/∂λ̄ = (1/16πλ̄)X + (iz̄/16π)X𝒢 - (1/16π)(1+X)∂𝒢/∂λ̄`.
pub fn green_reg_dbar(z: Complex64, lambda: Complex64) -> Result<Complex64> {
    nonzero("z", z)?;
    nonzero("lambda", lambda)?;
    let x = x_phase(z, lambda);
    let g = g_cal(lambda)?;
    let dg = g_cal_dbar(lambda)?;
    Ok(INV_16PI * (x / lambda.conj() + i() * z.conj() * x * g - (1.0 + x) * dg))
}

pub fn log_split(lambda: Complex64) -> Result<KernelSplit> {
    ensure_finite("lambda", lambda)?;
    Ok(KernelSplit { log_coeff: INV_8PI, remainder_at_zero: Complex64::new(remainder_at_zero(lambda)?, 0.0) })
}

fn remainder_at_zero(lambda: Complex64) -> Result<f64> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Ok(0.0);
    }
    let log_lambda = 2.0 * EULER_GAMMA + 2.0 * lambda.norm().ln();
    if lambda.norm() <= GROUPING_RADIUS {
        let c = half_cos(lambda);
        let sigma_l = ei_series_sum(i() * lambda).re;
        Ok(INV_16PI * (log_lambda * (1.0 - 2.0 * c) - 4.0 * c * sigma_l))
    } else {
        Ok(INV_16PI * (log_lambda - 2.0 * g_cal(lambda)?))
    }
}

/// `∂/∂λ̄` of `remainder_at_zero`, equal to `∂g^r/∂λ̄` at `z = 0`.
pub fn remainder_at_zero_dbar(lambda: Complex64) -> Result<Complex64> {
    nonzero("lambda", lambda)?;
    Ok(INV_16PI / lambda.conj() - INV_8PI * g_cal_dbar(lambda)?)
}
