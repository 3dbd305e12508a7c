//! Executable checks of the analytic identities: ∂̄-equations by finite
//! differences, Green's function and Ei properties, HS limits and shift
//! covariance. Every check yields named residuals against tolerances.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discretization::Potential;
use crate::error::{Error, Result};
use crate::green_kernel::{g_cal, g_cal_dbar, green_reg, green_reg_dbar, x_phase, INV_16PI};
use crate::integral_solver::{assemble, evaluate_mu, hs_distance, hs_norm, LambdaSolve, SolverOptions};
use crate::scattering::{spectral_point, vhat0, ScatteringData, COMPONENT_NAMES};
use crate::special_functions::{ei, ei_sym, ei_sym_scaled};
use crate::theorem_algebra::shift_data;

pub const DEFAULT_SEED: u64 = 0x5EED;
pub const DEFAULT_FD_STEP: f64 = 1e-3;
/// ∂̄ checks are restricted to `|λ| ≥` this, where the `1/λ̄` terms stay tame.
pub const MIN_DBAR_LAMBDA: f64 = 0.3;

pub const TOL_ALGEBRAIC: f64 = 1e-12;
pub const TOL_QUADRATURE: f64 = 1e-3;
pub const TOL_FD: f64 = 5e-2;
pub const TOL_DBAR_DET: f64 = 3e-2;
pub const TOL_DBAR_MU: f64 = 5e-2;
pub const TOL_SHIFT_DELTA: f64 = 1e-8;
pub const TOL_EI_DERIVATIVE: f64 = 1e-6;
pub const TOL_DECAY_CONSTANT: f64 = 10.0;
pub const TOL_GREEN_DBAR: f64 = 1e-5;
pub const TOL_RADIUS_SPREAD: f64 = 2.0;

pub const REPORT_HEADER: &str = "check_name,residual,tolerance,pass,context";

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check_name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub context: Vec<(String, String)>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        VerificationReport {
            check_name: name.into(),
            residual,
            tolerance,
            // NaN never passes.
            pass: residual <= tolerance,
            context: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.context.push((key.to_string(), value.to_string()));
        self
    }

    pub fn context_value(&self, key: &str) -> Option<&str> {
        self.context.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn csv_line(&self) -> String {
        let mut cols = vec![
            self.check_name.clone(),
            format!("{:.16e}", self.residual),
            format!("{:.16e}", self.tolerance),
            self.pass.to_string(),
        ];
        cols.extend(self.context.iter().map(|(k, v)| format!("{k}={v}")));
        cols.join(",")
    }
}

pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

fn fmt_c(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn rel_residual(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / (rhs.norm() + 1e-30)
}

/// Central or Richardson-extrapolated difference for ∂̄.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FdScheme {
    #[default]
    Central,
    Richardson,
}

/// `½(∂_{λ₁} + i∂_{λ₂})` by central differences with step `h`.
pub fn fd_dbar<F>(f: F, lambda: Complex64, h: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let dx = (f(lambda + h)? - f(lambda - h)?) / (2.0 * h);
    let dy = (f(lambda + Complex64::new(0.0, h))? - f(lambda - Complex64::new(0.0, h))?) / (2.0 * h);
    Ok(0.5 * (dx + Complex64::i() * dy))
}

fn fd_dbar_scheme<F>(f: F, lambda: Complex64, h: f64, scheme: FdScheme) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    match scheme {
        FdScheme::Central => fd_dbar(&f, lambda, h),
        FdScheme::Richardson => {
            let coarse = fd_dbar(&f, lambda, h)?;
            let fine = fd_dbar(&f, lambda, h / 2.0)?;
            Ok((4.0 * fine - coarse) / 3.0)
        }
    }
}

fn check_dbar_lambda(lambda: Complex64, h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Parameter(format!("finite-difference step must be positive, got {h}")));
    }
    if lambda.norm() < MIN_DBAR_LAMBDA {
        return Err(Error::Domain(format!("∂̄ checks need |λ| ≥ {MIN_DBAR_LAMBDA}, got λ = {lambda}")));
    }
    Ok(())
}

/// Solve at `λ`, turning a condition estimate over the limit into a flag.
fn unflagged(v: &Potential, lambda: Complex64, opts: &SolverOptions) -> Result<LambdaSolve> {
    let s = LambdaSolve::new(v, lambda, opts)?;
    if !(s.condest() <= opts.condition_limit) {
        return Err(Error::Flagged(lambda));
    }
    Ok(s)
}

/// Right side of the determinant ∂̄-equation, from data at `λ`.
pub fn dbar_det_rhs(lambda: Complex64, delta: Complex64, data: &ScatteringData, vhat: f64) -> Result<Complex64> {
    let gc = g_cal(lambda)?;
    let dg = g_cal_dbar(lambda)?;
    let (a1, a2, c1) = (data.a1, data.a2, data.c1);
    let i = Complex64::i();
    let t1 = INV_16PI / lambda.conj() * (vhat - a1.conj());
    let t2 = -INV_16PI * dg * (2.0 * vhat - a1.conj() - a1);
    let t3 = i * INV_16PI * gc * (c1.conj() - a2.conj());
    Ok((t1 + t2 + t3) * delta)
}

pub fn check_dbar_det(v: &Potential, lambda: Complex64, h: f64, scheme: FdScheme, opts: &SolverOptions) -> Result<VerificationReport> {
    check_dbar_lambda(lambda, h)?;
    let lhs = fd_dbar_scheme(|l| Ok(unflagged(v, l, opts)?.delta()), lambda, h, scheme)?;
    let sp = spectral_point(v, lambda, opts)?;
    let rhs = dbar_det_rhs(lambda, sp.delta, &sp.data, vhat0(v))?;
    let res = if v.is_zero() { (lhs - rhs).norm() } else { rel_residual(lhs, rhs) };
    Ok(VerificationReport::new("dbar_det", res, TOL_DBAR_DET)
        .with("lambda", fmt_c(lambda))
        .with("N", v.grid.points_per_side)
        .with("h", h)
        .with("scheme", format!("{scheme:?}"))
        .with("diagonal", opts.diagonal)
        .with("lhs", fmt_c(lhs))
        .with("rhs", fmt_c(rhs)))
}

/// Right side of the `μ₁` ∂̄-equation at `z`.
pub fn dbar_mu_rhs(z: Complex64, lambda: Complex64, mu1: Complex64, mu2: Complex64, data: &ScatteringData) -> Result<Complex64> {
    let gc = g_cal(lambda)?;
    let dg = g_cal_dbar(lambda)?;
    let x = x_phase(z, lambda);
    let i = Complex64::i();
    let xb1 = x * data.b1;
    let first = INV_16PI * (xb1 / lambda.conj() - dg * xb1 - i * gc * x * data.d1) * mu1.conj();
    let second = -INV_16PI * dg * data.a1 * mu1;
    let third = i * INV_16PI * gc * xb1 * mu2.conj();
    Ok(first + second + third)
}

fn mu_at(v: &Potential, lambda: Complex64, order: usize, z: Complex64, opts: &SolverOptions) -> Result<Complex64> {
    let s = unflagged(v, lambda, opts)?;
    evaluate_mu(v, lambda, order, &s.mu(order)?, z)
}

pub fn check_dbar_mu(
    v: &Potential,
    z: Complex64,
    lambda: Complex64,
    h: f64,
    scheme: FdScheme,
    opts: &SolverOptions,
) -> Result<VerificationReport> {
    check_dbar_lambda(lambda, h)?;
    let lhs = fd_dbar_scheme(|l| mu_at(v, l, 1, z, opts), lambda, h, scheme)?;
    let sp = spectral_point(v, lambda, opts)?;
    let m1 = evaluate_mu(v, lambda, 1, &sp.mu[0], z)?;
    let m2 = evaluate_mu(v, lambda, 2, &sp.mu[1], z)?;
    let rhs = dbar_mu_rhs(z, lambda, m1, m2, &sp.data)?;
    let res = if v.is_zero() { (lhs - rhs).norm() } else { rel_residual(lhs, rhs) };
    Ok(VerificationReport::new("dbar_mu", res, TOL_DBAR_MU)
        .with("z", fmt_c(z))
        .with("lambda", fmt_c(lambda))
        .with("N", v.grid.points_per_side)
        .with("h", h)
        .with("scheme", format!("{scheme:?}"))
        .with("diagonal", opts.diagonal)
        .with("lhs", fmt_c(lhs))
        .with("rhs", fmt_c(rhs)))
}

/// Log-spaced `(|z|, |λ|)` lattice used for the `g^r` decay constant:
/// `|z| ∈ 10^{-2..2}`, `|λ| ∈ 10^{-2..3}`, 16 directions each.
pub fn green_lattice() -> Vec<(Complex64, Complex64)> {
    let zr: Vec<f64> = (0..=16).map(|i| 10f64.powf(-2.0 + i as f64 / 4.0)).collect();
    let lr: Vec<f64> = (0..=20).map(|i| 10f64.powf(-2.0 + i as f64 / 4.0)).collect();
    let mut out = Vec::new();
    for &rz in &zr {
        for &rl in &lr {
            for k in 0..16 {
                let tz = k as f64 * TAU / 16.0;
                let tl = tz * 3.0 + 0.1;
                out.push((Complex64::from_polar(rz, tz), Complex64::from_polar(rl, tl)));
            }
        }
    }
    out
}

/// Green's function properties: value at `λ = 0`, the conjugation symmetry,
/// the `1/|λ|` bound, the large-`|z|` limit and the ∂̄ formulas.
pub fn check_green_props(z_set: &[Complex64], lambda_set: &[Complex64]) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();

    let mut r1: f64 = 0.0;
    for &z in z_set.iter().chain(&[Complex64::new(2.0, 0.0)]) {
        let want = INV_16PI * z.norm_sqr().ln();
        r1 = r1.max((green_reg(z, Complex64::new(0.0, 0.0))? - want).norm());
    }
    out.push(VerificationReport::new("green_zero_lambda", r1, TOL_ALGEBRAIC).with("points", z_set.len() + 1));

    let mut r3: f64 = 0.0;
    for &z in z_set {
        for &l in lambda_set {
            let g = green_reg(z, l)?;
            r3 = r3.max((g.conj() * x_phase(z, l) - g).norm() / (1.0 + g.norm()));
        }
    }
    out.push(VerificationReport::new("green_conj_symmetry", r3, TOL_ALGEBRAIC).with("pairs", z_set.len() * lambda_set.len()));

    // One constant for |g^r| ≤ C(1 + 1/|z|)/|λ| over the whole lattice: the
    // sup over the two outer |λ| decades stays within a factor 2 of the rest.
    let (mut c_all, mut c_outer, mut c_inner): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (z, l) in green_lattice() {
        let q = green_reg(z, l)?.norm() * l.norm() / (1.0 + 1.0 / z.norm());
        c_all = c_all.max(q);
        if l.norm() > 10.0 {
            c_outer = c_outer.max(q);
        } else {
            c_inner = c_inner.max(q);
        }
    }
    out.push(
        VerificationReport::new("green_decay_constant_growth", c_outer / c_inner, TOL_RADIUS_SPREAD)
            .with("constant", c_all)
            .with("outer_decade", c_outer)
            .with("inner", c_inner),
    );

    // Large |z|: |g^r + (1+X)𝒢/16π|·|z| at radii 10, 20, 40, λ = 1.
    let l = Complex64::new(1.0, 0.0);
    let gc = g_cal(l)?;
    let mut sups = Vec::new();
    for &r in &[10.0, 20.0, 40.0] {
        let mut best: f64 = 0.0;
        for k in 0..64 {
            let z = Complex64::from_polar(r, k as f64 * TAU / 64.0 + 0.05);
            let rest = green_reg(z, l)? + INV_16PI * (1.0 + x_phase(z, l)) * gc;
            best = best.max(rest.norm() * r);
        }
        sups.push(best);
    }
    let spread = sups.iter().cloned().fold(0.0, f64::max) / sups.iter().cloned().fold(f64::INFINITY, f64::min);
    out.push(
        VerificationReport::new("green_large_z", spread, TOL_RADIUS_SPREAD)
            .with("r10", sups[0])
            .with("r20", sups[1])
            .with("r40", sups[2]),
    );

    let step = 1e-5;
    let mut rg: f64 = 0.0;
    let mut rd: f64 = 0.0;
    for &l in lambda_set.iter().filter(|l| l.norm() >= MIN_DBAR_LAMBDA) {
        let fd = fd_dbar(|m| Ok(Complex64::new(g_cal(m)?, 0.0)), l, step)?;
        rg = rg.max(rel_residual(g_cal_dbar(l)?, fd));
        for &z in z_set {
            let fd = fd_dbar(|m| green_reg(z, m), l, step)?;
            rd = rd.max(rel_residual(green_reg_dbar(z, l)?, fd));
        }
    }
    out.push(VerificationReport::new("g_cal_dbar_fd", rg, TOL_GREEN_DBAR).with("step", step));
    out.push(VerificationReport::new("green_dbar_fd", rd, TOL_GREEN_DBAR).with("step", step));
    Ok(out)
}

/// `‖H(λ) − H(0)‖` along `λ_small` and `‖H(λ)‖` along `λ_large`, each of
/// which must decrease, with next ≤ (1 + slack)·previous. Residual is the
/// largest ratio of consecutive values.
pub fn check_hs_limits(
    v: &Potential,
    lambda_small: &[Complex64],
    lambda_large: &[Complex64],
    slack: f64,
    opts_small: &SolverOptions,
    opts_large: &SolverOptions,
) -> Result<Vec<VerificationReport>> {
    let h0 = assemble(v, Complex64::new(0.0, 0.0), opts_small)?;
    let small: Vec<f64> = lambda_small
        .iter()
        .map(|&l| hs_distance(&assemble(v, l, opts_small)?, &h0))
        .collect::<Result<_>>()?;
    let large: Vec<f64> = lambda_large.iter().map(|&l| Ok(hs_norm(&assemble(v, l, opts_large)?))).collect::<Result<_>>()?;
    let ratio = |xs: &[f64]| {
        xs.windows(2)
            .map(|w| if w[0] == 0.0 && w[1] == 0.0 { 0.0 } else { w[1] / w[0] })
            .fold(0.0, f64::max)
    };
    let list = |xs: &[f64]| xs.iter().map(|x| format!("{x:.6e}")).collect::<Vec<_>>().join(";");
    Ok(vec![
        VerificationReport::new("hs_small_lambda", ratio(&small), 1.0 + slack)
            .with("values", list(&small))
            .with("diagonal", opts_small.diagonal),
        VerificationReport::new("hs_large_lambda", ratio(&large), 1.0 + slack)
            .with("values", list(&large))
            .with("diagonal", opts_large.diagonal),
    ])
}

/// Componentwise comparison of compute-then-shift against shift-then-compute.
/// Relative residuals use `max(|reference|, 1e-12·max_k |reference_k|)` as
/// the denominator so components that vanish by symmetry don't blow up.
pub fn check_shift(v: &Potential, zeta: Complex64, lambda: Complex64, opts: &SolverOptions) -> Result<Vec<VerificationReport>> {
    let vz = v.shifted(zeta)?;
    let base = spectral_point(v, lambda, opts)?;
    let moved = spectral_point(&vz, lambda, opts)?;
    let predicted = shift_data(&base.data, zeta);
    let ctx = |r: VerificationReport| r.with("zeta", fmt_c(zeta)).with("lambda", fmt_c(lambda)).with("N", v.grid.points_per_side);
    let mut out = vec![ctx(VerificationReport::new(
        "shift_delta",
        rel_residual(moved.delta, base.delta),
        TOL_SHIFT_DELTA,
    ))];
    let refs = moved.data.components();
    let scale = 1e-12 * refs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for ((name, p), m) in COMPONENT_NAMES.iter().zip(predicted.components()).zip(refs) {
        let res = (p - m).norm() / m.norm().max(scale).max(1e-300);
        let res = if p == m { 0.0 } else { res };
        out.push(ctx(VerificationReport::new(format!("shift_{name}"), res, TOL_QUADRATURE)));
    }
    Ok(out)
}

/// Standard `|z|` lattice for the Ei decay constant: `10^{-3..3}`, 64 directions.
pub fn ei_lattice() -> Vec<Complex64> {
    let mut out = Vec::with_capacity(61 * 64);
    for i in 0..=60 {
        let r = 10f64.powf(-3.0 + 6.0 * i as f64 / 60.0);
        for k in 0..64 {
            out.push(Complex64::from_polar(r, k as f64 * TAU / 64.0));
        }
    }
    out
}

/// Ei properties: conjugation on random points, log singularity, derivative
/// by finite differences on `z_set`, scaled decay constant on the lattice.
pub fn check_ei_props(z_set: &[Complex64], seed: u64) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rc: f64 = 0.0;
    for _ in 0..1000 {
        let z = Complex64::new(rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0));
        if z.im == 0.0 {
            continue;
        }
        let e = ei(z)?;
        rc = rc.max((ei(z.conj())? - e.conj()).norm() / (1.0 + e.norm()));
    }

    let mut c_log: f64 = 0.0;
    for i in 1..=40 {
        let r = 0.5 * 10f64.powf(-(i as f64) / 5.0);
        for k in 0..16 {
            let z = Complex64::from_polar(r, k as f64 * TAU / 16.0);
            c_log = c_log.max(ei_sym(z)?.abs() / (r * r).ln().abs());
        }
    }

    let step = 1e-5;
    let mut rd: f64 = 0.0;
    for &z in z_set {
        let want = z.exp() / z;
        let dx = (ei(z + step)? - ei(z - step)?) / (2.0 * step);
        let dy = (ei(z + Complex64::new(0.0, step))? - ei(z - Complex64::new(0.0, step))?) / Complex64::new(0.0, 2.0 * step);
        rd = rd.max(rel_residual(dx, want)).max(rel_residual(dy, want));
    }

    let mut c_decay: f64 = 0.0;
    for z in ei_lattice() {
        c_decay = c_decay.max(ei_sym_scaled(z)?.norm() * z.norm());
    }

    Ok(vec![
        VerificationReport::new("ei_conjugation", rc, TOL_ALGEBRAIC).with("samples", 1000).with("seed", format!("{seed:#x}")),
        // Bounded ratio to |ln|z|²| on 0 < |z| ≤ ½; 10 is a generous cap.
        VerificationReport::new("ei_log_singularity", c_log, TOL_DECAY_CONSTANT),
        VerificationReport::new("ei_derivative_fd", rd, TOL_EI_DERIVATIVE).with("step", step).with("points", z_set.len()),
        VerificationReport::new("ei_decay_constant", c_decay, TOL_DECAY_CONSTANT),
    ])
}

/// Default probe points for the Ei derivative check, `|z| ∈ [0.1, 10]`.
pub fn default_ei_points() -> Vec<Complex64> {
    let mut out = vec![Complex64::new(2.0, 1.0)];
    for &r in &[0.1, 0.5, 1.0, 3.0, 10.0] {
        for k in 0..8 {
            let z = Complex64::from_polar(r, k as f64 * FRAC_PI_4 + 0.3);
            out.push(z);
        }
    }
    out
}

/// Random `(z, λ)` pairs from the seed, `|z| ≤ 20`, `0.3 ≤ |λ| ≤ 15`.
pub fn random_pairs(n: usize, seed: u64) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut zs = Vec::with_capacity(n);
    let mut ls = Vec::with_capacity(n);
    for _ in 0..n {
        zs.push(Complex64::from_polar(rng.random_range(0.05..20.0), rng.random_range(0.0..TAU)));
        ls.push(Complex64::from_polar(rng.random_range(0.3..15.0), rng.random_range(0.0..TAU)));
    }
    (zs, ls)
}

/// Settings for the whole suite.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub fd_step: f64,
    pub scheme: FdScheme,
    pub opts: SolverOptions,
    /// Solver options for the large-`|λ|` HS trend.
    pub large_lambda_opts: SolverOptions,
    pub hs_slack: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            fd_step: DEFAULT_FD_STEP,
            scheme: FdScheme::Central,
            opts: SolverOptions::default(),
            large_lambda_opts: SolverOptions::with_diagonal(crate::integral_solver::DiagonalRule::CellAverage),
            hs_slack: 0.1,
        }
    }
}

/// The standard probe sets shared by the CLI and the tests.
pub fn dbar_lambdas() -> Vec<Complex64> {
    vec![Complex64::new(1.0, 0.5), Complex64::new(-1.0, 1.0), Complex64::new(0.5, -1.5)]
}

pub fn large_lambdas() -> Vec<Complex64> {
    [5.0, 10.0, 20.0].iter().map(|&r| Complex64::from_polar(r, FRAC_PI_4)).collect()
}

pub fn small_lambdas() -> Vec<Complex64> {
    [0.5, 0.25, 0.125].iter().map(|&r| Complex64::new(r, 0.0)).collect()
}

/// Interior probe nodes for the `μ` ∂̄ check: nodes nearest to `0.5+0.5i`,
/// `−1+0.5i` and `1−1i`.
pub fn mu_probe_points(v: &Potential) -> Vec<Complex64> {
    [Complex64::new(0.5, 0.5), Complex64::new(-1.0, 0.5), Complex64::new(1.0, -1.0)]
        .iter()
        .map(|&z| v.grid.nodes[v.grid.nearest(z)])
        .collect()
}

pub fn suite_names() -> &'static [&'static str] {
    &["all", "ei", "green", "dbar-det", "dbar-mu", "hs", "shift"]
}

/// Runs one named suite (or `all`) against `v`.
pub fn run_suite(name: &str, v: &Potential, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let all = name == "all";
    if !suite_names().contains(&name) {
        return Err(Error::Parameter(format!("unknown suite {name:?}; expected one of {}", suite_names().join(", "))));
    }
    if all || name == "ei" {
        out.extend(check_ei_props(&default_ei_points(), cfg.seed)?);
    }
    if all || name == "green" {
        let (zs, ls) = random_pairs(100, cfg.seed);
        out.extend(check_green_props(&zs, &ls)?);
    }
    if all || name == "dbar-det" {
        for l in dbar_lambdas() {
            out.push(check_dbar_det(v, l, cfg.fd_step, cfg.scheme, &cfg.opts)?);
        }
    }
    if all || name == "dbar-mu" {
        let l = Complex64::new(1.0, 1.0);
        for z in mu_probe_points(v) {
            out.push(check_dbar_mu(v, z, l, cfg.fd_step, cfg.scheme, &cfg.opts)?);
        }
    }
    if all || name == "hs" {
        out.extend(check_hs_limits(v, &small_lambdas(), &large_lambdas(), cfg.hs_slack, &cfg.opts, &cfg.large_lambda_opts)?);
    }
    if all || name == "shift" {
        for zeta in [Complex64::new(1.0, 0.0), Complex64::new(2.0, 1.0)] {
            if v.grid.cell_offset(zeta).is_some() {
                out.extend(check_shift(v, zeta, Complex64::new(1.0, 0.0), &cfg.opts)?);
            }
        }
    }
    for r in out.iter_mut() {
        r.context.push(("seed".into(), format!("{:#x}", cfg.seed)));
    }
    Ok(out)
}
