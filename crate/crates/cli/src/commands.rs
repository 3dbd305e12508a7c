//! Subcommand bodies. Each returns the output text (header excluded) and
//! whether the run counts as a verification failure.

use num_complex::Complex64;
use nvscatter::discretization::{make_grid, sample_potential, Potential, PotentialSpec};
use nvscatter::green_kernel::{g_cal, green_reg, x_phase};
use nvscatter::integral_solver::{det_scan, DiagonalRule, LambdaSolve, SolverOptions};
use nvscatter::scattering::{scattering_data, CSV_HEADER};
use nvscatter::special_functions::{ei, ei_sym};
use nvscatter::theorem_algebra::obstruction_residuals;
use nvscatter::verification::{run_suite, FdScheme, SuiteConfig, REPORT_HEADER};
use nvscatter::{Error, Result};
use rayon::prelude::*;

use crate::config::{parse_complex, parse_complex_list, parse_f64, parse_rect, RunConfig};

pub struct Output {
    pub body: String,
    pub verification_failed: bool,
}

fn ok(body: String) -> Result<Output> {
    Ok(Output { body, verification_failed: false })
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn cnum(z: Complex64) -> String {
    format!("{},{}", num(z.re), num(z.im))
}

pub fn seed(cfg: &RunConfig) -> Result<u64> {
    let raw = cfg.require("seed")?;
    let parsed = match raw.strip_prefix("0x").or_else(|| raw.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => raw.parse(),
    };
    parsed.map_err(|_| Error::Parse(format!("seed must be an integer or 0x-hex, got {raw:?}")))
}

fn solver_options(cfg: &RunConfig) -> Result<SolverOptions> {
    let rule: DiagonalRule = cfg.require("diagonal")?.parse()?;
    Ok(SolverOptions::with_diagonal(rule))
}

fn potential(cfg: &RunConfig) -> Result<Potential> {
    let (l, n) = cfg.grid()?;
    let grid = make_grid(l, n)?;
    let spec: PotentialSpec = cfg.require("potential")?.parse()?;
    sample_potential(&spec, &grid)
}

fn lambda_list(cfg: &RunConfig) -> Result<Vec<Complex64>> {
    match (cfg.get("lambdas"), cfg.get("lambda-rect")) {
        (Some(_), Some(_)) => Err(Error::Parameter("give either lambdas or lambda-rect, not both".into())),
        (Some(l), None) => parse_complex_list(l),
        (None, Some(r)) => parse_rect(r),
        (None, None) => Err(Error::Parameter("missing λ values: set lambdas or lambda-rect".into())),
    }
}

pub fn ei_cmd(cfg: &RunConfig) -> Result<Output> {
    let zs = parse_complex_list(cfg.require("z")?)?;
    let mut out = String::from("z_re,z_im,ei_re,ei_im,ei_sym\n");
    for z in zs {
        let sym = ei_sym(z)?;
        // On the cut only the symmetric combination is defined.
        let e = match ei(z) {
            Ok(e) => cnum(e),
            Err(Error::Domain(_)) => "nan,nan".into(),
            Err(e) => return Err(e),
        };
        out.push_str(&format!("{},{e},{}\n", cnum(z), num(sym)));
    }
    ok(out)
}

pub fn green_cmd(cfg: &RunConfig) -> Result<Output> {
    let zs = parse_complex_list(cfg.require("z")?)?;
    let ls = lambda_list(cfg)?;
    let mut out = String::from("z_re,z_im,lambda_re,lambda_im,g_re,g_im,g_cal,x_re,x_im\n");
    for &z in &zs {
        for &l in &ls {
            let g = green_reg(z, l)?;
            let gc = if l == Complex64::new(0.0, 0.0) { f64::NAN } else { g_cal(l)? };
            out.push_str(&format!("{},{},{},{},{}\n", cnum(z), cnum(l), cnum(g), num(gc), cnum(x_phase(z, l))));
        }
    }
    ok(out)
}

pub fn solve_mu_cmd(cfg: &RunConfig) -> Result<Output> {
    let v = potential(cfg)?;
    let l = parse_complex(cfg.require("lambda")?)?;
    let solve = LambdaSolve::new(&v, l, &solver_options(cfg)?)?;
    let fields = match cfg.get("order") {
        None | Some("all") => solve.mu_all()?.to_vec(),
        Some(o) => {
            let order: usize = o.parse().map_err(|_| Error::Parse(format!("order must be 1, 2, 3 or all, got {o:?}")))?;
            vec![solve.mu(order)?]
        }
    };
    let mut out = String::from("x,y");
    if fields.len() == 1 {
        out.push_str(",mu_re,mu_im");
    } else {
        out.push_str(",mu1_re,mu1_im,mu2_re,mu2_im,mu3_re,mu3_im");
    }
    out.push('\n');
    for (k, &z) in v.grid.nodes.iter().enumerate() {
        out.push_str(&cnum(z));
        for f in &fields {
            out.push(',');
            out.push_str(&cnum(f.values[k]));
        }
        out.push('\n');
    }
    ok(out)
}

pub fn det_scan_cmd(cfg: &RunConfig) -> Result<Output> {
    let v = potential(cfg)?;
    let rows = det_scan(&v, &lambda_list(cfg)?, &solver_options(cfg)?)?;
    let mut out = String::from("lambda_re,lambda_im,delta_re,delta_im,hs_norm,condest\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", cnum(r.lambda), cnum(r.delta), num(r.hs_norm), num(r.condest)));
    }
    ok(out)
}

pub fn scatter_cmd(cfg: &RunConfig) -> Result<Output> {
    let v = potential(cfg)?;
    let opts = solver_options(cfg)?;
    let rows: Vec<_> = lambda_list(cfg)?.par_iter().map(|&l| scattering_data(&v, l, &opts)).collect::<Result<_>>()?;
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    ok(out)
}

/// `name=value;name=value` tolerance overrides for verification checks.
fn tolerance_overrides(cfg: &RunConfig) -> Result<Vec<(String, f64)>> {
    let Some(raw) = cfg.get("tolerances") else { return Ok(Vec::new()) };
    raw.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| Error::Parse(format!("tolerance override must be name=value, got {p:?}")))?;
            Ok((k.trim().to_string(), parse_f64(k, v)?))
        })
        .collect()
}

pub fn verify_cmd(cfg: &RunConfig) -> Result<Output> {
    let v = potential(cfg)?;
    let scheme = match cfg.require("scheme")? {
        "central" => FdScheme::Central,
        "richardson" => FdScheme::Richardson,
        other => return Err(Error::Parse(format!("scheme must be central or richardson, got {other:?}"))),
    };
    let suite_cfg = SuiteConfig {
        seed: seed(cfg)?,
        fd_step: cfg.f64_or("fd-step", nvscatter::verification::DEFAULT_FD_STEP)?,
        scheme,
        opts: solver_options(cfg)?,
        hs_slack: cfg.f64_or("hs-slack", 0.1)?,
        ..SuiteConfig::default()
    };
    let mut reports = run_suite(cfg.require("suite")?, &v, &suite_cfg)?;
    for (name, tol) in tolerance_overrides(cfg)? {
        for r in reports.iter_mut().filter(|r| r.check_name == name) {
            r.tolerance = tol;
            r.pass = r.residual <= tol;
        }
    }
    let mut out = format!("{REPORT_HEADER}\n");
    for r in &reports {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    Ok(Output { body: out, verification_failed: !reports.iter().all(|r| r.pass) })
}

pub fn obstruct_cmd(cfg: &RunConfig) -> Result<Output> {
    let v = potential(cfg)?;
    let opts = solver_options(cfg)?;
    let lambdas = lambda_list(cfg)?;
    let data: Vec<_> = lambdas.par_iter().map(|&l| scattering_data(&v, l, &opts)).collect::<Result<_>>()?;
    let velocity = parse_complex(cfg.require("velocity")?)?;
    let t = parse_f64("time", cfg.require("time")?)?;
    let rep = obstruction_residuals(&data, velocity, t)?;
    ok(format!("{rep}\n"))
}
