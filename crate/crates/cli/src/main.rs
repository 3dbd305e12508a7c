//! `nv-scatter`: batch front end for the scattering toolkit.
//!
//! Exit status: 0 success, 1 invalid input or domain error, 2 numerical
//! failure (near-singular system, eigen failure, flagged λ), 3 a verification
//! check failed.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nvscatter::Error;

use crate::config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "nv-scatter", version, about = "Direct scattering transform at zero energy and its identity checks")]
struct Cli {
    /// `key = value` settings file; flags override it. An earlier output file
    /// works too, since its `#` header holds the full configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file. Relative paths go under $NV_SCATTER_OUT when it is set.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Worker threads for λ scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// RNG seed, decimal or 0x-hex.
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Diagonal rule for the kernel matrix: split or cell.
    #[arg(long, global = true)]
    diagonal: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct ProblemArgs {
    /// Potential descriptor, e.g. gaussian:1,1 or file:v.txt.
    #[arg(long)]
    potential: Option<String>,
    /// Grid as L,N (box [-L, L]², N points per side).
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args, Debug, Default)]
struct LambdaArgs {
    /// `;`-separated λ values, each re,im.
    #[arg(long, allow_hyphen_values = true)]
    lambdas: Option<String>,
    /// Rectangle x0,x1,y0,y1,step.
    #[arg(long, allow_hyphen_values = true)]
    lambda_rect: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ei(z) and Ei(z) + Ei(z̄) at a list of points.
    Ei {
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
    },
    /// Regularized Green's function over z × λ lists.
    Green {
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[command(flatten)]
        lambdas: LambdaArgs,
    },
    /// μ₁, μ₂, μ₃ (or one order) on the grid at one λ.
    SolveMu {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// 1, 2, 3 or all.
        #[arg(long)]
        order: Option<String>,
    },
    /// Modified Fredholm determinant over a λ set.
    DetScan {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        lambdas: LambdaArgs,
    },
    /// The nine scattering functionals over a λ set.
    Scatter {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        lambdas: LambdaArgs,
    },
    /// Run a verification suite: all, ei, green, dbar-det, dbar-mu, hs, shift.
    Verify {
        suite: Option<String>,
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        fd_step: Option<String>,
        /// central or richardson.
        #[arg(long)]
        scheme: Option<String>,
        /// Overrides as name=value;name=value.
        #[arg(long)]
        tolerances: Option<String>,
    },
    /// Soliton obstruction residuals from data at a λ sample.
    Obstruct {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        lambdas: LambdaArgs,
        #[arg(long, allow_hyphen_values = true)]
        velocity: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        time: Option<String>,
    },
}

fn put(cfg: &mut RunConfig, key: &str, v: &Option<String>) {
    if let Some(v) = v {
        cfg.set(key, v.clone());
    }
}

fn put_problem(cfg: &mut RunConfig, p: &ProblemArgs) {
    put(cfg, "potential", &p.potential);
    put(cfg, "grid", &p.grid);
    cfg.set_default("potential", "gaussian:1,1");
    cfg.set_default("grid", "8,32");
    cfg.set_default("diagonal", "split");
}

fn put_lambdas(cfg: &mut RunConfig, l: &LambdaArgs) {
    // A flag replaces whichever λ form the config file used.
    if l.lambdas.is_some() || l.lambda_rect.is_some() {
        cfg.entries.remove("lambdas");
        cfg.entries.remove("lambda-rect");
    }
    put(cfg, "lambdas", &l.lambdas);
    put(cfg, "lambda-rect", &l.lambda_rect);
}

fn build_config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    put(&mut cfg, "out", &cli.out);
    put(&mut cfg, "seed", &cli.seed);
    put(&mut cfg, "diagonal", &cli.diagonal);
    cfg.set_default("seed", "0x5EED");
    let name = match &cli.command {
        Command::Ei { z } => {
            put(&mut cfg, "z", z);
            "ei"
        }
        Command::Green { z, lambdas } => {
            put(&mut cfg, "z", z);
            put_lambdas(&mut cfg, lambdas);
            "green"
        }
        Command::SolveMu { problem, lambda, order } => {
            put_problem(&mut cfg, problem);
            put(&mut cfg, "lambda", lambda);
            put(&mut cfg, "order", order);
            "solve-mu"
        }
        Command::DetScan { problem, lambdas } => {
            put_problem(&mut cfg, problem);
            put_lambdas(&mut cfg, lambdas);
            "det-scan"
        }
        Command::Scatter { problem, lambdas } => {
            put_problem(&mut cfg, problem);
            put_lambdas(&mut cfg, lambdas);
            "scatter"
        }
        Command::Verify { suite, problem, fd_step, scheme, tolerances } => {
            put_problem(&mut cfg, problem);
            put(&mut cfg, "suite", suite);
            put(&mut cfg, "fd-step", fd_step);
            put(&mut cfg, "scheme", scheme);
            put(&mut cfg, "tolerances", tolerances);
            cfg.set_default("suite", "all");
            cfg.set_default("scheme", "central");
            "verify"
        }
        Command::Obstruct { problem, lambdas, velocity, time } => {
            put_problem(&mut cfg, problem);
            put_lambdas(&mut cfg, lambdas);
            put(&mut cfg, "velocity", velocity);
            put(&mut cfg, "time", time);
            "obstruct"
        }
    };
    cfg.set("command", name);
    Ok(cfg)
}

fn execute(cfg: &RunConfig) -> Result<commands::Output, Error> {
    // Validate the seed even for commands that don't draw random numbers.
    commands::seed(cfg)?;
    match cfg.require("command")? {
        "ei" => commands::ei_cmd(cfg),
        "green" => commands::green_cmd(cfg),
        "solve-mu" => commands::solve_mu_cmd(cfg),
        "det-scan" => commands::det_scan_cmd(cfg),
        "scatter" => commands::scatter_cmd(cfg),
        "verify" => commands::verify_cmd(cfg),
        "obstruct" => commands::obstruct_cmd(cfg),
        other => Err(Error::Parameter(format!("unknown command {other:?}"))),
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() || matches!(e, Error::Flagged(_)) {
        2
    } else {
        1
    }
}

fn write_output(cfg: &RunConfig, text: &str) -> Result<(), Error> {
    match cfg.out_path() {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, text)?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let result = execute(&cfg).and_then(|o| {
        write_output(&cfg, &format!("{}{}", cfg.header(), o.body))?;
        Ok(o.verification_failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("verification failed: see the report for checks with pass=false");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
