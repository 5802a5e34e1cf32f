//! Command-line front end. [`run`] is the whole program; the `padic-hlp`
//! binary only forwards `std::env::args` and exits with its return value.
//!
//! Exit codes: `check` and `estimate` return 0 (bounded), 1 (unbounded) or
//! 2 (out of scope); `norm` returns 3 when no closed form exists for a
//! bounded point; malformed flags give 64, bad data (e.g. digits of 0) 65,
//! numerical failures 70.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{check_boundedness, sharp_norm, NormError, SharpNorm, Status, Verdict};
use crate::estimation::{default_epsilons, estimate_norm, EstimateOptions, NormReport};
use crate::operator::{KernelParams, SpaceParams};
use crate::padic::{digit_expansion, padic_norm_exact, parse_rational, valuation, PrimeBase};
use crate::radial::{ExtendedExponent, ValuationWindow};
use crate::scalar::Scalar;

pub const SCHEMA: &str = "padic-hlp/1";

pub const EXIT_BOUNDED: i32 = 0;
pub const EXIT_UNBOUNDED: i32 = 1;
pub const EXIT_OUT_OF_SCOPE: i32 = 2;
pub const EXIT_NOT_AVAILABLE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_SOFTWARE: i32 = 70;

pub const SWEEP_COLUMNS: [&str; 16] = [
    "index",
    "p",
    "lambda",
    "mu",
    "nu",
    "q",
    "r",
    "alpha",
    "beta",
    "eps",
    "status",
    "tau",
    "closed_form",
    "schur_bound",
    "matrix_lower",
    "max_extremal_ratio",
];

const SWEEP_HELP: &str = "\
CSV columns (one row per grid point, ordered by index):
  index,p,lambda,mu,nu,q,r,alpha,beta,eps,status,tau,
  closed_form,schur_bound,matrix_lower,max_extremal_ratio
Empty cells mean \"not available\" (e.g. no closed form when q < r).
The grid has steps+1 points from --from to --to inclusive; exact
rational endpoints give exact grid values.
PADIC_HLP_THREADS caps the worker threads (0 or unset = all cores).";

#[derive(Parser, Debug)]
#[command(
    name = "padic-hlp",
    version,
    about = "Boundedness, sharp norms and numerical checks for p-adic HLP operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide boundedness and print the verdict with its condition trace.
    Check {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the closed-form norm with its geometric terms.
    Norm {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Full report: verdict, closed form, Schur bound, matrix and extremal
    /// lower bounds, or a divergence witness.
    Estimate {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        estimate: EstimateArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Vary one parameter over a grid and emit one row per point.
    #[command(after_long_help = SWEEP_HELP)]
    Sweep {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        estimate: EstimateArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Canonical p-adic digits of a rational.
    Digits {
        /// Rational number, e.g. 1/2 or -7.
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Number of digits.
        #[arg(long, short = 'n', default_value_t = 10)]
        n: usize,
    },
    /// p-adic valuation and norm of a rational.
    NormOf {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
}

fn scalar_arg(s: &str) -> Result<String, String> {
    s.parse::<Scalar>().map(|_| s.to_string()).map_err(|e| e.to_string())
}

fn exponent_arg(s: &str) -> Result<String, String> {
    s.parse::<ExtendedExponent>()
        .map(|_| s.to_string())
        .map_err(|e| e.to_string())
}

fn prime_arg(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|e| format!("{e}"))?;
    PrimeBase::new(p).map(|b| b.get()).map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone)]
struct PointArgs {
    #[arg(long, default_value = "2", value_parser = prime_arg)]
    p: u64,
    #[arg(long, default_value = "1", value_parser = scalar_arg, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, default_value = "0", value_parser = scalar_arg, allow_hyphen_values = true)]
    mu: String,
    #[arg(long, default_value = "0", value_parser = scalar_arg, allow_hyphen_values = true)]
    nu: String,
    /// Source exponent (a number >= 1 or "inf").
    #[arg(long, default_value = "2", value_parser = exponent_arg)]
    q: String,
    /// Target exponent (a number >= 1 or "inf").
    #[arg(long, default_value = "2", value_parser = exponent_arg)]
    r: String,
    #[arg(long, default_value = "0", value_parser = scalar_arg, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value = "0", value_parser = scalar_arg, allow_hyphen_values = true)]
    beta: String,
}

#[derive(Args, Debug, Clone)]
struct EstimateArgs {
    /// Half-width of the input valuation window for the matrix bound.
    #[arg(long, default_value_t = 40)]
    window: u32,
    /// Relative gain at which the power iteration stops.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 200_000)]
    max_iter: usize,
    /// Single ε for the extremal family (default: 2^-1 ... 2^-12).
    #[arg(long, value_parser = scalar_arg)]
    eps: Option<String>,
    /// Grid resolution of the Schur optimizer.
    #[arg(long, default_value_t = 32)]
    schur_resolution: usize,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Lambda,
    Mu,
    Nu,
    Q,
    R,
    Alpha,
    Beta,
    Eps,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    /// Parameter to vary.
    #[arg(long)]
    vary: Param,
    #[arg(long, value_parser = scalar_arg, allow_hyphen_values = true)]
    from: String,
    #[arg(long, value_parser = scalar_arg, allow_hyphen_values = true)]
    to: String,
    /// Number of grid intervals (points = steps + 1).
    #[arg(long)]
    steps: usize,
    /// Re-solve this parameter at every point so that τ = 0.
    #[arg(long)]
    balance_by: Option<Param>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// Parameters exactly as given on the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointConfig {
    pub p: u64,
    pub lambda: String,
    pub mu: String,
    pub nu: String,
    pub q: String,
    pub r: String,
    pub alpha: String,
    pub beta: String,
}

impl From<&PointArgs> for PointConfig {
    fn from(a: &PointArgs) -> Self {
        Self {
            p: a.p,
            lambda: a.lambda.clone(),
            mu: a.mu.clone(),
            nu: a.nu.clone(),
            q: a.q.clone(),
            r: a.r.clone(),
            alpha: a.alpha.clone(),
            beta: a.beta.clone(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid value for {field}: {message}")]
    Invalid { field: &'static str, message: String },
}

impl PointConfig {
    pub fn resolve(&self) -> Result<(PrimeBase, KernelParams, SpaceParams), ConfigError> {
        let base = PrimeBase::new(self.p).map_err(|e| ConfigError::Invalid {
            field: "p",
            message: e.to_string(),
        })?;
        let scalar = |field: &'static str, s: &str| {
            s.parse::<Scalar>().map_err(|e| ConfigError::Invalid {
                field,
                message: e.to_string(),
            })
        };
        let exponent = |field: &'static str, s: &str| {
            s.parse::<ExtendedExponent>().map_err(|e| ConfigError::Invalid {
                field,
                message: e.to_string(),
            })
        };
        let k = KernelParams {
            lambda: scalar("lambda", &self.lambda)?,
            mu: scalar("mu", &self.mu)?,
            nu: scalar("nu", &self.nu)?,
        };
        let s = SpaceParams {
            q: exponent("q", &self.q)?,
            r: exponent("r", &self.r)?,
            alpha: scalar("alpha", &self.alpha)?,
            beta: scalar("beta", &self.beta)?,
        };
        Ok((base, k, s))
    }

    fn set(&mut self, param: Param, value: String) {
        match param {
            Param::Lambda => self.lambda = value,
            Param::Mu => self.mu = value,
            Param::Nu => self.nu = value,
            Param::Q => self.q = value,
            Param::R => self.r = value,
            Param::Alpha => self.alpha = value,
            Param::Beta => self.beta = value,
            Param::Eps => {}
        }
    }
}

/// Estimation settings echoed in `estimate` and `sweep` output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateConfig {
    pub window: u32,
    pub tol: f64,
    pub max_iter: usize,
    pub eps: Option<String>,
    pub schur_resolution: usize,
}

impl From<&EstimateArgs> for EstimateConfig {
    fn from(a: &EstimateArgs) -> Self {
        Self {
            window: a.window,
            tol: a.tol,
            max_iter: a.max_iter,
            eps: a.eps.clone(),
            schur_resolution: a.schur_resolution,
        }
    }
}

impl EstimateConfig {
    fn options(&self, eps: Option<f64>) -> EstimateOptions {
        let eps = eps.or_else(|| self.eps.as_deref().and_then(|e| e.parse::<Scalar>().ok()).map(|s| s.value()));
        EstimateOptions {
            window: ValuationWindow::symmetric(self.window),
            tol: self.tol,
            max_iter: self.max_iter,
            epsilons: eps.map_or_else(default_epsilons, |e| vec![e]),
            schur_resolution: self.schur_resolution,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub point: PointConfig,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub estimate: Option<EstimateConfig>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sweep: Option<SweepConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub vary: Param,
    pub from: String,
    pub to: String,
    pub steps: usize,
    pub balance_by: Option<Param>,
}

/// Versioned JSON wrapper around every result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema: String,
    pub command: String,
    pub config: RunConfig,
    pub result: T,
}

/// `norm` output: the closed form and its terms, or why there is none.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormOutput {
    pub verdict: Verdict,
    pub norm: Option<SharpNorm>,
    pub explanation: Option<String>,
}

/// One row of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub p: u64,
    pub lambda: String,
    pub mu: String,
    pub nu: String,
    pub q: String,
    pub r: String,
    pub alpha: String,
    pub beta: String,
    pub eps: Option<String>,
    pub status: Status,
    pub tau: String,
    pub closed_form: Option<f64>,
    pub schur_bound: Option<f64>,
    pub matrix_lower: Option<f64>,
    pub max_extremal_ratio: Option<f64>,
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Bounded => EXIT_BOUNDED,
        Status::Unbounded => EXIT_UNBOUNDED,
        Status::OutOfScope => EXIT_OUT_OF_SCOPE,
    }
}

/// Runs the CLI with `args` (including the program name), writing results
/// to `out` (or `--out`) and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_SOFTWARE
        }
    }
}

fn sink<'a>(path: &Option<PathBuf>, out: &'a mut dyn Write) -> io::Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(out),
    })
}

fn emit_json<T: Serialize>(
    w: &mut dyn Write,
    command: &str,
    config: RunConfig,
    result: T,
) -> io::Result<()> {
    let env = Envelope {
        schema: SCHEMA.to_string(),
        command: command.to_string(),
        config,
        result,
    };
    serde_json::to_writer_pretty(&mut *w, &env)?;
    writeln!(w)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    match command {
        Command::Check { point, output } => {
            let config = PointConfig::from(&point);
            let Some((_, k, s)) = resolved(&config, err) else {
                return Ok(EXIT_USAGE);
            };
            let verdict = check_boundedness(&k, &s);
            let code = status_code(verdict.status);
            let mut w = sink(&output.out, out)?;
            emit_json(&mut *w, "check", run_config(config, None, None), verdict)?;
            Ok(code)
        }
        Command::Norm { point, output } => {
            let config = PointConfig::from(&point);
            let Some((base, k, s)) = resolved(&config, err) else {
                return Ok(EXIT_USAGE);
            };
            let verdict = check_boundedness(&k, &s);
            let (norm, explanation, code) = match sharp_norm(&k, &s, base) {
                Ok(n) => (Some(n), None, EXIT_BOUNDED),
                Err(e @ NormError::NotAvailable(_)) => (None, Some(e.to_string()), EXIT_NOT_AVAILABLE),
                Err(e) => (None, Some(e.to_string()), status_code(verdict.status)),
            };
            if let Some(text) = &explanation {
                writeln!(err, "{text}")?;
            }
            let mut w = sink(&output.out, out)?;
            emit_json(
                &mut *w,
                "norm",
                run_config(config, None, None),
                NormOutput {
                    verdict,
                    norm,
                    explanation,
                },
            )?;
            Ok(code)
        }
        Command::Estimate {
            point,
            estimate,
            output,
        } => {
            let config = PointConfig::from(&point);
            let Some((base, k, s)) = resolved(&config, err) else {
                return Ok(EXIT_USAGE);
            };
            let est = EstimateConfig::from(&estimate);
            match estimate_norm(&k, &s, base, &est.options(None)) {
                Ok(report) => {
                    let code = status_code(report.verdict.status);
                    let mut w = sink(&output.out, out)?;
                    emit_json(&mut *w, "estimate", run_config(config, Some(est), None), report)?;
                    Ok(code)
                }
                Err(e) => {
                    writeln!(err, "estimation failed: {e}")?;
                    Ok(EXIT_SOFTWARE)
                }
            }
        }
        Command::Sweep {
            point,
            estimate,
            sweep,
            output,
        } => run_sweep(point, estimate, sweep, output, out, err),
        Command::Digits { x, p, n } => {
            let Some((x, base)) = rational_and_prime(&x, p, err)? else {
                return Ok(EXIT_USAGE);
            };
            match digit_expansion(&x, base, n) {
                Ok(d) => {
                    let digits: Vec<String> = d.digits.iter().map(u64::to_string).collect();
                    writeln!(out, "gamma = {}", d.gamma)?;
                    writeln!(out, "digits = {}", digits.join(" "))?;
                    writeln!(out, "expansion = {d}")?;
                    Ok(0)
                }
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    Ok(EXIT_DATA)
                }
            }
        }
        Command::NormOf { x, p } => {
            let Some((x, base)) = rational_and_prime(&x, p, err)? else {
                return Ok(EXIT_USAGE);
            };
            let norm = padic_norm_exact(&x, base);
            writeln!(out, "valuation = {}", valuation(&x, base))?;
            writeln!(out, "norm = {}", Scalar::exact(norm))?;
            Ok(0)
        }
    }
}

fn run_config(point: PointConfig, estimate: Option<EstimateConfig>, sweep: Option<SweepConfig>) -> RunConfig {
    RunConfig {
        point,
        estimate,
        sweep,
    }
}

fn resolved(
    config: &PointConfig,
    err: &mut dyn Write,
) -> Option<(PrimeBase, KernelParams, SpaceParams)> {
    match config.resolve() {
        Ok(v) => Some(v),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            None
        }
    }
}

fn rational_and_prime(
    x: &str,
    p: u64,
    err: &mut dyn Write,
) -> io::Result<Option<(num_rational::BigRational, PrimeBase)>> {
    let Some(value) = parse_rational(x) else {
        writeln!(err, "error: {x:?} is not a rational number a or a/b")?;
        return Ok(None);
    };
    match PrimeBase::new(p) {
        Ok(base) => Ok(Some((value, base))),
        Err(e) => {
            writeln!(err, "error: {e}")?;
            Ok(None)
        }
    }
}

/// Solves `τ = 0` for `param`, if its coefficient in τ is nonzero.
fn balance(config: &mut PointConfig, param: Param) -> Result<(), String> {
    let (_, k, s) = config.resolve().map_err(|e| e.to_string())?;
    let tau = crate::analysis::balance_residual(&k, &s);
    let one = Scalar::one();
    // τ is affine in each parameter: τ = τ0 + coeff·(value - current)
    let (current, coeff) = match param {
        Param::Lambda => (k.lambda.clone(), -one.clone()),
        Param::Mu => (k.mu.clone(), one.clone()),
        Param::Nu => (k.nu.clone(), one.clone()),
        Param::Alpha => (s.alpha.clone(), -s.q.reciprocal()),
        Param::Beta => (s.beta.clone(), s.r.reciprocal()),
        Param::Q | Param::R | Param::Eps => {
            return Err("balance-by must be one of lambda, mu, nu, alpha, beta".into())
        }
    };
    if coeff.is_zero() {
        return Err(format!("tau does not depend on {param:?} for these exponents"));
    }
    let value = &current - &(&tau / &coeff);
    config.set(param, value.to_string());
    Ok(())
}

fn run_sweep(
    point: PointArgs,
    estimate: EstimateArgs,
    sweep: SweepArgs,
    output: OutputArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let base_config = PointConfig::from(&point);
    let est = EstimateConfig::from(&estimate);
    let sweep_config = SweepConfig {
        vary: sweep.vary,
        from: sweep.from.clone(),
        to: sweep.to.clone(),
        steps: sweep.steps,
        balance_by: sweep.balance_by,
    };
    let usage = |err: &mut dyn Write, msg: &str| -> io::Result<i32> {
        writeln!(err, "error: {msg}")?;
        Ok(EXIT_USAGE)
    };
    if sweep.steps == 0 {
        return usage(err, "--steps must be at least 1");
    }
    if sweep.balance_by == Some(sweep.vary) {
        return usage(err, "--balance-by must differ from --vary");
    }
    let from: Scalar = sweep.from.parse().expect("validated by clap");
    let to: Scalar = sweep.to.parse().expect("validated by clap");
    if from.compare(&to) != std::cmp::Ordering::Less {
        return usage(err, "empty range: --from must be below --to");
    }
    if resolved(&base_config, err).is_none() {
        return Ok(EXIT_USAGE);
    }
    let step = &(&to - &from) / &Scalar::integer(sweep.steps as i64);

    let mut points = Vec::with_capacity(sweep.steps + 1);
    for i in 0..=sweep.steps {
        let value = &from + &(&step * &Scalar::integer(i as i64));
        let mut config = base_config.clone();
        let mut eps = est.eps.clone();
        if sweep.vary == Param::Eps {
            eps = Some(value.to_string());
        } else {
            config.set(sweep.vary, value.to_string());
        }
        if let Some(param) = sweep.balance_by {
            if let Err(msg) = balance(&mut config, param) {
                return usage(err, &msg);
            }
        }
        if let Err(e) = config.resolve() {
            return usage(err, &e.to_string());
        }
        points.push((i, config, eps));
    }

    let threads = std::env::var("PADIC_HLP_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(io::Error::other)?;
    let rows: Vec<Result<SweepRow, String>> = pool.install(|| {
        points
            .par_iter()
            .map(|(i, config, eps)| sweep_row(*i, config, eps.clone(), &est))
            .collect()
    });
    let mut good = Vec::with_capacity(rows.len());
    for row in rows {
        match row {
            Ok(r) => good.push(r),
            Err(e) => {
                writeln!(err, "error: {e}")?;
                return Ok(EXIT_SOFTWARE);
            }
        }
    }

    let mut w = sink(&output.out, out)?;
    match sweep.format {
        Format::Json => emit_json(
            &mut *w,
            "sweep",
            run_config(base_config, Some(est), Some(sweep_config)),
            good,
        )?,
        Format::Csv => write_csv(&mut *w, &good)?,
    }
    Ok(0)
}

fn sweep_row(
    index: usize,
    config: &PointConfig,
    eps: Option<String>,
    est: &EstimateConfig,
) -> Result<SweepRow, String> {
    let (base, k, s) = config.resolve().map_err(|e| e.to_string())?;
    let eps_value = eps.as_deref().and_then(|e| e.parse::<Scalar>().ok()).map(|s| s.value());
    let report: NormReport =
        estimate_norm(&k, &s, base, &est.options(eps_value)).map_err(|e| e.to_string())?;
    Ok(SweepRow {
        index,
        p: config.p,
        lambda: k.lambda.to_string(),
        mu: k.mu.to_string(),
        nu: k.nu.to_string(),
        q: s.q.to_string(),
        r: s.r.to_string(),
        alpha: s.alpha.to_string(),
        beta: s.beta.to_string(),
        eps,
        status: report.verdict.status,
        tau: report.verdict.tau.to_string(),
        closed_form: report.closed_form.as_ref().map(|c| c.value),
        schur_bound: report.schur.map(|c| c.bound),
        matrix_lower: report.matrix_lower.as_ref().map(|m| m.value),
        max_extremal_ratio: report.max_extremal_ratio(),
    })
}

fn write_csv(w: &mut dyn Write, rows: &[SweepRow]) -> io::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(SWEEP_COLUMNS)?;
    let num = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
    for r in rows {
        csv.write_record([
            r.index.to_string(),
            r.p.to_string(),
            r.lambda.clone(),
            r.mu.clone(),
            r.nu.clone(),
            r.q.clone(),
            r.r.clone(),
            r.alpha.clone(),
            r.beta.clone(),
            r.eps.clone().unwrap_or_default(),
            r.status.to_string(),
            r.tau.clone(),
            num(r.closed_form),
            num(r.schur_bound),
            num(r.matrix_lower),
            num(r.max_extremal_ratio),
        ])?;
    }
    csv.flush()
}
