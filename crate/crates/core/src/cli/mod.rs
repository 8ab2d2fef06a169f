//! Command-line front end. Every subcommand produces an [`OutputRecord`]
//! written as JSON or CSV; the exit code is 0 on pass, 1 on a failed check
//! and 2 on a usage error.

mod commands;
mod record;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{
    alpha_table, at_least_alpha_m, foliate, lawson_known, random_alpha, subcalib, verify,
    write_curves, FoliateOptions, VerifyOptions, Which, FOLIATE_COLUMNS,
};
pub use record::{OutputRecord, Row, Status};

use crate::calib::GridSpec;
use crate::error::Error;
use crate::foliation::{DEFAULT_EPS, DEFAULT_SAMPLES, DEFAULT_TOL};
use crate::ratpoly::{parse_rational, Rational};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hypercone",
    version,
    about = "Critical exponents of weighted minimizing hypercones"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate alpha_m with exact isolating intervals
    AlphaTable {
        /// Dimensions: `a..b` (inclusive), `a,b,c` or a single value
        #[arg(long, value_parser = parse_m_list)]
        m: MList,
        #[arg(long, default_value_t = 9)]
        digits: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run a family of exact checks over a range of dimensions
    Verify {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, value_parser = parse_m_list, default_value = "2..13")]
        m: MList,
        /// Largest k + h for the Lawson grid
        #[arg(long, default_value_t = 16)]
        sum_max: u64,
        /// Seed for the random rational samples
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples per dimension
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 9)]
        digits: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Integrate the barrier foliation and report its certificate
    Foliate(FoliateArgs),
    /// Check the sign of the explicit sub-calibration on a grid
    Subcalib(SubcalibArgs),
}

#[derive(Debug, Args)]
pub struct FoliateArgs {
    #[arg(long)]
    pub m: u64,
    /// Weight exponent, exact: `7/2`, `3.5` or `35e-1`
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Rational,
    /// Decimals of the echoed alpha_m
    #[arg(long, default_value_t = 9)]
    pub digits: u32,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Samples per branch
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub n: usize,
    /// Level-curve parameters, comma-separated
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub lambdas: Vec<f64>,
    /// Curve CSV path
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Allow alpha below alpha_m and report the outcome
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct SubcalibArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    pub r_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub y_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub y_max: f64,
    #[arg(long, default_value_t = 100)]
    pub nr: usize,
    #[arg(long, default_value_t = 100)]
    pub ny: usize,
    /// Half-width in angle of the bands excluded around the cone and axes
    #[arg(long, default_value_t = 0.01)]
    pub band: f64,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

/// Dimensions parsed from `a..b`, `a,b,c` or `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MList(pub Vec<u64>);

pub fn parse_m_list(s: &str) -> Result<MList, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("{t:?} is not a dimension"))
    };
    let ms = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty range {s}"));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if let Some(bad) = ms.iter().find(|&&m| m < 2) {
        return Err(format!("m = {bad} must be at least 2"));
    }
    Ok(MList(ms))
}

fn parse_alpha(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn emit(rec: &OutputRecord, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => rec.write_json(out),
        Format::Csv => rec.write_csv(out).map_err(std::io::Error::other),
    }
}

fn usage(err: &mut dyn Write, msg: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "error: {msg}");
    EXIT_USAGE
}

/// Parses `args` (program name first) and runs the subcommand, writing the
/// record to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let (result, format) = match cli.command {
        Command::AlphaTable { m, digits, format } => {
            if digits == 0 {
                return usage(err, "--digits must be at least 1");
            }
            (alpha_table(&m.0, digits), format)
        }
        Command::Verify {
            which,
            m,
            sum_max,
            seed,
            samples,
            digits,
            format,
        } => {
            if which == Which::Lawson && sum_max < 4 {
                return usage(err, "--sum-max must be at least 4");
            }
            let opts = VerifyOptions {
                which,
                ms: m.0,
                sum_max,
                seed,
                samples,
                digits,
            };
            (verify(&opts), format)
        }
        Command::Foliate(a) => return run_foliate(a, out, err),
        Command::Subcalib(a) => {
            if a.m < 2 {
                return usage(err, format!("m = {} must be at least 2", a.m));
            }
            if !(a.alpha > 0.0 && a.alpha.is_finite()) {
                return usage(err, format!("alpha = {} must be positive", a.alpha));
            }
            let grid =
                match GridSpec::new((a.r_min, a.r_max), (a.y_min, a.y_max), a.nr, a.ny, a.band) {
                    Ok(g) => g,
                    Err(e) => return usage(err, e),
                };
            (subcalib(a.m, a.alpha, &grid), a.format)
        }
    };
    finish(result, format, out, err)
}

fn finish(
    result: crate::Result<OutputRecord>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match result {
        Ok(rec) => {
            if let Err(e) = emit(&rec, format, out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_FAIL;
            }
            match rec.status() {
                Status::Pass => EXIT_PASS,
                Status::Fail => EXIT_FAIL,
            }
        }
        Err(e @ Error::InvalidParams(_)) | Err(e @ Error::Parse(_)) => usage(err, e),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAIL
        }
    }
}

fn run_foliate(a: FoliateArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if a.m < 2 {
        return usage(err, format!("m = {} must be at least 2", a.m));
    }
    if a.lambdas.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return usage(err, "every lambda must be positive");
    }
    if !a.force && !at_least_alpha_m(a.m, &a.alpha) {
        return usage(
            err,
            format!(
                "alpha = {} is below alpha_{}; pass --force to explore",
                crate::ratpoly::fraction_string(&a.alpha),
                a.m
            ),
        );
    }
    let opts = FoliateOptions {
        m: a.m,
        alpha: a.alpha,
        digits: a.digits,
        eps: a.eps,
        tol: a.tol,
        n: a.n,
        lambdas: a.lambdas.clone(),
        force: a.force,
    };
    let result = foliate(&opts).and_then(|(rec, fol)| {
        if let (Some(fol), Some(path)) = (fol, &a.out) {
            write_curves(&fol, &a.lambdas, path)?;
        }
        Ok(rec)
    });
    finish(result, a.format, out, err)
}
