//! Command-line front end.
//!
//! ```text
//! voigt eval   --x X --y Y [--method M] [--k-terms N] [--m M] [--hat] [--format json|csv]
//! voigt eval   --r R --theta-over-pi T ...
//! voigt table1 [--check] [--format table|json]
//! voigt table2 [--check] [--format table|json]
//! voigt scan   --r R --n N --variant eq41|eq42 [--k-terms N] [--m M]
//! voigt coeffs --phi P --alpha A [--kmax K] [--format table|json]
//! ```
//!
//! Exit codes: 0 success, 1 `--check` mismatch, 2 domain error, 3 precision
//! failure, 64 usage error. `--precision` sets decimal digits; otherwise the
//! `VOIGT_PRECISION` environment variable, otherwise 40 digits where an
//! exact value is computed and 16 for pure expansion evaluations.

pub mod format;
pub mod tables;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::coefficients::{c_of_phi, CoefficientSet, K_MAX};
use crate::error::{Result, VoigtError};
use crate::expansions::{
    algebraic, hat_expansion, optimal_truncation, theorem1, theorem2, HatVariant, TruncationPlan, DEFAULT_K_TERMS,
};
use crate::numerics::{parse_real, PrecisionContext, DEFAULT_DIGITS, MIN_DIGITS};
use crate::oracle::{reduce_to_first_quadrant, remainder_exact, voigt_exact_erfc, voigt_quadrature, VoigtArgument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

pub const PRECISION_ENV: &str = "VOIGT_PRECISION";

#[derive(Debug, Parser)]
#[command(name = "voigt", version, about = "Voigt functions K(x,y), L(x,y) and their exponentially small remainders")]
pub struct Cli {
    /// Decimal digits of working precision (at least 16).
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate K and L (or their remainders) at one point.
    Eval(EvalArgs),
    /// Regenerate the remainder values at |w| = 3.5.
    Table1(TableArgs),
    /// Regenerate the relative errors at |w| = 6.
    Table2(TableArgs),
    /// Relative errors of a remainder expansion over a grid of angles.
    Scan(ScanArgs),
    /// List the expansion coefficients at one (phi, alpha).
    Coeffs(CoeffsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalMethod {
    Oracle,
    Quadrature,
    Algebraic,
    Theorem1,
    Theorem2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Eq41,
    Eq42,
}

impl From<VariantArg> for HatVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Eq41 => HatVariant::Eq41,
            VariantArg::Eq42 => HatVariant::Eq42,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    #[arg(long, allow_hyphen_values = true, requires = "y", conflicts_with_all = ["r", "theta_over_pi"])]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "x")]
    pub y: Option<String>,
    /// Modulus |w|, with --theta-over-pi instead of --x/--y.
    #[arg(long, requires = "theta_over_pi")]
    pub r: Option<String>,
    #[arg(long, requires = "r")]
    pub theta_over_pi: Option<String>,
    #[arg(long, value_enum, default_value = "oracle")]
    pub method: EvalMethod,
    /// Number of remainder terms (k = 0 .. k_terms-1).
    #[arg(long)]
    pub k_terms: Option<usize>,
    /// Truncation index of the algebraic series (default: optimal).
    #[arg(long)]
    pub m: Option<u32>,
    /// Report the exponentially small remainders instead of K and L.
    #[arg(long)]
    pub hat: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Debug, clap::Args)]
pub struct TableArgs {
    /// Compare with the reference values and fail on any mismatch.
    #[arg(long)]
    pub check: bool,
    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
}

#[derive(Debug, clap::Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub r: String,
    /// Number of angles on the grid (at least 2).
    #[arg(long = "n", alias = "n-theta")]
    pub n: usize,
    #[arg(long, value_enum)]
    pub variant: VariantArg,
    #[arg(long, default_value_t = DEFAULT_K_TERMS)]
    pub k_terms: usize,
    #[arg(long)]
    pub m: Option<u32>,
}

#[derive(Debug, clap::Args)]
pub struct CoeffsArgs {
    #[arg(long)]
    pub phi: String,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value_t = K_MAX)]
    pub kmax: usize,
    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
}

/// One line of `eval` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub x: f64,
    pub y: f64,
    pub r: f64,
    pub theta_over_pi: f64,
    pub method: String,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none", default)]
    pub k: Option<f64>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none", default)]
    pub l: Option<f64>,
    #[serde(rename = "K_hat", skip_serializing_if = "Option::is_none", default)]
    pub k_hat: Option<f64>,
    #[serde(rename = "L_hat", skip_serializing_if = "Option::is_none", default)]
    pub l_hat: Option<f64>,
    pub err_estimate: f64,
    pub k_terms: Option<usize>,
    pub m: Option<u32>,
    pub alpha: Option<f64>,
    pub precision: u32,
}

const CSV_HEADER: &str = "x,y,r,theta_over_pi,method,K,L,K_hat,L_hat,err_estimate,k_terms,m,alpha,precision";

impl OutputRecord {
    fn text_block(&self) -> String {
        let mut s = format!("w = {} + {}i  (r = {}, theta/pi = {})\n", self.x, self.y, self.r, self.theta_over_pi);
        for (name, v) in [("K", self.k), ("L", self.l), ("K_hat", self.k_hat), ("L_hat", self.l_hat)] {
            if let Some(v) = v {
                s += &format!("{name:<6}= {v:e}\n");
            }
        }
        s += &format!("method = {}, precision = {}, error estimate = {:e}", self.method, self.precision, self.err_estimate);
        if let (Some(m), Some(alpha)) = (self.m, self.alpha) {
            s += &format!(", m = {m}, alpha = {alpha}");
        }
        if let Some(k) = self.k_terms {
            s += &format!(", k_terms = {k}");
        }
        s + "\n"
    }

    fn csv_row(&self) -> String {
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map(|v| v.to_string()).unwrap_or_default()
        }
        fn sci(v: Option<f64>) -> String {
            v.map(|v| format!("{v:e}")).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{:e},{},{},{},{}",
            self.x,
            self.y,
            self.r,
            self.theta_over_pi,
            self.method,
            sci(self.k),
            sci(self.l),
            sci(self.k_hat),
            sci(self.l_hat),
            self.err_estimate,
            opt(self.k_terms),
            opt(self.m),
            opt(self.alpha),
            self.precision
        )
    }
}

/// Maps a library error to the process exit code.
pub fn exit_code(e: &VoigtError) -> i32 {
    match e {
        VoigtError::Precision { .. } | VoigtError::QuadratureNonConvergence { .. } => EXIT_PRECISION,
        _ => EXIT_DOMAIN,
    }
}

enum Failure {
    Usage(String),
    Lib(VoigtError),
}

impl From<VoigtError> for Failure {
    fn from(e: VoigtError) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn context(flag: Option<u32>, default: u32) -> std::result::Result<PrecisionContext, Failure> {
    let digits = match flag {
        Some(d) => d,
        None => match std::env::var(PRECISION_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("{PRECISION_ENV} must be an integer, got '{v}'")))?,
            Err(_) => default,
        },
    };
    PrecisionContext::new(digits).map_err(|e| Failure::Usage(e.to_string()))
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a, cli.precision, out, err),
        Command::Table1(a) => cmd_table1(a, cli.precision, out),
        Command::Table2(a) => cmd_table2(a, cli.precision, out),
        Command::Scan(a) => cmd_scan(a, cli.precision, out),
        Command::Coeffs(a) => cmd_coeffs(a, cli.precision, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io_ok(r: std::io::Result<()>) -> CmdResult {
    r.map(|_| EXIT_OK).map_err(|e| Failure::Usage(format!("write failed: {e}")))
}

fn eval_point(a: &EvalArgs, ctx: &PrecisionContext) -> Result<(VoigtArgument, i8, i8)> {
    match (&a.x, &a.y, &a.r, &a.theta_over_pi) {
        (Some(x), Some(y), _, _) => reduce_to_first_quadrant(&parse_real(x, ctx)?, &parse_real(y, ctx)?, ctx),
        (_, _, Some(r), Some(t)) => {
            let arg = VoigtArgument::from_polar_fraction(&parse_real(r, ctx)?, &parse_real(t, ctx)?, ctx)?;
            Ok((arg, 1, 1))
        }
        _ => Err(VoigtError::domain("give either --x and --y or --r and --theta-over-pi")),
    }
}

fn cmd_eval(a: &EvalArgs, precision: Option<u32>, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    if a.x.is_none() && a.r.is_none() {
        return Err(Failure::Usage("give either --x and --y or --r and --theta-over-pi".into()));
    }
    let oracle_needed = matches!(a.method, EvalMethod::Oracle | EvalMethod::Quadrature) || a.hat && a.method == EvalMethod::Algebraic;
    let ctx = context(precision, if oracle_needed { DEFAULT_DIGITS } else { MIN_DIGITS })?;
    let (arg, sk, sl) = eval_point(a, &ctx)?;
    let plan = match a.m {
        Some(m) => TruncationPlan::with_m(arg.r(), m, &ctx)?,
        None => optimal_truncation(arg.r(), &ctx),
    };
    let expansion = matches!(a.method, EvalMethod::Algebraic | EvalMethod::Theorem1 | EvalMethod::Theorem2);
    if expansion && plan.below_range {
        let _ = writeln!(err, "warning: |w| < 1 is below the range of the asymptotic expansions");
    }
    let k_terms = a.k_terms.unwrap_or(DEFAULT_K_TERMS);

    let mut method = a.method;
    if method == EvalMethod::Theorem1 {
        if let Err(VoigtError::Domain(msg)) = hat_expansion(&arg, &plan, HatVariant::Eq41, k_terms, &ctx) {
            let _ = writeln!(err, "warning: {msg}; falling back");
            method = EvalMethod::Theorem2;
        }
    }

    let mut record = OutputRecord {
        x: f64::from(sl) * arg.x().to_f64(),
        y: f64::from(sk) * arg.y().to_f64(),
        r: arg.r().to_f64(),
        theta_over_pi: arg.theta_over_pi(),
        method: String::new(),
        k: None,
        l: None,
        k_hat: None,
        l_hat: None,
        err_estimate: 0.0,
        k_terms: None,
        m: None,
        alpha: None,
        precision: ctx.digits(),
    };
    let signed = |v: &Float, s: i8| f64::from(s) * v.to_f64();

    if a.hat {
        let (kh, lh, tag, err_est) = match method {
            EvalMethod::Oracle | EvalMethod::Quadrature | EvalMethod::Algebraic => {
                let rem = remainder_exact(&arg, plan.m, &ctx)?;
                (rem.k_hat, rem.l_hat, "oracle-remainder", rem.err_estimate)
            }
            EvalMethod::Theorem1 | EvalMethod::Theorem2 => {
                let variant = if method == EvalMethod::Theorem1 { HatVariant::Eq41 } else { HatVariant::Eq42 };
                let e = hat_expansion(&arg, &plan, variant, k_terms, &ctx)?;
                record.k_terms = Some(k_terms);
                (e.k_hat, e.l_hat, if variant == HatVariant::Eq41 { "eq41" } else { "eq42" }, e.err_estimate)
            }
        };
        record.k_hat = Some(signed(&kh, sk));
        record.l_hat = Some(signed(&lh, sl));
        record.method = tag.to_string();
        record.err_estimate = err_est;
        record.m = Some(plan.m);
        record.alpha = Some(plan.alpha.to_f64());
    } else {
        let e = match method {
            EvalMethod::Oracle => voigt_exact_erfc(&arg, &ctx)?,
            EvalMethod::Quadrature => voigt_quadrature(&arg, &ctx)?,
            EvalMethod::Algebraic => algebraic(&arg, plan.m, &ctx)?,
            EvalMethod::Theorem1 => theorem1(&arg, &plan, k_terms, &ctx)?,
            EvalMethod::Theorem2 => theorem2(&arg, &plan, k_terms, &ctx)?,
        };
        if expansion {
            record.m = Some(plan.m);
            record.alpha = Some(plan.alpha.to_f64());
            if method != EvalMethod::Algebraic {
                record.k_terms = Some(k_terms);
            }
        }
        record.k = Some(signed(&e.k, sk));
        record.l = Some(signed(&e.l, sl));
        record.method = e.method.as_str().to_string();
        record.err_estimate = e.err_estimate;
    }

    let text = match a.format {
        OutputFormat::Csv => format!("{CSV_HEADER}\n{}\n", record.csv_row()),
        OutputFormat::Table => record.text_block(),
        OutputFormat::Json => format!("{}\n", serde_json::to_string(&record).expect("record serializes")),
    };
    io_ok(out.write_all(text.as_bytes()))
}

fn report_checks(checks: &[tables::CellCheck], out: &mut dyn Write) -> CmdResult {
    let mut failed = 0;
    let mut text = String::new();
    for c in checks {
        let status = if c.pass { "ok" } else { "MISMATCH" };
        if !c.pass {
            failed += 1;
        }
        text.push_str(&format!("{status:>8}  {}: computed {} expected {}\n", c.label, c.computed, c.expected));
    }
    text.push_str(&format!("{} of {} cells match\n", checks.len() - failed, checks.len()));
    io_ok(out.write_all(text.as_bytes()))?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK })
}

fn cmd_table1(a: &TableArgs, precision: Option<u32>, out: &mut dyn Write) -> CmdResult {
    let ctx = context(precision, DEFAULT_DIGITS)?;
    let blocks = tables::compute_table1(&ctx)?;
    let body = match a.format {
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&blocks).expect("serializable")),
        _ => tables::render_table1(&blocks),
    };
    io_ok(out.write_all(body.as_bytes()))?;
    if a.check {
        return report_checks(&tables::check_table1(&blocks), out);
    }
    Ok(EXIT_OK)
}

fn cmd_table2(a: &TableArgs, precision: Option<u32>, out: &mut dyn Write) -> CmdResult {
    let ctx = context(precision, DEFAULT_DIGITS)?;
    let rows = tables::compute_table2(&ctx)?;
    let body = match a.format {
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&rows).expect("serializable")),
        _ => tables::render_table2(&rows),
    };
    io_ok(out.write_all(body.as_bytes()))?;
    if a.check {
        return report_checks(&tables::check_table2(&rows), out);
    }
    Ok(EXIT_OK)
}

/// Angles `theta/pi` of the scan grid: `[0, 1/2]` for the uniform expansion
/// and `[0, 1/2 - DELTA_T1/pi]` for the other.
pub fn scan_grid(n: usize, variant: HatVariant, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    if n < 2 {
        return Err(VoigtError::domain("scan needs --n >= 2"));
    }
    let top = match variant {
        HatVariant::Eq41 => parse_real("0.48", ctx)?,
        HatVariant::Eq42 => parse_real("0.5", ctx)?,
    };
    Ok((0..n).map(|i| Float::with_val(ctx.bits(), &top * i as u32) / (n as u32 - 1)).collect())
}

fn cmd_scan(a: &ScanArgs, precision: Option<u32>, out: &mut dyn Write) -> CmdResult {
    let ctx = context(precision, DEFAULT_DIGITS)?;
    let variant = HatVariant::from(a.variant);
    let r = parse_real(&a.r, &ctx)?;
    let grid = scan_grid(a.n, variant, &ctx)?;
    let plan = match a.m {
        Some(m) => TruncationPlan::with_m(&r, m, &ctx)?,
        None => optimal_truncation(&r, &ctx),
    };
    let rows: Vec<String> = grid
        .par_iter()
        .map(|t| {
            let arg = VoigtArgument::from_polar_fraction(&r, t, &ctx)?;
            let (ek, el) = tables::relative_errors(&arg, &plan, variant, a.k_terms, &ctx)?;
            let cell = |v: Option<f64>| v.map_or("nan".to_string(), |v| format!("{v:.6e}"));
            Ok(format!("{},{},{}", t.to_f64(), cell(ek), cell(el)))
        })
        .collect::<Result<_>>()?;
    let mut text = String::from("theta_over_pi,rel_err_K,rel_err_L\n");
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    io_ok(out.write_all(text.as_bytes()))
}

#[derive(Serialize)]
struct CoeffRow {
    k: usize,
    a: Option<(f64, f64)>,
    b: (f64, f64),
    bhat: (f64, f64),
}

#[derive(Serialize)]
struct CoeffListing {
    phi: f64,
    alpha: f64,
    c: (f64, f64),
    coefficients: Vec<CoeffRow>,
}

fn cmd_coeffs(a: &CoeffsArgs, precision: Option<u32>, out: &mut dyn Write) -> CmdResult {
    if a.kmax > K_MAX {
        return Err(Failure::Lib(VoigtError::UnsupportedOrder { order: a.kmax, max: K_MAX }));
    }
    let ctx = context(precision, DEFAULT_DIGITS)?;
    let phi = parse_real(&a.phi, &ctx)?;
    let alpha = parse_real(&a.alpha, &ctx)?;
    let set = CoefficientSet::new(&phi, &alpha, a.kmax, &ctx)?;
    let c = c_of_phi(&phi, &ctx);
    let pair = |z: &rug::Complex| (z.real().to_f64(), z.imag().to_f64());
    let listing = CoeffListing {
        phi: phi.to_f64(),
        alpha: alpha.to_f64(),
        c: pair(&c),
        coefficients: (0..=a.kmax)
            .map(|k| CoeffRow {
                k,
                a: set.a.as_ref().map(|v| pair(&v[k])),
                b: pair(&set.b[k]),
                bhat: pair(&set.bhat[k]),
            })
            .collect(),
    };
    let text = match a.format {
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&listing).expect("serializable")),
        _ => {
            let mut s = format!("phi = {}, alpha = {}\n", listing.phi, listing.alpha);
            s.push_str(&format!("c(phi) = {:.15e} {:+.15e}i\n", listing.c.0, listing.c.1));
            s.push_str(&format!("{:>2}  {:>46}  {:>46}  {:>46}\n", "k", "A_2k", "B_2k", "Bhat_2k"));
            let cplx = |p: (f64, f64)| format!("{:+.15e} {:+.15e}i", p.0, p.1);
            for row in &listing.coefficients {
                let a = row.a.map_or("singular at phi = 0".to_string(), cplx);
                s.push_str(&format!("{:>2}  {:>46}  {:>46}  {:>46}\n", row.k, a, cplx(row.b), cplx(row.bhat)));
            }
            s
        }
    };
    io_ok(out.write_all(text.as_bytes()))
}
