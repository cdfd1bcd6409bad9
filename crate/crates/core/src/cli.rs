//! Command-line front end.
//!
//! Input is one JSON document `{"n", "holonomy_rank", "D", "d"}`, optionally
//! with an `"expect"` object consumed by `verify`. Exit codes: 0 success,
//! 2 validation failure, 3 I/O or parse failure, 4 zeta function undefined,
//! 5 verification failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Number, Value};
use thiserror::Error;

use crate::group::{validate, AffineAut, DiagZ2Group, RNumber, ValidatedAut};
use crate::intlinalg::{MatZ, PolyZ};
use crate::oracles::{verify_instance, verify_random, Expectations, VerifyReport};
use crate::zeta::{pipeline, second_factor, zeta_series, ZetaError, ZetaResult, RADIUS_ERROR};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_UNDEFINED: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: invalid input: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("{0}")]
    Undefined(String),
    #[error("verification failed: {0} check(s) reported failures")]
    Verification(usize),
    #[error("{0}")]
    Usage(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => EXIT_IO,
            CliError::Validation(_) | CliError::Usage(_) => EXIT_VALIDATION,
            CliError::Undefined(_) => EXIT_UNDEFINED,
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Internal(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rzeta", version, about = "Reidemeister numbers and zeta functions for ℤ₂-holonomy crystallographic groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// R(φᵐ) for a range of powers.
    Rnum {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long, default_value_t = 10)]
        to: u64,
        #[arg(long)]
        json: bool,
    },
    /// Certified rational zeta function.
    Zeta {
        input: PathBuf,
        /// Also print the first N Taylor coefficients.
        #[arg(long, value_name = "N")]
        series: Option<usize>,
        #[arg(long)]
        latex: bool,
        #[arg(long)]
        json: bool,
    },
    /// Whether the zeta function exists; exits 4 when it does not.
    Exists {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the brute-force oracles on an input or on random instances.
    Verify(VerifyArgs),
    /// Taylor coefficients of the zeta function from R(φᵏ).
    Series {
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        terms: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub input: Option<PathBuf>,
    /// Number of random instances per check.
    #[arg(long, value_name = "COUNT")]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Dimension cap for random instances.
    #[arg(long, default_value_t = 6)]
    pub dim: usize,
}

/// Integer accepted either as a JSON number or as a decimal string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum IntLit {
    Num(Number),
    Str(String),
}

impl IntLit {
    fn to_bigint(&self) -> Result<BigInt, String> {
        let s = match self {
            IntLit::Num(n) => n.to_string(),
            IntLit::Str(s) => s.clone(),
        };
        BigInt::from_str(s.trim()).map_err(|_| format!("`{s}` is not an integer"))
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpectSpec {
    /// Integers, or the string `"inf"`.
    rnumbers: Option<Vec<IntLit>>,
    numerator: Option<Vec<IntLit>>,
    denominator: Option<Vec<IntLit>>,
}

/// Parsed input document.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub n: usize,
    pub holonomy_rank: usize,
    #[serde(rename = "D")]
    matrix: Vec<Vec<IntLit>>,
    d: Vec<IntLit>,
    #[serde(default)]
    expect: Option<ExpectSpec>,
}

impl JobSpec {
    pub fn from_json(text: &str) -> Result<JobSpec, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<JobSpec, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        JobSpec::from_json(&text).map_err(|message| CliError::Parse {
            path: path.to_path_buf(),
            message,
        })
    }

    pub fn group_and_aut(&self) -> Result<(DiagZ2Group, AffineAut), CliError> {
        let group = DiagZ2Group::new(self.n, self.holonomy_rank).map_err(|e| CliError::Validation(e.to_string()))?;
        let rows = self
            .matrix
            .iter()
            .map(|r| r.iter().map(IntLit::to_bigint).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::Validation)?;
        let matrix = MatZ::from_rows(&rows).map_err(|e| CliError::Validation(e.to_string()))?;
        let d = self
            .d
            .iter()
            .map(IntLit::to_bigint)
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::Validation)?;
        Ok((group, AffineAut::new(matrix, d)))
    }

    pub fn validated(&self) -> Result<ValidatedAut, CliError> {
        let (g, a) = self.group_and_aut()?;
        validate(&g, &a).map_err(|e| CliError::Validation(e.to_string()))
    }

    pub fn expectations(&self) -> Result<Expectations, CliError> {
        let Some(e) = &self.expect else {
            return Ok(Expectations::default());
        };
        let ints = |v: &Option<Vec<IntLit>>| -> Result<Option<Vec<BigInt>>, CliError> {
            v.as_ref()
                .map(|xs| xs.iter().map(IntLit::to_bigint).collect::<Result<Vec<_>, _>>())
                .transpose()
                .map_err(CliError::Validation)
        };
        let rnumbers = e
            .rnumbers
            .as_ref()
            .map(|xs| {
                xs.iter()
                    .map(|x| match x {
                        IntLit::Str(s) if s.trim() == "inf" => Ok(RNumber::Infinite),
                        other => other.to_bigint().map(RNumber::Finite),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()
            .map_err(CliError::Validation)?;
        Ok(Expectations {
            rnumbers,
            numerator: ints(&e.numerator)?,
            denominator: ints(&e.denominator)?,
        })
    }
}

fn big_json(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("decimal integers are valid JSON numbers"))
}

fn poly_json(p: &PolyZ) -> Value {
    let coeffs: Vec<Value> = if p.is_zero() {
        vec![json!(0)]
    } else {
        p.coeffs().iter().map(big_json).collect()
    };
    Value::Array(coeffs)
}

fn rnumber_json(r: &RNumber) -> Value {
    match r {
        RNumber::Finite(v) => big_json(v),
        RNumber::Infinite => json!("inf"),
    }
}

/// `1 - 2z^{4}` style rendering.
pub fn latex_poly(p: &PolyZ) -> String {
    p.to_string().replace("z^", "z^{").split(' ').map(close_brace).collect::<Vec<_>>().join(" ")
}

fn close_brace(token: &str) -> String {
    if token.contains("z^{") {
        format!("{token}}}")
    } else {
        token.to_string()
    }
}

/// `R_\phi(z) = …`, splitting off `∏(1 - zⁱ)^(-cᵢ)` when it divides out.
pub fn latex_zeta(z: &ZetaResult) -> String {
    let p = latex_poly(&z.rational.numerator);
    let second = second_factor(&z.second_factor_c);
    let split = !z.second_factor_c.is_empty() && z.second_factor_divides;
    if !split {
        return format!("R_\\phi(z) = \\frac{{{p}}}{{{}}}", latex_poly(&z.rational.denominator));
    }
    let rest = z
        .rational
        .denominator
        .exact_div(&second.denominator)
        .expect("divisibility already checked");
    let factors: String = z
        .second_factor_c
        .iter()
        .map(|(i, c)| {
            let base = if i == 1 { "(1 - z)".to_string() } else { format!("(1 - z^{{{i}}})") };
            if c == 1 {
                base
            } else {
                format!("{base}^{{{c}}}")
            }
        })
        .collect();
    format!(
        "R_\\phi(z) = \\frac{{{p}}}{{{}}} \\cdot \\frac{{1}}{{{factors}}}",
        latex_poly(&rest)
    )
}

fn zeta_error(e: ZetaError) -> CliError {
    match e {
        ZetaError::ZetaUndefined(_) | ZetaError::InfiniteTerm(_) => CliError::Undefined(e.to_string()),
        ZetaError::Group(g) => CliError::Validation(g.to_string()),
        other => CliError::Internal(other.to_string()),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|e| CliError::Io {
        path: PathBuf::from("<stdout>"),
        message: e.to_string(),
    })
}

fn cmd_rnum(out: &mut dyn Write, input: &Path, from: u64, to: u64, json: bool) -> Result<(), CliError> {
    if from == 0 || to < from {
        return Err(CliError::Usage(format!("invalid power range {from}..={to}")));
    }
    let v = JobSpec::load(input)?.validated()?;
    let values: Vec<(u64, RNumber)> = (from..=to)
        .map(|m| (m, v.reidemeister_number(m).expect("m ≥ 1")))
        .collect();
    let r_inf = v.group().has_r_infinity();
    if json {
        let rows: Vec<Value> = values
            .iter()
            .map(|(m, r)| json!({"m": m, "R": rnumber_json(r)}))
            .collect();
        let doc = json!({"rnumbers": rows, "r_infinity": r_inf});
        return write_out(out, &doc.to_string());
    }
    let mut text = String::from("m\tR");
    for (m, r) in &values {
        text.push_str(&format!("\n{m}\t{r}"));
    }
    if r_inf {
        text.push_str("\nnote: holonomy rank 1, the group has the R∞-property");
    }
    write_out(out, &text)
}

/// JSON report for `zeta --json`.
pub fn zeta_json(z: &ZetaResult, series: Option<usize>) -> Value {
    let c: BTreeMap<String, u64> = z.second_factor_c.iter().map(|(i, c)| (i.to_string(), c)).collect();
    let radius = if z.radius.is_infinite() { Value::Null } else { json!(z.radius.value) };
    let mut doc = json!({
        "numerator": poly_json(&z.rational.numerator),
        "denominator": poly_json(&z.rational.denominator),
        "radius": radius,
        "radius_error": RADIUS_ERROR,
        "degree_bound": z.degree_bound,
        "certified": z.rational.certified,
        "second_factor_c": c,
    });
    if let Some(n) = series {
        let terms: Vec<Value> = z.rational.expand(n).iter().map(big_json).collect();
        doc["series"] = Value::Array(terms);
    }
    doc
}

fn cmd_zeta(out: &mut dyn Write, input: &Path, series: Option<usize>, latex: bool, json: bool) -> Result<(), CliError> {
    let v = JobSpec::load(input)?.validated()?;
    let z = pipeline(&v).map_err(zeta_error)?;
    if json {
        return write_out(out, &zeta_json(&z, series).to_string());
    }
    let list = |p: &PolyZ| {
        let items: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
        format!("[{}]", items.join(", "))
    };
    let radius = if z.radius.is_infinite() {
        "inf".to_string()
    } else {
        format!("{:.10} ± {:e}", z.radius.value, RADIUS_ERROR)
    };
    let c: Vec<String> = z.second_factor_c.iter().map(|(i, c)| format!("c_{i} = {c}")).collect();
    let mut text = format!(
        "numerator: {}\ndenominator: {}\nzeta: ({}) / ({})\ncertified: {} (degree bound {})\nradius: {radius}\nsecond factor: {}",
        list(&z.rational.numerator),
        list(&z.rational.denominator),
        z.rational.numerator,
        z.rational.denominator,
        z.rational.certified,
        z.degree_bound,
        if c.is_empty() { "none".to_string() } else { c.join(", ") },
    );
    if let Some(n) = series {
        let terms: Vec<String> = z.rational.expand(n).iter().map(|c| c.to_string()).collect();
        text.push_str(&format!("\nseries: {}", terms.join(", ")));
    }
    if latex {
        text.push_str(&format!("\nlatex: {}", latex_zeta(&z)));
    }
    write_out(out, &text)
}

fn cmd_exists(out: &mut dyn Write, input: &Path, json: bool) -> Result<(), CliError> {
    let v = JobSpec::load(input)?.validated()?;
    let e = v.zeta_exists();
    let reason = e.reason.map(|r| r.to_string());
    if json {
        write_out(out, &json!({"exists": e.exists, "reason": reason}).to_string())?;
    } else if e.exists {
        write_out(out, "exists")?;
    } else {
        write_out(out, &format!("undefined: {}", reason.clone().unwrap_or_default()))?;
    }
    match reason {
        Some(r) => Err(CliError::Undefined(r)),
        None => Ok(()),
    }
}

fn cmd_series(out: &mut dyn Write, input: &Path, terms: usize, json: bool) -> Result<(), CliError> {
    let v = JobSpec::load(input)?.validated()?;
    let rn = v.reidemeister_numbers(terms.saturating_sub(1) as u64);
    let s = zeta_series(&rn).map_err(zeta_error)?;
    let coeffs = s
        .integer_coeffs()
        .ok_or_else(|| CliError::Internal("non-integral zeta coefficient".into()))?;
    if json {
        let doc = json!({
            "rnumbers": rn.iter().map(rnumber_json).collect::<Vec<_>>(),
            "series": coeffs.iter().map(big_json).collect::<Vec<_>>(),
        });
        return write_out(out, &doc.to_string());
    }
    let items: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    write_out(out, &items.join(", "))
}

fn cmd_verify(out: &mut dyn Write, args: &VerifyArgs) -> Result<(), CliError> {
    let mut reports: Vec<VerifyReport> = Vec::new();
    if let Some(path) = &args.input {
        let job = JobSpec::load(path)?;
        let (g, a) = job.group_and_aut()?;
        reports.extend(verify_instance(&g, &a, &job.expectations()?));
    }
    if let Some(count) = args.random {
        reports.extend(verify_random(count, args.seed, args.dim));
    }
    if args.input.is_none() && args.random.is_none() {
        return Err(CliError::Usage("verify needs an input file or --random COUNT".into()));
    }
    for r in &reports {
        write_out(out, &r.to_string())?;
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if failed > 0 {
        return Err(CliError::Verification(failed));
    }
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Rnum { input, from, to, json } => cmd_rnum(out, input, *from, *to, *json),
        Command::Zeta {
            input,
            series,
            latex,
            json,
        } => cmd_zeta(out, input, *series, *latex, *json),
        Command::Exists { input, json } => cmd_exists(out, input, *json),
        Command::Verify(args) => cmd_verify(out, args),
        Command::Series { input, terms, json } => cmd_series(out, input, *terms, *json),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
/// Errors go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Thread count from `RZETA_THREADS`, if set to a positive integer.
pub fn thread_limit() -> Option<usize> {
    std::env::var("RZETA_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}
