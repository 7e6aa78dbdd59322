//! Command-line frontend: `eval`, `check` and `certify`.
//!
//! Reports are JSON objects with a fixed field order. High-precision values
//! are decimal strings in `[-]d.ddde±x` form, so identical runs produce
//! byte-identical output. Several `--spec` files run as a batch; their reports
//! are emitted as an array in input order.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{
    certificate_search, check, Certificate, Criterion, Params, SearchTarget, Status, Variant, Verdict, Violation,
    DiscCheck,
};
use crate::error::{Error, Result};
use crate::numerics::{analyze, ConvergenceReport, RateEstimate, DEFAULT_TOL, DEFAULT_WINDOW};
use crate::scalar::{decimal_digits, Backend, Scalar, Value, DEFAULT_PRECISION, MIN_PRECISION};
use crate::sequence::SequenceSpec;
use crate::speclang::parse_spec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "contfrac", version, about = "Evaluate continued fractions and check convergence certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate approximants and convergence diagnostics.
    Eval(Args),
    /// Check a convergence criterion on a prefix.
    Check(Args),
    /// Search for a certificate and re-check it.
    Certify(Args),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Args {
    /// `.cfspec` file; repeat for a batch.
    #[arg(long = "spec", value_name = "FILE")]
    pub spec: Vec<PathBuf>,
    /// Spec text given directly.
    #[arg(long, value_name = "STR", allow_hyphen_values = true)]
    pub inline: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub terms: u64,
    #[arg(long, value_name = "BITS", default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Trailing approximants that must agree within tol.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long, value_enum, default_value_t = BackendArg::Float)]
    pub backend: BackendArg,
    /// Criterion to check, or search target for `certify` (theorem3, thron).
    #[arg(long, value_name = "NAME")]
    pub criterion: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, value_name = "cond1|cond2")]
    pub variant: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Write the CSV trace (n, re, im, gap) here.
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Eval,
    Check,
    Certify,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Eval => "eval",
            Mode::Check => "check",
            Mode::Certify => "certify",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecSource {
    File(PathBuf),
    Inline(String),
}

impl SpecSource {
    fn label(&self) -> String {
        match self {
            SpecSource::File(p) => p.display().to_string(),
            SpecSource::Inline(_) => "inline".into(),
        }
    }

    fn text(&self) -> Result<String> {
        match self {
            SpecSource::Inline(t) => Ok(t.clone()),
            SpecSource::File(p) => {
                fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", p.display())))
            }
        }
    }
}

/// What to run, validated.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    pub sources: Vec<SpecSource>,
    pub terms: u64,
    pub precision: usize,
    pub backend: Backend,
    pub tol: f64,
    pub window: usize,
    pub criterion: Option<Criterion>,
    pub target: SearchTarget,
    pub params: Params,
    pub report: Option<PathBuf>,
    pub trace: Option<PathBuf>,
}

fn param(value: &Option<String>, name: &str) -> Result<Option<crate::expr::Expr>> {
    value.as_deref().map(|t| Params::parse(name, t)).transpose()
}

impl RunConfig {
    pub fn new(mode: Mode, args: &Args) -> Result<Self> {
        let mut sources: Vec<SpecSource> = args.spec.iter().cloned().map(SpecSource::File).collect();
        if let Some(t) = &args.inline {
            sources.push(SpecSource::Inline(t.clone()));
        }
        if sources.is_empty() {
            return Err(Error::InvalidInput("give a spec with --spec FILE or --inline STR".into()));
        }
        if args.terms == 0 {
            return Err(Error::InvalidInput("--terms must be at least 1".into()));
        }
        if args.precision < MIN_PRECISION {
            return Err(Error::InvalidInput(format!("--precision must be at least {MIN_PRECISION}")));
        }
        if !(args.tol > 0.0) {
            return Err(Error::InvalidInput("--tol must be positive".into()));
        }
        if args.window < 2 {
            return Err(Error::InvalidInput("--window must be at least 2".into()));
        }
        if sources.len() > 1 && args.trace.is_some() {
            return Err(Error::InvalidInput("--trace needs a single spec".into()));
        }
        let backend = match args.backend {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::float(args.precision)?,
        };
        let (criterion, target) = match mode {
            Mode::Certify => (
                None,
                args.criterion
                    .as_deref()
                    .map_or(Ok(SearchTarget::Theorem3Constant), str::parse)?,
            ),
            _ => (
                args.criterion.as_deref().map(str::parse).transpose()?,
                SearchTarget::Theorem3Constant,
            ),
        };
        if mode == Mode::Check && criterion.is_none() {
            return Err(Error::InvalidInput("check needs --criterion".into()));
        }
        let params = Params {
            variant: args.variant.as_deref().map(str::parse::<Variant>).transpose()?,
            c: param(&args.c, "c")?,
            beta: param(&args.beta, "beta")?,
            d: param(&args.d, "d")?,
            rho: param(&args.rho, "rho")?,
            a: param(&args.a, "a")?,
            r: param(&args.r, "r")?,
        };
        Ok(RunConfig {
            mode,
            sources,
            terms: args.terms,
            precision: args.precision,
            backend,
            tol: args.tol,
            window: args.window,
            criterion,
            target,
            params,
            report: args.report.clone(),
            trace: args.trace.clone(),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputEcho {
    pub command: Mode,
    pub source: String,
    pub spec: String,
    pub terms: u64,
    pub precision: usize,
    pub tol: String,
    pub window: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexText {
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictEntry {
    pub criterion: Criterion,
    pub params: Params,
    pub status: Status,
    pub checked_up_to: u64,
    pub violation: Option<Violation>,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub full_certification: bool,
    pub partial: bool,
    pub known_discrepancy: bool,
    pub disc: Option<DiscCheck>,
    pub notes: Vec<String>,
}

impl VerdictEntry {
    fn new(v: Verdict, params: Params) -> Self {
        VerdictEntry {
            criterion: v.criterion,
            params,
            status: v.status,
            checked_up_to: v.checked_up_to,
            violation: v.violations.first().cloned(),
            violation_count: v.violation_count,
            violations: v.violations,
            full_certification: v.full_certification,
            partial: v.partial,
            known_discrepancy: v.known_discrepancy,
            disc: v.disc,
            notes: v.notes,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyEntry {
    pub target: SearchTarget,
    pub found: bool,
    pub certificate: Option<Certificate>,
    pub recheck: Option<VerdictEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RateText {
    pub per_term: String,
    pub power: String,
    pub kind: crate::numerics::RateKind,
}

impl From<&RateEstimate> for RateText {
    fn from(r: &RateEstimate) -> Self {
        RateText {
            per_term: format!("{:.6e}", r.per_term),
            power: format!("{:.6e}", r.power),
            kind: r.kind,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GapSummary {
    pub pairs: usize,
    pub last_n: Option<u64>,
    /// |f_{2n} − f_{2n−1}| at the last n
    pub last_gap: Option<String>,
    /// |f_{2n+1} − f_{2n−1}| at the last n
    pub last_odd_gap: Option<String>,
    pub rate: Option<RateText>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub input_echo: InputEcho,
    pub backend: String,
    pub terms: u64,
    pub verdicts: Vec<VerdictEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certify: Option<CertifyEntry>,
    pub limit_estimate: Option<ComplexText>,
    pub cauchy: bool,
    pub even_limit: Option<ComplexText>,
    pub odd_limit: Option<ComplexText>,
    pub final_value: Option<ComplexText>,
    pub gap_summary: GapSummary,
    pub max_b_ratio: Option<String>,
    pub determinant_residual_max: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// One spec's outcome together with what the trace file needs.
pub struct SpecRun {
    pub report: Report,
    pub exit_code: i32,
    pub diagnostics: Option<ConvergenceReport>,
}

fn complex_text(s: &Scalar, digits: usize) -> ComplexText {
    let (re, im) = s.to_decimal(digits);
    ComplexText { re, im }
}

fn echo(config: &RunConfig, source: &SpecSource, text: &str) -> InputEcho {
    InputEcho {
        command: config.mode,
        source: source.label(),
        spec: text.to_string(),
        terms: config.terms,
        precision: config.precision,
        tol: format!("{:e}", config.tol),
        window: config.window,
    }
}

fn failed(config: &RunConfig, source: &SpecSource, text: &str, err: &Error) -> SpecRun {
    SpecRun {
        report: Report {
            input_echo: echo(config, source, text),
            backend: config.backend.label(),
            terms: 0,
            verdicts: Vec::new(),
            certify: None,
            limit_estimate: None,
            cauchy: false,
            even_limit: None,
            odd_limit: None,
            final_value: None,
            gap_summary: GapSummary {
                pairs: 0,
                last_n: None,
                last_gap: None,
                last_odd_gap: None,
                rate: None,
            },
            max_b_ratio: None,
            determinant_residual_max: "0".into(),
            error: Some(err.to_string()),
        },
        exit_code: EXIT_INPUT,
        diagnostics: None,
    }
}

fn run_spec(config: &RunConfig, spec: &SequenceSpec) -> Result<(Vec<VerdictEntry>, Option<CertifyEntry>, i32)> {
    let mut verdicts = Vec::new();
    let mut certify = None;
    let mut exit_code = EXIT_OK;
    if let Some(criterion) = config.criterion {
        let verdict = check(spec, criterion, &config.params, config.terms)?;
        if config.mode == Mode::Check && !verdict.holds() {
            exit_code = EXIT_VIOLATED;
        }
        verdicts.push(VerdictEntry::new(verdict, config.params.clone()));
    }
    if config.mode == Mode::Certify {
        let found = certificate_search(spec, config.target, config.terms)?;
        let recheck = match &found {
            Some(cert) => Some(VerdictEntry::new(
                check(spec, cert.criterion, &cert.params, config.terms)?,
                cert.params.clone(),
            )),
            None => None,
        };
        if recheck.as_ref().is_none_or(|v| v.status != Status::HoldsOnPrefix) {
            exit_code = EXIT_VIOLATED;
        }
        certify = Some(CertifyEntry {
            target: config.target,
            found: found.is_some(),
            certificate: found,
            recheck,
        });
    }
    Ok((verdicts, certify, exit_code))
}

/// Runs one spec source through the configured pipeline.
pub fn run_source(config: &RunConfig, source: &SpecSource) -> SpecRun {
    let text = match source.text() {
        Ok(t) => t,
        Err(e) => return failed(config, source, "", &e),
    };
    let outcome = parse_spec(&text).and_then(|spec| {
        let (verdicts, certify, code) = run_spec(config, &spec)?;
        let diag = analyze(&spec, config.terms, config.backend, config.tol, config.window)?;
        Ok((verdicts, certify, code, diag))
    });
    let (verdicts, certify, exit_code, diag) = match outcome {
        Ok(v) => v,
        Err(e) => return failed(config, source, &text, &e),
    };
    let digits = decimal_digits(config.precision);
    let value = |s: &Option<Scalar>| s.as_ref().map(|s| complex_text(s, digits));
    let report = Report {
        input_echo: echo(config, source, &text),
        backend: config.backend.label(),
        terms: diag.terms_used,
        verdicts,
        certify,
        limit_estimate: value(&diag.limit_estimate),
        cauchy: diag.cauchy_satisfied,
        even_limit: value(&diag.even_limit),
        odd_limit: value(&diag.odd_limit),
        final_value: value(&diag.final_value().cloned()),
        gap_summary: GapSummary {
            pairs: diag.gaps.even_odd.len(),
            last_n: diag.gaps.even_odd.last().map(|p| p.n),
            last_gap: diag.gaps.even_odd.last().map(|p| p.formula.to_decimal(digits)),
            last_odd_gap: diag.gaps.odd.last().map(|p| p.formula.to_decimal(digits)),
            rate: diag.rate.as_ref().map(RateText::from),
        },
        max_b_ratio: diag.b_ratio.as_ref().and_then(|r| r.to_decimal(digits)),
        determinant_residual_max: format!("{:.6e}", diag.determinant_residual_max),
        error: None,
    };
    SpecRun {
        report,
        exit_code,
        diagnostics: Some(diag),
    }
}

/// CSV with columns n, re, im, gap where gap = |f_n − f_{n−1}|.
pub fn trace_csv(diag: &ConvergenceReport, digits: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidInput(format!("writing trace: {e}"));
    w.write_record(["n", "re", "im", "gap"]).map_err(io)?;
    let mut prev: Option<&Value> = None;
    for (i, v) in diag.values.iter().enumerate() {
        let (re, im) = match v {
            Value::Finite(s) => s.to_decimal(digits),
            Value::Infinity => ("inf".into(), "inf".into()),
        };
        let gap = match (prev, v) {
            (None, _) => String::new(),
            (Some(Value::Finite(p)), Value::Finite(s)) => {
                crate::real::Real::modulus(&(s - p)).to_decimal(digits, false)
            }
            _ => "inf".into(),
        };
        w.write_record([(i + 1).to_string(), re, im, gap]).map_err(io)?;
        prev = Some(v);
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(format!("writing trace: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Everything a run produces, before anything is written.
pub struct RunOutput {
    pub json: String,
    pub csv: Option<String>,
    pub exit_code: i32,
    pub runs: Vec<SpecRun>,
}

/// Runs every spec (in parallel for batches) and serializes the results in
/// input order.
pub fn run_report(config: &RunConfig) -> Result<RunOutput> {
    let runs: Vec<SpecRun> = config.sources.par_iter().map(|s| run_source(config, s)).collect();
    let reports: Vec<&Report> = runs.iter().map(|r| &r.report).collect();
    let json = if reports.len() == 1 {
        serde_json::to_string_pretty(reports[0])
    } else {
        serde_json::to_string_pretty(&reports)
    }
    .map_err(|e| Error::InvalidInput(format!("serializing report: {e}")))?;
    let csv = match (&config.trace, runs.first().and_then(|r| r.diagnostics.as_ref())) {
        (Some(_), Some(diag)) => Some(trace_csv(diag, decimal_digits(config.precision))?),
        _ => None,
    };
    let exit_code = runs.iter().map(|r| r.exit_code).max().unwrap_or(EXIT_OK);
    Ok(RunOutput {
        json: json + "\n",
        csv,
        exit_code,
        runs,
    })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn summary(run: &SpecRun) -> String {
    let r = &run.report;
    if let Some(e) = &r.error {
        return format!("{}: error: {e}", r.input_echo.source);
    }
    let mut parts = vec![format!("{}: {} terms", r.input_echo.source, r.terms)];
    for v in &r.verdicts {
        let mut s = format!("{} {}", v.criterion, v.status);
        if let Some(x) = &v.violation {
            s += &format!(" at {} ({})", x.index, x.inequality);
        }
        parts.push(s);
    }
    if let Some(c) = &r.certify {
        parts.push(match &c.certificate {
            Some(cert) => format!("certificate {} {}", cert.criterion, cert.params),
            None => format!("no {} certificate", c.target),
        });
    }
    match &r.limit_estimate {
        Some(l) => parts.push(format!("limit {} + {}i", l.re, l.im)),
        None => parts.push("no limit estimate".into()),
    }
    parts.join(", ")
}

/// Parses `args` (including the program name), runs, writes outputs and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (mode, args) = match &cli.command {
        Command::Eval(a) => (Mode::Eval, a),
        Command::Check(a) => (Mode::Check, a),
        Command::Certify(a) => (Mode::Certify, a),
    };
    let outcome = RunConfig::new(mode, args).and_then(|config| {
        let out = run_report(&config)?;
        match &config.report {
            Some(path) => {
                write(path, &out.json)?;
                for run in &out.runs {
                    println!("{}", summary(run));
                }
            }
            None => print!("{}", out.json),
        }
        if let (Some(path), Some(csv)) = (&config.trace, &out.csv) {
            write(path, csv)?;
        }
        for run in &out.runs {
            if let Some(e) = &run.report.error {
                eprintln!("error: {}: {e}", run.report.input_echo.source);
            }
        }
        Ok(out.exit_code)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
