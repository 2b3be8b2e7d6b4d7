use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::source::BoxSource;
use crate::boxes::ContextBox;
use crate::closed_form::{quantum_chain_alpha, xu_chain};
use crate::entropy::{x_fixed, x_max, x_u, x_u_isotropic_reduced, ContextWeights, MeasureReport, SolverOptions};
use crate::error::{Error, Result};
use crate::ks::{beta, classify_xor};
use crate::polytope::{contextuality_cost, LpStatus};
use crate::symmetry::chain_generators;
use crate::XorFamily;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_CAP_EXCEEDED: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } | Error::GroupCapExceeded { .. } => EXIT_CAP_EXCEEDED,
        _ => EXIT_INVALID_INPUT,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Xu,
    Xmax,
    Cost,
    Beta,
    Consistency,
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xu" => Ok(Measure::Xu),
            "xmax" => Ok(Measure::Xmax),
            "cost" => Ok(Measure::Cost),
            "beta" => Ok(Measure::Beta),
            "consistency" => Ok(Measure::Consistency),
            _ => Err(Error::InvalidParameter(format!("unknown measure `{s}`"))),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Xu => "xu",
            Measure::Xmax => "xmax",
            Measure::Cost => "cost",
            Measure::Beta => "beta",
            Measure::Consistency => "consistency",
        })
    }
}

/// Context weights for `xu`: uniform, optimized (worst case), or read
/// from a file of whitespace- or comma-separated numbers.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightsSpec {
    Uniform,
    Optimize,
    File(String),
}

impl FromStr for WeightsSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "uniform" => WeightsSpec::Uniform,
            "optimize" => WeightsSpec::Optimize,
            path => WeightsSpec::File(path.to_string()),
        })
    }
}

impl fmt::Display for WeightsSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightsSpec::Uniform => f.write_str("uniform"),
            WeightsSpec::Optimize => f.write_str("optimize"),
            WeightsSpec::File(p) => f.write_str(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Plain,
}

#[derive(Debug, Clone)]
pub struct MeasureOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub weights: WeightsSpec,
    pub seed: u64,
    pub reference: Option<String>,
    pub format: Format,
    /// Report zero seconds so output is byte-for-byte reproducible.
    pub deterministic: bool,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            tol: 1e-7,
            max_iters: 200_000,
            weights: WeightsSpec::Uniform,
            seed: 0,
            reference: None,
            format: Format::Csv,
            deterministic: false,
        }
    }
}

impl MeasureOptions {
    fn solver(&self) -> SolverOptions {
        SolverOptions { tol: self.tol, max_iters: self.max_iters, ..SolverOptions::default() }
    }

    /// Flag echo written above the CSV header.
    pub fn header_comment(&self) -> String {
        format!(
            "# tol={} max_iters={} weights={} seed={} deterministic={}",
            self.tol, self.max_iters, self.weights, self.seed, self.deterministic
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub box_id: String,
    pub measure: Measure,
    pub value: f64,
    pub certificate: f64,
    pub iterations: usize,
    pub seconds: f64,
    pub converged: bool,
}

fn read_weights(path: &str, n: usize) -> Result<ContextWeights> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    let w = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("{path}: not a number: `{t}`"))))
        .collect::<Result<Vec<f64>>>()?;
    if w.len() != n {
        return Err(Error::LengthMismatch(w.len(), n));
    }
    ContextWeights::new(w)
}

fn entropy_row(id: &str, measure: Measure, r: MeasureReport) -> ResultRow {
    ResultRow {
        box_id: id.to_string(),
        measure,
        value: r.value,
        certificate: r.certificate(),
        iterations: r.iterations,
        seconds: r.wall_time.as_secs_f64(),
        converged: r.converged,
    }
}

fn beta_reference(source: &BoxSource, b: &ContextBox, reference: Option<&str>) -> Result<ContextBox> {
    if let Some(r) = reference {
        return r.parse::<BoxSource>()?.load();
    }
    if let Some(family) = source.family() {
        return family.extremal();
    }
    if classify_xor(b).is_some() {
        return Ok(b.clone());
    }
    Err(Error::NotXor("beta needs an xor reference box (pass one with --reference)".into()))
}

/// Evaluates one measure on one box.
pub fn run_measure(source: &str, measure: Measure, opts: &MeasureOptions) -> Result<ResultRow> {
    let src: BoxSource = source.parse()?;
    let b = src.load()?;
    let start = Instant::now();
    let mut row = match measure {
        Measure::Xu => match &opts.weights {
            WeightsSpec::Uniform => entropy_row(source, measure, x_u(&b, &opts.solver())?),
            WeightsSpec::Optimize => entropy_row(source, measure, x_max(&b, &opts.solver())?),
            WeightsSpec::File(p) => {
                let w = read_weights(p, b.num_contexts())?;
                entropy_row(source, measure, x_fixed(&b, &w, &opts.solver())?)
            }
        },
        Measure::Xmax => entropy_row(source, measure, x_max(&b, &opts.solver())?),
        Measure::Cost => {
            let r = contextuality_cost(&b, 1e-9)?;
            ResultRow {
                box_id: source.to_string(),
                measure,
                value: r.cost,
                certificate: r.certificate(),
                iterations: r.pivots,
                seconds: 0.0,
                converged: r.status == LpStatus::Optimal,
            }
        }
        Measure::Beta => {
            let reference = beta_reference(&src, &b, opts.reference.as_deref())?;
            ResultRow {
                box_id: source.to_string(),
                measure,
                value: beta(&reference, &b)?,
                certificate: 0.0,
                iterations: 0,
                seconds: 0.0,
                converged: true,
            }
        }
        Measure::Consistency => {
            let report = b.check_consistency(0.0);
            ResultRow {
                box_id: source.to_string(),
                measure,
                value: report.violations.iter().map(|v| v.distance).fold(0.0, f64::max),
                certificate: 0.0,
                iterations: 0,
                seconds: 0.0,
                converged: true,
            }
        }
    };
    row.seconds = if opts.deterministic { 0.0 } else { start.elapsed().as_secs_f64() };
    Ok(row)
}

fn fmt_value(x: f64) -> String {
    if x.is_infinite() && x > 0.0 {
        "inf".to_string()
    } else {
        format!("{x}")
    }
}

pub fn write_rows<W: Write>(out: W, rows: &[ResultRow], opts: &MeasureOptions) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    match opts.format {
        Format::Csv => {
            let mut out = out;
            writeln!(out, "{}", opts.header_comment()).map_err(io)?;
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(["box", "measure", "value", "certificate", "iterations", "seconds"]).map_err(csv_err)?;
            for r in rows {
                w.write_record([
                    r.box_id.clone(),
                    r.measure.to_string(),
                    fmt_value(r.value),
                    fmt_value(r.certificate),
                    r.iterations.to_string(),
                    format!("{}", r.seconds),
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(io)?;
        }
        Format::Plain => {
            let mut out = out;
            for r in rows {
                writeln!(
                    out,
                    "{} {} = {:.9} (certificate {:.2e}, {} iterations, {:.3}s{})",
                    r.box_id,
                    r.measure,
                    r.value,
                    r.certificate,
                    r.iterations,
                    r.seconds,
                    if r.converged { "" } else { ", not converged" }
                )
                .map_err(io)?;
            }
        }
    }
    Ok(())
}

/// `measure` command: one row, exit code by outcome.
pub fn cmd_measure<W: Write>(out: W, source: &str, measure: Measure, opts: &MeasureOptions) -> i32 {
    match run_measure(source, measure, opts) {
        Ok(row) => {
            let code = if row.converged { EXIT_OK } else { EXIT_NOT_CONVERGED };
            match write_rows(out, std::slice::from_ref(&row), opts) {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_INVALID_INPUT
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// One `SOURCE MEASURE` pair per line; `#` starts a comment.
pub fn parse_batch(text: &str) -> Result<Vec<(String, Measure)>> {
    let mut jobs = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse(format!("line {}: expected `SOURCE MEASURE`", k + 1)));
        }
        jobs.push((fields[0].to_string(), fields[1].parse()?));
    }
    Ok(jobs)
}

/// Runs jobs on `workers` threads; rows come back in input order.
pub fn run_batch(jobs: &[(String, Measure)], opts: &MeasureOptions, workers: usize) -> Result<Vec<Result<ResultRow>>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(pool.install(|| jobs.par_iter().map(|(s, m)| run_measure(s, *m, opts)).collect()))
}

pub fn cmd_batch<W: Write>(out: W, text: &str, opts: &MeasureOptions, workers: usize) -> i32 {
    let jobs = match parse_batch(text) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    let results = match run_batch(&jobs, opts, workers) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    let mut code = EXIT_OK;
    let mut rows = Vec::new();
    for ((source, measure), r) in jobs.iter().zip(results) {
        match r {
            Ok(row) => {
                if !row.converged {
                    code = code.max(EXIT_NOT_CONVERGED);
                }
                rows.push(row);
            }
            Err(e) => {
                eprintln!("error: {source} {measure}: {e}");
                code = code.max(exit_code(&e));
            }
        }
    }
    if let Err(e) = write_rows(out, &rows, opts) {
        eprintln!("error: {e}");
        return EXIT_INVALID_INPUT;
    }
    code
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainVariant {
    Max,
    Quantum,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainSolver {
    ClosedForm,
    Reduced,
    /// Runs both and fails if they differ by more than `1e-9`.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureRow {
    pub n: usize,
    pub alpha: f64,
    pub xu: f64,
}

/// `X_u` of chain boxes for `n` in `n_min..=n_max`, at `alpha = 1` and/or
/// at the maximally contextual quantum `alpha`; all `Max` rows come first.
pub fn figure_chain(n_min: usize, n_max: usize, variant: ChainVariant, solver: ChainSolver) -> Result<Vec<FigureRow>> {
    if n_min < 3 || n_min > n_max {
        return Err(Error::InvalidParameter(format!("need 3 <= n-min <= n-max, got {n_min}..{n_max}")));
    }
    let variants: &[ChainVariant] = match variant {
        ChainVariant::Max => &[ChainVariant::Max],
        ChainVariant::Quantum => &[ChainVariant::Quantum],
        ChainVariant::Both => &[ChainVariant::Max, ChainVariant::Quantum],
    };
    let mut rows = Vec::new();
    for &v in variants {
        for n in n_min..=n_max {
            let alpha = if v == ChainVariant::Max { 1.0 } else { quantum_chain_alpha(n)? };
            let reduced = || -> Result<f64> {
                let reference = XorFamily::Chain(n).extremal()?;
                let group = chain_generators(n)?.group()?;
                x_u_isotropic_reduced(&reference, alpha, &group, 1e-12)
            };
            let xu = match solver {
                ChainSolver::ClosedForm => xu_chain(n, alpha)?,
                ChainSolver::Reduced => reduced()?,
                ChainSolver::Both => {
                    let (a, b) = (xu_chain(n, alpha)?, reduced()?);
                    if (a - b).abs() > 1e-9 {
                        return Err(Error::HypothesesUnmet(format!(
                            "solvers disagree at n = {n}: closed form {a}, reduced {b}"
                        )));
                    }
                    a
                }
            };
            rows.push(FigureRow { n, alpha, xu });
        }
    }
    Ok(rows)
}

pub fn write_figure<W: Write>(out: W, rows: &[FigureRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["n", "alpha", "xu"]).map_err(err)?;
    for r in rows {
        w.write_record([r.n.to_string(), format!("{}", r.alpha), format!("{}", r.xu)]).map_err(err)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn cmd_figure_chain<W: Write>(
    out: W,
    n_min: usize,
    n_max: usize,
    variant: ChainVariant,
    solver: ChainSolver,
) -> i32 {
    match figure_chain(n_min, n_max, variant, solver).and_then(|rows| write_figure(out, &rows)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
