//! Command-line front end.
//!
//! Every command reads Schottky data from `--input` (JSON), writes a table to
//! `--output` (stdout when absent) as CSV or as a JSON array of row objects,
//! and reports through the exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | I/O, parse or argument error |
//! | 2 | the data violates a Schottky condition |
//! | 3 | a parameter lies outside the domain of the method |
//! | 4 | partial numerical failure (results written, failures on stderr) |
//! | 5 | a theorem verification failed |

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::error::Error;
use crate::resonances::{self, SearchBox};
use crate::schottky::{self, primitive_classes, SchottkyData, SchottkyFile};
use crate::theorems;
use crate::transfer::DEFAULT_TRUNCATION;
use crate::zeta::{self, EulerProduct, Method, TraceExpansion, ZetaValue, DEFAULT_K_MAX, DEFAULT_M_MAX};

pub const THREADS_ENV: &str = "SCHOTTKY_ZETA_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Io = 1,
    Validation = 2,
    Domain = 3,
    Partial = 4,
    Verification = 5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Determinant,
    Euler,
    Traces,
}

#[derive(Debug, Parser)]
#[command(
    name = "schottky-zeta",
    version,
    about = "Selberg zeta functions, resonances and transfer-operator eigenfunctions of Schottky surfaces",
    after_help = "Exit codes: 0 success, 1 I/O or parse error, 2 invalid Schottky data, \
                  3 domain error, 4 partial numerical failure, 5 verification failure.\n\
                  Floats in CSV output carry 17 significant digits; non-finite floats are written as inf or NaN in CSV and null in JSON."
)]
pub struct Cli {
    /// Schottky data file (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads (overrides the SCHOTTKY_ZETA_THREADS environment variable).
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Schottky conditions and report rank, χ, δ and generator traces.
    #[command(after_help = "CSV columns: field, value. On violations: violation, message.")]
    Validate(ValidateArgs),
    /// Evaluate the zeta function on a grid.
    #[command(after_help = "CSV columns: re_s, im_s, re_Z, im_Z, method, truncation, tail_estimate.\n\
                            The traces method reports exp of the truncated trace expansion.")]
    Zeta(ZetaArgs),
    /// Locate zeros of det(1 - T_s) in a box and classify them.
    #[command(after_help = "CSV columns: re_s, im_s, order, topological_order, resonance_multiplicity, \
                            certified, informational.\nScatter CSV columns: re, im, multiplicity.")]
    Resonances(ResonanceArgs),
    /// Build the explicit eigenfunctions at s = -n (and the cylinder lattice) and check them.
    #[command(
        name = "verify-theorems",
        after_help = "CSV columns: construction, re_s, im_s, n, k, count, \
                            max_residual, independence_gap, kernel_dimension, kernel_gap, status."
    )]
    VerifyTheorems(VerifyArgs),
    /// Primitive oriented geodesic lengths up to a word length.
    #[command(after_help = "CSV columns: length, word_length, word, primitive. Sorted by length.")]
    Lengths(LengthArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Truncation used for the critical exponent.
    #[arg(short = 'N', default_value_t = DEFAULT_TRUNCATION)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    /// Grid `RE,IM` where each part is a value `X` or a range `FROM:TO:COUNT`.
    #[arg(long, allow_hyphen_values = true, value_name = "SPEC")]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Determinant)]
    pub method: MethodArg,
    #[arg(short = 'N', default_value_t = DEFAULT_TRUNCATION)]
    pub n: usize,
    #[arg(long = "m-max", default_value_t = DEFAULT_M_MAX)]
    pub m_max: usize,
    #[arg(long = "k-max", default_value_t = DEFAULT_K_MAX)]
    pub k_max: usize,
}

#[derive(Debug, Args)]
pub struct ResonanceArgs {
    #[arg(
        long = "box",
        num_args = 4,
        allow_negative_numbers = true,
        value_names = ["RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"]
    )]
    pub search_box: Vec<f64>,
    #[arg(short = 'N', default_value_t = DEFAULT_TRUNCATION)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Scatter CSV path; defaults to `<output>.scatter.csv` when --output is given.
    #[arg(long, value_name = "PATH")]
    pub scatter: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(short = 'N', default_value_t = DEFAULT_TRUNCATION)]
    pub n: usize,
    #[arg(long = "n-max", default_value_t = 2)]
    pub n_max: usize,
    /// Cylinders only: lattice indices k in [-k_max, k_max].
    #[arg(long = "k-max", default_value_t = 1)]
    pub k_max: usize,
}

#[derive(Debug, Args)]
pub struct LengthArgs {
    #[arg(long = "m-max", default_value_t = 6)]
    pub m_max: usize,
}

/// Everything a command needs, checked.
#[derive(Debug)]
pub struct RunConfig {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
    pub command: Command,
}

#[derive(Debug)]
pub struct Failure {
    pub code: ExitCode,
    pub message: String,
}

impl Failure {
    fn new(code: ExitCode, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(ExitCode::Io, e.to_string())
    }
}

fn numerical(e: Error) -> Failure {
    let code = match e {
        Error::DomainError(_) | Error::BadSpectralParameter(_) => ExitCode::Domain,
        Error::InvalidBox(_) => ExitCode::Io,
        _ => ExitCode::Partial,
    };
    Failure::new(code, e.to_string())
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, Failure> {
        let input = cli.input.ok_or_else(|| Failure::new(ExitCode::Io, "--input is required"))?;
        let positive = |name: &str, v: usize| {
            if v == 0 {
                Err(Failure::new(ExitCode::Io, format!("{name} must be positive")))
            } else {
                Ok(())
            }
        };
        if let Some(t) = cli.threads {
            positive("--threads", t)?;
        }
        match &cli.command {
            Command::Validate(a) => positive("-N", a.n)?,
            Command::Zeta(a) => {
                positive("-N", a.n)?;
                positive("--m-max", a.m_max)?;
                positive("--k-max", a.k_max)?;
            }
            Command::Resonances(a) => {
                positive("-N", a.n)?;
                if !(a.tol > 0.0) {
                    return Err(Failure::new(ExitCode::Io, "--tol must be positive"));
                }
                if a.search_box.len() != 4 {
                    return Err(Failure::new(ExitCode::Io, "--box takes RE_MIN RE_MAX IM_MIN IM_MAX"));
                }
            }
            Command::VerifyTheorems(a) => positive("-N", a.n)?,
            Command::Lengths(a) => positive("--m-max", a.m_max)?,
        }
        Ok(Self { input, output: cli.output, format: cli.format, threads: cli.threads, command: cli.command })
    }
}

/// A value in an output table.
#[derive(Clone, Debug, PartialEq)]
enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => Value::from(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        // Adding +0 folds -0 into +0.
        Cell::Float(x + 0.0)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

#[derive(Clone, Debug, Default)]
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> Result<Vec<u8>, Failure> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io_err = |e: csv::Error| Failure::new(ExitCode::Io, e.to_string());
                w.write_record(&self.columns).map_err(io_err)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv)).map_err(io_err)?;
                }
                w.into_inner().map_err(|e| Failure::new(ExitCode::Io, e.to_string()))
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut out =
                    serde_json::to_vec_pretty(&rows).map_err(|e| Failure::new(ExitCode::Io, e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}

fn write_table(table: &Table, format: Format, path: Option<&Path>) -> Result<(), Failure> {
    let bytes = table.render(format)?;
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

pub fn load(path: &Path) -> Result<SchottkyData, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(ExitCode::Io, format!("{}: {e}", path.display())))?;
    let file: SchottkyFile =
        serde_json::from_str(&text).map_err(|e| Failure::new(ExitCode::Io, format!("{}: {e}", path.display())))?;
    file.into_data().map_err(|e| match e {
        Error::DisksOverlap(m) => Failure::new(ExitCode::Validation, format!("disjointness: {m}")),
        Error::InvalidData(m) => Failure::new(ExitCode::Validation, m),
        other => Failure::new(ExitCode::Io, other.to_string()),
    })
}

fn require_valid(data: &SchottkyData) -> Result<(), Failure> {
    let violations = data.validate();
    if violations.is_empty() {
        return Ok(());
    }
    let lines: Vec<String> = violations.iter().map(|v| format!("{}: {}", v.kind.as_str(), v.message)).collect();
    Err(Failure::new(ExitCode::Validation, lines.join("\n")))
}

fn cmd_validate(config: &RunConfig, args: &ValidateArgs) -> Result<ExitCode, Failure> {
    let data = match load(&config.input) {
        Ok(d) => d,
        Err(f) if f.code == ExitCode::Validation => {
            let mut t = Table::new(&["violation", "message"]);
            let (kind, msg) = f.message.split_once(": ").unwrap_or(("invalid", f.message.as_str()));
            t.push(vec![kind.into(), msg.into()]);
            write_table(&t, config.format, config.output.as_deref())?;
            return Err(f);
        }
        Err(f) => return Err(f),
    };
    let violations = data.validate();
    if !violations.is_empty() {
        let mut t = Table::new(&["violation", "message"]);
        for v in &violations {
            t.push(vec![v.kind.as_str().into(), v.message.clone().into()]);
        }
        write_table(&t, config.format, config.output.as_deref())?;
        return Err(Failure::new(ExitCode::Validation, format!("{} violation(s)", violations.len())));
    }
    let mut t = Table::new(&["field", "value"]);
    t.push(vec!["rank".into(), data.rank().into()]);
    t.push(vec!["euler_characteristic".into(), data.euler_characteristic().into()]);
    let delta = schottky::delta(&data, args.n, schottky::DELTA_TOL);
    t.push(vec!["delta".into(), delta.as_ref().map(|&d| Cell::from(d)).unwrap_or(Cell::Empty)]);
    for j in data.indices() {
        let g = data.generator(j);
        t.push(vec![format!("trace_{j}").into(), g.trace().into()]);
        t.push(vec![format!("length_{j}").into(), g.displacement_length().map(Cell::from).unwrap_or(Cell::Empty)]);
    }
    write_table(&t, config.format, config.output.as_deref())?;
    match delta {
        Ok(_) => Ok(ExitCode::Success),
        Err(e) => Err(Failure::new(ExitCode::Partial, format!("critical exponent: {e}"))),
    }
}

fn parse_axis(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::new(ExitCode::Io, format!("bad grid axis `{spec}`"));
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.trim().parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad);
    match parts.as_slice() {
        [x] => Ok(vec![num(x)?]),
        [a, b, k] => {
            let (a, b) = (num(a)?, num(b)?);
            let k: usize = k.trim().parse().map_err(|_| bad())?;
            match k {
                0 => Err(bad()),
                1 => Ok(vec![a]),
                _ => Ok((0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect()),
            }
        }
        _ => Err(bad()),
    }
}

pub fn parse_grid(spec: &str) -> Result<Vec<Complex64>, Failure> {
    let (re, im) = spec
        .split_once(',')
        .ok_or_else(|| Failure::new(ExitCode::Io, format!("grid `{spec}` needs the form RE,IM")))?;
    let (re, im) = (parse_axis(re)?, parse_axis(im)?);
    Ok(re.iter().flat_map(|&x| im.iter().map(move |&y| Complex64::new(x, y))).collect())
}

fn cmd_zeta(config: &RunConfig, args: &ZetaArgs) -> Result<ExitCode, Failure> {
    let data = load(&config.input)?;
    require_valid(&data)?;
    let grid = parse_grid(&args.grid)?;
    let values: Vec<ZetaValue> = match args.method {
        MethodArg::Determinant => grid
            .par_iter()
            .map(|&s| zeta::fredholm_value(&data, s, args.n))
            .collect::<Result<_, _>>()
            .map_err(numerical)?,
        MethodArg::Euler | MethodArg::Traces => {
            let delta = schottky::delta(&data, args.n, schottky::DELTA_TOL).map_err(numerical)?;
            if let Some(s) = grid.iter().find(|s| s.re <= delta) {
                return Err(Failure::new(
                    ExitCode::Domain,
                    format!("Re s = {} does not exceed the critical exponent {delta}", s.re),
                ));
            }
            if args.method == MethodArg::Euler {
                let ep = EulerProduct::new(&data, args.k_max, args.m_max, delta);
                grid.par_iter().map(|&s| ep.eval(s)).collect::<Result<_, _>>().map_err(numerical)?
            } else {
                let te = TraceExpansion::new(&data, args.m_max, delta);
                grid.par_iter()
                    .map(|&s| te.log_zeta(s).map(|v| ZetaValue { value: v.value.exp(), ..v }))
                    .collect::<Result<_, _>>()
                    .map_err(numerical)?
            }
        }
    };
    let mut t = Table::new(&["re_s", "im_s", "re_Z", "im_Z", "method", "truncation", "tail_estimate"]);
    for v in &values {
        t.push(vec![
            v.s.re.into(),
            v.s.im.into(),
            v.value.re.into(),
            v.value.im.into(),
            v.method().as_str().into(),
            v.truncation.describe().into(),
            v.tail_estimate.map(Cell::from).unwrap_or(Cell::Empty),
        ]);
    }
    debug_assert!(values.iter().all(|v| v.method() != Method::Determinant || v.tail_estimate.is_none()));
    write_table(&t, config.format, config.output.as_deref())?;
    Ok(ExitCode::Success)
}

fn scatter_path(args: &ResonanceArgs, output: Option<&Path>) -> Option<PathBuf> {
    args.scatter.clone().or_else(|| {
        output.map(|p| {
            let mut name = p.file_stem().map(OsString::from).unwrap_or_default();
            name.push(".scatter.csv");
            p.with_file_name(name)
        })
    })
}

fn cmd_resonances(config: &RunConfig, args: &ResonanceArgs) -> Result<ExitCode, Failure> {
    let data = load(&config.input)?;
    require_valid(&data)?;
    let b = &args.search_box;
    let bx = SearchBox::new(b[0], b[1], b[2], b[3]).map_err(numerical)?;
    let search = resonances::locate_zeros(&data, &bx, args.n, args.tol).map_err(numerical)?;
    let chi = data.euler_characteristic();
    let mut records = Vec::new();
    let mut problems: Vec<String> = Vec::new();
    for z in &search.zeros {
        match resonances::classify_zero(z.location, z.order, chi) {
            Ok(mut rec) => {
                rec.certified = z.certified;
                records.push(rec);
            }
            Err(e) => problems.push(format!("zero at {}: {e}", z.location)),
        }
    }
    for f in &search.failures {
        problems.push(format!(
            "cluster of winding {} in [{}, {}] x [{}, {}]: {}",
            f.winding, f.region.re_min, f.region.re_max, f.region.im_min, f.region.im_max, f.reason
        ));
    }
    if search.located_order() != search.box_winding {
        problems.push(format!(
            "located orders add up to {} but the box winding number is {}",
            search.located_order(),
            search.box_winding
        ));
    }
    let mut t = Table::new(&[
        "re_s",
        "im_s",
        "order",
        "topological_order",
        "resonance_multiplicity",
        "certified",
        "informational",
    ]);
    let mut scatter = Table::new(&["re", "im", "multiplicity"]);
    for r in &records {
        t.push(vec![
            r.location.re.into(),
            r.location.im.into(),
            r.order.into(),
            r.topological_order.into(),
            r.resonance_multiplicity.into(),
            r.certified.into(),
            r.informational.into(),
        ]);
        if r.resonance_multiplicity > 0 {
            scatter.push(vec![r.location.re.into(), r.location.im.into(), r.resonance_multiplicity.into()]);
        }
    }
    write_table(&t, config.format, config.output.as_deref())?;
    if let Some(p) = scatter_path(args, config.output.as_deref()) {
        write_table(&scatter, Format::Csv, Some(&p))?;
    }
    if problems.is_empty() {
        Ok(ExitCode::Success)
    } else {
        Err(Failure::new(ExitCode::Partial, problems.join("\n")))
    }
}

fn cmd_verify_theorems(config: &RunConfig, args: &VerifyArgs) -> Result<ExitCode, Failure> {
    let data = load(&config.input)?;
    require_valid(&data)?;
    // (n, Some(k)) for the cylinder family, (n, None) for the per-generator one.
    let mut jobs: Vec<(usize, Option<i64>)> = Vec::new();
    if data.rank() == 1 {
        let k_max = args.k_max as i64;
        for n in 0..=args.n_max {
            jobs.extend((-k_max..=k_max).map(|k| (n, Some(k))));
        }
    }
    jobs.extend((0..=args.n_max).map(|n| (n, None)));
    let results: Vec<Result<theorems::Verification, Error>> = jobs
        .par_iter()
        .map(|&(n, k)| {
            let construction = match k {
                Some(k) => theorems::cylinder_eigenfunctions_for(&data, n, k, args.n)?,
                None => theorems::schottky_eigenfunctions(&data, n, args.n)?,
            };
            theorems::verify(&data, &construction, n, k.unwrap_or(0))
        })
        .collect();
    let mut t = Table::new(&[
        "construction",
        "re_s",
        "im_s",
        "n",
        "k",
        "count",
        "max_residual",
        "independence_gap",
        "kernel_dimension",
        "kernel_gap",
        "status",
    ]);
    let mut failures = Vec::new();
    for (r, &(n, k)) in results.iter().zip(&jobs) {
        match r {
            Ok(v) => {
                t.push(vec![
                    v.provenance.as_str().into(),
                    v.s.re.into(),
                    v.s.im.into(),
                    v.n.into(),
                    v.k.into(),
                    v.count.into(),
                    v.max_residual.into(),
                    v.independence_gap.into(),
                    v.kernel_dimension.into(),
                    v.kernel_gap.into(),
                    if v.pass { "PASS" } else { "FAIL" }.into(),
                ]);
                if !v.pass {
                    failures.push(format!("{} n={} k={}", v.provenance.as_str(), v.n, v.k));
                }
            }
            Err(e) => {
                let kind = if k.is_some() { "cylinder" } else { "schottky" };
                t.push(vec![
                    kind.into(),
                    Cell::Empty,
                    Cell::Empty,
                    n.into(),
                    k.unwrap_or(0).into(),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    "FAIL".into(),
                ]);
                failures.push(format!("{kind} n={n}: {e}"));
            }
        }
    }
    write_table(&t, config.format, config.output.as_deref())?;
    if failures.is_empty() {
        Ok(ExitCode::Success)
    } else {
        Err(Failure::new(ExitCode::Verification, failures.join("\n")))
    }
}

fn cmd_lengths(config: &RunConfig, args: &LengthArgs) -> Result<ExitCode, Failure> {
    let data = load(&config.input)?;
    require_valid(&data)?;
    let mut t = Table::new(&["length", "word_length", "word", "primitive"]);
    for c in primitive_classes(&data, args.m_max) {
        t.push(vec![c.length.into(), c.word_length.into(), c.representative.to_string().into(), c.primitive.into()]);
    }
    write_table(&t, config.format, config.output.as_deref())?;
    Ok(ExitCode::Success)
}

pub fn run(config: &RunConfig) -> Result<ExitCode, Failure> {
    let work = || match &config.command {
        Command::Validate(a) => cmd_validate(config, a),
        Command::Zeta(a) => cmd_zeta(config, a),
        Command::Resonances(a) => cmd_resonances(config, a),
        Command::VerifyTheorems(a) => cmd_verify_theorems(config, a),
        Command::Lengths(a) => cmd_lengths(config, a),
    };
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::new(ExitCode::Io, e.to_string()))?
            .install(work),
        None => work(),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::Io as i32 } else { ExitCode::Success as i32 };
        }
    };
    let outcome = RunConfig::from_cli(cli).and_then(|config| run(&config));
    match outcome {
        Ok(code) => code as i32,
        Err(f) => {
            eprintln!("schottky-zeta: {f}");
            f.code as i32
        }
    }
}
