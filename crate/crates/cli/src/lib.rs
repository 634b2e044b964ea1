//! Command-line front end for `unruh-entanglement`: negativity sweeps for
//! the bosonic and fermionic models and wave-packet diagnostics.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use unruh_entanglement::bosonic::bosonic_curve;
use unruh_entanglement::fermionic::fermionic_curve;
use unruh_entanglement::wavepacket::{
    g_from_f, massive_g_from_f, massive_peaking_report, massive_round_trip_error, packet, packet_on, parseval_residual,
    peaking_report_for, rapidity_gaussian, rapidity_gaussian_on, round_trip_error, BogoliubovKernel, Epsilon,
    LogGaussianParams, LogGrid, MassiveKernel, PacketFamily, PeakingReport, UnruhSmearingPair,
    DEFAULT_LEAKAGE_THRESHOLD,
};
use unruh_entanglement::Error as CoreError;

pub const SCHEMA_VERSION: u32 = 1;

const DEFAULT_Q: [f64; 4] = [1.0, 0.9, 0.8, 0.7];
const DEFAULT_BOSON_R_MAX: f64 = 1.5;
const DEFAULT_STEPS: usize = 31;
const DEFAULT_N_MAX: usize = 30;
const DEFAULT_TABLE_ROWS: usize = 41;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 1 for usage and I/O problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::InvalidParameter(msg) => CliError::Usage(msg),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "unruh",
    version,
    about = "Entanglement of Minkowski-Unruh states: negativity sweeps and wave-packet diagnostics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bosonic negativity curves N_AR(r), N_AAR(r).
    Boson(SweepArgs),
    /// Grassmann (fermionic) negativity curves.
    Fermion(SweepArgs),
    /// Minkowski-to-Unruh transform and peaking diagnostics of a packet.
    Packet(PacketArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    LogGaussian,
    Gamma,
    Bessel,
    RapidityGaussian,
    Mixed,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Comma-separated |q_R| values in [0, 1].
    #[arg(long, value_delimiter = ',', value_parser = parse_real)]
    pub q: Option<Vec<f64>>,
    /// Accepts `pi` and `pi/<n>`.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub r_min: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Initial bosonic truncation.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<SweepFormat>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value file; explicit flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PacketArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long, value_parser = parse_real)]
    pub lambda: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    pub omega0: Option<f64>,
    /// Field mass, rapidity-gaussian only.
    #[arg(long, value_parser = parse_real)]
    pub mass: Option<f64>,
    /// +1 or -1; ignored by rapidity-gaussian.
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<i32>,
    /// Mixing angle for the mixed family.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub angle: Option<f64>,
    /// Grid override; needs --x-max and --points too.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Rows in the (Ω, |g_R|, |g_L|) table.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Leakage below which the single-mode approximation is accepted.
    #[arg(long, value_parser = parse_real)]
    pub threshold: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<ReportFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Reals as decimals, `pi` or `pi/<n>`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    if lower == "pi" {
        return Ok(std::f64::consts::PI);
    }
    if let Some(d) = lower.strip_prefix("pi/") {
        let d: f64 = d.parse().map_err(|_| format!("cannot parse '{s}'"))?;
        return Ok(std::f64::consts::PI / d);
    }
    t.parse::<f64>().map_err(|_| format!("cannot parse '{s}' as a number"))
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

/// Config values not overridden by flags.
struct Config {
    source: String,
    values: BTreeMap<String, String>,
}

impl Config {
    fn load(path: Option<&PathBuf>, known: &[&str]) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self {
                source: String::new(),
                values: BTreeMap::new(),
            });
        };
        let values = read_config(path)?;
        if let Some(bad) = values.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(CliError::Usage(format!("{}: unknown key '{bad}'", path.display())));
        }
        Ok(Self {
            source: path.display().to_string(),
            values,
        })
    }

    fn fill<T>(
        &self,
        flag: Option<T>,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => parse(v)
                .map(Some)
                .map_err(|e| CliError::Usage(format!("{}: {key}: {e}", self.source))),
        }
    }
}

fn parse_usize(s: &str) -> Result<usize, String> {
    s.parse().map_err(|_| format!("cannot parse '{s}' as a count"))
}

fn parse_i32(s: &str) -> Result<i32, String> {
    s.parse().map_err(|_| format!("cannot parse '{s}' as an integer"))
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(parse_real).collect()
}

fn parse_enum<T: ValueEnum>(s: &str) -> Result<T, String> {
    T::from_str(s, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Boson,
    Fermion,
}

/// A fully resolved sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub model: Model,
    pub q_abs: Vec<f64>,
    pub r_min: f64,
    pub r_max: f64,
    pub steps: usize,
    pub n_max: usize,
    pub format: SweepFormat,
    pub out: Option<PathBuf>,
}

impl SweepSpec {
    pub fn resolve(model: Model, args: &SweepArgs) -> Result<Self, CliError> {
        let cfg = Config::load(
            args.config.as_ref(),
            &["q", "r-min", "r-max", "steps", "n-max", "format", "out"],
        )?;
        let r_cap = match model {
            Model::Boson => DEFAULT_BOSON_R_MAX,
            Model::Fermion => std::f64::consts::FRAC_PI_4,
        };
        let spec = Self {
            model,
            q_abs: cfg
                .fill(args.q.clone(), "q", parse_list)?
                .unwrap_or_else(|| DEFAULT_Q.to_vec()),
            r_min: cfg.fill(args.r_min, "r-min", parse_real)?.unwrap_or(0.0),
            r_max: cfg.fill(args.r_max, "r-max", parse_real)?.unwrap_or(r_cap),
            steps: cfg.fill(args.steps, "steps", parse_usize)?.unwrap_or(DEFAULT_STEPS),
            n_max: cfg.fill(args.n_max, "n-max", parse_usize)?.unwrap_or(DEFAULT_N_MAX),
            format: cfg.fill(args.format, "format", parse_enum)?.unwrap_or(SweepFormat::Csv),
            out: cfg.fill(args.out.clone(), "out", |s| Ok(PathBuf::from(s)))?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.q_abs.is_empty() {
            return Err(CliError::Usage("--q needs at least one value".into()));
        }
        if let Some(q) = self.q_abs.iter().find(|q| !(0.0..=1.0).contains(*q)) {
            return Err(CliError::Usage(format!("|q_R| = {q} outside [0, 1]")));
        }
        if self.steps < 2 {
            return Err(CliError::Usage(format!("--steps {} must be at least 2", self.steps)));
        }
        if !(self.r_min.is_finite() && self.r_max.is_finite() && 0.0 <= self.r_min && self.r_min < self.r_max) {
            return Err(CliError::Usage(format!(
                "need 0 <= r-min < r-max (got {}, {})",
                self.r_min, self.r_max
            )));
        }
        if self.model == Model::Fermion && self.r_max > std::f64::consts::FRAC_PI_4 {
            return Err(CliError::Usage(format!("fermionic r-max {} exceeds pi/4", self.r_max)));
        }
        if self.model == Model::Boson && self.n_max == 0 {
            return Err(CliError::Usage("--n-max must be positive".into()));
        }
        Ok(())
    }

    /// `steps` evenly spaced values with both ends exact.
    pub fn r_grid(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.r_max
                } else {
                    self.r_min + (self.r_max - self.r_min) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// Twelve significant digits, `-0` printed as `0`.
pub fn format_real(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// The value as printed, so JSON and CSV carry identical numbers.
fn rounded(x: f64) -> f64 {
    format_real(x).parse().expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Real(f64),
    Count(usize),
    Flag(bool),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Real(x) => format_real(*x),
            Cell::Count(n) => n.to_string(),
            Cell::Flag(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Real(x) => json!(rounded(*x)),
            Cell::Count(n) => json!(n),
            Cell::Flag(b) => json!(b),
        }
    }
}

struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn render(&self, format: SweepFormat) -> String {
        match format {
            SweepFormat::Csv => {
                let mut s = format!("# schema={SCHEMA_VERSION}\n{}\n", self.columns.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::text).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
            SweepFormat::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = serde_json::Map::new();
                        obj.insert("schema".into(), json!(SCHEMA_VERSION));
                        for (name, cell) in self.columns.iter().zip(row) {
                            obj.insert((*name).into(), cell.json());
                        }
                        Value::Object(obj)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
                s.push('\n');
                s
            }
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
    }
}

pub const BOSON_COLUMNS: &[&str] = &["q_abs", "r", "N_AR", "N_AAR", "n_max_used", "converged"];
pub const FERMION_COLUMNS: &[&str] = &["q_abs", "r", "N_AR", "N_AAR", "method_agreement_residual"];

/// Runs a bosonic sweep. Rows are always written; non-converged rows make
/// the command fail afterwards.
pub fn cmd_boson(spec: &SweepSpec, stdout: &mut dyn Write) -> Result<(), CliError> {
    let grid = spec.r_grid();
    let curves = spec
        .q_abs
        .par_iter()
        .map(|&q| bosonic_curve(q, &grid, spec.n_max))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<_> = curves.into_iter().flatten().collect();
    let failed: Vec<String> = rows
        .iter()
        .filter(|row| !row.converged)
        .map(|row| format!("(q_abs={}, r={})", format_real(row.q_abs), format_real(row.r)))
        .collect();
    let table = Table {
        columns: BOSON_COLUMNS,
        rows: rows
            .iter()
            .map(|row| {
                vec![
                    Cell::Real(row.q_abs),
                    Cell::Real(row.r),
                    Cell::Real(row.n_ar),
                    Cell::Real(row.n_aar),
                    Cell::Count(row.n_max_used),
                    Cell::Flag(row.converged),
                ]
            })
            .collect(),
    };
    emit(spec.out.as_ref(), &table.render(spec.format), stdout)?;
    if !failed.is_empty() {
        return Err(CliError::Numeric(format!(
            "{} row(s) did not converge within the truncation cap: {}",
            failed.len(),
            failed.join(" ")
        )));
    }
    Ok(())
}

/// Runs a fermionic sweep; a block/full disagreement aborts before output.
pub fn cmd_fermion(spec: &SweepSpec, stdout: &mut dyn Write) -> Result<(), CliError> {
    let grid = spec.r_grid();
    let curves = spec
        .q_abs
        .par_iter()
        .map(|&q| fermionic_curve(q, &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let table = Table {
        columns: FERMION_COLUMNS,
        rows: curves
            .iter()
            .flat_map(|c| c.rows.iter())
            .map(|row| {
                vec![
                    Cell::Real(row.q_abs),
                    Cell::Real(row.r),
                    Cell::Real(row.n_ar),
                    Cell::Real(row.n_aar),
                    Cell::Real(row.residual),
                ]
            })
            .collect(),
    };
    emit(spec.out.as_ref(), &table.render(spec.format), stdout)
}

/// A fully resolved packet diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketSpec {
    pub family: Family,
    pub params: LogGaussianParams,
    pub mass: f64,
    pub epsilon: Epsilon,
    pub angle: f64,
    pub grid: Option<LogGrid>,
    pub samples: usize,
    pub threshold: f64,
    pub format: ReportFormat,
    pub out: Option<PathBuf>,
}

impl PacketSpec {
    pub fn resolve(args: &PacketArgs) -> Result<Self, CliError> {
        let cfg = Config::load(
            args.config.as_ref(),
            &[
                "family",
                "lambda",
                "mu",
                "omega0",
                "mass",
                "epsilon",
                "angle",
                "x-min",
                "x-max",
                "points",
                "samples",
                "threshold",
                "format",
                "out",
            ],
        )?;
        let lambda = cfg.fill(args.lambda, "lambda", parse_real)?.unwrap_or(1.0);
        let mu = cfg.fill(args.mu, "mu", parse_real)?.unwrap_or(5.0);
        let omega0 = cfg.fill(args.omega0, "omega0", parse_real)?.unwrap_or(1.0);
        let params = LogGaussianParams::new(lambda, mu, omega0)?;
        let mass = cfg.fill(args.mass, "mass", parse_real)?.unwrap_or(1.0);
        MassiveKernel::new(mass)?;
        let epsilon = Epsilon::from_sign(cfg.fill(args.epsilon, "epsilon", parse_i32)?.unwrap_or(1))?;
        let x_min = cfg.fill(args.x_min, "x-min", parse_real)?;
        let x_max = cfg.fill(args.x_max, "x-max", parse_real)?;
        let points = cfg.fill(args.points, "points", parse_usize)?;
        let grid = match (x_min, x_max, points) {
            (None, None, None) => None,
            (Some(a), Some(b), Some(n)) => Some(LogGrid::new(a, b, n)?),
            _ => {
                return Err(CliError::Usage(
                    "grid override needs all of --x-min, --x-max and --points".into(),
                ))
            }
        };
        let samples = cfg
            .fill(args.samples, "samples", parse_usize)?
            .unwrap_or(DEFAULT_TABLE_ROWS);
        if samples < 2 {
            return Err(CliError::Usage("--samples must be at least 2".into()));
        }
        let threshold = cfg
            .fill(args.threshold, "threshold", parse_real)?
            .unwrap_or(DEFAULT_LEAKAGE_THRESHOLD);
        if !(threshold > 0.0 && threshold <= 0.5) {
            return Err(CliError::Usage(format!("--threshold {threshold} outside (0, 0.5]")));
        }
        Ok(Self {
            family: cfg
                .fill(args.family, "family", parse_enum)?
                .unwrap_or(Family::LogGaussian),
            params,
            mass,
            epsilon,
            angle: cfg.fill(args.angle, "angle", parse_real)?.unwrap_or(0.0),
            grid,
            samples,
            threshold,
            format: cfg
                .fill(args.format, "format", parse_enum)?
                .unwrap_or(ReportFormat::Text),
            out: cfg.fill(args.out.clone(), "out", |s| Ok(PathBuf::from(s)))?,
        })
    }

    fn packet_family(&self) -> Option<PacketFamily> {
        match self.family {
            Family::LogGaussian => Some(PacketFamily::LogGaussian),
            Family::Gamma => Some(PacketFamily::Gamma),
            Family::Bessel => Some(PacketFamily::Bessel),
            Family::Mixed => Some(PacketFamily::Mixed { angle: self.angle }),
            Family::RapidityGaussian => None,
        }
    }

    fn family_name(&self) -> &'static str {
        match self.family {
            Family::LogGaussian => "log-gaussian",
            Family::Gamma => "gamma",
            Family::Bessel => "bessel",
            Family::RapidityGaussian => "rapidity-gaussian",
            Family::Mixed => "mixed",
        }
    }
}

/// Everything `packet` prints.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketOutcome {
    pub grid: LogGrid,
    pub report: PeakingReport,
    pub parseval_residual: f64,
    pub round_trip_error: f64,
    /// `(Ω, |g_R|, |g_L|)`.
    pub table: Vec<(f64, f64, f64)>,
}

fn grid_error(err: CoreError, suggestion: Option<LogGrid>) -> CliError {
    let hint = suggestion
        .map(|g| {
            format!(
                "; try --x-min {} --x-max {} --points {}",
                format_real(g.x_min()),
                format_real(g.x_max()),
                g.len()
            )
        })
        .unwrap_or_default();
    CliError::Numeric(format!("{err}{hint}"))
}

fn sample_table(pair: &UnruhSmearingPair, rows: usize) -> Vec<(f64, f64, f64)> {
    let weights: Vec<f64> = (0..pair.len())
        .map(|j| pair.g_r()[j].norm_sqr() + pair.g_l()[j].norm_sqr())
        .collect();
    let peak = weights.iter().cloned().fold(0.0, f64::max);
    let last = weights
        .iter()
        .rposition(|&w| w > 1e-12 * peak)
        .unwrap_or(pair.len() - 1)
        .max(1);
    (0..rows)
        .map(|i| {
            let j = (i * last + (rows - 1) / 2) / (rows - 1);
            (pair.omega(j), pair.g_r()[j].norm(), pair.g_l()[j].norm())
        })
        .collect()
}

pub fn evaluate_packet(spec: &PacketSpec) -> Result<PacketOutcome, CliError> {
    match spec.packet_family() {
        Some(family) => {
            let f = match &spec.grid {
                None => packet(family, spec.params)?,
                Some(grid) => packet_on(family, spec.params, grid).map_err(|e| match e {
                    CoreError::GridTooNarrow(_) | CoreError::Aliasing(_) => {
                        grid_error(e, packet(family, spec.params).ok().map(|f| *f.grid()))
                    }
                    other => other.into(),
                })?,
            };
            let kernel = BogoliubovKernel::with_epsilon(spec.epsilon);
            let pair = g_from_f(&f, &kernel)?;
            Ok(PacketOutcome {
                grid: *f.grid(),
                report: peaking_report_for(&f, &kernel, &pair, spec.threshold)?,
                parseval_residual: parseval_residual(&f, &pair),
                round_trip_error: round_trip_error(&f, &kernel)?,
                table: sample_table(&pair, spec.samples),
            })
        }
        None => {
            let kernel = MassiveKernel::new(spec.mass)?;
            let f = match &spec.grid {
                None => rapidity_gaussian(spec.params, &kernel)?,
                Some(grid) => rapidity_gaussian_on(spec.params, &kernel, grid).map_err(|e| match e {
                    CoreError::GridTooNarrow(_) | CoreError::Aliasing(_) => {
                        grid_error(e, rapidity_gaussian(spec.params, &kernel).ok().map(|f| *f.grid()))
                    }
                    other => other.into(),
                })?,
            };
            let pair = massive_g_from_f(&f)?;
            Ok(PacketOutcome {
                grid: *f.grid(),
                report: massive_peaking_report(&f, spec.threshold)?,
                parseval_residual: (f.norm_sq() - pair.norm_sq()).abs(),
                round_trip_error: massive_round_trip_error(&f)?,
                table: sample_table(&pair, spec.samples),
            })
        }
    }
}

fn sector_name(report: &PeakingReport) -> &'static str {
    match report.dominant {
        unruh_entanglement::wavepacket::Sector::Right => "R",
        unruh_entanglement::wavepacket::Sector::Left => "L",
    }
}

fn render_packet(spec: &PacketSpec, o: &PacketOutcome) -> String {
    let r = &o.report;
    let p = &spec.params;
    match spec.format {
        ReportFormat::Text => {
            let mut s = String::new();
            let mut line = |k: &str, v: String| s.push_str(&format!("{k:<22}{v}\n"));
            line("family", spec.family_name().into());
            line("lambda", format_real(p.lambda));
            line("mu", format_real(p.mu));
            line("omega0", format_real(p.omega0));
            if spec.family == Family::RapidityGaussian {
                line("mass", format_real(spec.mass));
            } else {
                line("epsilon", format!("{}", spec.epsilon.sign() as i32));
            }
            if spec.family == Family::Mixed {
                line("angle", format_real(spec.angle));
            }
            line(
                "grid",
                format!(
                    "[{}, {}) x {}",
                    format_real(o.grid.x_min()),
                    format_real(o.grid.x_max()),
                    o.grid.len()
                ),
            );
            line("peak_omega", format_real(r.peak_omega));
            line("delta_omega", format_real(r.delta_omega));
            line("delta_log_omega", format_real(r.delta_log_omega));
            line("uncertainty_product", format_real(r.uncertainty_product));
            line("weight_r", format_real(r.weight_r));
            line("weight_l", format_real(r.weight_l));
            line("dominant_sector", sector_name(r).into());
            line("leakage", format_real(r.leakage));
            line("sma_valid", r.sma_valid.to_string());
            line("parseval_residual", format_real(o.parseval_residual));
            line("round_trip_error", format_real(o.round_trip_error));
            s.push_str("\nOmega,abs_g_R,abs_g_L\n");
            for (w, a, b) in &o.table {
                s.push_str(&format!(
                    "{},{},{}\n",
                    format_real(*w),
                    format_real(*a),
                    format_real(*b)
                ));
            }
            s
        }
        ReportFormat::Json => {
            let table: Vec<Value> = o
                .table
                .iter()
                .map(|(w, a, b)| json!({"omega": rounded(*w), "abs_g_r": rounded(*a), "abs_g_l": rounded(*b)}))
                .collect();
            let value = json!({
                "schema": SCHEMA_VERSION,
                "family": spec.family_name(),
                "lambda": rounded(p.lambda),
                "mu": rounded(p.mu),
                "omega0": rounded(p.omega0),
                "mass": if spec.family == Family::RapidityGaussian { json!(rounded(spec.mass)) } else { Value::Null },
                "epsilon": if spec.family == Family::RapidityGaussian { Value::Null } else { json!(spec.epsilon.sign() as i32) },
                "angle": if spec.family == Family::Mixed { json!(rounded(spec.angle)) } else { Value::Null },
                "grid": {"x_min": rounded(o.grid.x_min()), "x_max": rounded(o.grid.x_max()), "points": o.grid.len()},
                "peak_omega": rounded(r.peak_omega),
                "delta_omega": rounded(r.delta_omega),
                "delta_log_omega": rounded(r.delta_log_omega),
                "uncertainty_product": rounded(r.uncertainty_product),
                "weight_r": rounded(r.weight_r),
                "weight_l": rounded(r.weight_l),
                "dominant_sector": sector_name(r),
                "leakage": rounded(r.leakage),
                "leakage_threshold": rounded(r.leakage_threshold),
                "sma_valid": r.sma_valid,
                "parseval_residual": rounded(o.parseval_residual),
                "round_trip_error": rounded(o.round_trip_error),
                "table": table,
            });
            let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

pub fn cmd_packet(spec: &PacketSpec, stdout: &mut dyn Write) -> Result<(), CliError> {
    let outcome = evaluate_packet(spec)?;
    emit(spec.out.as_ref(), &render_packet(spec, &outcome), stdout)
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Boson(args) => cmd_boson(&SweepSpec::resolve(Model::Boson, args)?, stdout),
        Command::Fermion(args) => cmd_fermion(&SweepSpec::resolve(Model::Fermion, args)?, stdout),
        Command::Packet(args) => cmd_packet(&PacketSpec::resolve(args)?, stdout),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_parsing() {
        assert_eq!(parse_real("0.25").unwrap(), 0.25);
        assert_eq!(parse_real("pi/4").unwrap(), std::f64::consts::FRAC_PI_4);
        assert_eq!(parse_real("PI").unwrap(), std::f64::consts::PI);
        assert!(parse_real("pie").is_err());
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_real(0.5), "5.00000000000e-1");
        assert_eq!(format_real(-0.0), "0.00000000000e0");
        assert_eq!(format_real(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(rounded(1.0 / 3.0), 0.333333333333);
    }

    #[test]
    fn r_grid_hits_both_ends() {
        let spec = SweepSpec {
            model: Model::Fermion,
            q_abs: vec![1.0],
            r_min: 0.0,
            r_max: std::f64::consts::FRAC_PI_4,
            steps: 7,
            n_max: 30,
            format: SweepFormat::Csv,
            out: None,
        };
        let g = spec.r_grid();
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[6], std::f64::consts::FRAC_PI_4);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn sweep_validation() {
        let bad = |args: SweepArgs, model| SweepSpec::resolve(model, &args).unwrap_err().exit_code();
        assert_eq!(
            bad(
                SweepArgs {
                    q: Some(vec![1.2]),
                    ..Default::default()
                },
                Model::Boson
            ),
            1
        );
        assert_eq!(
            bad(
                SweepArgs {
                    steps: Some(1),
                    ..Default::default()
                },
                Model::Boson
            ),
            1
        );
        assert_eq!(
            bad(
                SweepArgs {
                    r_max: Some(1.0),
                    ..Default::default()
                },
                Model::Fermion
            ),
            1
        );
        assert_eq!(
            bad(
                SweepArgs {
                    r_min: Some(0.5),
                    r_max: Some(0.2),
                    ..Default::default()
                },
                Model::Boson
            ),
            1
        );
    }

    #[test]
    fn table_layouts() {
        let t = Table {
            columns: FERMION_COLUMNS,
            rows: vec![vec![
                Cell::Real(1.0),
                Cell::Real(0.0),
                Cell::Real(0.5),
                Cell::Real(-0.0),
                Cell::Real(0.0),
            ]],
        };
        let csv = t.render(SweepFormat::Csv);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("# schema=1"));
        assert_eq!(lines.next(), Some("q_abs,r,N_AR,N_AAR,method_agreement_residual"));
        assert!(lines
            .next()
            .unwrap()
            .starts_with("1.00000000000e0,0.00000000000e0,5.00000000000e-1"));
        let json: Value = serde_json::from_str(&t.render(SweepFormat::Json)).unwrap();
        assert_eq!(json[0]["schema"], 1);
        assert_eq!(json[0]["N_AR"], 0.5);
    }
}
