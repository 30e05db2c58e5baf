//! Configuration, table emitters and exit-status mapping behind the
//! `hyppoisson` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyppoisson_core::quadrature::{DEFAULT_GRID_SIZE, MAX_GAUSS_NODES};
use hyppoisson_core::spherical::{elementary_spherical, generalized_spherical, scaled_generalized_spherical, spherical_limit, c_constant};
use hyppoisson_core::transform::{hardy_norm, inversion_error, poisson_quadrature_kfinite};
use hyppoisson_core::verify::{default_tolerance, inversion_function, run_suite, Proportionality, SuiteConfig, LIMIT_RADII};
use hyppoisson_core::{Complex, KFiniteFunction, KTypeIndex, SpectralParams, ZonalGrid};
use serde::{Deserialize, Serialize};

pub const GRID_ENV: &str = "HYPPOISSON_GRID";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spherical,
    GenSpherical,
    Limit,
    Hardy,
    Invert,
    Verify,
}

impl Command {
    fn uses_ktype(self) -> bool {
        matches!(self, Command::GenSpherical | Command::Limit | Command::Hardy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: u32,
    pub twice_l: u32,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub p: i64,
    pub q: i64,
    pub r_min: f64,
    pub r_max: f64,
    pub r_steps: usize,
    pub p_exp: f64,
    pub grid_size: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub timings: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            n: 2,
            twice_l: 0,
            lambda_re: 0.0,
            lambda_im: -1.0,
            p: 0,
            q: 0,
            r_min: 0.0,
            r_max: 0.9,
            r_steps: 10,
            p_exp: 2.0,
            grid_size: DEFAULT_GRID_SIZE,
            tolerances: BTreeMap::new(),
            output_path: None,
            format: if command == Command::Verify { Format::Json } else { Format::Csv },
            seed: SuiteConfig::default().seed,
            timings: false,
        }
    }

    pub fn lambda(&self) -> Complex {
        Complex::new(self.lambda_re, self.lambda_im)
    }

    /// `i lambda = -Im(lambda) + i Re(lambda)`.
    pub fn i_lambda(&self) -> Complex {
        Complex::i() * self.lambda()
    }

    pub fn radii(&self) -> Vec<f64> {
        if self.r_steps == 1 {
            return vec![self.r_min];
        }
        let h = (self.r_max - self.r_min) / (self.r_steps - 1) as f64;
        (0..self.r_steps).map(|i| self.r_min + h * i as f64).collect()
    }

    pub fn ktype(&self) -> Result<KTypeIndex, CliError> {
        KTypeIndex::new(self.p, self.q).map_err(|e| CliError::Config(e.to_string()))
    }

    fn params(&self) -> Result<SpectralParams, CliError> {
        SpectralParams::new(self.n, self.twice_l, self.lambda()).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Rejects every invalid combination before any numerics run.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.n < 2 {
            return bad(format!("n = {} must be at least 2", self.n));
        }
        if !(self.lambda_re.is_finite() && self.lambda_im.is_finite()) {
            return bad("lambda must be finite".into());
        }
        if self.command == Command::Verify {
            if self.format == Format::Csv && self.timings {
                return bad("--timings needs the json report".into());
            }
        } else {
            if self.r_steps == 0 {
                return bad("r-steps must be positive".into());
            }
            if !(0.0 <= self.r_min && self.r_min <= self.r_max && self.r_max < 1.0) {
                return bad(format!("need 0 <= r-min <= r-max < 1, got [{}, {}]", self.r_min, self.r_max));
            }
            if self.r_steps > 1 && self.r_min == self.r_max {
                return bad("r-min equals r-max with several steps".into());
            }
        }
        if !(2..=MAX_GAUSS_NODES).contains(&self.grid_size) {
            return bad(format!("grid size {} outside [2, {MAX_GAUSS_NODES}]", self.grid_size));
        }
        if self.command.uses_ktype() {
            self.ktype()?;
        }
        let re = self.i_lambda().re;
        if matches!(self.command, Command::Limit | Command::Hardy | Command::Invert) && re <= 0.0 {
            return bad(format!("{:?} needs Re(i lambda) > 0, got {re}", self.command));
        }
        if self.command == Command::Hardy && !(self.p_exp >= 2.0 && self.p_exp.is_finite()) {
            return bad(format!("p-exp = {} must be at least 2", self.p_exp));
        }
        for (name, &tol) in &self.tolerances {
            if default_tolerance(name).is_none() {
                return bad(format!("unknown check `{name}`"));
            }
            if !(tol > 0.0 && tol.is_finite()) {
                return bad(format!("tolerance for `{name}` must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Numerical(#[from] hyppoisson_core::Error),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(hyppoisson_core::Error::NoConvergence { .. }) => 3,
            CliError::Numerical(_) | CliError::Config(_) | CliError::Io(_) => 2,
        }
    }
}

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub text: String,
    pub all_pass: bool,
}

impl RunOutcome {
    pub fn exit_code(&self) -> u8 {
        if self.all_pass { 0 } else { 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct TableFitted {
    c_n: Option<f64>,
    proportionality: Vec<Proportionality>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct Table {
    command: Command,
    n: u32,
    twice_l: u32,
    lambda: [f64; 2],
    i_lambda: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    ktype: Option<KTypeIndex>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    summary: BTreeMap<&'static str, f64>,
    fitted: TableFitted,
}

impl Table {
    fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<_> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Quadrature/closed-form ratio at `r = 1/2`, the constant the fitted measure
/// should make equal to one.
fn proportionality(params: &SpectralParams, kt: KTypeIndex, grid: &ZonalGrid) -> Result<Proportionality, CliError> {
    const R: f64 = 0.5;
    let quad = poisson_quadrature_kfinite(params, &KFiniteFunction::single(kt, Complex::new(1.0, 0.0)), R, grid)?;
    let ratio = quad / generalized_spherical(params, kt, R)?;
    Ok(Proportionality { n: params.n, twice_l: params.twice_l, ktype: kt, re: ratio.re, im: ratio.im })
}

fn tabulate(config: &RunConfig) -> Result<Table, CliError> {
    let params = config.params()?;
    let grid = ZonalGrid::normalized(config.n, config.grid_size)?;
    let radii = config.radii();
    let kt = if config.command.uses_ktype() { Some(config.ktype()?) } else { None };
    let fitted_kt = kt.unwrap_or(KTypeIndex::new(0, 0)?);
    let mut summary = BTreeMap::new();
    let complex_rows = |f: &dyn Fn(f64) -> hyppoisson_core::Result<Complex>| -> Result<Vec<Vec<f64>>, CliError> {
        radii.iter().map(|&r| f(r).map(|v| vec![r, v.re, v.im]).map_err(CliError::from)).collect()
    };
    let (columns, rows) = match config.command {
        Command::Spherical => (vec!["r", "re", "im"], complex_rows(&|r| elementary_spherical(&params, r))?),
        Command::GenSpherical => {
            let kt = fitted_kt;
            (vec!["r", "re", "im"], complex_rows(&|r| generalized_spherical(&params, kt, r))?)
        }
        Command::Limit => {
            let kt = fitted_kt;
            let mut rows = complex_rows(&|r| scaled_generalized_spherical(&params, kt, r))?;
            let limit = spherical_limit(&params, kt, &LIMIT_RADII)?;
            rows.push(vec![1.0, limit.value.re, limit.value.im]);
            let closed = c_constant(&params)?;
            summary.insert("closed_re", closed.re);
            summary.insert("closed_im", closed.im);
            summary.insert("relative_error", (limit.value - closed).norm() / closed.norm());
            (vec!["r", "re", "im"], rows)
        }
        Command::Hardy => {
            let f = KFiniteFunction::single(fitted_kt, Complex::new(1.0, 0.0));
            let res = hardy_norm(&params, &f, config.p_exp, &radii, &grid, true)?;
            summary.insert("hardy_norm", res.value);
            summary.insert("argmax_r", res.argmax_r);
            (vec!["r", "scaled_norm"], res.samples.iter().map(|&(r, v)| vec![r, v]).collect())
        }
        Command::Invert => {
            let f = inversion_function();
            let rows = radii
                .iter()
                .map(|&r| Ok(vec![r, inversion_error(&params, &f, r, &grid)?]))
                .collect::<Result<Vec<_>, CliError>>()?;
            (vec!["r", "l2_error"], rows)
        }
        Command::Verify => unreachable!("verify is not a table"),
    };
    Ok(Table {
        command: config.command,
        n: config.n,
        twice_l: config.twice_l,
        lambda: [config.lambda_re, config.lambda_im],
        i_lambda: [config.i_lambda().re, config.i_lambda().im],
        ktype: kt,
        columns,
        rows,
        summary,
        fitted: TableFitted { c_n: grid.c_n(), proportionality: vec![proportionality(&params, fitted_kt, &grid)?] },
    })
}

fn render_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Validates, computes and renders. Nothing is written.
pub fn execute(config: &RunConfig) -> Result<RunOutcome, CliError> {
    config.validate()?;
    if config.command != Command::Verify {
        let table = tabulate(config)?;
        let text = match config.format {
            Format::Csv => table.to_csv(),
            Format::Json => render_json(&table),
        };
        return Ok(RunOutcome { text, all_pass: true });
    }
    let suite = SuiteConfig {
        n: config.n,
        seed: config.seed,
        grid_size: config.grid_size,
        tolerances: config.tolerances.clone(),
        timings: config.timings,
    };
    let report = run_suite(&suite)?;
    let text = match config.format {
        Format::Json => render_json(&report),
        Format::Csv => {
            let mut out = String::from("check_name,residual,tolerance,pass\n");
            for c in &report.checks {
                let _ = writeln!(out, "{},{:.16e},{:.16e},{}", c.check_name, c.residual, c.tolerance, c.pass);
            }
            out
        }
    };
    Ok(RunOutcome { text, all_pass: report.all_pass() })
}

/// Full run: compute, then write to the output path or stdout.
pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let outcome = execute(config)?;
    match &config.output_path {
        Some(path) => std::fs::write(path, &outcome.text)?,
        None => std::io::stdout().lock().write_all(outcome.text.as_bytes())?,
    }
    Ok(outcome)
}

const SCHEMAS: &str = "\
Output schemas (CSV has a header row; numbers carry 17 significant digits):
  spherical      r,re,im        elementary spherical function Phi_{lambda,l}(r)
  gen-spherical  r,re,im        generalized spherical function Phi_{lambda,l,p,q}(r)
  limit          r,re,im        (1-r^2)^{-(2n+1-i lambda)/2} Phi_{lambda,l,p,q}(r); last row r = 1
                                holds the Richardson limit from r = 0.9, 0.99, 0.999
  hardy          r,scaled_norm  scaled L^p norm of the transform of phi_{p,q}; last row r = 1
                                is the boundary value |C_l(lambda)| ||phi_{p,q}||_p
  invert         r,l2_error     || |C_l(lambda)|^{-2} g_r - f ||_2 for a fixed 3-term f
  verify         check_name,residual,tolerance,pass   (json: full report)

lambda is complex; i lambda = -lambda_im + i lambda_re, so --lambda-im -1 gives i lambda = 1.
Exit status: 0 ok, 1 check failure, 2 invalid configuration, 3 non-convergence.";

#[derive(Debug, Parser)]
#[command(name = "hyppoisson", version, about = "Spherical functions and the Poisson transform on quaternionic hyperbolic space", after_help = SCHEMAS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Tabulate the elementary spherical function (columns r,re,im)
    Spherical(RunArgs),
    /// Tabulate the generalized spherical function of K-type (p,q) (columns r,re,im)
    GenSpherical(RunArgs),
    /// Scaled approach to the boundary and its extrapolated limit (columns r,re,im)
    Limit(RunArgs),
    /// Scaled L^p norms of the transform of phi_{p,q} (columns r,scaled_norm)
    Hardy(RunArgs),
    /// Convergence of the inversion formula (columns r,l2_error)
    Invert(RunArgs),
    /// Run the identity suite and write a pass/fail report
    Verify(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Quaternionic dimension (at least 2)
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Twice the Sp(1) weight l
    #[arg(long, default_value_t = 0)]
    pub twice_l: u32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda_re: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub lambda_im: f64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub p: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub q: i64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub r_min: f64,
    #[arg(long, default_value_t = 0.9, allow_negative_numbers = true)]
    pub r_max: f64,
    #[arg(long, default_value_t = 10)]
    pub r_steps: usize,
    /// Exponent of the boundary L^p norm
    #[arg(long, default_value_t = 2.0)]
    pub p_exp: f64,
    /// Gauss nodes per axis of the quadrature grid
    #[arg(long, env = GRID_ENV, default_value_t = DEFAULT_GRID_SIZE)]
    pub grid_size: usize,
    /// Tolerance override for one check, as name=value (repeatable)
    #[arg(long = "tolerance", value_parser = parse_tolerance)]
    pub tolerances: Vec<(String, f64)>,
    /// Write here instead of stdout
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Defaults to csv for tables and json for verify
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = SuiteConfig::default().seed)]
    pub seed: u64,
    /// Record per-check wall-clock times (the report is then not reproducible)
    #[arg(long)]
    pub timings: bool,
}

fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let value = value.trim().parse::<f64>().map_err(|e| format!("tolerance `{value}`: {e}"))?;
    Ok((name.trim().to_string(), value))
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let (command, a) = match self.command {
            CliCommand::Spherical(a) => (Command::Spherical, a),
            CliCommand::GenSpherical(a) => (Command::GenSpherical, a),
            CliCommand::Limit(a) => (Command::Limit, a),
            CliCommand::Hardy(a) => (Command::Hardy, a),
            CliCommand::Invert(a) => (Command::Invert, a),
            CliCommand::Verify(a) => (Command::Verify, a),
        };
        let defaults = RunConfig::new(command);
        RunConfig {
            command,
            n: a.n,
            twice_l: a.twice_l,
            lambda_re: a.lambda_re,
            lambda_im: a.lambda_im,
            p: a.p,
            q: a.q,
            r_min: a.r_min,
            r_max: a.r_max,
            r_steps: a.r_steps,
            p_exp: a.p_exp,
            grid_size: a.grid_size,
            tolerances: a.tolerances.into_iter().collect(),
            output_path: a.output,
            format: a.format.unwrap_or(defaults.format),
            seed: a.seed,
            timings: a.timings,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        Cli::try_parse_from(std::iter::once("hyppoisson").chain(args.iter().copied()))
            .unwrap()
            .into_config()
    }

    #[test]
    fn config_round_trips_through_json() {
        let mut config = parse(&["hardy", "--n", "3", "--lambda-re", "0.5", "--p", "1", "--q", "3", "--tolerance", "limit=2e-3"]);
        config.output_path = Some("out.csv".into());
        let text = serde_json::to_string(&config).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), config);
        assert_eq!(config.tolerances["limit"], 2e-3);
    }

    #[test]
    fn defaults_give_unit_i_lambda() {
        let config = parse(&["spherical"]);
        assert_eq!(config.i_lambda(), Complex::new(1.0, 0.0));
        assert_eq!(config.radii().len(), 10);
        assert_eq!(config.format, Format::Csv);
        assert_eq!(parse(&["verify"]).format, Format::Json);
    }

    #[test]
    fn invalid_combinations_are_rejected() {
        let cases: &[&[&str]] = &[
            &["gen-spherical", "--p", "5", "--q", "2"],
            &["spherical", "--n", "1"],
            &["spherical", "--r-max", "1.0"],
            &["spherical", "--r-steps", "0"],
            &["hardy", "--p-exp", "1.5"],
            &["limit", "--lambda-im", "0.5"],
            &["verify", "--tolerance", "nope=1e-3"],
            &["verify", "--tolerance", "limit=-1"],
            &["spherical", "--grid-size", "1"],
        ];
        for args in cases {
            let err = parse(args).validate().unwrap_err();
            assert_eq!(err.exit_code(), 2, "{args:?}");
        }
    }

    #[test]
    fn csv_uses_seventeen_digits() {
        let config = RunConfig { r_steps: 2, grid_size: 16, ..RunConfig::new(Command::Spherical) };
        let text = execute(&config).unwrap().text;
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("r,re,im"));
        let row = lines.next().unwrap();
        let first = row.split(',').nth(1).unwrap();
        let mantissa = first.split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
        let value: f64 = first.parse().unwrap();
        assert!((value - std::f64::consts::PI / 24.0).abs() < 1e-15);
    }

    #[test]
    fn no_convergence_maps_to_three() {
        let err = CliError::from(hyppoisson_core::Error::NoConvergence { what: "x", iterations: 1 });
        assert_eq!(err.exit_code(), 3);
    }
}
