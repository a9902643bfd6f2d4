//! `jamloc` command line: `simulate`, `sweep` and `compare`.
//!
//! The effective scenario is the JSON config file (or the defaults) with
//! command-line flags applied on top. Exit codes: 0 success, 1 invalid
//! configuration or arguments, 2 I/O failure, 3 internal invariant violation.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::experiment::{
    run_experiment_with, simulate_trial, sweep_with, Execution, ScenarioConfig, SweepAxis,
    SweepRow, SweepValue,
};
use crate::geometry::Point2D;
use crate::localizers::{CompensationMode, Estimator, Method};
use crate::network::PlacementPolicy;
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "jamloc", version, about = "Jammer localization simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one trial and export the node snapshot and per-method estimates.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Trial index under the master seed.
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
    /// Sweep one scenario parameter and write a long-format summary table.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_parser = parse_axis)]
        axis: SweepAxis,
        /// Comma-separated values, e.g. `50,100,150,200` or `center,edge,corner`.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<String>,
    },
    /// Compare CL, CJ and both GJL modes on one scenario.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args, Clone, Default)]
pub struct CommonArgs {
    /// JSON scenario file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Number of sensor nodes.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Jamming radius, m.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Jammer region: center, edge or corner.
    #[arg(long, value_parser = parse_region)]
    pub region: Option<PlacementPolicy>,
    /// Fixed jammer position `X,Y` (overrides --region).
    #[arg(long, value_parser = parse_point)]
    pub jammer_at: Option<Point2D>,
    /// Shadowing standard deviation, dB.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Node communication range, m.
    #[arg(long)]
    pub node_range: Option<f64>,
    /// GJL compensation: paper or geometric.
    #[arg(long, value_parser = parse_mode)]
    pub gjl_mode: Option<CompensationMode>,
    /// Minimum angle between the two GJL chords, degrees.
    #[arg(long)]
    pub min_angle: Option<f64>,
    /// Comma-separated subset of CL, CJ, GJL.
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    pub methods: Option<Vec<Method>>,
    /// Run trials on one thread.
    #[arg(long)]
    pub serial: bool,
    /// Print the effective scenario as JSON and exit.
    #[arg(long)]
    pub dump_config: bool,
}

fn parse_axis(s: &str) -> Result<SweepAxis, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_region(s: &str) -> Result<PlacementPolicy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<CompensationMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_point(s: &str) -> Result<Point2D, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected X,Y, got {s:?}"))?;
    let x: f64 = x.trim().parse().map_err(|_| format!("bad x in {s:?}"))?;
    let y: f64 = y.trim().parse().map_err(|_| format!("bad y in {s:?}"))?;
    Ok(Point2D::new(x, y))
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Io(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::NonFinitePoint { .. } => CliError::Config(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl CommonArgs {
    /// Config file (or defaults) with flag overrides, validated.
    pub fn effective_config(&self) -> Result<ScenarioConfig, CliError> {
        let mut config = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read config {}: {e}", path.display()))
                })?;
                serde_json::from_str::<ScenarioConfig>(&text).map_err(|e| {
                    CliError::Config(format!("invalid config {}: {e}", path.display()))
                })?
            }
            None => ScenarioConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.master_seed = seed;
        }
        if let Some(trials) = self.trials {
            config.trials = trials;
        }
        if let Some(nodes) = self.nodes {
            config.field.node_count = nodes;
        }
        if let Some(radius) = self.radius {
            config.jammer_radius = radius;
        }
        if let Some(region) = self.region {
            config.placement_policy = region;
        }
        if let Some(p) = self.jammer_at {
            config.placement_policy = PlacementPolicy::Fixed(p);
        }
        if let Some(sigma) = self.sigma {
            config.radio.shadowing_sigma = sigma;
        }
        if let Some(range) = self.node_range {
            config.radio.node_comm_range = range;
        }
        if let Some(mode) = self.gjl_mode {
            config.gjl_mode = mode;
        }
        if let Some(angle) = self.min_angle {
            config.min_angle_deg = angle;
        }
        if let Some(methods) = &self.methods {
            config.methods = methods.clone();
        }
        config.validate()?;
        Ok(config)
    }

    fn execution(&self) -> Execution {
        if self.serial {
            Execution::Serial
        } else {
            Execution::Parallel
        }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// human-readable output to `stdout`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, stdout: &mut dyn std::io::Write) -> Result<(), CliError> {
    let common = match command {
        Command::Simulate { common, .. }
        | Command::Sweep { common, .. }
        | Command::Compare { common } => common,
    };
    let config = common.effective_config()?;
    if common.dump_config {
        let json = serde_json::to_string_pretty(&config)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        return print(stdout, &format!("{json}\n"));
    }
    match command {
        Command::Simulate { trial, .. } => simulate(&config, *trial, &common.out, stdout),
        Command::Sweep { axis, values, .. } => {
            sweep(&config, *axis, values, &common.out, common.execution(), stdout)
        }
        Command::Compare { .. } => compare(&config, &common.out, common.execution(), stdout),
    }
}

fn print(stdout: &mut dyn std::io::Write, text: &str) -> Result<(), CliError> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
}

fn write_outputs(dir: &Path, files: &[(&str, String)]) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    for (name, contents) in files {
        let path = dir.join(name);
        fs::write(&path, contents)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn simulate(
    config: &ScenarioConfig,
    trial: u64,
    out: &Path,
    stdout: &mut dyn std::io::Write,
) -> Result<(), CliError> {
    let estimators = config.estimators();
    let snapshot = simulate_trial(config, &estimators, trial)?;
    let mut files = vec![
        ("nodes.csv", report::nodes_csv(&snapshot)),
        ("estimate.csv", report::estimates_csv(&snapshot)),
    ];
    if config.methods.contains(&Method::Gjl) {
        files.push(("diagnostics.csv", report::diagnostics_csv(&snapshot)));
    }
    write_outputs(out, &files)?;

    let record = snapshot.record();
    let j = snapshot.jammer.position;
    let mut text = String::new();
    let _ = writeln!(text, "trial {} (seed {:#018x})", trial, snapshot.seed);
    let _ = writeln!(
        text,
        "jammer {} {} radius {}",
        report::fmt_f64(j.x),
        report::fmt_f64(j.y),
        report::fmt_f64(snapshot.jammer.radius)
    );
    let _ = writeln!(text, "boundary nodes {}", record.boundary_count);
    for (est, status) in &record.results {
        let err = status
            .error()
            .map(report::fmt_f64)
            .unwrap_or_else(|| "-".to_owned());
        let _ = writeln!(text, "{:<16} {:<8} error {}", est.label(), status.label(), err);
    }
    print(stdout, &text)
}

fn sweep(
    config: &ScenarioConfig,
    axis: SweepAxis,
    raw_values: &[String],
    out: &Path,
    execution: Execution,
    stdout: &mut dyn std::io::Write,
) -> Result<(), CliError> {
    let values: Vec<SweepValue> = raw_values
        .iter()
        .filter(|v| !v.trim().is_empty())
        .map(|v| axis.parse_value(v))
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(CliError::Config("sweep needs at least one --values entry".into()));
    }
    let rows = sweep_with(config, axis, &values, &config.estimators(), execution)?;
    write_outputs(out, &[("sweep.csv", report::summary_csv(&rows))])?;
    print(stdout, &summary_table(&rows))
}

/// Estimators run by `compare`.
pub const COMPARE_ESTIMATORS: [Estimator; 4] = [
    Estimator::Cl,
    Estimator::Cj,
    Estimator::Gjl(CompensationMode::PaperEq8),
    Estimator::Gjl(CompensationMode::GeometricD0),
];

fn compare(
    config: &ScenarioConfig,
    out: &Path,
    execution: Execution,
    stdout: &mut dyn std::io::Write,
) -> Result<(), CliError> {
    let result = run_experiment_with(config, &COMPARE_ESTIMATORS, execution)?;
    let summary = &result.summary;
    for row in &summary.rows {
        if row.clean + row.fallbacks + row.failures != config.trials {
            return Err(CliError::Internal(format!(
                "{} accounts for {} of {} trials",
                row.estimator.label(),
                row.clean + row.fallbacks + row.failures,
                config.trials
            )));
        }
    }
    write_outputs(
        out,
        &[
            (
                "compare.csv",
                report::experiment_summary_csv("scenario", "base", summary),
            ),
            ("trials.csv", report::trials_csv(&result.records)),
        ],
    )?;

    let cl_mean = summary.get(Estimator::Cl).and_then(|r| r.mean_error);
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<16} {:>7} {:>9} {:>10} {:>11} {:>11} {:>11} {:>11}",
        "method", "trials", "failures", "fallbacks", "mean", "std", "median", "ratio_cl"
    );
    for row in &summary.rows {
        let ratio = match (row.mean_error, cl_mean) {
            (Some(m), Some(c)) if c > 0.0 => report::fmt_f64(m / c),
            _ => "-".to_owned(),
        };
        let _ = writeln!(
            text,
            "{:<16} {:>7} {:>9} {:>10} {:>11} {:>11} {:>11} {:>11}",
            row.estimator.label(),
            row.trials,
            row.failures,
            row.fallbacks,
            opt(row.mean_error),
            opt(row.std_error),
            opt(row.median_error),
            ratio
        );
    }
    for mode in [CompensationMode::GeometricD0, CompensationMode::PaperEq8] {
        let gjl = summary.get(Estimator::Gjl(mode)).and_then(|r| r.mean_error);
        if let (Some(g), Some(c)) = (gjl, cl_mean) {
            let _ = writeln!(
                text,
                "ratio GJL({mode})/CL = {} (error reduction {}%)",
                report::fmt_f64(g / c),
                report::fmt_f64(100.0 * (1.0 - g / c))
            );
        }
    }
    print(stdout, &text)
}

fn opt(v: Option<f64>) -> String {
    v.map(report::fmt_f64).unwrap_or_else(|| "-".to_owned())
}

fn summary_table(rows: &[SweepRow]) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<8} {:<14} {:<16} {:>7} {:>9} {:>10} {:>11} {:>11}",
        "axis", "value", "method", "trials", "failures", "fallbacks", "mean", "median"
    );
    for r in rows {
        let s = &r.summary;
        let _ = writeln!(
            text,
            "{:<8} {:<14} {:<16} {:>7} {:>9} {:>10} {:>11} {:>11}",
            r.axis,
            r.value.label(),
            s.estimator.label(),
            s.trials,
            s.failures,
            s.fallbacks,
            opt(s.mean_error),
            opt(s.median_error)
        );
    }
    text
}
