//! Command-line front end. Every command writes a JSON [`OutputEnvelope`]
//! (or CSV where noted) so runs are machine-readable and reproducible.
//!
//! Exit codes: `0` success, `1` I/O failure, `2` invalid flags or arguments,
//! `3` numerical failure (accuracy, conditioning, degenerate data).

mod spec;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ensemble::{series_like_degree, EnsembleSpec, Family, KernelSource, RNG_ALGORITHM_ID};
use crate::kacrice::{
    constant_k, expected_count_quadrature, kpoint_correlation, pair_correlation_closed,
    pair_correlation_numeric, DEFAULT_QMC_BUDGET,
};
use crate::montecarlo::{
    clt_experiment, empirical_pair_correlation, run_count_experiment, standardized_histogram,
    ExperimentConfig, ExperimentReport,
};
use crate::rootcount::DEFAULT_GRID_STEP;
use crate::Error;

pub use spec::parse_test_function;

/// Version of the JSON envelope layout.
pub const SCHEMA_VERSION: &str = "1";
/// Environment variable supplying the default for `--workers`.
pub const WORKERS_ENV: &str = "ROOTLAB_WORKERS";
/// Smallest degree used by `clt` when `--degree` is omitted.
pub const CLT_MIN_DEFAULT_DEGREE: usize = 3000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub rng_algorithm_id: String,
    pub seed: Option<u64>,
    pub code_version: String,
}

/// Wrapper written by every JSON-emitting command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub schema_version: String,
    pub command: String,
    pub config: Value,
    pub results: Value,
    pub provenance: Provenance,
}

impl OutputEnvelope {
    fn new(command: &str, config: Value, results: Value, seed: Option<u64>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            config,
            results,
            provenance: Provenance {
                rng_algorithm_id: RNG_ALGORITHM_ID.into(),
                seed,
                code_version: env!("CARGO_PKG_VERSION").into(),
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rootlab", version, about = "Real zeros of Gaussian random polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expected number of real zeros in [a, b] by Kac–Rice quadrature.
    ExpectedCount {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        degree: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
    },
    /// Monte Carlo linear statistics; writes a JSON report and a per-trial CSV.
    Simulate {
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Two-point correlation of the limiting Weyl process as CSV.
    PairCorrelation {
        #[arg(long, value_enum)]
        mode: PairMode,
        #[arg(long)]
        tmax: f64,
        #[arg(long)]
        bin: f64,
        #[command(flatten)]
        sim: OptionalSimArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The variance constant K with a certified error bound.
    ConstantK {
        #[arg(long, default_value_t = 10.0)]
        cutoff: f64,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Normality check of standardized counts in [-R, R].
    Clt {
        #[arg(long)]
        scale: f64,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "weyl")]
        family: Family,
        /// Defaults to max(ceil((R+10)^2), 3000).
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value = "box")]
        h: String,
        #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
        grid: f64,
        #[arg(long, env = WORKERS_ENV, default_value_t = 1)]
        workers: usize,
    },
    /// k-point correlation (2 ≤ k ≤ 4) as JSON.
    Kpoint {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        points: Vec<f64>,
        #[arg(long)]
        family: Family,
        /// Omit for the limiting Weyl kernel e^{st}.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_QMC_BUDGET)]
        budget: usize,
    },
    /// Kac expected count over the real line and its logarithmic decomposition.
    KacExpected {
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PairMode {
    Closed,
    Numeric,
    Empirical,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    degree: usize,
    #[arg(long)]
    h: String,
    #[arg(long)]
    scale: f64,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
    grid: f64,
    #[arg(long, env = WORKERS_ENV, default_value_t = 1)]
    workers: usize,
}

#[derive(Debug, Args)]
struct OptionalSimArgs {
    #[arg(long)]
    family: Option<Family>,
    /// Defaults to ceil((R+10)^2).
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    grid: Option<f64>,
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
}

impl OptionalSimArgs {
    /// Names of simulation flags that were given explicitly.
    fn given(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        let flags: [(&'static str, bool); 7] = [
            ("--family", self.family.is_some()),
            ("--degree", self.degree.is_some()),
            ("--h", self.h.is_some()),
            ("--scale", self.scale.is_some()),
            ("--trials", self.trials.is_some()),
            ("--seed", self.seed.is_some()),
            ("--grid", self.grid.is_some()),
        ];
        for (name, set) in flags {
            if set {
                v.push(name);
            }
        }
        v
    }
}

/// Failure of a command, already mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Library(e) if e.is_numerical() => 3,
            Failure::Library(_) => 2,
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command, writing
/// regular output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) => format!("error: {m}"),
                Failure::Io(m) => format!("error: i/o: {m}"),
                Failure::Library(e) => format!("error: {e}"),
            };
            let _ = writeln!(err, "{msg}");
            f.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::ExpectedCount { family, degree, a, b } => {
            let spec = EnsembleSpec::new(family, degree)?;
            let r = expected_count_quadrature(&KernelSource::Finite(spec.build()?), (a, b))?;
            let env = OutputEnvelope::new(
                "expected-count",
                json!({ "family": family, "degree": degree, "a": a, "b": b }),
                json!({ "expected_count": r.value, "error_estimate": r.error, "evaluations": r.evaluations }),
                None,
            );
            emit_json(out, &env)
        }
        Command::Simulate { sim, out: path } => {
            let config = sim_config(&sim)?;
            let report = run_count_experiment(&config)?;
            write_report("simulate", &report, &path)?;
            let trials_csv = sibling(&path, "trials");
            write_file(&trials_csv, &per_trial_csv(&report))?;
            writeln!(out, "wrote {} and {}", path.display(), trials_csv.display())?;
            Ok(())
        }
        Command::PairCorrelation { mode, tmax, bin, sim, out: path } => {
            let csv = pair_csv(mode, tmax, bin, &sim)?;
            match path {
                Some(p) => write_file(&p, &csv).map_err(Failure::from),
                None => out.write_all(csv.as_bytes()).map_err(Failure::from),
            }
        }
        Command::ConstantK { cutoff, tol } => {
            let k = constant_k(cutoff, tol)?;
            writeln!(
                out,
                "K={:.15} ±{:.1e}",
                k.value,
                k.quadrature_error + k.tail_bound
            )?;
            Ok(())
        }
        Command::Clt { scale, trials, seed, out: path, family, degree, h, grid, workers } => {
            let degree = degree.unwrap_or_else(|| series_like_degree(scale).max(CLT_MIN_DEFAULT_DEGREE));
            let sim = SimArgs { family, degree, h, scale, trials, seed, grid, workers };
            let config = sim_config(&sim)?;
            let report = clt_experiment(&config)?;
            write_report("clt", &report, &path)?;
            let trials_csv = sibling(&path, "trials");
            write_file(&trials_csv, &per_trial_csv(&report))?;
            let hist = standardized_histogram(&report.per_trial, 32)?;
            let mut csv = String::from("z,density,normal_density\n");
            for (z, d, phi) in hist {
                let _ = writeln!(csv, "{z:.16e},{d:.16e},{phi:.16e}");
            }
            let hist_csv = sibling(&path, "histogram");
            write_file(&hist_csv, &csv)?;
            writeln!(
                out,
                "ks_statistic={:.6} ks_pvalue={:.6} normal_regime={}",
                report.ks_statistic.unwrap_or(f64::NAN),
                report.ks_pvalue.unwrap_or(f64::NAN),
                report.normal_regime
            )?;
            Ok(())
        }
        Command::Kpoint { points, family, degree, budget } => {
            let source = match (family, degree) {
                (Family::Weyl, None) => KernelSource::WeylSeries,
                (_, Some(n)) => KernelSource::Finite(EnsembleSpec::new(family, n)?.build()?),
                (f, None) => {
                    return Err(Failure::Usage(format!("--degree is required for family {f}")))
                }
            };
            let r = kpoint_correlation(&points, &source, budget)?;
            let env = OutputEnvelope::new(
                "kpoint",
                json!({ "points": points, "family": family, "degree": degree, "budget": budget }),
                serde_json::to_value(&r).map_err(|e| Failure::Io(e.to_string()))?,
                None,
            );
            emit_json(out, &env)
        }
        Command::KacExpected { degree } => {
            let spec = EnsembleSpec::new(Family::Kac, degree)?;
            let r = expected_count_quadrature(
                &KernelSource::Finite(spec.build()?),
                (f64::NEG_INFINITY, f64::INFINITY),
            )?;
            let log_term = 2.0 / std::f64::consts::PI * (degree as f64).ln();
            let env = OutputEnvelope::new(
                "kac-expected",
                json!({ "degree": degree }),
                json!({
                    "expected_count": r.value,
                    "error_estimate": r.error,
                    "log_term": log_term,
                    "constant": r.value - log_term,
                }),
                None,
            );
            emit_json(out, &env)
        }
    }
}

fn sim_config(sim: &SimArgs) -> std::result::Result<ExperimentConfig, Failure> {
    let h = parse_test_function(&sim.h).map_err(|e| Failure::Usage(format!("--h: {e}")))?;
    let spec = EnsembleSpec::new(sim.family, sim.degree)?;
    let config = ExperimentConfig::new(spec, h, sim.scale, sim.trials, sim.seed)
        .with_grid_step(sim.grid)
        .with_workers(sim.workers);
    config.validate()?;
    Ok(config)
}

fn pair_csv(mode: PairMode, tmax: f64, bin: f64, sim: &OptionalSimArgs) -> std::result::Result<String, Failure> {
    if !(tmax > 0.0 && tmax.is_finite()) {
        return Err(Failure::Usage("--tmax must be positive".into()));
    }
    if !(bin > 0.0 && bin <= tmax) {
        return Err(Failure::Usage("--bin must lie in (0, tmax]".into()));
    }
    let mut csv = String::from("t,rho,stderr,rho_closed\n");
    if mode != PairMode::Empirical {
        if let Some(flag) = sim.given().first() {
            return Err(Failure::Usage(format!(
                "{flag} only applies to --mode empirical"
            )));
        }
        let nbins = (tmax / bin - 1e-9).ceil() as usize;
        for i in 0..nbins {
            let t = (i as f64 + 0.5) * bin;
            let closed = pair_correlation_closed(t).value;
            let rho = match mode {
                PairMode::Closed => closed,
                _ => pair_correlation_numeric(t)?.value,
            };
            let _ = writeln!(csv, "{t:.16e},{rho:.16e},{:.16e},{closed:.16e}", 0.0);
        }
        return Ok(csv);
    }
    let missing = |name: &str| Failure::Usage(format!("--mode empirical requires {name}"));
    let scale = sim.scale.ok_or_else(|| missing("--scale"))?;
    let args = SimArgs {
        family: sim.family.unwrap_or(Family::Weyl),
        degree: sim.degree.unwrap_or_else(|| series_like_degree(scale)),
        h: sim.h.clone().unwrap_or_else(|| "box".into()),
        scale,
        trials: sim.trials.ok_or_else(|| missing("--trials"))?,
        seed: sim.seed.ok_or_else(|| missing("--seed"))?,
        grid: sim.grid.unwrap_or(DEFAULT_GRID_STEP),
        workers: sim.workers.unwrap_or(1),
    };
    let config = sim_config(&args)?;
    let table = empirical_pair_correlation(&config, tmax, bin)?;
    for b in &table.bins {
        let _ = writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            b.t_mid(),
            b.estimate,
            b.stderr,
            b.rho_closed
        );
    }
    Ok(csv)
}

/// `dir/name.json` → `dir/name.<tag>.csv`.
fn sibling(path: &Path, tag: &str) -> PathBuf {
    path.with_extension(format!("{tag}.csv"))
}

fn write_file(path: &Path, contents: &str) -> std::io::Result<()> {
    std::fs::write(path, contents)
}

fn to_json(env: &OutputEnvelope) -> std::result::Result<String, Failure> {
    serde_json::to_string_pretty(env).map_err(|e| Failure::Io(e.to_string()))
}

fn emit_json(out: &mut dyn Write, env: &OutputEnvelope) -> CmdResult {
    let text = to_json(env)?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn write_report(command: &str, report: &ExperimentReport, path: &Path) -> CmdResult {
    let mut results = serde_json::to_value(report).map_err(|e| Failure::Io(e.to_string()))?;
    // The config is echoed once, at the top level, so the results payload does
    // not depend on execution-only settings such as the worker count.
    if let Some(obj) = results.as_object_mut() {
        obj.remove("config");
    }
    let env = OutputEnvelope::new(
        command,
        serde_json::to_value(&report.config).map_err(|e| Failure::Io(e.to_string()))?,
        results,
        Some(report.config.seed),
    );
    let mut text = to_json(&env)?;
    text.push('\n');
    write_file(path, &text)?;
    Ok(())
}

fn per_trial_csv(report: &ExperimentReport) -> String {
    let mut csv = String::from("trial,statistic,root_count\n");
    for (i, (v, c)) in report.per_trial.iter().zip(&report.root_counts).enumerate() {
        let _ = writeln!(csv, "{i},{v:.16e},{c}");
    }
    csv
}
