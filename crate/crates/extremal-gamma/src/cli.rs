//! Command-line interface: norming constants, limit-law evaluation,
//! reproducible simulation, and the convergence suites, with
//! machine-readable outputs (JSON for structured reports, CSV for
//! vectors).
//!
//! Exit codes: 0 success/pass, 1 verification fail, 2 numeric/regime
//! error, 3 resource, 64 usage. Data goes to stdout, logs to stderr.
//! There is no default seed: reproducibility cannot be skipped.

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::family::{classify_dirichlet, ShapeFamily};
use crate::limits::LimitLaw;
use crate::norming::{dirichlet_norming, gamma_norming, NormingConstants};
use crate::sampling::{simulate_batch, BatchSpec, Model, DEFAULT_BUDGET};
use crate::verify::{convergence_suite, SuiteSpec, Tolerances};
use crate::{Error, Result};

/// Environment variable capping replicates × n for simulate/verify.
pub const BUDGET_ENV: &str = "EXTREMAL_GAMMA_BUDGET";

/// One resolved invocation; also the schema of `--config FILE`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub subcommand: SubcommandName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<ShapeFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<ShapeFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicates: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub law: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monotone_slack: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emit_plot_data: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubcommandName {
    Norming,
    Cdf,
    Moments,
    Simulate,
    Verify,
}

#[derive(Parser)]
#[command(
    name = "extremal-gamma",
    version,
    about = "Norming constants, limit laws, simulation, and convergence checks \
             for maxima of triangular gamma arrays and growing Dirichlet vectors"
)]
struct Cli {
    /// JSON file mirroring the run configuration; used instead of a subcommand
    #[arg(long, value_name = "FILE", global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print norming constants, regime, and solver diagnostics as JSON
    Norming(NormingArgs),
    /// Evaluate a limit-law CDF over points; CSV "x,cdf"
    Cdf(CdfArgs),
    /// Moment sequence of a moment-determined law; CSV "k,moment"
    Moments(MomentsArgs),
    /// Simulate normalized maxima reproducibly; CSV "replicate,statistic"
    Simulate(SimulateArgs),
    /// Run a convergence suite; JSON report, exit 1 on failed pass flags
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// gamma or dirichlet
    #[arg(long)]
    model: String,
    /// shape family as c,p,q (alpha_n = c*n^p*logn^q)
    #[arg(long)]
    family: String,
    /// remainder family for the dirichlet model, as c,p,q
    #[arg(long)]
    beta: Option<String>,
}

#[derive(Args)]
struct NormingArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CdfArgs {
    /// law spec: gumbel | falpha:A | h:A,B | uniform01 | ulambda:L (L may be "inf")
    #[arg(long)]
    law: String,
    /// comma-separated evaluation points
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_hyphen_values = true)]
    x: Option<Vec<f64>>,
    /// linear grid lo,hi,count instead of explicit points
    #[arg(long, value_name = "LO,HI,COUNT", allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MomentsArgs {
    /// law spec: falpha:A | h:A,B | ulambda:L
    #[arg(long)]
    law: String,
    /// highest moment order
    #[arg(long, default_value_t = 3)]
    k_max: u32,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    replicates: u64,
    /// RNG seed; required, replicate r draws from stream (seed, r)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// single row size (alternative to --n-grid)
    #[arg(long)]
    n: Option<u64>,
    /// comma-separated row sizes
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    n_grid: Option<Vec<u64>>,
    #[arg(long)]
    replicates: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// exact-track final tolerance on the sup difference
    #[arg(long)]
    sup_tol: Option<f64>,
    /// Monte Carlo KS tolerance
    #[arg(long)]
    ks_tol: Option<f64>,
    /// moment z-score tolerance
    #[arg(long)]
    z_tol: Option<f64>,
    /// slack allowed between consecutive n metrics
    #[arg(long)]
    monotone_slack: Option<f64>,
    #[arg(long, default_value_t = 3)]
    k_max: u32,
    /// write per-n "x,ecdf,limit_cdf" CSVs into this directory
    #[arg(long, value_name = "DIR")]
    emit_plot_data: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Parse argv and execute; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Testable entry point over explicit arguments.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 64;
        }
    };
    let config = match resolve_config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match execute(&config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn resolve_config(cli: Cli) -> Result<RunConfig> {
    match (cli.config, cli.cmd) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Usage(format!("malformed config {}: {e}", path.display())))
        }
        (None, Some(cmd)) => Ok(config_from_cmd(cmd)?),
        (Some(_), Some(_)) => Err(Error::Usage(
            "pass either --config or a subcommand, not both".into(),
        )),
        (None, None) => Err(Error::Usage(
            "a subcommand or --config is required (try --help)".into(),
        )),
    }
}

fn config_from_cmd(cmd: Cmd) -> Result<RunConfig> {
    let empty = RunConfig {
        subcommand: SubcommandName::Norming,
        model: None,
        family: None,
        beta: None,
        n: None,
        n_grid: None,
        replicates: None,
        seed: None,
        workers: None,
        law: None,
        x: None,
        k_max: None,
        format: None,
        out: None,
        sup_tol: None,
        ks_tol: None,
        z_tol: None,
        monotone_slack: None,
        emit_plot_data: None,
    };
    Ok(match cmd {
        Cmd::Norming(a) => RunConfig {
            subcommand: SubcommandName::Norming,
            model: Some(parse_model(&a.model.model)?),
            family: Some(a.model.family.parse()?),
            beta: a.model.beta.map(|b| b.parse()).transpose()?,
            n: Some(a.n),
            out: a.out,
            ..empty
        },
        Cmd::Cdf(a) => RunConfig {
            subcommand: SubcommandName::Cdf,
            law: Some(a.law),
            x: Some(resolve_points(a.x, a.grid.as_deref())?),
            out: a.out,
            ..empty
        },
        Cmd::Moments(a) => RunConfig {
            subcommand: SubcommandName::Moments,
            law: Some(a.law),
            k_max: Some(a.k_max),
            out: a.out,
            ..empty
        },
        Cmd::Simulate(a) => RunConfig {
            subcommand: SubcommandName::Simulate,
            model: Some(parse_model(&a.model.model)?),
            family: Some(a.model.family.parse()?),
            beta: a.model.beta.map(|b| b.parse()).transpose()?,
            n: Some(a.n),
            replicates: Some(a.replicates),
            seed: a.seed,
            workers: a.workers,
            out: a.out,
            ..empty
        },
        Cmd::Verify(a) => RunConfig {
            subcommand: SubcommandName::Verify,
            model: Some(parse_model(&a.model.model)?),
            family: Some(a.model.family.parse()?),
            beta: a.model.beta.map(|b| b.parse()).transpose()?,
            n: a.n,
            n_grid: a.n_grid,
            replicates: a.replicates,
            seed: a.seed,
            workers: a.workers,
            k_max: Some(a.k_max),
            sup_tol: a.sup_tol,
            ks_tol: a.ks_tol,
            z_tol: a.z_tol,
            monotone_slack: a.monotone_slack,
            emit_plot_data: a.emit_plot_data,
            out: a.out,
            ..empty
        },
    })
}

fn parse_model(s: &str) -> Result<Model> {
    match s {
        "gamma" => Ok(Model::Gamma),
        "dirichlet" => Ok(Model::Dirichlet),
        other => Err(Error::Usage(format!(
            "unknown model {other:?}, expected gamma or dirichlet"
        ))),
    }
}

fn resolve_points(x: Option<Vec<f64>>, grid: Option<&str>) -> Result<Vec<f64>> {
    match (x, grid) {
        (Some(points), None) if !points.is_empty() => Ok(points),
        (None, Some(spec)) => {
            let parts: Vec<&str> = spec.split(',').collect();
            let err = || Error::Usage(format!("malformed grid {spec:?}, expected lo,hi,count"));
            if parts.len() != 3 {
                return Err(err());
            }
            let lo: f64 = parts[0].trim().parse().map_err(|_| err())?;
            let hi: f64 = parts[1].trim().parse().map_err(|_| err())?;
            let count: usize = parts[2].trim().parse().map_err(|_| err())?;
            if count < 2 || !(lo < hi) {
                return Err(err());
            }
            Ok((0..count)
                .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                .collect())
        }
        _ => Err(Error::Usage(
            "exactly one of --x or --grid is required".into(),
        )),
    }
}

/// Parse a law spec string: `gumbel`, `falpha:A`, `h:A,B`, `uniform01`,
/// `ulambda:L` with `L` a number or `inf`.
pub fn parse_law(s: &str) -> Result<LimitLaw> {
    let err = || {
        Error::Usage(format!(
            "malformed law {s:?}; expected gumbel | falpha:A | h:A,B | uniform01 | ulambda:L"
        ))
    };
    let (name, params) = match s.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (s, None),
    };
    match (name, params) {
        ("gumbel", None) => Ok(LimitLaw::Gumbel),
        ("uniform01", None) => Ok(LimitLaw::Uniform01),
        ("falpha", Some(p)) => {
            let alpha: f64 = p.trim().parse().map_err(|_| err())?;
            Ok(LimitLaw::FAlpha { alpha })
        }
        ("h", Some(p)) => {
            let parts: Vec<&str> = p.split(',').collect();
            if parts.len() != 2 {
                return Err(err());
            }
            let alpha: f64 = parts[0].trim().parse().map_err(|_| err())?;
            let beta: f64 = parts[1].trim().parse().map_err(|_| err())?;
            Ok(LimitLaw::HLaw { alpha, beta })
        }
        ("ulambda", Some(p)) => {
            let lambda = if p.trim() == "inf" {
                f64::INFINITY
            } else {
                p.trim().parse().map_err(|_| err())?
            };
            Ok(LimitLaw::ULambda { lambda })
        }
        _ => Err(err()),
    }
}

fn budget_from_env() -> Result<u64> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::Usage(format!(
                "{BUDGET_ENV} must be a nonnegative integer, got {v:?}"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_BUDGET),
        Err(e) => Err(Error::Usage(format!("{BUDGET_ENV}: {e}"))),
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn require<T: Clone>(opt: &Option<T>, what: &str) -> Result<T> {
    opt.clone()
        .ok_or_else(|| Error::Usage(format!("{what} is required")))
}

fn check_n_cli(n: u64) -> Result<u64> {
    if n < 3 {
        return Err(Error::Usage(format!("n must be at least 3, got {n}")));
    }
    Ok(n)
}

fn write_output(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| Error::Numerical(format!("stdout: {e}")))
        }
    }
}

// 17 significant digits: lossless round trip for any f64.
fn fmt_stat(v: f64) -> String {
    format!("{v:.16e}")
}

/// Execute a resolved configuration; Ok carries the exit code (0, or 1
/// for a failed verification).
pub fn execute(config: &RunConfig) -> Result<i32> {
    match config.subcommand {
        SubcommandName::Norming => cmd_norming(config),
        SubcommandName::Cdf => cmd_cdf(config),
        SubcommandName::Moments => cmd_moments(config),
        SubcommandName::Simulate => cmd_simulate(config),
        SubcommandName::Verify => cmd_verify(config),
    }
}

#[derive(Serialize)]
struct NormingOutput {
    model: Model,
    family: ShapeFamily,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<ShapeFamily>,
    n: u64,
    regime: serde_json::Value,
    #[serde(flatten)]
    norming: NormingConstants,
}

fn cmd_norming(config: &RunConfig) -> Result<i32> {
    let model = require(&config.model, "--model")?;
    let family = require(&config.family, "--family")?;
    let n = check_n_cli(require(&config.n, "--n")?)?;
    let (regime, norming, beta) = match model {
        Model::Gamma => {
            if config.beta.is_some() {
                return Err(Error::Usage(
                    "--beta applies to the dirichlet model only".into(),
                ));
            }
            let nc = gamma_norming(n, &family)?;
            (serde_json::to_value(family.classify()).unwrap(), nc, None)
        }
        Model::Dirichlet => {
            let beta = require(&config.beta, "--beta")?;
            let regime = classify_dirichlet(&family, &beta)?;
            let nc = dirichlet_norming(n, &family, &beta)?;
            (serde_json::to_value(regime).unwrap(), nc, Some(beta))
        }
    };
    let out = NormingOutput {
        model,
        family,
        beta,
        n,
        regime,
        norming,
    };
    let mut text =
        serde_json::to_string_pretty(&out).map_err(|e| Error::Numerical(e.to_string()))?;
    text.push('\n');
    write_output(config.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_cdf(config: &RunConfig) -> Result<i32> {
    let law = parse_law(&require(&config.law, "--law")?)?;
    if matches!(law, LimitLaw::HLaw { .. }) {
        return Err(Error::Unsupported(
            "the H law has no closed-form CDF; use the `moments` subcommand instead".into(),
        ));
    }
    let points = require(&config.x, "--x or --grid")?;
    let mut text = String::from("x,cdf\n");
    for &x in &points {
        let v = law.cdf(x)?;
        text.push_str(&format!("{x},{}\n", fmt_stat(v)));
    }
    write_output(config.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_moments(config: &RunConfig) -> Result<i32> {
    let law = parse_law(&require(&config.law, "--law")?)?;
    let k_max = config.k_max.unwrap_or(3);
    if k_max < 1 {
        return Err(Error::Usage("k_max must be at least 1".into()));
    }
    let mut text = String::from("k,moment\n");
    for k in 1..=k_max {
        let m = law.moment(k)?;
        text.push_str(&format!("{k},{}\n", fmt_stat(m)));
    }
    write_output(config.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_simulate(config: &RunConfig) -> Result<i32> {
    let model = require(&config.model, "--model")?;
    let family = require(&config.family, "--family")?;
    let n = check_n_cli(require(&config.n, "--n")?)?;
    let replicates = require(&config.replicates, "--replicates")?;
    let seed = require(&config.seed, "--seed")?;
    if model == Model::Dirichlet && config.beta.is_none() {
        return Err(Error::Usage(
            "--beta is required for the dirichlet model".into(),
        ));
    }
    let spec = BatchSpec {
        model,
        shape: family,
        beta: config.beta,
        n,
        replicates,
        seed,
        workers: config.workers.unwrap_or_else(default_workers),
        budget: budget_from_env()?,
    };
    let stats = simulate_batch(&spec)?;
    // config echo omits workers and output path: the data is identical
    // for any worker count, and the header must be too
    let echo = RunConfig {
        workers: None,
        out: None,
        ..config.clone()
    };
    let mut text = String::new();
    text.push_str("# extremal-gamma simulate\n");
    text.push_str(&format!(
        "# config: {}\n",
        serde_json::to_string(&echo).map_err(|e| Error::Numerical(e.to_string()))?
    ));
    text.push_str("replicate,statistic\n");
    for (r, s) in stats.iter().enumerate() {
        text.push_str(&format!("{r},{}\n", fmt_stat(*s)));
    }
    write_output(config.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_verify(config: &RunConfig) -> Result<i32> {
    let model = require(&config.model, "--model")?;
    let family = require(&config.family, "--family")?;
    let n_grid = match (&config.n_grid, config.n) {
        (Some(grid), None) if !grid.is_empty() => grid.clone(),
        (None, Some(n)) => vec![n],
        (Some(_), Some(_)) => {
            return Err(Error::Usage("pass either --n or --n-grid, not both".into()))
        }
        _ => return Err(Error::Usage("--n or --n-grid is required".into())),
    };
    for &n in &n_grid {
        check_n_cli(n)?;
    }
    if model == Model::Dirichlet {
        if config.beta.is_none() {
            return Err(Error::Usage(
                "--beta is required for the dirichlet model".into(),
            ));
        }
        if config.seed.is_none() {
            return Err(Error::Usage(
                "--seed is required for Monte Carlo verification".into(),
            ));
        }
        if config.replicates.is_none() {
            return Err(Error::Usage(
                "--replicates is required for Monte Carlo verification".into(),
            ));
        }
    }
    let defaults = Tolerances::default();
    let spec = SuiteSpec {
        model,
        shape: family,
        beta: config.beta,
        n_grid,
        grid: None,
        replicates: config.replicates,
        seed: config.seed,
        workers: config.workers.unwrap_or_else(default_workers),
        budget: budget_from_env()?,
        tolerances: Tolerances {
            sup_diff: config.sup_tol.unwrap_or(defaults.sup_diff),
            ks: config.ks_tol.unwrap_or(defaults.ks),
            z_max: config.z_tol.unwrap_or(defaults.z_max),
            monotone_slack: config.monotone_slack.unwrap_or(defaults.monotone_slack),
        },
        collect_plot: config.emit_plot_data.is_some(),
        k_max: config.k_max.unwrap_or(3),
    };
    let output = convergence_suite(&spec)?;
    if let Some(dir) = &config.emit_plot_data {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Usage(format!("cannot create {}: {e}", dir.display())))?;
        for series in &output.plots {
            let mut text = String::from("x,ecdf,limit_cdf\n");
            for row in &series.rows {
                text.push_str(&format!(
                    "{},{},{}\n",
                    row[0],
                    fmt_stat(row[1]),
                    fmt_stat(row[2])
                ));
            }
            let path = dir.join(format!("n_{}.csv", series.n));
            std::fs::write(&path, text)
                .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    let mut text = serde_json::to_string_pretty(&output.report)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    text.push('\n');
    write_output(config.out.as_deref(), &text)?;
    for entry in &output.report.metric_per_n {
        if let Some(err) = &entry.error {
            eprintln!("n={}: {err}", entry.n);
        }
    }
    Ok(if output.report.monotone_pass && output.report.final_pass {
        0
    } else {
        1
    })
}
