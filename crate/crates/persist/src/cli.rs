//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure or aborted run, 2 invalid
//! parameters, 3 statistical failure (too little data for a fit, a
//! covariance that cannot be embedded or factored).
//!
//! Default replica counts per subcommand:
//!
//! | subcommand    | replicas  |
//! |---------------|-----------|
//! | `simulate`    | 100       |
//! | `persistence` | 20 000    |
//! | `exponent`    | 20 000    |
//! | `tail`        | 1 000 000 |
//! | `decorrelate` | 100 000   |
//! | `gci`         | 1 000 000 |
//! | `moments`     | 10 000    |
//!
//! Each finishes in a few minutes on a four-core desktop.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hermite_core::decorrelation::{check_decorrelation, gci_sanity, ConvexSet, PartitionSpec};
use hermite_core::hermite::{convexity_rank_audit, BuiltinFunction, DEFAULT_RANK_THRESHOLD};
use hermite_core::persistence::{fit_exponent, persistence_table, estimate_tail};
use hermite_core::process::{moment_scaling_diagnostic, HermitePathConfig, Normalization, PathModel};
use hermite_core::{ReplicaExecutor, DEFAULT_SEED};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::expand_args;
use crate::exec::{Parallel, TaskPanicked};
use crate::formats;
use crate::manifest::RunManifest;
use crate::output::OutputSet;

pub const SEED_ENV: &str = "HERMITE_PERSIST_SEED";

#[derive(Debug, Parser)]
#[command(name = "hermite-persist", version, about = "Persistence experiments for Hermite processes")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate discretized Hermite process paths.
    Simulate(SimulateArgs),
    /// Persistence probabilities over a horizon grid.
    Persistence(PersistenceArgs),
    /// Persistence exponent fit.
    Exponent(PersistenceArgs),
    /// Supremum tail probabilities and stretch exponent.
    Tail(TailArgs),
    /// Block-maximum decorrelation check.
    Decorrelate(DecorrelateArgs),
    /// Hermite expansion and rank of a built-in function.
    Rank(RankArgs),
    /// Gaussian correlation check for symmetric convex sets.
    Gci(GciArgs),
    /// Moment scaling of the running maximum.
    Moments(MomentsArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Simulate(_) => "simulate",
            Self::Persistence(_) => "persistence",
            Self::Exponent(_) => "exponent",
            Self::Tail(_) => "tail",
            Self::Decorrelate(_) => "decorrelate",
            Self::Rank(_) => "rank",
            Self::Gci(_) => "gci",
            Self::Moments(_) => "moments",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Self::Simulate(a) => &a.common,
            Self::Persistence(a) | Self::Exponent(a) => &a.common,
            Self::Tail(a) => &a.common,
            Self::Decorrelate(a) => &a.common,
            Self::Rank(a) => &a.common,
            Self::Gci(a) => &a.common,
            Self::Moments(a) => &a.common,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Seed; falls back to $HERMITE_PERSIST_SEED, then a fixed default.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; outputs do not depend on this.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1024))]
    #[serde(skip)]
    pub workers: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "hermite-out")]
    #[serde(skip)]
    pub out: PathBuf,
    /// Flat `key = value` or JSON config file; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Do not list written files.
    #[arg(long)]
    #[serde(skip)]
    pub quiet: bool,
    /// Panic inside the replica task with this index (testing aid).
    #[arg(long, hide = true)]
    #[serde(skip)]
    pub fail_at_replica: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationArg {
    PaperSigma,
    EmpiricalUnitVariance,
    Raw,
}

impl From<NormalizationArg> for Normalization {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::PaperSigma => Normalization::PaperSigma,
            NormalizationArg::EmpiricalUnitVariance => Normalization::EmpiricalUnitVariance,
            NormalizationArg::Raw => Normalization::Raw,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Model {
    /// Hermite order.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=8))]
    pub m: u32,
    /// Hurst index in (1/2, 1).
    #[arg(long = "H", default_value_t = 0.7, value_parser = parse_hurst)]
    #[serde(rename = "H")]
    pub hurst: f64,
    #[arg(long, value_enum, default_value = "empirical-unit-variance")]
    pub normalization: NormalizationArg,
}

impl Model {
    fn config(&self, points: usize) -> hermite_core::Result<HermitePathConfig> {
        HermitePathConfig::new(self.m, self.hurst, points, self.normalization.into())
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathFormat {
    Csv,
    Binary,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: Model,
    /// Points per path.
    #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u64).range(1..=1 << 24))]
    pub n: u64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub replicas: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: PathFormat,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PersistenceArgs {
    #[command(flatten)]
    pub model: Model,
    /// Horizons: `64..4096` (doubling) or a comma list.
    #[arg(long = "Tgrid", default_value = "64..4096", value_parser = parse_tgrid)]
    pub tgrid: Tgrid,
    /// Barriers, comma separated.
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_floats)]
    pub barrier: FloatList,
    /// Grid points per unit time.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub oversample: u64,
    #[arg(long, default_value_t = 20_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub replicas: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TailArgs {
    #[command(flatten)]
    pub model: Model,
    #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u64).range(1..=1 << 20))]
    pub n: u64,
    /// Levels, comma separated, increasing.
    #[arg(long, default_value = "2,3,4,5", value_parser = parse_floats)]
    pub levels: FloatList,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub replicas: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DecorrelateArgs {
    #[command(flatten)]
    pub model: Model,
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..=1 << 20))]
    pub n: u64,
    /// Block boundaries on the grid `0..=n`, comma separated.
    #[arg(long, default_value = "0,128,256", value_parser = parse_ints)]
    pub times: IntList,
    /// One level per block, comma separated.
    #[arg(long, default_value = "0.5,0.5", allow_hyphen_values = true, value_parser = parse_floats)]
    pub levels: FloatList,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub replicas: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RankArgs {
    #[arg(long, default_value = "abs-centered")]
    pub function: String,
    /// Coefficients for `custom-polynomial`, increasing degree.
    #[arg(long, default_value = "", allow_hyphen_values = true, value_parser = parse_floats)]
    pub coeffs: FloatList,
    #[arg(long, default_value_t = DEFAULT_RANK_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(0..=40))]
    pub max_order: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GciArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=4))]
    pub dim: u64,
    /// Row-major covariance matrix, comma separated.
    #[arg(long, default_value = "1,0.5,0.5,1", allow_hyphen_values = true, value_parser = parse_floats)]
    pub cov: FloatList,
    /// Sets separated by `;`: `box:w1,..,wd` or `ball:r:i,j,..`.
    #[arg(long, default_value = "box:1,inf;box:inf,1")]
    pub set: String,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub replicas: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub model: Model,
    /// Moment order.
    #[arg(long, default_value_t = 2.0, value_parser = parse_positive)]
    pub p: f64,
    /// Path lengths: `64..1024` (doubling) or a comma list.
    #[arg(long, default_value = "64..1024", value_parser = parse_tgrid)]
    pub ngrid: Tgrid,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub replicas: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Tgrid(pub Vec<u64>);

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct FloatList(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct IntList(pub Vec<usize>);

fn parse_hurst(s: &str) -> Result<f64, String> {
    let h: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if h > 0.5 && h < 1.0 {
        Ok(h)
    } else {
        Err("H must lie in (0.5, 1)".into())
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be positive".into())
    }
}

/// `a..b` doubles from `a` up to `b`; otherwise a comma list. Values must be
/// positive and strictly increasing.
pub fn parse_tgrid(s: &str) -> Result<Tgrid, String> {
    let values: Vec<u64> = if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|e| format!("{e}"))?;
        let b: u64 = b.trim().parse().map_err(|e| format!("{e}"))?;
        if a == 0 || b < a {
            return Err("range must satisfy 1 <= start <= end".into());
        }
        std::iter::successors(Some(a), |&t| t.checked_mul(2))
            .take_while(|&t| t <= b)
            .collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() || values[0] == 0 || values.windows(2).any(|w| w[0] >= w[1]) {
        return Err("grid must be positive and strictly increasing".into());
    }
    if *values.last().expect("non-empty") > 1 << 24 {
        return Err("grid value too large".into());
    }
    Ok(Tgrid(values))
}

pub fn parse_floats(s: &str) -> Result<FloatList, String> {
    if s.trim().is_empty() {
        return Ok(FloatList(Vec::new()));
    }
    s.split(',')
        .map(|t| {
            let v: f64 = t.trim().parse().map_err(|e| format!("{t:?}: {e}"))?;
            if v.is_nan() {
                Err("NaN is not allowed".to_string())
            } else {
                Ok(v)
            }
        })
        .collect::<Result<_, _>>()
        .map(FloatList)
}

fn parse_ints(s: &str) -> Result<IntList, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(IntList)
}

pub fn parse_sets(s: &str, dim: usize) -> Result<Vec<ConvexSet>, String> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|part| {
            let mut fields = part.trim().splitn(3, ':');
            match (fields.next(), fields.next(), fields.next()) {
                (Some("box"), Some(w), None) => Ok(ConvexSet::Box {
                    half_widths: parse_floats(w)?.0,
                }),
                (Some("ball"), Some(r), coords) => {
                    let radius = parse_positive(r)?;
                    let coords = match coords {
                        Some(c) => parse_ints(c)?.0,
                        None => (0..dim).collect(),
                    };
                    Ok(ConvexSet::Ball { radius, coords })
                }
                _ => Err(format!("bad set {part:?}; expected box:w1,.. or ball:r[:i,j,..]")),
            }
        })
        .collect()
}

#[derive(Debug, thiserror::Error)]
enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hermite_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Panicked(#[from] TaskPanicked),
}

impl RunError {
    fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Core(e) if e.is_statistical() => 3,
            Self::Core(_) => 2,
            Self::Io(_) | Self::Panicked(_) => 1,
        }
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let args = match expand_args(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, RunError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| RunError::Usage(format!("{SEED_ENV}={v:?} is not a u64"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Wraps an executor so that one replica task panics.
struct FailAt<'a, E> {
    inner: &'a E,
    replica: Option<u64>,
}

impl<E: ReplicaExecutor> ReplicaExecutor for FailAt<'_, E> {
    fn map_with<S, T, I, F>(&self, count: u64, init: I, task: F) -> Vec<T>
    where
        T: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, u64) -> T + Sync + Send,
    {
        let bad = self.replica;
        self.inner.map_with(count, init, |s, i| {
            if Some(i) == bad {
                panic!("injected failure at replica {i}");
            }
            task(s, i)
        })
    }
}

struct Run {
    name: &'static str,
    seed: u64,
    outputs: OutputSet,
    timings: BTreeMap<String, f64>,
    clock: Instant,
}

impl Run {
    fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.timings.entry(phase.to_string()).or_default() += start.elapsed().as_secs_f64();
        out
    }

    fn json(&mut self, value: &impl Serialize) -> Result<(), RunError> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(std::io::Error::other)?;
        bytes.push(b'\n');
        self.outputs.add(format!("{}.json", self.name), bytes);
        Ok(())
    }

    fn csv(&mut self, text: String) {
        self.outputs.add(format!("{}.csv", self.name), text);
    }
}

fn echo(args: &impl Serialize, seed: u64) -> Value {
    let mut v = serde_json::to_value(args).unwrap_or(Value::Null);
    flatten_into(&mut v);
    if let Value::Object(map) = &mut v {
        map.insert("seed".into(), json!(seed));
    }
    v
}

/// Lifts nested `model`/`common` objects to the top level.
fn flatten_into(v: &mut Value) {
    if let Value::Object(map) = v {
        for key in ["model", "common"] {
            if let Some(Value::Object(inner)) = map.remove(key) {
                map.extend(inner);
            }
        }
    }
}

fn execute(command: &Command) -> Result<(), RunError> {
    let common = command.common();
    let seed = resolve_seed(common.seed)?;
    let workers = common
        .workers
        .map(|w| w as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = Parallel::new(workers).map_err(|e| RunError::Usage(e.to_string()))?;
    let exec = FailAt {
        inner: &pool,
        replica: common.fail_at_replica,
    };
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let mut run = Run {
        name: command.name(),
        seed,
        outputs: OutputSet::new(),
        timings: BTreeMap::new(),
        clock: Instant::now(),
    };

    let config = catch_unwind(AssertUnwindSafe(|| dispatch(command, &exec, &mut run)))
        .map_err(TaskPanicked::from_payload)??;

    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        subcommand: run.name.to_string(),
        config,
        started_unix_seconds: started,
        wall_clock_seconds: run.clock.elapsed().as_secs_f64(),
        timings: run.timings,
        outputs: Vec::new(),
    };
    let manifest_name = format!("{}.manifest.json", run.name);
    let written = run.outputs.commit(&common.out, &manifest_name, manifest)?;
    if !common.quiet {
        for path in written {
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn dispatch<E: ReplicaExecutor>(command: &Command, exec: &E, run: &mut Run) -> Result<Value, RunError> {
    let seed = run.seed;
    match command {
        Command::Simulate(a) => {
            let config = a.model.config(a.n as usize)?;
            let model = run.time("process_builder", || PathModel::new(config))?;
            let paths = run.time("simulation", || model.simulate(exec, a.replicas as usize, seed))?;
            let echo = echo(a, seed);
            match a.format {
                PathFormat::Csv => run.csv(formats::paths_csv(&paths)),
                PathFormat::Binary => run.outputs.add(
                    "simulate.hpth",
                    formats::encode_paths(a.model.m, a.model.hurst, a.n, &paths),
                ),
            }
            let scale = paths.first().map(|p| p.scale);
            run.json(&json!({ "scale": scale, "replicas": paths.len(), "config": echo }))?;
            Ok(echo)
        }
        Command::Persistence(a) | Command::Exponent(a) => {
            let config = a.model.config(1)?;
            let table = run.time("persistence", || {
                persistence_table(
                    exec,
                    &config,
                    &a.tgrid.0,
                    &a.barrier.0,
                    a.oversample as usize,
                    a.replicas,
                    seed,
                )
            })?;
            let echo = echo(a, seed);
            let fits = run.time("fit", || {
                (0..table.barriers.len())
                    .map(|b| fit_exponent(&table.for_barrier(b)))
                    .collect::<Vec<_>>()
            });
            run.csv(formats::persistence_csv(&table.estimates));
            let summary = if run.name == "exponent" {
                let fits = fits
                    .into_iter()
                    .zip(&table.barriers)
                    .map(|(f, &b)| f.map(|f| formats::ExponentSummary::new(b, &f)))
                    .collect::<Result<Vec<_>, _>>()?;
                let first = &fits[0];
                json!({
                    "theta": first.theta,
                    "ci_low": first.ci_low,
                    "ci_high": first.ci_high,
                    "grid": first.grid,
                    "fits": fits,
                    "unit_factor": table.unit_factor,
                    "config": echo,
                })
            } else {
                let fits: Vec<Value> = fits
                    .into_iter()
                    .zip(&table.barriers)
                    .map(|(f, &b)| match f {
                        Ok(f) => json!(formats::ExponentSummary::new(b, &f)),
                        Err(e) => json!({ "barrier": b, "error": e.to_string() }),
                    })
                    .collect();
                json!({ "fits": fits, "unit_factor": table.unit_factor, "config": echo })
            };
            run.json(&summary)?;
            Ok(echo)
        }
        Command::Tail(a) => {
            let config = a.model.config(a.n as usize)?;
            let curve = run.time("persistence", || estimate_tail(exec, &config, &a.levels.0, a.replicas, seed))?;
            let echo = echo(a, seed);
            run.csv(formats::tail_csv(&curve));
            run.json(&json!({
                "gamma": curve.fit.gamma,
                "gamma_stderr": curve.fit.gamma_stderr,
                "log_c": curve.fit.log_c,
                "used_levels": curve.fit.used_levels,
                "sparse_levels": curve.sparse_levels,
                "config": echo,
            }))?;
            Ok(echo)
        }
        Command::Decorrelate(a) => {
            let config = a.model.config(a.n as usize)?;
            let partition = PartitionSpec::new(a.times.0.clone(), a.levels.0.clone())?;
            let report = run.time("decorrelation", || check_decorrelation(exec, &config, &partition, a.replicas, seed))?;
            let echo = echo(a, seed);
            run.json(&formats::DecorrelationJson::new(&report, echo.clone()))?;
            Ok(echo)
        }
        Command::Rank(a) => {
            let f = BuiltinFunction::from_name(&a.function, &a.coeffs.0).ok_or_else(|| {
                RunError::Usage(format!(
                    "unknown function {:?}; expected one of {}",
                    a.function,
                    BuiltinFunction::NAMES.join(", ")
                ))
            })?;
            let grid: Vec<f64> = (0..=240).map(|i| -6.0 + 0.05 * i as f64).collect();
            let audit = run.time("hermite_poly", || {
                convexity_rank_audit(|x| f.eval(x), &grid, a.max_order as usize, &f.quadrature(), a.threshold)
            })?;
            let echo = echo(a, seed);
            let mut csv = String::from("j,coefficient,normalized\n");
            for (j, c) in audit.expansion.coeffs.iter().enumerate() {
                csv.push_str(&format!("{j},{c:?},{:?}\n", audit.expansion.normalized(j)));
            }
            run.csv(csv);
            run.json(&json!({
                "function": f.name(),
                "rank": audit.rank.rank,
                "threshold": audit.rank.threshold,
                "coefficients": audit.expansion.coeffs,
                "l2_norm": audit.expansion.l2_norm(),
                "residual": audit.expansion.residual,
                "convex_on_grid": audit.is_convex_on_grid,
                "violation": audit.violation,
                "config": echo,
            }))?;
            Ok(echo)
        }
        Command::Gci(a) => {
            let dim = a.dim as usize;
            let sets = parse_sets(&a.set, dim).map_err(RunError::Usage)?;
            if a.cov.0.len() != dim * dim {
                return Err(RunError::Usage(format!("--cov needs {} entries", dim * dim)));
            }
            let report = run.time("decorrelation", || gci_sanity(exec, dim, &a.cov.0, &sets, a.replicas, seed))?;
            let echo = echo(a, seed);
            run.json(&formats::DecorrelationJson::new(&report, echo.clone()))?;
            Ok(echo)
        }
        Command::Moments(a) => {
            let config = a.model.config(1)?;
            let grid: Vec<usize> = a.ngrid.0.iter().map(|&n| n as usize).collect();
            let rows = run.time("process_builder", || {
                moment_scaling_diagnostic(exec, &config, a.p, &grid, a.replicas, seed)
            })?;
            let echo = echo(a, seed);
            run.csv(formats::moments_csv(&rows));
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|r| json!({ "n": r.n, "estimate": r.estimate, "stderr": r.stderr, "ratio": r.ratio }))
                .collect();
            run.json(&json!({ "rows": rows_json, "config": echo }))?;
            Ok(echo)
        }
    }
}
