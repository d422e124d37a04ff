//! Command-line front end: config files, argument parsing and the commands.
//!
//! Every command renders its whole output to a string first, so the binary
//! and the tests share one code path. Failures become a single
//! `error: <kind>: <message>` line and a nonzero exit status.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::channel::{snr_db_to_power, uniform_line_config, ChannelConfig};
use crate::error::{Error, Result};
use crate::optimizer::{optimize_allocation, optimize_ordering, OptimizerOptions, OrderingSearch};
use crate::oracle::node_rates_oracle;
use crate::pipeline::{build_schedule, throughput_factor};
use crate::rates::end_to_end_rate;
use crate::scaling::{asymptotic_rate_experiment, AllocationPolicy};
use crate::scheme::{Ordering, PowerAllocation, SchemeSpec};
use crate::sweep::{
    format_significant, parse_schemes, rate_sweep, rho_csv, rho_curve, snr_grid, sweep_csv,
    SchemeChoice,
};

/// Environment variable holding the worker thread count for `sweep`.
pub const THREADS_ENV: &str = "MYOPIC_RELAY_THREADS";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    channel: Option<ChannelSection>,
    uniform: Option<UniformSection>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PerNode {
    Same(f64),
    Each(Vec<f64>),
}

impl PerNode {
    fn expand(&self, count: usize) -> Vec<f64> {
        match self {
            PerNode::Same(v) => vec![*v; count],
            PerNode::Each(v) => v.clone(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelSection {
    positions: Vec<f64>,
    /// One value for every transmitter, or a list of `T - 1`.
    powers: Option<PerNode>,
    snr_db: Option<f64>,
    /// One value for every receiver, or a list of `T - 1`.
    #[serde(default = "default_noise")]
    noise: PerNode,
    #[serde(default = "one")]
    kappa: f64,
    #[serde(default = "two")]
    eta: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UniformSection {
    nodes: usize,
    #[serde(default = "one")]
    spacing: f64,
    power: Option<f64>,
    snr_db: Option<f64>,
    #[serde(default = "one")]
    noise: f64,
    #[serde(default = "two")]
    eta: f64,
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

fn default_noise() -> PerNode {
    PerNode::Same(1.0)
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn pick_power(power: Option<f64>, snr_db: Option<f64>, noise: f64) -> Result<f64> {
    match (power, snr_db) {
        (Some(_), Some(_)) => Err(Error::Config(
            "give either power or snr_db, not both".into(),
        )),
        (Some(p), None) => Ok(p),
        (None, Some(s)) => Ok(snr_db_to_power(s, noise)),
        (None, None) => Ok(noise),
    }
}

/// Parses a channel description.
///
/// ```toml
/// [uniform]
/// nodes = 5
/// snr_db = 0.0      # or `power`; default P = N
/// spacing = 1.0
/// noise = 1.0
/// eta = 2.0
/// ```
///
/// or an explicit `[channel]` table with `positions`, `powers` (or `snr_db`),
/// `noise`, `kappa` and `eta`. Exactly one of the two tables must appear.
pub fn parse_config(text: &str) -> Result<ChannelConfig> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| {
        let at = e
            .span()
            .map(|s| {
                let (l, c) = line_col(text, s.start);
                format!("line {l}, column {c}: ")
            })
            .unwrap_or_default();
        Error::Config(format!("{at}{}", e.message().trim().replace('\n', " ")))
    })?;
    let config = match (file.channel, file.uniform) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "use either [channel] or [uniform], not both".into(),
            ))
        }
        (None, None) => return Err(Error::Config("missing [channel] or [uniform] table".into())),
        (None, Some(u)) => {
            let power = pick_power(u.power, u.snr_db, u.noise)?;
            uniform_line_config(u.nodes, u.spacing, power, u.noise, u.eta)
        }
        (Some(c), None) => {
            let count = c.positions.len().saturating_sub(1);
            let noise = c.noise.expand(count);
            let powers = match (c.powers, c.snr_db) {
                (Some(_), Some(_)) => {
                    return Err(Error::Config(
                        "give either powers or snr_db, not both".into(),
                    ))
                }
                (Some(p), None) => p.expand(count),
                (None, snr) => {
                    let reference = noise.first().copied().unwrap_or(1.0);
                    vec![snr_db_to_power(snr.unwrap_or(0.0), reference); count]
                }
            };
            ChannelConfig::new(c.positions, powers, noise, c.kappa, c.eta)
        }
    };
    config.map_err(|e| match e {
        Error::Config(m) => Error::Config(m),
        other => Error::Config(other.to_string()),
    })
}

pub fn load_config(path: &Path) -> Result<ChannelConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// `T=5` or `5`.
fn parse_node_count(s: &str) -> Result<usize> {
    let v = s.trim().strip_prefix("T=").unwrap_or(s.trim());
    v.parse::<usize>()
        .map_err(|_| Error::invalid(format!("expected T=<nodes>, got '{s}'")))
}

#[derive(Debug, Parser)]
#[command(
    name = "myopic-relay",
    version,
    about = "Achievable rates of Gaussian multiple relay channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize one scheme on one channel and print the rate report.
    Rate(RateArgs),
    /// Optimized rate against transmit SNR for several schemes, as CSV.
    Sweep(SweepArgs),
    /// Block-by-block encoding and decoding trace, e.g. `schedule T=5 k=2 B=3`.
    Schedule(ScheduleArgs),
    /// Two-hop rate on growing uniform lines, as CSV.
    Scaling(ScalingArgs),
    /// Closed-form rates against the log-det oracle on random channels.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    /// Uniform line with this many nodes, e.g. `T=5`.
    #[arg(long, value_name = "T=N", conflicts_with = "config")]
    pub uniform: Option<String>,
    /// Channel description file.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Spacing of the uniform line.
    #[arg(long, default_value_t = 1.0)]
    pub spacing: f64,
    /// Path-loss exponent of the uniform line.
    #[arg(long, default_value_t = 2.0)]
    pub eta: f64,
    /// Receiver noise variance of the uniform line.
    #[arg(long, default_value_t = 1.0)]
    pub noise: f64,
}

impl ChannelArgs {
    fn template(&self) -> Result<ChannelConfig> {
        match (&self.uniform, &self.config) {
            (Some(u), _) => uniform_line_config(
                parse_node_count(u)?,
                self.spacing,
                self.noise,
                self.noise,
                self.eta,
            ),
            (None, Some(path)) => load_config(path),
            (None, None) => Err(Error::invalid(
                "give --uniform T=<nodes> or --config <file>",
            )),
        }
    }
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    /// Seed for the random starting points.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random starting points per optimization.
    #[arg(long, default_value_t = 3)]
    pub starts: usize,
}

impl OptimizerArgs {
    fn options(&self) -> OptimizerOptions {
        OptimizerOptions {
            seed: self.seed,
            random_starts: self.starts,
            ..OptimizerOptions::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Transmit SNR in dB applied to every node; overrides file powers.
    #[arg(long, allow_negative_numbers = true)]
    pub snr_db: Option<f64>,
    /// `k=<hops>` or `omniscient`.
    #[arg(long, default_value = "k=2")]
    pub scheme: String,
    /// Relay ordering such as `1-3-2-4`, or `search` to try every ordering.
    #[arg(long)]
    pub ordering: Option<String>,
    /// Also print a CSV header and row.
    #[arg(long)]
    pub csv: bool,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    pub snr_from: f64,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub snr_to: f64,
    #[arg(long, default_value_t = 1.0)]
    pub snr_step: f64,
    /// Comma-separated list of `1`, `2`, ..., `omniscient`.
    #[arg(long, default_value = "1,2,omniscient")]
    pub schemes: String,
    /// Emit myopic-to-omniscient ratios instead of one row per scheme.
    #[arg(long)]
    pub rho: bool,
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// `T=<nodes> k=<hops> B=<messages>`.
    #[arg(value_name = "KEY=VALUE", required = true)]
    pub params: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long, default_value_t = 2.0)]
    pub eta: f64,
    /// Comma-separated node counts.
    #[arg(long = "T", value_delimiter = ',', required = true)]
    pub nodes: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub power: f64,
    #[arg(long, default_value_t = 1.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 2)]
    pub hops: usize,
    /// Optimize the power splits instead of using half on the fresh stream.
    #[arg(long)]
    pub optimize: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest accepted gap in bits.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

/// Rendered output of a command and whether it succeeded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub success: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            success: true,
        }
    }
}

pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Rate(a) => cmd_rate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Schedule(a) => cmd_schedule(a),
        Command::Scaling(a) => cmd_scaling(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn scheme_spec(choice: SchemeChoice, node_count: usize) -> Result<SchemeSpec> {
    match choice {
        SchemeChoice::Omniscient => Ok(SchemeSpec::omniscient(node_count)),
        SchemeChoice::Hops(k) => SchemeSpec::myopic(node_count, k),
    }
}

fn parse_ordering(s: &str) -> Result<Ordering> {
    let nodes = s
        .split('-')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad ordering '{s}', expected e.g. 1-3-2-4")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ordering::new(nodes)
}

pub fn cmd_rate(args: &RateArgs) -> Result<Outcome> {
    let mut config = args.channel.template()?;
    if let Some(snr) = args.snr_db {
        config = config.with_uniform_power(snr_db_to_power(snr, config.noises()[0]))?;
    }
    let n = config.node_count();
    let scheme = scheme_spec(args.scheme.parse()?, n)?;
    let opts = args.optimizer.options();
    let result = match args.ordering.as_deref() {
        Some("search") => {
            optimize_ordering(&config, &scheme, &opts, OrderingSearch::Exhaustive)?.result
        }
        Some(o) => optimize_allocation(&config, &scheme.with_ordering(parse_ordering(o)?)?, &opts)?,
        None => optimize_allocation(&config, &scheme, &opts)?,
    };
    let mut out = result.report.to_string();
    if args.csv {
        let _ = writeln!(
            out,
            "scheme,ordering,end_to_end_bits,bottleneck_node,converged_flag"
        );
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            result.report.scheme,
            result.report.scheme.ordering(),
            format_significant(result.rate(), 12),
            result.report.bottleneck,
            u8::from(result.converged)
        );
    }
    Ok(Outcome::ok(out))
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("{THREADS_ENV}='{value}' is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| Error::invalid(format!("cannot start {threads} threads: {e}")))
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Outcome> {
    let template = args.channel.template()?;
    let snrs = snr_grid(args.snr_from, args.snr_to, args.snr_step)?;
    let schemes = parse_schemes(&args.schemes)?;
    let opts = args.optimizer.options();
    let work = || -> Result<String> {
        if args.rho {
            Ok(rho_csv(&rho_curve(&template, &snrs, &opts)?))
        } else {
            Ok(sweep_csv(&rate_sweep(&template, &snrs, &schemes, &opts)?))
        }
    };
    let csv = match thread_pool()? {
        Some(pool) => pool.install(work)?,
        None => work()?,
    };
    match &args.output {
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?;
            Ok(Outcome::ok(format!(
                "wrote {} rows to {}\n",
                csv.lines().count() - 1,
                path.display()
            )))
        }
        None => Ok(Outcome::ok(csv)),
    }
}

pub fn cmd_schedule(args: &ScheduleArgs) -> Result<Outcome> {
    let (mut nodes, mut hops, mut messages) = (None, None, None);
    for p in &args.params {
        let (key, value) = p
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("expected KEY=VALUE, got '{p}'")))?;
        let value: usize = value
            .parse()
            .map_err(|_| Error::invalid(format!("'{p}' needs a non-negative integer")))?;
        match key {
            "T" => nodes = Some(value),
            "k" => hops = Some(value),
            "B" => messages = Some(value),
            _ => {
                return Err(Error::invalid(format!(
                    "unknown key '{key}', expected T, k or B"
                )))
            }
        }
    }
    let need =
        |v: Option<usize>, key: &str| v.ok_or_else(|| Error::invalid(format!("missing {key}=...")));
    let (n, k, b) = (need(nodes, "T")?, need(hops, "k")?, need(messages, "B")?);
    let trace = build_schedule(n, k, b)?;
    trace.check_invariants().map_err(Error::invalid)?;
    let (num, den) = throughput_factor(b as u64, n as u64)?;
    let mut out = trace.to_string();
    let _ = writeln!(out, "throughput {num}/{den}");
    Ok(Outcome::ok(out))
}

pub fn cmd_scaling(args: &ScalingArgs) -> Result<Outcome> {
    let policy = if args.optimize {
        AllocationPolicy::Optimized(OptimizerOptions::default())
    } else {
        AllocationPolicy::FixedHalf
    };
    let points = asymptotic_rate_experiment(
        &args.nodes,
        args.eta,
        args.power,
        args.noise,
        args.hops,
        &policy,
    )?;
    let mut out = String::from("node_count,min_rate_bits,bottleneck_node,floor_bits\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            p.node_count,
            format_significant(p.min_rate, 12),
            p.bottleneck,
            format_significant(p.floor, 12)
        );
    }
    Ok(Outcome::ok(out))
}

/// Result of [`verify_random_instances`].
#[derive(Clone, Debug, PartialEq)]
pub struct VerifySummary {
    pub trials: usize,
    pub passed: usize,
    pub max_deviation: f64,
    /// One line per failing trial.
    pub failures: Vec<String>,
}

/// A random channel, hop depth and allocation: `T` in 2..=8, `k` in
/// 1..=min(3, T-1), gaps in [0.3, 2], powers in [0.1, 10], noise in
/// [0.1, 2], `kappa` in [0.5, 2] and `eta` in [2, 4].
pub fn random_instance(rng: &mut impl Rng) -> Result<(ChannelConfig, PowerAllocation, SchemeSpec)> {
    let n = rng.random_range(2..=8usize);
    let k = rng.random_range(1..=3usize.min(n - 1));
    let mut positions = vec![0.0];
    for _ in 1..n {
        let last = *positions.last().expect("nonempty");
        positions.push(last + rng.random_range(0.3..2.0));
    }
    let powers = (1..n).map(|_| rng.random_range(0.1..10.0)).collect();
    let noise = (1..n).map(|_| rng.random_range(0.1..2.0)).collect();
    let config = ChannelConfig::new(
        positions,
        powers,
        noise,
        rng.random_range(0.5..2.0),
        rng.random_range(2.0..4.0),
    )?;
    let alloc = PowerAllocation::random(n, k, rng)?;
    Ok((config, alloc, SchemeSpec::myopic(n, k)?))
}

/// Compares closed-form and oracle per-node rates on seeded random instances.
pub fn verify_random_instances(trials: usize, seed: u64, tolerance: f64) -> Result<VerifySummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = VerifySummary {
        trials,
        passed: 0,
        max_deviation: 0.0,
        failures: Vec::new(),
    };
    for trial in 0..trials {
        let (config, alloc, scheme) = random_instance(&mut rng)?;
        let closed = end_to_end_rate(&config, &alloc, &scheme)?;
        let oracle = node_rates_oracle(&config, &alloc, &scheme)?;
        let mut worst: f64 = 0.0;
        for ((t, r), o) in closed.per_node.iter().zip(&oracle) {
            let gap = (r - o).abs();
            if gap > tolerance {
                summary.failures.push(format!(
                    "trial {trial}: T={} k={} node {t}: closed form {r:.12} vs oracle {o:.12}",
                    config.node_count(),
                    scheme.hops()
                ));
            }
            worst = worst.max(gap);
        }
        summary.max_deviation = summary.max_deviation.max(worst);
        if worst <= tolerance {
            summary.passed += 1;
        }
    }
    Ok(summary)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    let s = verify_random_instances(args.trials, args.seed, args.tolerance)?;
    let mut out = String::new();
    for f in &s.failures {
        let _ = writeln!(out, "mismatch: {f}");
    }
    let verdict = if s.passed == s.trials { "OK" } else { "FAILED" };
    let _ = writeln!(out, "{}/{} {verdict}", s.passed, s.trials);
    let _ = writeln!(out, "max deviation {:e} bits", s.max_deviation);
    Ok(Outcome {
        stdout: out,
        success: s.passed == s.trials,
    })
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status: 0 on success, 1 on a failed check or runtime error,
/// 2 on a usage error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            let _ = writeln!(stderr, "error: usage: {first}");
            return 2;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            i32::from(!outcome.success)
        }
        Err(e) => {
            let _ = writeln!(
                stderr,
                "error: {}: {}",
                e.kind(),
                e.to_string().replace('\n', " ")
            );
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("myopic-relay").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn uniform_config_file() {
        let c = parse_config("[uniform]\nnodes = 4\nsnr_db = 10.0\n").unwrap();
        assert_eq!(c.node_count(), 4);
        assert!((c.powers()[0] - 10.0).abs() < 1e-12);
        assert_eq!(c.eta(), 2.0);
    }

    #[test]
    fn explicit_config_file() {
        let c = parse_config(
            "[channel]\npositions = [0.0, 0.5, 2.0]\npowers = [1.0, 2.0]\nnoise = 0.5\nkappa = 2.0\neta = 3.0\n",
        )
        .unwrap();
        assert_eq!(c.powers(), &[1.0, 2.0]);
        assert_eq!(c.noises(), &[0.5, 0.5]);
        assert_eq!(c.kappa(), 2.0);
    }

    #[test]
    fn config_errors_name_the_line() {
        let e = parse_config("[uniform]\nnodes = 4\neta = \"two\"\n").unwrap_err();
        assert_eq!(e.kind(), "config");
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = parse_config("[uniform]\nnodes = 4\ncolour = 1\n").unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
        assert!(parse_config("").is_err());
        let e = parse_config("[uniform]\nnodes = 1\n").unwrap_err();
        assert_eq!(e.kind(), "config");
        assert!(parse_config("[channel]\npositions = [0.0, 1.0]\npowers = [1.0, 1.0]\n").is_err());
    }

    #[test]
    fn two_node_rate_is_half_a_bit() {
        let (code, out, _) = run_str(&[
            "rate",
            "--uniform",
            "T=2",
            "--snr-db",
            "0",
            "--scheme",
            "k=1",
            "--csv",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("end-to-end: 0.500000000 bits"), "{out}");
        assert!(out.contains("omniscient,1-2,0.500000000000,2,1"), "{out}");
    }

    #[test]
    fn usage_errors_are_one_line() {
        let (code, _, err) = run_str(&["rate", "--bogus"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
        assert!(err.starts_with("error: usage: "));
        let (code, _, err) = run_str(&["rate", "--uniform", "T=5", "--scheme", "k=9"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error: invalid-argument: "), "{err}");
    }

    #[test]
    fn schedule_command() {
        let (code, out, _) = run_str(&["schedule", "T=5", "k=2", "B=3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| l.starts_with("block ")).count(), 6);
        assert!(out.ends_with("throughput 3/6\n"));
        assert_eq!(run_str(&["schedule", "T=5", "k=2"]).0, 1);
        assert_eq!(run_str(&["schedule", "T=5", "k=2", "Q=3"]).0, 1);
    }

    #[test]
    fn scaling_command() {
        let (code, out, _) = run_str(&["scaling", "--eta", "2", "--T", "5,10,20"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 4);
    }

    #[test]
    fn verify_command() {
        let (code, out, _) = run_str(&["verify", "--trials", "20", "--seed", "7"]);
        assert_eq!(code, 0);
        assert!(out.contains("20/20 OK"));
        let (code, out, _) = run_str(&["verify", "--trials", "5", "--tolerance=-1"]);
        assert_eq!(code, 1, "{out}");
        assert!(out.contains("0/5 FAILED"));
    }
}
