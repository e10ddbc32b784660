//! Command-line front end: argument parsing, dispatch, file output.
//!
//! The binary in `src/main.rs` is a single call into [`run`]; everything
//! else lives here so integration tests can drive the argv → exit-code →
//! file-bytes surface in-process as well as through the spawned binary.
//!
//! Seven subcommands map onto the library layers:
//!
//! | subcommand  | work                                                    |
//! |-------------|---------------------------------------------------------|
//! | `exact`     | finite-`n` joint law by binomial convolution            |
//! | `limit`     | limit-law table (joint pmf box or per-axis cdf grid)    |
//! | `sample`    | Monte Carlo estimate of the conditional law             |
//! | `compare`   | one distance row: finite law vs. its limit              |
//! | `sweep`     | distance rows over a ladder of lengths                  |
//! | `oracle`    | brute-force enumeration (small `n`, audit tool)         |
//! | `reproduce` | headline convergence checks with pass/fail verdicts     |
//!
//! Exit codes: `0` success (including a `reproduce` whose checks all
//! pass), `1` a `reproduce` run with at least one failed check, `2` a
//! configuration or usage error (one-line diagnostic on stderr), `3` a
//! capacity refusal (the request is well-formed but too large for the
//! selected engine).
//!
//! Every flag may instead come from a `key=value` file named with
//! `--config`; explicit flags win over file entries, file entries win over
//! built-in defaults.
//!
//! Output discipline: one primary file per run — CSV with a fixed header
//! row (written even when there are no data rows), or a single JSON
//! document under `--format json`. In CSV mode a `<out>.json` sidecar
//! carries provenance: the fully resolved configuration, engine version,
//! numeric backend, and truncation bounds. Nothing time- or
//! machine-dependent is recorded, so re-running the same invocation
//! reproduces every output byte for byte.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num::BigRational;
use serde_json::{json, Map, Value};

use crate::limits::{limit_joint, limit_rescale};
use crate::numeric::Scalar;
use crate::oracle::{enumerate_in_region, Region};
use crate::sampler::{acceptance_forecast, sample_with_lanes, Method};
use crate::shuffle::{joint_law, BinomialWindow, Mode};
use crate::stats::{self, tv_map_vs_limit, ConvergenceRow, Metric};
use crate::thresholds;
use crate::walk::{Axis, Conditioning, DriftClass, Parity, StepDistribution};
use crate::{Error, Result};

/// Environment variable read by `sample --lanes`' default: the number of
/// worker lanes (`0` or unset = one per available CPU).
pub const THREADS_ENV: &str = "QUADRANT_RETURNS_THREADS";

/// Below this forecast acceptance probability, rejection sampling is
/// refused without `--force`: virtually every trial would be discarded.
const FORECAST_REFUSAL: f64 = 1e-8;

/// Parse `argv` and execute one subcommand, returning the process exit
/// code. Never panics on bad input and never calls `process::exit` itself.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            // clap routes help/version to stdout and diagnostics to stderr.
            let _ = err.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::CapacityExceeded { .. } | Error::CapTooLarge { .. } => 3,
                _ => 2,
            }
        }
    }
}

#[derive(Parser)]
#[command(
    name = "quadrant-returns",
    version,
    about = "Exact and limiting laws of returns to the axes for quarter-plane walks",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact finite-n joint law of the two return counts.
    Exact(ExactArgs),
    /// Limit-law tables: joint pmf box or per-axis cdf grid.
    Limit(LimitArgs),
    /// Monte Carlo estimate of the conditional joint law.
    Sample(SampleArgs),
    /// One distance row: the finite-n law against its limit.
    Compare(CompareArgs),
    /// Distance rows over an ascending ladder of lengths.
    Sweep(SweepArgs),
    /// Brute-force enumeration over all paths (audit tool, n ≤ 14).
    Oracle(OracleArgs),
    /// Re-run a headline convergence claim and report pass/fail.
    Reproduce(ReproduceArgs),
}

/// Flags shared by every law-producing subcommand.
#[derive(Args, Clone)]
struct CommonArgs {
    /// Step distribution "p1,q1,p2,q2" (decimals or fractions like 1/4).
    #[arg(long)]
    walk: Option<String>,
    /// Conditioning: none | bridge | meander | nnb.
    #[arg(long)]
    cond: Option<String>,
    /// Output file (default: <subcommand>.csv or .json per --format).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv (with .json provenance sidecar) | json.
    #[arg(long)]
    format: Option<String>,
    /// key=value file supplying defaults for omitted flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Walk length.
    #[arg(long)]
    n: Option<usize>,
    /// Numeric backend: rational (exact arithmetic) | float.
    #[arg(long)]
    backend: Option<String>,
    /// Convolution mode: exact | windowed.
    #[arg(long)]
    mode: Option<String>,
    /// Binomial window "lo,hi" as fractions of n (windowed mode only).
    #[arg(long)]
    window: Option<String>,
    /// Normalize by the event probability (conditional law).
    #[arg(long)]
    conditional: bool,
}

#[derive(Args)]
struct LimitArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Length parity the limit is taken along: even | odd.
    #[arg(long)]
    parity: Option<String>,
    /// Tabulate one axis's marginal cdf instead of the joint pmf (1 | 2).
    #[arg(long)]
    axis: Option<usize>,
    /// Largest return count tabulated for discrete laws.
    #[arg(long)]
    rmax: Option<usize>,
    /// Grid upper end for continuous cdfs.
    #[arg(long)]
    xmax: Option<f64>,
    /// Grid step for continuous cdfs.
    #[arg(long)]
    dx: Option<f64>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Walk length.
    #[arg(long)]
    n: Option<usize>,
    /// RNG seed (required: runs must be reproducible by construction).
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Monte Carlo trials.
    #[arg(long)]
    trials: Option<u64>,
    /// Sampling method: rejection | tilted.
    #[arg(long)]
    method: Option<String>,
    /// Worker lanes (0 = one per CPU; default from QUADRANT_RETURNS_THREADS).
    #[arg(long)]
    lanes: Option<usize>,
    /// Run rejection sampling even when the forecast acceptance rate is
    /// below the refusal floor.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Walk length.
    #[arg(long)]
    n: Option<usize>,
    /// Finite-law source: exact | sample.
    #[arg(long)]
    source: Option<String>,
    /// RNG seed (required when --source sample).
    #[arg(long)]
    seed: Option<u64>,
    /// Trials when --source sample.
    #[arg(long)]
    trials: Option<u64>,
    /// Method when --source sample: rejection | tilted.
    #[arg(long)]
    method: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated walk lengths, ascending (e.g. "100,400,1600").
    #[arg(long)]
    ns: Option<String>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Walk length (capped at 14).
    #[arg(long)]
    n: Option<usize>,
    /// Exit region: quadrant | halfplane.
    #[arg(long)]
    region: Option<String>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Which headline claim to check: 1.1 | 1.2 | 1.3 | 1.4.
    claim: String,
    /// Problem size: default | small (small divides lengths by ~4 and
    /// relaxes thresholds by the same factor; a quick smoke run).
    #[arg(long)]
    scale: Option<String>,
    /// Restrict the check to one step distribution instead of the built-in
    /// walk list.
    #[arg(long)]
    walk: Option<String>,
    /// Report file (default: reproduce-<claim>-<scale>.txt).
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value file supplying defaults for omitted flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Exact(args) => cmd_exact(args),
        Command::Limit(args) => cmd_limit(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Reproduce(args) => cmd_reproduce(args),
    }
}

// ---------------------------------------------------------------------------
// Configuration plumbing: flag > config file > default.

/// Key–value pairs from a `--config` file: one `key=value` per line, `#`
/// comments and blank lines ignored.
#[derive(Default)]
struct ConfigMap(BTreeMap<String, String>);

impl ConfigMap {
    fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)?;
        let mut map = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Invalid {
                    what: "config file",
                    detail: format!("line {}: expected key=value, got {line:?}", idx + 1),
                });
            };
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigMap(map))
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }
}

/// A string-valued option: the flag if given, else the config entry.
fn merged(flag: Option<String>, file: &ConfigMap, key: &str) -> Option<String> {
    flag.or_else(|| file.get(key).map(str::to_string))
}

/// A typed option: the flag if given, else the config entry parsed as `T`.
fn merged_parse<T>(flag: Option<T>, file: &ConfigMap, key: &'static str) -> Result<Option<T>>
where
    T: FromStr,
    T::Err: fmt::Display,
{
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        None => Ok(None),
        Some(raw) => raw.parse::<T>().map(Some).map_err(|err| Error::Invalid {
            what: "config file value",
            detail: format!("{key}={raw}: {err}"),
        }),
    }
}

/// A boolean switch: true if the flag was passed, else the config entry.
fn merged_flag(flag: bool, file: &ConfigMap, key: &'static str) -> Result<bool> {
    if flag {
        return Ok(true);
    }
    match file.get(key) {
        None | Some("false") | Some("0") => Ok(false),
        Some("true") | Some("1") => Ok(true),
        Some(other) => Err(Error::Invalid {
            what: "config file value",
            detail: format!("{key}={other}: expected true or false"),
        }),
    }
}

fn require<T>(value: Option<T>, what: &'static str) -> Result<T> {
    value.ok_or_else(|| Error::Invalid {
        what,
        detail: "missing; pass the flag or set it in the --config file".into(),
    })
}

fn parse_walk(raw: Option<String>) -> Result<StepDistribution> {
    let raw = require(raw, "step distribution (--walk p1,q1,p2,q2)")?;
    StepDistribution::parse(&raw)
}

fn parse_cond(raw: Option<String>) -> Result<Conditioning> {
    match raw {
        None => Ok(Conditioning::Unconditioned),
        Some(raw) => raw.parse(),
    }
}

fn parse_parity(raw: Option<String>) -> Result<Parity> {
    match raw {
        None => Ok(Parity::Even),
        Some(raw) => raw.parse(),
    }
}

fn parse_method(raw: Option<String>) -> Result<Method> {
    match raw {
        None => Ok(Method::Rejection),
        Some(raw) => raw.parse(),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum OutputFormat {
    Csv,
    Json,
}

fn parse_format(raw: Option<String>) -> Result<OutputFormat> {
    match raw.as_deref() {
        None | Some("csv") => Ok(OutputFormat::Csv),
        Some("json") => Ok(OutputFormat::Json),
        Some(other) => Err(Error::Invalid {
            what: "output format",
            detail: format!("expected csv or json, got {other:?}"),
        }),
    }
}

/// Default output path: `<stem>.csv` or `<stem>.json` by format.
fn default_out(stem: &str, format: OutputFormat) -> PathBuf {
    match format {
        OutputFormat::Csv => PathBuf::from(format!("{stem}.csv")),
        OutputFormat::Json => PathBuf::from(format!("{stem}.json")),
    }
}

/// Comma-separated list of lengths; an empty string is an empty list.
fn parse_lengths(raw: &str) -> Result<Vec<usize>> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|part| {
            part.trim().parse::<usize>().map_err(|err| Error::Invalid {
                what: "length list",
                detail: format!("bad entry {part:?}: {err}"),
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Output plumbing: CSV + sidecar, or one JSON document.

/// `<out>.json`, appended to the *full* file name so `law.csv` and
/// `law.csv.json` sit next to each other.
fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

fn csv_error(err: csv::Error) -> Error {
    Error::Invalid {
        what: "csv output",
        detail: err.to_string(),
    }
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|err| Error::Invalid {
        what: "json output",
        detail: err.to_string(),
    })?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Write the primary output file and its provenance.
///
/// CSV: header always, one record per row, then `<out>.json` with the
/// provenance object. JSON: a single document `{provenance, columns,
/// rows}`. Keys serialize in sorted order, so identical runs produce
/// identical bytes.
fn write_output(
    out: &Path,
    format: OutputFormat,
    header: &[&str],
    rows: &[Vec<String>],
    provenance: Map<String, Value>,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_path(out).map_err(csv_error)?;
            writer.write_record(header).map_err(csv_error)?;
            for row in rows {
                writer.write_record(row).map_err(csv_error)?;
            }
            writer.flush()?;
            write_json(&sidecar_path(out), &Value::Object(provenance))
        }
        OutputFormat::Json => {
            let mut doc = Map::new();
            doc.insert("provenance".into(), Value::Object(provenance));
            doc.insert("columns".into(), json!(header));
            doc.insert("rows".into(), json!(rows));
            write_json(out, &Value::Object(doc))
        }
    }
}

/// Provenance skeleton shared by all subcommands.
fn provenance(command: &str, walk: Option<&StepDistribution>) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("command".into(), json!(command));
    map.insert("engine_version".into(), json!(env!("CARGO_PKG_VERSION")));
    if let Some(walk) = walk {
        map.insert("walk".into(), json!(walk.describe()));
    }
    map
}

fn mass_rows<T: Scalar>(cells: impl Iterator<Item = ((usize, usize), T)>) -> Vec<Vec<String>> {
    cells
        .map(|((r1, r2), mass)| vec![r1.to_string(), r2.to_string(), mass.format_mass()])
        .collect()
}

const MASS_HEADER: [&str; 3] = ["r1", "r2", "mass"];
const GRID_HEADER: [&str; 2] = ["x", "cdf"];
const DISTANCE_HEADER: [&str; 5] = ["n", "parity", "metric", "value", "slack"];

// ---------------------------------------------------------------------------
// exact

fn cmd_exact(args: ExactArgs) -> Result<i32> {
    let file = ConfigMap::load(args.common.config.as_deref())?;
    let walk = parse_walk(merged(args.common.walk, &file, "walk"))?;
    let cond = parse_cond(merged(args.common.cond, &file, "cond"))?;
    let n = require(merged_parse(args.n, &file, "n")?, "walk length (--n)")?;
    let backend = merged(args.backend, &file, "backend").unwrap_or_else(|| "rational".into());
    let mode_name = merged(args.mode, &file, "mode");
    let window = merged(args.window, &file, "window");
    let conditional = merged_flag(args.conditional, &file, "conditional")?;
    let format = parse_format(merged(args.common.format, &file, "format"))?;
    let out = merged_parse(args.common.out, &file, "out")?
        .unwrap_or_else(|| default_out("exact", format));

    let (mode, window_echo) = resolve_mode(mode_name.as_deref(), window.as_deref(), &walk)?;

    match backend.as_str() {
        "rational" => emit_exact::<BigRational>(
            n, &walk, cond, mode, window_echo, conditional, "rational", &out, format,
        ),
        "float" => emit_exact::<f64>(
            n, &walk, cond, mode, window_echo, conditional, "float", &out, format,
        ),
        other => Err(Error::Invalid {
            what: "backend",
            detail: format!("expected rational or float, got {other:?}"),
        }),
    }
}

fn resolve_mode(
    mode: Option<&str>,
    window: Option<&str>,
    walk: &StepDistribution,
) -> Result<(Mode, Option<[f64; 2]>)> {
    match mode.unwrap_or("exact") {
        "exact" => {
            if window.is_some() {
                return Err(Error::Invalid {
                    what: "window",
                    detail: "--window requires --mode windowed".into(),
                });
            }
            Ok((Mode::Exact, None))
        }
        "windowed" => {
            let window = match window {
                None => BinomialWindow::default_for(&walk.h1()),
                Some(raw) => {
                    let (lo, hi) = raw.split_once(',').ok_or_else(|| Error::Invalid {
                        what: "window",
                        detail: format!("expected \"lo,hi\", got {raw:?}"),
                    })?;
                    let parse = |part: &str| -> Result<f64> {
                        part.trim().parse().map_err(|err| Error::Invalid {
                            what: "window",
                            detail: format!("bad endpoint {part:?}: {err}"),
                        })
                    };
                    BinomialWindow::new(parse(lo)?, parse(hi)?)?
                }
            };
            let echo = [window.alpha(), window.beta()];
            Ok((Mode::Windowed(window), Some(echo)))
        }
        other => Err(Error::Invalid {
            what: "mode",
            detail: format!("expected exact or windowed, got {other:?}"),
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn emit_exact<T: Scalar>(
    n: usize,
    walk: &StepDistribution,
    cond: Conditioning,
    mode: Mode,
    window_echo: Option<[f64; 2]>,
    conditional: bool,
    backend: &str,
    out: &Path,
    format: OutputFormat,
) -> Result<i32> {
    let law = joint_law::<T>(n, walk, cond, mode)?;
    let rows = if conditional {
        mass_rows(law.conditional()?.into_iter())
    } else {
        mass_rows(law.mass().map(|(&key, value)| (key, value.clone())))
    };

    let mut prov = provenance("exact", Some(walk));
    prov.insert("n".into(), json!(n));
    prov.insert("conditioning".into(), json!(cond.name()));
    prov.insert("backend".into(), json!(backend));
    prov.insert(
        "mode".into(),
        json!(match window_echo {
            None => "exact".to_string(),
            Some([lo, hi]) => format!("windowed {lo},{hi}"),
        }),
    );
    prov.insert("conditional".into(), json!(conditional));
    prov.insert(
        "event_probability".into(),
        json!(law.event_probability().format_mass()),
    );
    prov.insert(
        "truncation_remainder".into(),
        json!(law.truncation_remainder()),
    );
    prov.insert("rows".into(), json!(rows.len()));

    write_output(out, format, &MASS_HEADER, &rows, prov)?;
    println!(
        "exact: n={n} {} {} cells -> {}",
        cond.name(),
        rows.len(),
        out.display()
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// limit

fn cmd_limit(args: LimitArgs) -> Result<i32> {
    let file = ConfigMap::load(args.common.config.as_deref())?;
    let walk = parse_walk(merged(args.common.walk, &file, "walk"))?;
    let cond = parse_cond(merged(args.common.cond, &file, "cond"))?;
    let parity = parse_parity(merged(args.parity, &file, "parity"))?;
    let axis = merged_parse(args.axis, &file, "axis")?;
    let rmax = merged_parse(args.rmax, &file, "rmax")?.unwrap_or(64);
    let xmax = merged_parse(args.xmax, &file, "xmax")?.unwrap_or(4.0);
    let dx = merged_parse(args.dx, &file, "dx")?.unwrap_or(0.01);
    let format = parse_format(merged(args.common.format, &file, "format"))?;
    let out = merged_parse(args.common.out, &file, "out")?
        .unwrap_or_else(|| default_out("limit", format));

    let law = limit_joint(&walk, cond, parity);
    let mut prov = provenance("limit", Some(&walk));
    prov.insert("conditioning".into(), json!(cond.name()));
    prov.insert("parity".into(), json!(parity.to_string()));

    match axis {
        None => {
            if !law.is_discrete() {
                return Err(Error::Invalid {
                    what: "limit table",
                    detail: "this limit has a continuous marginal and no joint pmf; \
                             pass --axis 1 or --axis 2 for a per-axis cdf grid"
                        .into(),
                });
            }
            let mut rows = Vec::new();
            for r1 in 0..=rmax {
                for r2 in 0..=rmax {
                    let mass = law.pmf2(r1, r2)?;
                    if mass > 0.0 {
                        rows.push(vec![r1.to_string(), r2.to_string(), mass.format_mass()]);
                    }
                }
            }
            prov.insert("rmax".into(), json!(rmax));
            prov.insert("tail_beyond".into(), json!(law.tail_beyond(rmax, rmax)?));
            prov.insert("rows".into(), json!(rows.len()));
            write_output(&out, format, &MASS_HEADER, &rows, prov)?;
            println!(
                "limit: {} {} joint pmf up to r={rmax} -> {}",
                cond.name(),
                parity,
                out.display()
            );
        }
        Some(index) => {
            let axis = match index {
                1 => Axis::Horizontal,
                2 => Axis::Vertical,
                other => {
                    return Err(Error::Invalid {
                        what: "axis",
                        detail: format!("expected 1 or 2, got {other}"),
                    })
                }
            };
            let marginal = law.marginal(axis);
            let rows = if marginal.is_discrete() {
                let mut cumulative = 0.0;
                (0..=rmax)
                    .map(|r| {
                        cumulative += marginal.pmf(r)?;
                        Ok(vec![r.to_string(), cumulative.format_mass()])
                    })
                    .collect::<Result<Vec<_>>>()?
            } else {
                if dx <= 0.0 || xmax <= 0.0 {
                    return Err(Error::Invalid {
                        what: "cdf grid",
                        detail: format!("need positive --xmax and --dx, got {xmax} and {dx}"),
                    });
                }
                let steps = (xmax / dx).round() as usize;
                (0..=steps)
                    .map(|i| {
                        let x = i as f64 * dx;
                        Ok(vec![format!("{x:.6}"), marginal.cdf(x)?.format_mass()])
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            prov.insert("axis".into(), json!(index));
            prov.insert(
                "grid".into(),
                json!(if marginal.is_discrete() {
                    format!("integers 0..={rmax}")
                } else {
                    format!("0..{xmax} step {dx}")
                }),
            );
            prov.insert("rows".into(), json!(rows.len()));
            write_output(&out, format, &GRID_HEADER, &rows, prov)?;
            println!(
                "limit: {} {} axis {index} cdf grid -> {}",
                cond.name(),
                parity,
                out.display()
            );
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// sample

fn cmd_sample(args: SampleArgs) -> Result<i32> {
    let file = ConfigMap::load(args.common.config.as_deref())?;
    let walk = parse_walk(merged(args.common.walk, &file, "walk"))?;
    let cond = parse_cond(merged(args.common.cond, &file, "cond"))?;
    let n = require(merged_parse(args.n, &file, "n")?, "walk length (--n)")?;
    let seed = require(
        merged_parse(args.seed, &file, "seed")?,
        "rng seed (--seed; required so runs are reproducible)",
    )?;
    let trials = merged_parse(args.trials, &file, "trials")?.unwrap_or(100_000);
    let method = parse_method(merged(args.method, &file, "method"))?;
    let lanes = resolve_lanes(merged_parse(args.lanes, &file, "lanes")?)?;
    let force = merged_flag(args.force, &file, "force")?;
    let format = parse_format(merged(args.common.format, &file, "format"))?;
    let out = merged_parse(args.common.out, &file, "out")?
        .unwrap_or_else(|| default_out("sample", format));

    let forecast = acceptance_forecast(n, &walk, cond);
    if method == Method::Rejection && forecast < FORECAST_REFUSAL && !force {
        return Err(Error::Invalid {
            what: "rejection sampling",
            detail: format!(
                "forecast acceptance rate {forecast:.3e} is below {FORECAST_REFUSAL:.0e}; \
                 virtually no trial would survive — use --method tilted, the exact engine, \
                 or --force to run anyway"
            ),
        });
    }

    let law = sample_with_lanes(n, &walk, cond, seed, trials, method, lanes)?;
    let rows = if law.budget_exhausted() {
        eprintln!(
            "warning: no trial satisfied the {} event in {trials} trials; \
             the law table is empty",
            cond.name()
        );
        Vec::new()
    } else {
        mass_rows(law.conditional()?.into_iter())
    };

    let mut prov = provenance("sample", Some(&walk));
    prov.insert("n".into(), json!(n));
    prov.insert("conditioning".into(), json!(cond.name()));
    prov.insert("seed".into(), json!(seed));
    prov.insert("trials".into(), json!(trials));
    prov.insert("accepted".into(), json!(law.accepted()));
    prov.insert("acceptance_rate".into(), json!(law.acceptance_rate()));
    prov.insert("event_estimate".into(), json!(law.event_estimate()));
    prov.insert(
        "event_standard_error".into(),
        json!(law.event_standard_error()),
    );
    prov.insert("method".into(), json!(method.to_string()));
    prov.insert("lanes".into(), json!(lanes));
    prov.insert("forecast_acceptance".into(), json!(forecast));
    prov.insert("budget_exhausted".into(), json!(law.budget_exhausted()));
    prov.insert("rows".into(), json!(rows.len()));

    write_output(&out, format, &MASS_HEADER, &rows, prov)?;
    println!(
        "sample: n={n} {} {}/{} accepted ({} cells) -> {}",
        cond.name(),
        law.accepted(),
        trials,
        rows.len(),
        out.display()
    );
    Ok(0)
}

/// Lane count: flag/config wins, else the environment variable, else 0
/// (one lane per CPU).
fn resolve_lanes(explicit: Option<usize>) -> Result<usize> {
    if let Some(lanes) = explicit {
        return Ok(lanes);
    }
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(raw) => raw.parse().map_err(|err| Error::Invalid {
            what: "worker lanes",
            detail: format!("{THREADS_ENV}={raw}: {err}"),
        }),
    }
}

// ---------------------------------------------------------------------------
// compare

fn cmd_compare(args: CompareArgs) -> Result<i32> {
    let file = ConfigMap::load(args.common.config.as_deref())?;
    let walk = parse_walk(merged(args.common.walk, &file, "walk"))?;
    let cond = parse_cond(merged(args.common.cond, &file, "cond"))?;
    let n = require(merged_parse(args.n, &file, "n")?, "walk length (--n)")?;
    let source = merged(args.source, &file, "source").unwrap_or_else(|| "exact".into());
    let format = parse_format(merged(args.common.format, &file, "format"))?;
    let out = merged_parse(args.common.out, &file, "out")?
        .unwrap_or_else(|| default_out("compare", format));

    cond.check_length(n)?;
    let mut prov = provenance("compare", Some(&walk));
    prov.insert("n".into(), json!(n));
    prov.insert("conditioning".into(), json!(cond.name()));
    prov.insert("source".into(), json!(source));

    let row = match source.as_str() {
        "exact" => {
            let mut rows = stats::sweep(&walk, cond, &[n])?;
            rows.pop().expect("check_length passed, so one row exists")
        }
        "sample" => {
            let seed = require(
                merged_parse(args.seed, &file, "seed")?,
                "rng seed (--seed; required for --source sample)",
            )?;
            let trials = merged_parse(args.trials, &file, "trials")?.unwrap_or(100_000);
            let method = parse_method(merged(args.method, &file, "method"))?;
            let limit = limit_joint(&walk, cond, Parity::of(n));
            if !limit.is_discrete() {
                return Err(Error::Invalid {
                    what: "sampled comparison",
                    detail: "this limit is continuous; a finite sample has no usable \
                             2-d cdf statistic here — use --source exact"
                        .into(),
                });
            }
            let lanes = resolve_lanes(None)?;
            let law = sample_with_lanes(n, &walk, cond, seed, trials, method, lanes)?;
            let empirical = law.conditional()?;
            let tv = tv_map_vs_limit(&empirical, &limit)?;
            prov.insert("seed".into(), json!(seed));
            prov.insert("trials".into(), json!(trials));
            prov.insert("accepted".into(), json!(law.accepted()));
            prov.insert("method".into(), json!(method.to_string()));
            let (scale1, scale2) = limit_rescale(&walk, n, cond);
            ConvergenceRow {
                n,
                conditioning: cond,
                parity: Parity::of(n),
                metric: Metric::Tv,
                value: tv.value,
                slack: tv.slack,
                scale1,
                scale2,
            }
        }
        other => {
            return Err(Error::Invalid {
                what: "source",
                detail: format!("expected exact or sample, got {other:?}"),
            })
        }
    };

    prov.insert("metric".into(), json!(row.metric.to_string()));
    prov.insert("value".into(), json!(row.value));
    prov.insert("slack".into(), json!(row.slack));
    prov.insert("rescale".into(), json!([row.scale1, row.scale2]));

    let rows = vec![row.csv_record().to_vec()];
    write_output(&out, format, &DISTANCE_HEADER, &rows, prov)?;
    println!(
        "compare: n={n} {} {} = {:.6e} (+{:.2e} slack) -> {}",
        cond.name(),
        row.metric,
        row.value,
        row.slack,
        out.display()
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// sweep

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    let file = ConfigMap::load(args.common.config.as_deref())?;
    let walk = parse_walk(merged(args.common.walk, &file, "walk"))?;
    let cond = parse_cond(merged(args.common.cond, &file, "cond"))?;
    let ns_raw = require(merged(args.ns, &file, "ns"), "length ladder (--ns)")?;
    let format = parse_format(merged(args.common.format, &file, "format"))?;
    let out = merged_parse(args.common.out, &file, "out")?
        .unwrap_or_else(|| default_out("sweep", format));

    let lengths = parse_lengths(&ns_raw)?;
    if lengths.windows(2).any(|pair| pair[0] > pair[1]) {
        return Err(Error::Invalid {
            what: "length ladder",
            detail: format!("--ns must be sorted ascending, got {ns_raw:?}"),
        });
    }

    let rows = stats::sweep(&walk, cond, &lengths)?;
    let records: Vec<Vec<String>> = rows.iter().map(|row| row.csv_record().to_vec()).collect();

    let mut prov = provenance("sweep", Some(&walk));
    prov.insert("conditioning".into(), json!(cond.name()));
    prov.insert("ns".into(), json!(lengths));
    prov.insert(
        "mode_rule".into(),
        json!(format!(
            "exact convolution up to n={}, default binomial window beyond",
            stats::SWEEP_EXACT_CUTOFF
        )),
    );
    prov.insert("rows".into(), json!(records.len()));

    write_output(&out, format, &DISTANCE_HEADER, &records, prov)?;
    println!(
        "sweep: {} over {} lengths ({} rows) -> {}",
        cond.name(),
        lengths.len(),
        records.len(),
        out.display()
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// oracle

fn cmd_oracle(args: OracleArgs) -> Result<i32> {
    let file = ConfigMap::load(args.common.config.as_deref())?;
    let walk = parse_walk(merged(args.common.walk, &file, "walk"))?;
    let cond = parse_cond(merged(args.common.cond, &file, "cond"))?;
    let n = require(merged_parse(args.n, &file, "n")?, "walk length (--n)")?;
    let region_name = merged(args.region, &file, "region").unwrap_or_else(|| "quadrant".into());
    let format = parse_format(merged(args.common.format, &file, "format"))?;
    let out = merged_parse(args.common.out, &file, "out")?
        .unwrap_or_else(|| default_out("oracle", format));

    let region = match region_name.as_str() {
        "quadrant" => Region::Quadrant,
        "halfplane" | "half-plane" => Region::HalfPlane,
        other => {
            return Err(Error::Invalid {
                what: "region",
                detail: format!("expected quadrant or halfplane, got {other:?}"),
            })
        }
    };

    let law = enumerate_in_region(n, &walk, cond, region)?;
    let rows = mass_rows(law.mass().map(|(&key, value)| (key, value.clone())));

    let mut prov = provenance("oracle", Some(&walk));
    prov.insert("n".into(), json!(n));
    prov.insert("conditioning".into(), json!(cond.name()));
    prov.insert("region".into(), json!(region_name));
    prov.insert("backend".into(), json!("rational"));
    prov.insert(
        "event_probability".into(),
        json!(law.event_probability().format_mass()),
    );
    prov.insert("rows".into(), json!(rows.len()));

    write_output(&out, format, &MASS_HEADER, &rows, prov)?;
    println!(
        "oracle: n={n} {} {} {} cells -> {}",
        region_name,
        cond.name(),
        rows.len(),
        out.display()
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// reproduce

/// Accumulates check lines and the overall verdict for one `reproduce` run.
struct Report {
    lines: Vec<String>,
    passed: usize,
    failed: usize,
}

impl Report {
    fn new(claim: &str, scale: &str) -> Self {
        Report {
            lines: vec![
                format!("# quadrant-returns reproduce {claim}"),
                format!(
                    "# engine {} scale {scale}",
                    env!("CARGO_PKG_VERSION")
                ),
            ],
            passed: 0,
            failed: 0,
        }
    }

    /// A "measured must stay below bound" check.
    fn check_below(&mut self, label: &str, measured: f64, bound: f64) {
        let pass = measured <= bound;
        self.record(label, measured, "<=", bound, pass);
    }

    /// A "measured must exceed floor" check (witness-style).
    fn check_above(&mut self, label: &str, measured: f64, floor: f64) {
        let pass = measured > floor;
        self.record(label, measured, ">", floor, pass);
    }

    fn record(&mut self, label: &str, measured: f64, relation: &str, bound: f64, pass: bool) {
        if pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.lines.push(format!(
            "check {label}: measured {measured:.6} {relation} {bound:.6} {}",
            if pass { "PASS" } else { "FAIL" }
        ));
    }

    fn finish(mut self, out: &Path) -> Result<i32> {
        let verdict = if self.failed == 0 { "PASS" } else { "FAIL" };
        self.lines.push(format!(
            "RESULT: {verdict} ({}/{} checks)",
            self.passed,
            self.passed + self.failed
        ));
        let mut text = self.lines.join("\n");
        text.push('\n');
        fs::write(out, &text)?;
        print!("{text}");
        Ok(if self.failed == 0 { 0 } else { 1 })
    }
}

/// Lengths and thresholds for one reproduce scale.
struct ReproducePlan {
    scale: &'static str,
    /// Divide the default lengths by this (rounded to the right parity).
    shrink: usize,
    /// Multiply the frozen thresholds by this.
    relax: f64,
}

fn reproduce_plan(scale: Option<String>) -> Result<ReproducePlan> {
    match scale.as_deref() {
        None | Some("default") => Ok(ReproducePlan {
            scale: "default",
            shrink: 1,
            relax: 1.0,
        }),
        Some("small") => Ok(ReproducePlan {
            scale: "small",
            shrink: 4,
            relax: thresholds::SMALL_SCALE_FACTOR,
        }),
        Some(other) => Err(Error::Invalid {
            what: "scale",
            detail: format!("expected default or small, got {other:?}"),
        }),
    }
}

impl ReproducePlan {
    /// Scale a default length down, keeping it even.
    fn length(&self, full: usize) -> usize {
        let scaled = full / self.shrink;
        scaled - scaled % 2
    }
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<i32> {
    let file = ConfigMap::load(args.config.as_deref())?;
    let plan = reproduce_plan(merged(args.scale, &file, "scale"))?;
    let walk_override = match merged(args.walk, &file, "walk") {
        None => None,
        Some(raw) => Some(StepDistribution::parse(&raw)?),
    };
    let claim = args.claim.as_str();
    let out = merged_parse(args.out, &file, "out")?
        .unwrap_or_else(|| PathBuf::from(format!("reproduce-{claim}-{}.txt", plan.scale)));

    let mut report = Report::new(claim, plan.scale);
    match claim {
        "1.1" => reproduce_unconditioned(&plan, walk_override, &mut report)?,
        "1.2" => reproduce_bridge(&plan, walk_override, &mut report)?,
        "1.3" => reproduce_meander(&plan, walk_override, &mut report)?,
        "1.4" => reproduce_excursion(&plan, walk_override, &mut report)?,
        other => {
            return Err(Error::Invalid {
                what: "claim",
                detail: format!("unknown claim {other:?}; expected 1.1, 1.2, 1.3 or 1.4"),
            })
        }
    }
    report.finish(&out)
}

/// The walks a reproduce run covers: the override alone, or the built-ins.
fn reproduce_walks(
    walk_override: Option<StepDistribution>,
    defaults: &[&str],
) -> Result<Vec<StepDistribution>> {
    match walk_override {
        Some(walk) => Ok(vec![walk]),
        None => defaults.iter().map(|raw| StepDistribution::parse(raw)).collect(),
    }
}

/// One sweep row at a single length, as (metric, value + slack).
fn distance_at(walk: &StepDistribution, cond: Conditioning, n: usize) -> Result<ConvergenceRow> {
    let mut rows = stats::sweep(walk, cond, &[n])?;
    rows.pop().ok_or_else(|| Error::Invalid {
        what: "reproduce length",
        detail: format!("n = {n} is incompatible with the {} conditioning", cond.name()),
    })
}

/// Claim: with no conditioning, rescaled return counts approach a
/// half-normal (driftless axis) or the counts approach a geometric
/// (drifted axis).
fn reproduce_unconditioned(
    plan: &ReproducePlan,
    walk_override: Option<StepDistribution>,
    report: &mut Report,
) -> Result<()> {
    for walk in reproduce_walks(walk_override, &["1/4,1/4,1/4,1/4", "0.3,0.1,0.4,0.2"])? {
        let discrete = limit_joint(&walk, Conditioning::Unconditioned, Parity::Even).is_discrete();
        let (n, bound) = if discrete {
            (plan.length(400), thresholds::TV_UNCONDITIONED_GEOMETRIC_N400)
        } else {
            (plan.length(2000), thresholds::KS_HALFNORMAL_N2000)
        };
        let row = distance_at(&walk, Conditioning::Unconditioned, n)?;
        report.check_below(
            &format!("unconditioned {} walk={} n={n}", row.metric, walk.describe()),
            row.value + row.slack,
            bound * plan.relax,
        );
    }
    Ok(())
}

/// Claim: bridge return counts, rescaled, approach independent Rayleighs.
fn reproduce_bridge(
    plan: &ReproducePlan,
    walk_override: Option<StepDistribution>,
    report: &mut Report,
) -> Result<()> {
    let n = plan.length(2000);
    for walk in reproduce_walks(walk_override, &["1/4,1/4,1/4,1/4"])? {
        let row = distance_at(&walk, Conditioning::Bridge, n)?;
        report.check_below(
            &format!("bridge {} walk={} n={n}", row.metric, walk.describe()),
            row.value + row.slack,
            thresholds::KS_RAYLEIGH_N2000 * plan.relax,
        );

        let law = joint_law::<f64>(n, &walk, Conditioning::Bridge, stats::auto_mode(&walk, n))?;
        let conditional = law.conditional()?;
        let product = stats::product_of_marginals(&conditional);
        let gap = stats::tv_maps(&conditional, &product);
        report.check_below(
            &format!("bridge independence TV walk={} n={n}", walk.describe()),
            gap + law.truncation_remainder(),
            thresholds::TV_BRIDGE_INDEPENDENCE_N2000 * plan.relax,
        );
    }
    Ok(())
}

/// Claim: meander return counts approach the drift-catalogued discrete
/// limits, and under two inward axes the joint limit is NOT a product.
fn reproduce_meander(
    plan: &ReproducePlan,
    walk_override: Option<StepDistribution>,
    report: &mut Report,
) -> Result<()> {
    let n = plan.length(600);
    for walk in reproduce_walks(
        walk_override,
        &["0.3,0.1,0.4,0.2", "0.1,0.3,0.4,0.2", "0.1,0.3,0.2,0.4"],
    )? {
        let row = distance_at(&walk, Conditioning::Meander, n)?;
        report.check_below(
            &format!("meander {} walk={} n={n}", row.metric, walk.describe()),
            row.value + row.slack,
            thresholds::TV_MEANDER_N600 * plan.relax,
        );

        let (axis1, axis2) = walk.axes();
        let both_inward = axis1.drift() == DriftClass::Negative
            && axis2.drift() == DriftClass::Negative;
        if both_inward {
            let limit = limit_joint(&walk, Conditioning::Meander, Parity::of(n));
            let witness = stats::limit_product_gap(&limit, 200)?;
            // The floor is a property of the limit object itself, so the
            // scale relaxation does not apply.
            report.check_above(
                &format!("meander dependence witness walk={}", walk.describe()),
                witness.value,
                thresholds::MEANDER_DEPENDENCE_WITNESS,
            );
        }
    }
    Ok(())
}

/// Claim: non-negative-bridge return counts approach negative-binomial-type
/// discrete limits.
fn reproduce_excursion(
    plan: &ReproducePlan,
    walk_override: Option<StepDistribution>,
    report: &mut Report,
) -> Result<()> {
    let n = plan.length(400);
    for walk in reproduce_walks(walk_override, &["1/4,1/4,1/4,1/4", "0.15,0.35,0.2,0.3"])? {
        let row = distance_at(&walk, Conditioning::NonNegativeBridge, n)?;
        report.check_below(
            &format!("nnb {} walk={} n={n}", row.metric, walk.describe()),
            row.value + row.slack,
            thresholds::TV_EXCURSION_N400 * plan.relax,
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
