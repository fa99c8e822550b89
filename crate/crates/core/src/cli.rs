//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coherent2::{self, Coherent2Params, Metric2};
use crate::coherent3::{self, Coherent3Params, Metric3};
use crate::error::{Error, Result};
use crate::incoherent::IncoherentAttack;
use crate::postproc;
use crate::sim::{self, Pairing, SimConfig, Strategy};
use crate::verify::{self, Suite};

pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sixstate",
    version,
    about = "Eavesdropping analysis for the six-state QKD protocol"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a metric against the disturbance.
    Scan(ScanArgs),
    /// Run invariant checks and print a JSON report.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo run of the protocol under one attack.
    Simulate(SimArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanStrategy {
    Incoherent,
    Coh2,
    Coh3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMetric {
    Pg,
    PgUndist,
    Shannon,
    Renyi,
    Xor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub strategy: ScanStrategy,
    #[arg(long, value_enum)]
    pub metric: ScanMetric,
    #[arg(long, default_value_t = 0.0)]
    pub d_min: f64,
    #[arg(long, default_value_t = 0.5)]
    pub d_max: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Fix α instead of optimizing over it (coh2 only).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Grid resolution for the coh3 optimizer.
    #[arg(long, default_value_t = coherent3::DEFAULT_GRID)]
    pub grid: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimStrategy {
    #[value(alias = "incoh")]
    Incoherent,
    #[value(alias = "coh2")]
    Coherent2,
    #[value(alias = "coh3")]
    Coherent3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SimPairing {
    None,
    WithinProbeXor,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[arg(long, value_enum)]
    pub strategy: SimStrategy,
    /// Probe angle of the incoherent attack.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Disturbance; with no α (and β) given the factorized attack is used.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "none")]
    pub pairing: SimPairing,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// One row of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub d: f64,
    pub value: f64,
    pub alpha_star: Option<f64>,
    pub beta_star: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanOutput {
    pub strategy: ScanStrategy,
    pub metric: ScanMetric,
    pub rows: Vec<ScanRow>,
    /// Disturbances left out because no valid attack exists there.
    pub skipped: Vec<f64>,
}

/// Rounds to 12 significant digits and prints without exponent.
pub fn fmt12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { format!("{v}") };
    }
    let exp = v.abs().log10().floor() as i32;
    let prec = (11 - exp).max(0) as usize;
    let s = format!("{v:.prec$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn round12(v: f64) -> f64 {
    fmt12(v).parse().unwrap_or(v)
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}

fn scan_point(args: &ScanArgs, d: f64) -> Result<ScanRow> {
    let row = |value, alpha_star, beta_star| ScanRow {
        d,
        value,
        alpha_star,
        beta_star,
    };
    match args.strategy {
        ScanStrategy::Incoherent => {
            let m = IncoherentAttack::from_disturbance(d)?.metrics();
            let value = match args.metric {
                ScanMetric::Pg => m.pg,
                ScanMetric::PgUndist => m.ps,
                ScanMetric::Shannon => m.shannon,
                ScanMetric::Renyi => m.renyi,
                ScanMetric::Xor => postproc::p_xor1(d)?,
            };
            Ok(row(value, None, None))
        }
        ScanStrategy::Coh2 => {
            let metric = match args.metric {
                ScanMetric::Pg => Metric2::Pcg,
                ScanMetric::PgUndist => Metric2::PcgUndist,
                ScanMetric::Shannon => Metric2::Shannon,
                ScanMetric::Renyi => Metric2::Renyi,
                ScanMetric::Xor => {
                    return match args.alpha {
                        Some(alpha) => Ok(row(postproc::p_xor2(alpha, d)?, Some(alpha), None)),
                        None => {
                            let o = postproc::p_xor2_max(d)?;
                            Ok(row(o.value, Some(o.alpha), None))
                        }
                    };
                }
            };
            match args.alpha {
                Some(alpha) => Ok(row(
                    Coherent2Params::from_disturbance(d, alpha)?.metric(metric),
                    Some(alpha),
                    None,
                )),
                None => {
                    let o = coherent2::optimize_unchecked(d, metric, coherent2::DEFAULT_GRID)?;
                    Ok(row(o.value, Some(o.alpha), None))
                }
            }
        }
        ScanStrategy::Coh3 => {
            let metric = match args.metric {
                ScanMetric::Pg => Metric3::Pcg,
                ScanMetric::PgUndist => Metric3::Undist,
                ScanMetric::Xor => Metric3::Xor,
                other => return Err(usage(format!("metric {other:?} is not available for coh3"))),
            };
            let o = coherent3::optimize_unchecked(d, metric, args.grid)?;
            Ok(row(o.value, Some(o.alpha), Some(o.beta)))
        }
    }
}

fn validate_scan(args: &ScanArgs) -> Result<()> {
    if !(args.d_min >= 0.0 && args.d_min < args.d_max && args.d_max <= 0.5) {
        return Err(usage("need 0 <= d-min < d-max <= 0.5"));
    }
    if args.steps < 2 {
        return Err(usage("need steps >= 2"));
    }
    if args.alpha.is_some() && args.strategy != ScanStrategy::Coh2 {
        return Err(usage("--alpha is only supported with --strategy coh2"));
    }
    if args.strategy == ScanStrategy::Coh3 && matches!(args.metric, ScanMetric::Shannon | ScanMetric::Renyi) {
        return Err(usage("shannon and renyi are not available for coh3"));
    }
    if args.grid < 2 {
        return Err(usage("need grid >= 2"));
    }
    Ok(())
}

/// Evaluates a scan. Infeasible disturbances are listed in `skipped`.
pub fn scan(args: &ScanArgs) -> Result<ScanOutput> {
    use rayon::prelude::*;
    validate_scan(args)?;
    let ds = crate::optimize::linspace(args.d_min, args.d_max, args.steps);
    let results: Vec<(f64, Result<ScanRow>)> = ds.par_iter().map(|&d| (d, scan_point(args, d))).collect();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (d, r) in results {
        match r {
            Ok(row) => rows.push(row),
            Err(Error::Validity(_) | Error::Infeasible(_) | Error::Domain { .. }) => skipped.push(d),
            Err(e) => return Err(e),
        }
    }
    Ok(ScanOutput {
        strategy: args.strategy,
        metric: args.metric,
        rows,
        skipped,
    })
}

pub fn scan_csv(out: &ScanOutput) -> String {
    let with_beta = out.strategy == ScanStrategy::Coh3;
    let mut s = String::from(if with_beta {
        "d,value,alpha_star,beta_star\n"
    } else {
        "d,value,alpha_star\n"
    });
    let opt = |v: Option<f64>| v.map(fmt12).unwrap_or_default();
    for r in &out.rows {
        s.push_str(&fmt12(r.d));
        s.push(',');
        s.push_str(&fmt12(r.value));
        s.push(',');
        s.push_str(&opt(r.alpha_star));
        if with_beta {
            s.push(',');
            s.push_str(&opt(r.beta_star));
        }
        s.push('\n');
    }
    s
}

pub fn scan_json(out: &ScanOutput) -> String {
    let rounded = ScanOutput {
        rows: out
            .rows
            .iter()
            .map(|r| ScanRow {
                d: round12(r.d),
                value: round12(r.value),
                alpha_star: r.alpha_star.map(round12),
                beta_star: r.beta_star.map(round12),
            })
            .collect(),
        skipped: out.skipped.iter().map(|&d| round12(d)).collect(),
        ..out.clone()
    };
    let mut s = serde_json::to_string_pretty(&rounded).expect("scan output serializes");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
pub struct SimulateOutput {
    pub config: SimConfig,
    pub stats: sim::SimStats,
    pub expected: sim::Expected,
}

pub fn sim_config(args: &SimArgs) -> Result<SimConfig> {
    let need_d = || args.d.ok_or_else(|| usage("--d is required"));
    let strategy = match args.strategy {
        SimStrategy::Incoherent => {
            let att = match (args.a, args.d) {
                (Some(a), None) => IncoherentAttack::new(a)?,
                (None, Some(d)) => IncoherentAttack::from_disturbance(d)?,
                _ => return Err(usage("incoherent needs exactly one of --a and --d")),
            };
            Strategy::incoherent(&att)
        }
        SimStrategy::Coherent2 => {
            let d = need_d()?;
            let p = match args.alpha {
                Some(alpha) => Coherent2Params::from_disturbance(d, alpha)?,
                None => Coherent2Params::factorized(d),
            };
            p.validate()?;
            Strategy::coherent2(&p)
        }
        SimStrategy::Coherent3 => {
            let d = need_d()?;
            let p = match (args.alpha, args.beta) {
                (Some(alpha), Some(beta)) => Coherent3Params::from_disturbance(d, alpha, beta)?,
                (None, None) => Coherent3Params::factorized(d),
                _ => return Err(usage("coherent3 needs both --alpha and --beta, or neither")),
            };
            p.validate()?;
            Strategy::coherent3(&p)
        }
    };
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    Ok(SimConfig {
        strategy,
        trials: args.trials,
        seed: args.seed,
        pairing: match args.pairing {
            SimPairing::None => Pairing::None,
            SimPairing::WithinProbeXor => Pairing::WithinProbeXor,
        },
    })
}

pub fn simulate(args: &SimArgs) -> Result<SimulateOutput> {
    let config = sim_config(args)?;
    Ok(SimulateOutput {
        config,
        stats: sim::run_protocol(&config)?,
        expected: sim::expected(&config.strategy)?,
    })
}

fn emit(path: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var("SIXSTATE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("SIXSTATE_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Runs the command line and returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    match cli.command {
        Command::Scan(args) => {
            let out = match scan(&args) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            for d in &out.skipped {
                eprintln!("note: skipping D = {} (no valid attack)", fmt12(*d));
            }
            let text = match args.format {
                Format::Csv => scan_csv(&out),
                Format::Json => scan_json(&out),
            };
            if let Err(e) = emit(args.output.as_ref(), &text) {
                eprintln!("error: {e}");
                return EXIT_IO;
            }
            0
        }
        Command::Verify { suite, output } => {
            let report = match verify::run(suite) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_FAILED;
                }
            };
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            if let Err(e) = emit(output.as_ref(), &text) {
                eprintln!("error: {e}");
                return EXIT_IO;
            }
            if report.pass {
                0
            } else {
                EXIT_FAILED
            }
        }
        Command::Simulate(args) => {
            let out = match simulate(&args) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let mut text = serde_json::to_string_pretty(&out).expect("simulation output serializes");
            text.push('\n');
            if let Err(e) = emit(args.output.as_ref(), &text) {
                eprintln!("error: {e}");
                return EXIT_IO;
            }
            0
        }
    }
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}
