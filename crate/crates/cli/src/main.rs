//! `orbitcount`: run one pipeline of the orbit-counting library and write its reports.

mod commands;
mod config;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use commands::Failure;
use config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Norm count over the word ball (series.csv, fit.json).
    Count,
    /// Spectral count over primitive classes (series.csv, fit.json).
    Primes,
    /// φ-count over the Cartan projection (series.csv, fit.json).
    Phi,
    /// Cylinder pair counts (pairs.csv).
    Equidist,
    /// Limit-cone rays (cone.csv).
    Limitcone,
    /// Pressure root of the depth-k potential (entropy.json).
    Entropy,
    /// Full check suite (verify.json).
    Verify,
}

#[derive(Debug, Parser)]
#[command(name = "orbitcount", version, about = "Orbit counting for Schottky subgroups of SL(d, R)")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Builtin name (`schottky_reference`, `sym_power:m`) or representation file.
    #[arg(long)]
    representation: Option<String>,
    /// Word-length ceiling.
    #[arg(long = "L")]
    max_len: Option<String>,
    /// euclidean, l1 or linf.
    #[arg(long)]
    norm: Option<String>,
    /// Comma-separated coefficients of φ.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Depth of the locally constant potential.
    #[arg(long)]
    depth: Option<String>,
    /// Cylinder depth for `equidist`.
    #[arg(long)]
    cylinder_depth: Option<String>,
    /// Truncation percentile in (0, 1).
    #[arg(long)]
    percentile: Option<String>,
    /// Fit window as a fraction of t_max.
    #[arg(long)]
    window: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    workers: Option<String>,
}

impl Cli {
    fn overrides(&self) -> [(&'static str, &Option<String>); 10] {
        [
            ("representation", &self.representation),
            ("L", &self.max_len),
            ("norm", &self.norm),
            ("phi", &self.phi),
            ("depth", &self.depth),
            ("cylinder_depth", &self.cylinder_depth),
            ("percentile", &self.percentile),
            ("window", &self.window),
            ("out", &self.out),
            ("workers", &self.workers),
        ]
    }
}

fn resolve(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut values = match &cli.config {
        Some(path) => config::read_config_file(path).map_err(Failure::config)?,
        None => BTreeMap::new(),
    };
    for (key, v) in cli.overrides() {
        if let Some(v) = v {
            values.insert(key.to_string(), v.clone());
        }
    }
    config::build(&values).map_err(Failure::config)
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let cfg = resolve(cli)?;
    if let Some(w) = cfg.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Failure::config(format!("cannot start {w} workers: {e}")))?;
    }
    commands::run(cli.command, &cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let f = Failure::config(e.to_string().trim().to_string());
            eprintln!("{}", f.record());
            return ExitCode::from(f.exit_code() as u8);
        }
    };
    match execute(&cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.record());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
