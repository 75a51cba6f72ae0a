use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde_json::{json, Value};

use orbitcount_core::cocycles::{functional_interior_check, limit_cone_sample, LinearFunctional};
use orbitcount_core::counting::{
    factorization_deficit, fit_exponent, fit_json, norm_series, pair_empirical_measure, phi_series,
    prime_orbit_ratio_curve, primitive_spectral_series, write_pairs_csv, write_series_csv, CountOptions, CountSeries,
    Projection,
};
use orbitcount_core::reps::{builtin_representation, load_representation};
use orbitcount_core::thermo::entropy_report;
use orbitcount_core::verify::{run_all, VerifyOptions};
use orbitcount_core::{Error, Representation};

use crate::config::RunConfig;
use crate::Command;

/// Failure classes, one per nonzero exit code.
#[derive(Debug)]
pub enum Failure {
    Config { kind: &'static str, message: String },
    Compute(Error),
    Verify { failed: Vec<u8> },
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure::Config { kind: "ConfigError", message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config { .. } => 2,
            Failure::Compute(_) => 3,
            Failure::Verify { .. } => 4,
        }
    }

    /// Machine-readable record printed on stderr.
    pub fn record(&self) -> Value {
        let (kind, message) = match self {
            Failure::Config { kind, message } => (*kind, message.clone()),
            Failure::Compute(e) => (e.kind(), e.to_string()),
            Failure::Verify { failed } => ("VerificationFailed", format!("failed checks: {failed:?}")),
        };
        json!({ "error": kind, "message": message, "exit_code": self.exit_code() })
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(Error::Io(e.to_string()))
    }
}

fn is_builtin_name(s: &str) -> bool {
    s == "schottky_reference" || s.starts_with("sym_power:")
}

/// Builtin names are tried first; anything else is read as a file.
pub fn load(source: &str) -> Result<Representation, Failure> {
    let as_config = |e: Error| Failure::Config { kind: e.kind(), message: e.to_string() };
    if is_builtin_name(source) {
        builtin_representation(source).map_err(as_config)
    } else if Path::new(source).is_file() {
        load_representation(Path::new(source)).map_err(as_config)
    } else {
        Err(Failure::Config {
            kind: "UnknownBuiltin",
            message: format!("`{source}` is neither a builtin representation nor a readable file"),
        })
    }
}

fn count_opts(cfg: &RunConfig) -> CountOptions {
    CountOptions { percentile: cfg.percentile, dedup_tol: None, workers: cfg.workers }
}

fn create(cfg: &RunConfig, name: &str) -> Result<BufWriter<File>, Failure> {
    Ok(BufWriter::new(File::create(cfg.out.join(name))?))
}

fn write_json(cfg: &RunConfig, name: &str, v: &Value) -> Result<(), Failure> {
    let mut f = create(cfg, name)?;
    serde_json::to_writer_pretty(&mut f, v).map_err(|e| Failure::Compute(Error::Io(e.to_string())))?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

/// Writes `series.csv` and `fit.json`, returning the fit record.
fn series_reports(cfg: &RunConfig, series: &CountSeries, extra: Option<(&str, Value)>) -> Result<Value, Failure> {
    let mut f = create(cfg, "series.csv")?;
    write_series_csv(series, &mut f)?;
    f.flush()?;
    let fit = fit_exponent(series, cfg.window)?;
    let mut record = fit_json(&fit, series);
    if let Some((key, value)) = extra {
        record[key] = value;
    }
    write_json(cfg, "fit.json", &record)?;
    Ok(record)
}

fn functional(cfg: &RunConfig, dim: usize) -> LinearFunctional {
    match &cfg.phi {
        Some(c) => LinearFunctional::new(c.clone()),
        None => LinearFunctional::first_minus_last(dim),
    }
}

/// Runs `cmd` and returns the summary printed on stdout.
pub fn run(cmd: Command, cfg: &RunConfig) -> Result<String, Failure> {
    fs::create_dir_all(&cfg.out)?;
    if cmd == Command::Verify {
        return verify(cfg);
    }
    let rep = load(&cfg.representation)?;
    let summary = match cmd {
        Command::Count => series_reports(cfg, &norm_series(&rep, cfg.max_len, cfg.norm, &count_opts(cfg))?, None)?,
        Command::Primes => {
            let series = primitive_spectral_series(&rep, cfg.max_len, &count_opts(cfg))?;
            let h = fit_exponent(&series, cfg.window)?.h_hat;
            let curve = prime_orbit_ratio_curve(&series, h, cfg.window)?;
            let curve: Vec<[f64; 2]> = curve.into_iter().map(|(t, r)| [t, r]).collect();
            series_reports(cfg, &series, Some(("ratio_curve", json!(curve))))?
        }
        Command::Phi => {
            let phi = functional(cfg, rep.dim());
            let series = phi_series(&rep, cfg.max_len, &phi, Projection::Cartan, &count_opts(cfg))?;
            series_reports(cfg, &series, Some(("phi", json!(phi.coeffs()))))?
        }
        Command::Equidist => {
            let t = norm_series(&rep, cfg.max_len, cfg.norm, &count_opts(cfg))?.t_max();
            let m = pair_empirical_measure(&rep, cfg.max_len, t, cfg.cylinder_depth, cfg.workers)?;
            let mut f = create(cfg, "pairs.csv")?;
            write_pairs_csv(&m, rep.generators(), &mut f)?;
            f.flush()?;
            json!({ "t": t, "depth": m.depth, "total": m.total, "deficit": factorization_deficit(&m)? })
        }
        Command::Limitcone => {
            let sample = limit_cone_sample(&rep, cfg.max_len)?;
            let mut f = create(cfg, "cone.csv")?;
            let header: Vec<String> = (1..=rep.dim()).map(|i| format!("v{i}")).collect();
            writeln!(f, "word_length,{}", header.join(","))?;
            for (ray, len) in sample.rays.iter().zip(&sample.word_lengths) {
                let coords: Vec<String> = ray.coords().iter().map(f64::to_string).collect();
                writeln!(f, "{len},{}", coords.join(","))?;
            }
            f.flush()?;
            let check = functional_interior_check(&functional(cfg, rep.dim()), &sample, f64::MIN_POSITIVE)?;
            json!({ "rays": sample.len(), "phi_interior": check.passed, "phi_min_value": check.min_value })
        }
        Command::Entropy => {
            let report = entropy_report(&rep, cfg.depth)?;
            let v = serde_json::to_value(&report).map_err(|e| Failure::Compute(Error::Io(e.to_string())))?;
            write_json(cfg, "entropy.json", &v)?;
            v
        }
        Command::Verify => unreachable!(),
    };
    Ok(summary.to_string())
}

fn verify(cfg: &RunConfig) -> Result<String, Failure> {
    let outcomes = run_all(&VerifyOptions { workers: cfg.workers });
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    write_json(cfg, "verify.json", &json!({ "all_passed": failed.is_empty(), "criteria": outcomes }))?;
    let table: Vec<String> = outcomes.iter().map(|o| o.summary_line()).collect();
    println!("{}", table.join("\n"));
    if failed.is_empty() {
        Ok(json!({ "all_passed": true }).to_string())
    } else {
        Err(Failure::Verify { failed })
    }
}
