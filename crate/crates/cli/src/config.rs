//! Run configuration: a flat `key = value` file overridden by flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use orbitcount_core::counting::{DEFAULT_PERCENTILE, DEFAULT_WINDOW_FRACTION};
use orbitcount_core::thermo::DEFAULT_DEPTH;
use orbitcount_core::NormKind;

/// Keys accepted in the config file.
pub const KEYS: [&str; 10] =
    ["representation", "L", "norm", "phi", "depth", "cylinder_depth", "percentile", "window", "out", "workers"];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Builtin name or path to a representation file.
    pub representation: String,
    pub max_len: usize,
    pub norm: NormKind,
    /// Coefficients of `φ`; `None` means `v₁ − v_d`.
    pub phi: Option<Vec<f64>>,
    /// Depth of the potential for `entropy`.
    pub depth: usize,
    /// Cylinder depth for `equidist`.
    pub cylinder_depth: usize,
    pub percentile: f64,
    pub window: f64,
    pub out: PathBuf,
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            representation: "schottky_reference".into(),
            max_len: 10,
            norm: NormKind::Euclidean,
            phi: None,
            depth: DEFAULT_DEPTH,
            cylinder_depth: 1,
            percentile: DEFAULT_PERCENTILE,
            window: DEFAULT_WINDOW_FRACTION,
            out: PathBuf::from("."),
            workers: None,
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(format!("line {}: unknown key `{k}`", i + 1));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(format!("line {}: duplicate key `{k}`", i + 1));
        }
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_config_text(&text)
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e| format!("{key}: cannot parse `{v}`: {e}"))
}

/// Builds a validated config from merged key/value pairs.
pub fn build(values: &BTreeMap<String, String>) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    for (k, v) in values {
        match k.as_str() {
            "representation" => cfg.representation = v.clone(),
            "L" => cfg.max_len = parse(k, v)?,
            "norm" => cfg.norm = parse(k, v)?,
            "phi" => {
                let coeffs = v.split(',').map(|c| parse::<f64>(k, c.trim())).collect::<Result<Vec<_>, _>>()?;
                cfg.phi = Some(coeffs);
            }
            "depth" => cfg.depth = parse(k, v)?,
            "cylinder_depth" => cfg.cylinder_depth = parse(k, v)?,
            "percentile" => cfg.percentile = parse(k, v)?,
            "window" => cfg.window = parse(k, v)?,
            "out" => cfg.out = PathBuf::from(v),
            "workers" => cfg.workers = Some(parse(k, v)?),
            _ => return Err(format!("unknown key `{k}`")),
        }
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> Result<(), String> {
    if cfg.max_len < 1 {
        return Err("L must be at least 1".into());
    }
    if !(cfg.percentile > 0.0 && cfg.percentile < 1.0) {
        return Err(format!("percentile must lie in (0, 1), got {}", cfg.percentile));
    }
    if !(cfg.window > 0.0 && cfg.window <= 1.0) {
        return Err(format!("window must lie in (0, 1], got {}", cfg.window));
    }
    if cfg.depth < 1 || cfg.cylinder_depth < 1 {
        return Err("depth and cylinder_depth must be at least 1".into());
    }
    if cfg.workers == Some(0) {
        return Err("workers must be at least 1".into());
    }
    if let Some(phi) = &cfg.phi {
        if phi.is_empty() || phi.iter().any(|c| !c.is_finite()) {
            return Err("phi needs finite coefficients".into());
        }
    }
    Ok(())
}
