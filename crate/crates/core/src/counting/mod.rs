//! Count series `N(t)`, growth-exponent fits, prime-orbit ratio curves and
//! cylinder pair measures.

mod fit;
mod pairs;
mod report;
mod walk;

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cocycles::{functional_interior_check, limit_cone_sample, LinearFunctional};
use crate::error::{Error, Result};
use crate::groups::{enumerate_primitive_classes, evaluate, Letter};
use crate::linalg::{
    cartan_projection_pair, eigenvalue_moduli, jordan_projection_pair, operator_norm_log, NormKind, SquareMatrix,
};
use crate::reps::Representation;

pub use fit::{fit_exponent, prime_orbit_ratio_curve, GrowthFit, FIT_POINTS, RATIO_POINTS};
pub use pairs::{attractor_histogram, factorization_deficit, pair_empirical_measure, PairMeasure};
pub use report::{fit_json, write_pairs_csv, write_series_csv, SERIES_GRID_POINTS};

pub(crate) use walk::{fold_ball, fold_ball_dedup, with_workers};

/// Default truncation percentile.
pub const DEFAULT_PERCENTILE: f64 = 0.6;

/// Default fit window, as a fraction of `t_max`.
pub const DEFAULT_WINDOW_FRACTION: f64 = 0.4;

/// Which statistic a series counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    /// `log ‖ρ(γ)‖` over the ball.
    Norm,
    /// `λ₁(ρ(γ))` over primitive classes.
    SpectralPrimitive,
    /// `φ(a(ρ(γ)))` over the ball.
    PhiCartan,
    /// `φ(λ(ρ(γ)))` over primitive classes.
    PhiJordanPrimitive,
    /// `‖a(ρ(γ))‖₂` over the ball.
    CartanDistance,
}

impl SeriesKind {
    /// Series over conjugacy classes, whose counts grow like `e^{ht}/(ht)`.
    pub fn is_primitive(self) -> bool {
        matches!(self, SeriesKind::SpectralPrimitive | SeriesKind::PhiJordanPrimitive)
    }
}

/// How trustworthy the enumeration behind a series is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationMode {
    /// Freeness certified by ping-pong.
    Certified,
    /// Words enumerated as if the group were free, without a certificate.
    Uncertified,
    /// Elements identified by matrix deduplication.
    Approximate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    /// Word-length ceiling.
    pub max_len: usize,
    /// Largest threshold up to which the series is trusted.
    pub t_max: f64,
    pub percentile: f64,
    pub raw_max: f64,
}

/// Sorted statistic values; `N(t)` is the number of entries `≤ t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountSeries {
    pub kind: SeriesKind,
    pub mode: EnumerationMode,
    pub truncation: Truncation,
    thresholds: Vec<f64>,
}

impl CountSeries {
    /// Builds a series from unsorted values with an explicit `t_max`.
    pub fn from_values(kind: SeriesKind, mut values: Vec<f64>, max_len: usize, t_max: f64) -> Self {
        values.sort_by(f64::total_cmp);
        let raw_max = values.last().copied().unwrap_or(0.0);
        Self {
            kind,
            mode: EnumerationMode::Certified,
            truncation: Truncation { max_len, t_max, percentile: f64::NAN, raw_max },
            thresholds: values,
        }
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    /// `N(t)`.
    pub fn count_le(&self, t: f64) -> usize {
        self.thresholds.partition_point(|&x| x <= t)
    }

    pub fn t_max(&self) -> f64 {
        self.truncation.t_max
    }
}

/// Enumeration knobs shared by the series builders.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountOptions {
    pub percentile: f64,
    /// Identify words whose matrices agree within this tolerance.
    pub dedup_tol: Option<f64>,
    pub workers: Option<usize>,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self { percentile: DEFAULT_PERCENTILE, dedup_tol: None, workers: None }
    }
}

impl CountOptions {
    fn validate(&self) -> Result<()> {
        if !(self.percentile > 0.0 && self.percentile < 1.0) {
            return Err(Error::InvalidArgument(format!("percentile must lie in (0, 1), got {}", self.percentile)));
        }
        Ok(())
    }

    fn mode(&self, rep: &Representation) -> EnumerationMode {
        match (self.dedup_tol, rep.is_certified()) {
            (Some(_), _) => EnumerationMode::Approximate,
            (None, true) => EnumerationMode::Certified,
            (None, false) => EnumerationMode::Uncertified,
        }
    }
}

/// Merges sorted runs.
fn kway_merge(runs: Vec<Vec<f64>>) -> Vec<f64> {
    #[derive(PartialEq)]
    struct Key(f64);
    impl Eq for Key {}
    impl PartialOrd for Key {
        fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Key {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            self.0.total_cmp(&o.0)
        }
    }
    let total = runs.iter().map(Vec::len).sum();
    let mut out = Vec::with_capacity(total);
    let mut heap: BinaryHeap<Reverse<(Key, usize, usize)>> =
        runs.iter().enumerate().filter(|(_, r)| !r.is_empty()).map(|(i, r)| Reverse((Key(r[0]), i, 0))).collect();
    while let Some(Reverse((Key(v), i, j))) = heap.pop() {
        out.push(v);
        if j + 1 < runs[i].len() {
            heap.push(Reverse((Key(runs[i][j + 1]), i, j + 1)));
        }
    }
    out
}

/// The `p`-quantile (nearest rank) of `values`.
fn percentile(values: &mut [f64], p: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let idx = ((p * values.len() as f64).ceil() as usize).clamp(1, values.len()) - 1;
    values[idx]
}

/// Assembles a series from per-worker `(all values, sphere values)` parts.
fn assemble(
    kind: SeriesKind,
    mode: EnumerationMode,
    max_len: usize,
    p: f64,
    parts: Vec<(Vec<f64>, Vec<f64>)>,
) -> CountSeries {
    let (mut runs, spheres): (Vec<Vec<f64>>, Vec<Vec<f64>>) = parts.into_iter().unzip();
    runs.par_iter_mut().for_each(|r| r.sort_by(f64::total_cmp));
    let thresholds = kway_merge(runs);
    let mut sphere: Vec<f64> = spheres.into_iter().flatten().collect();
    let t_max = percentile(&mut sphere, p);
    let raw_max = thresholds.last().copied().unwrap_or(0.0);
    CountSeries { kind, mode, truncation: Truncation { max_len, t_max, percentile: p, raw_max }, thresholds }
}

/// Ball series for a per-element statistic.
fn ball_series<F>(
    rep: &Representation,
    max_len: usize,
    kind: SeriesKind,
    opts: &CountOptions,
    stat: F,
) -> Result<CountSeries>
where
    F: Fn(&SquareMatrix, &SquareMatrix) -> f64 + Sync,
{
    opts.validate()?;
    let visit = |acc: &mut (Vec<f64>, Vec<f64>), w: &[Letter], g: &SquareMatrix, gi: &SquareMatrix| {
        let v = stat(g, gi);
        acc.0.push(v);
        if w.len() == max_len {
            acc.1.push(v);
        }
    };
    let parts = with_workers(opts.workers, || match opts.dedup_tol {
        Some(tol) => fold_ball_dedup(rep, max_len, tol, || (Vec::new(), Vec::new()), visit),
        None => Ok(fold_ball(rep, max_len, || (Vec::new(), Vec::new()), visit)),
    })??;
    Ok(assemble(kind, opts.mode(rep), max_len, opts.percentile, parts))
}

/// Sorted `log ‖ρ(γ)‖` over `|γ| ≤ L`.
pub fn norm_series(rep: &Representation, max_len: usize, norm: NormKind, opts: &CountOptions) -> Result<CountSeries> {
    ball_series(rep, max_len, SeriesKind::Norm, opts, |g, _| operator_norm_log(g, norm))
}

/// Sorted `‖a(ρ(γ))‖₂` over `|γ| ≤ L`.
pub fn cartan_distance_series(rep: &Representation, max_len: usize, opts: &CountOptions) -> Result<CountSeries> {
    ball_series(rep, max_len, SeriesKind::CartanDistance, opts, |g, gi| cartan_projection_pair(g, gi).norm2())
}

/// Primitive-class series for a per-class statistic on `(ρ(w), ρ(w)⁻¹)`.
fn primitive_series<F>(
    rep: &Representation,
    max_len: usize,
    kind: SeriesKind,
    opts: &CountOptions,
    stat: F,
) -> Result<CountSeries>
where
    F: Fn(&SquareMatrix, &SquareMatrix) -> Result<f64> + Sync,
{
    opts.validate()?;
    let classes = enumerate_primitive_classes(rep.generators(), max_len);
    let parts = with_workers(opts.workers, || {
        classes
            .par_chunks(1024)
            .map(|chunk| {
                let mut acc = (Vec::with_capacity(chunk.len()), Vec::new());
                for c in chunk {
                    let w = c.to_word();
                    let v = stat(&evaluate(rep, &w)?, &evaluate(rep, &w.inverse())?)?;
                    acc.0.push(v);
                    if c.len() == max_len {
                        acc.1.push(v);
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let mode = if rep.is_certified() { EnumerationMode::Certified } else { EnumerationMode::Uncertified };
    Ok(assemble(kind, mode, max_len, opts.percentile, parts))
}

/// Sorted `λ₁(ρ(γ))` over primitive classes of cyclic length `≤ L`.
pub fn primitive_spectral_series(rep: &Representation, max_len: usize, opts: &CountOptions) -> Result<CountSeries> {
    primitive_series(rep, max_len, SeriesKind::SpectralPrimitive, opts, |g, _| Ok(eigenvalue_moduli(g)?[0].ln()))
}

/// Which projection `phi_series` evaluates `φ` on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Projection {
    Cartan,
    JordanPrimitive,
}

/// Word length of the limit-cone sample used to certify `φ`.
const PHI_SAMPLE_LEN: usize = 6;

/// Sorted `φ(a(ρ(γ)))` over the ball or `φ(λ(ρ(γ)))` over primitive classes.
/// Refuses unless `φ` is positive on a sample of the limit cone.
pub fn phi_series(
    rep: &Representation,
    max_len: usize,
    phi: &LinearFunctional,
    projection: Projection,
    opts: &CountOptions,
) -> Result<CountSeries> {
    if phi.dim() != rep.dim() {
        return Err(Error::DimensionMismatch(format!(
            "functional of dim {} for representation of dim {}",
            phi.dim(),
            rep.dim()
        )));
    }
    let sample = limit_cone_sample(rep, PHI_SAMPLE_LEN.min(max_len.max(1)))?;
    let check = functional_interior_check(phi, &sample, f64::MIN_POSITIVE)?;
    if !check.passed {
        return Err(Error::InteriorUncertified { min_value: check.min_value });
    }
    match projection {
        Projection::Cartan => {
            ball_series(rep, max_len, SeriesKind::PhiCartan, opts, |g, gi| phi.eval(&cartan_projection_pair(g, gi)))
        }
        Projection::JordanPrimitive => primitive_series(rep, max_len, SeriesKind::PhiJordanPrimitive, opts, |g, gi| {
            Ok(phi.eval(&jordan_projection_pair(g, gi)?))
        }),
    }
}
