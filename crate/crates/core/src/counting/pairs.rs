use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groups::{Letter, Word};
use crate::linalg::{operator_norm_log, proximal_parts, NormKind, DEFAULT_GAP_TOL};
use crate::reps::Representation;

use super::{fold_ball, with_workers};

/// Counts of `(cylinder of γ₋, cylinder of γ₊)` at a fixed depth.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PairMeasure {
    pub depth: usize,
    pub cells: BTreeMap<(Word, Word), u64>,
    pub total: u64,
}

impl PairMeasure {
    fn merge(mut self, other: PairMeasure) -> PairMeasure {
        for (k, v) in other.cells {
            *self.cells.entry(k).or_default() += v;
        }
        self.total += other.total;
        self
    }

    /// Counts by first coordinate (the `γ₋` cylinder).
    pub fn row_marginal(&self) -> BTreeMap<Word, u64> {
        let mut out = BTreeMap::new();
        for ((a, _), v) in &self.cells {
            *out.entry(a.clone()).or_default() += v;
        }
        out
    }

    /// Counts by second coordinate (the `γ₊` cylinder).
    pub fn column_marginal(&self) -> BTreeMap<Word, u64> {
        let mut out = BTreeMap::new();
        for ((_, b), v) in &self.cells {
            *out.entry(b.clone()).or_default() += v;
        }
        out
    }
}

fn require_certified(rep: &Representation) -> Result<()> {
    if rep.is_certified() {
        Ok(())
    } else {
        Err(Error::NotCertified("cylinder classification needs a certified Schottky representation".into()))
    }
}

/// For each `γ ≠ id` with `|γ| ≤ L` and `log ‖ρ(γ)‖ ≤ t`, counts the cell
/// (first `k` letters of `γ⁻¹`, first `k` letters of `γ`).
pub fn pair_empirical_measure(
    rep: &Representation,
    max_len: usize,
    t: f64,
    depth: usize,
    workers: Option<usize>,
) -> Result<PairMeasure> {
    require_certified(rep)?;
    if depth == 0 {
        return Err(Error::InvalidArgument("cylinder depth must be at least 1".into()));
    }
    let init = || PairMeasure { depth, ..Default::default() };
    let parts = with_workers(workers, || {
        fold_ball(rep, max_len, init, |m: &mut PairMeasure, w: &[Letter], g, _| {
            if w.is_empty() || operator_norm_log(g, NormKind::Euclidean) > t {
                return;
            }
            let k = depth.min(w.len());
            let minus: Vec<Letter> = w.iter().rev().take(k).map(|l| l.inverse()).collect();
            let plus = w[..k].to_vec();
            *m.cells.entry((Word::new(minus), Word::new(plus))).or_default() += 1;
            m.total += 1;
        })
    })?;
    Ok(parts.into_iter().fold(init(), PairMeasure::merge))
}

/// `max |p(A×B) − p(A×·)·p(·×B)|` over all pairs of observed cylinders.
pub fn factorization_deficit(m: &PairMeasure) -> Result<f64> {
    if m.total == 0 {
        return Err(Error::EmptyMeasure);
    }
    let total = m.total as f64;
    let rows = m.row_marginal();
    let cols = m.column_marginal();
    let mut worst: f64 = 0.0;
    for (a, ra) in &rows {
        for (b, cb) in &cols {
            let joint = m.cells.get(&(a.clone(), b.clone())).copied().unwrap_or(0) as f64 / total;
            let prod = (*ra as f64 / total) * (*cb as f64 / total);
            worst = worst.max((joint - prod).abs());
        }
    }
    Ok(worst)
}

/// Counts `γ ≠ id` with `|γ| ≤ L`, `log ‖ρ(γ)‖ ≤ t` by the ping-pong
/// neighborhood that contains the attracting line of `ρ(γ)` (or of `ρ(γ)⁻¹`
/// when `inverse`). Lines outside every neighborhood are counted under `None`.
pub fn attractor_histogram(
    rep: &Representation,
    max_len: usize,
    t: f64,
    inverse: bool,
    workers: Option<usize>,
) -> Result<BTreeMap<Option<Letter>, u64>> {
    require_certified(rep)?;
    let scheme = &rep.certification().expect("checked").scheme;
    if scheme.neighborhoods.iter().any(|n| n.center.dim() != rep.dim()) {
        return Err(Error::NotCertified("certificate lives in a different dimension".into()));
    }
    let letters: Vec<Letter> = rep.generators().letters().collect();
    let parts = with_workers(workers, || {
        fold_ball(rep, max_len, BTreeMap::new, |h: &mut BTreeMap<Option<Letter>, u64>, w: &[Letter], g, gi| {
            if w.is_empty() || operator_norm_log(g, NormKind::Euclidean) > t {
                return;
            }
            let m = if inverse { gi } else { g };
            let cell = proximal_parts(m, DEFAULT_GAP_TOL).ok().and_then(|p| {
                letters.iter().copied().find(|l| {
                    let nb = &scheme.neighborhoods[l.index()];
                    p.attract.distance(&nb.center) <= nb.radius
                })
            });
            *h.entry(cell).or_default() += 1;
        })
    })?;
    let mut out = BTreeMap::new();
    for part in parts {
        for (k, v) in part {
            *out.entry(k).or_default() += v;
        }
    }
    Ok(out)
}
