//! Symbolic dynamics: subshifts of finite type, locally constant potentials
//! built from matrix norms, pressure, the entropy root of `P(−s·F) = 0`,
//! periodic-orbit sums and the arithmeticity diagnostic for periods.

mod arith;
mod transfer;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{GeneratorSet, Letter};
use crate::linalg::{top_singular_value, SquareMatrix};
use crate::reps::Representation;

pub use arith::{period_arithmeticity, ArithmeticityReport, Verdict, DEFAULT_ARITHMETICITY_TOL};
pub use transfer::WeightedTransferMatrix;

/// Default block depth for norm potentials.
pub const DEFAULT_DEPTH: usize = 6;

/// A subshift of finite type. States that cannot lie on a bi-infinite path are
/// pruned; `labels` maps the remaining states to the caller's indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteShift {
    labels: Vec<usize>,
    adjacency: Vec<Vec<bool>>,
}

impl FiniteShift {
    pub fn new(adjacency: Vec<Vec<bool>>) -> Result<Self> {
        let n = adjacency.len();
        if adjacency.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("adjacency matrix must be square".into()));
        }
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for u in 0..n {
                if !alive[u] {
                    continue;
                }
                let out = (0..n).any(|v| alive[v] && adjacency[u][v]);
                let inc = (0..n).any(|v| alive[v] && adjacency[v][u]);
                if !(out && inc) {
                    alive[u] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let labels: Vec<usize> = (0..n).filter(|&u| alive[u]).collect();
        if labels.is_empty() {
            return Err(Error::InvalidArgument("shift is empty after pruning".into()));
        }
        let adjacency = labels.iter().map(|&u| labels.iter().map(|&v| adjacency[u][v]).collect()).collect();
        Ok(Self { labels, adjacency })
    }

    pub fn from_matrix(rows: &[&[u8]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| x != 0).collect()).collect())
    }

    /// The full shift on `n` symbols.
    pub fn full(n: usize) -> Self {
        Self::new(vec![vec![true; n]; n]).expect("full shift is nonempty")
    }

    pub fn n_states(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, state: usize) -> usize {
        self.labels[state]
    }

    pub fn allowed(&self, u: usize, v: usize) -> bool {
        self.adjacency[u][v]
    }

    pub fn max_outdegree(&self) -> usize {
        self.adjacency.iter().map(|r| r.iter().filter(|&&b| b).count()).max().unwrap_or(0)
    }

    /// Admissible words of length `m`, lexicographic.
    pub fn admissible_blocks(&self, m: usize) -> Vec<Vec<usize>> {
        let n = self.n_states();
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = if m == 0 { vec![] } else { (0..n).rev().map(|s| vec![s]).collect() };
        if m == 0 {
            return vec![Vec::new()];
        }
        while let Some(b) = stack.pop() {
            if b.len() == m {
                out.push(b);
                continue;
            }
            let last = *b.last().expect("nonempty");
            for v in (0..n).rev() {
                if self.adjacency[last][v] {
                    let mut nb = b.clone();
                    nb.push(v);
                    stack.push(nb);
                }
            }
        }
        out
    }

    /// Number of admissible words of length `m ≥ 1`.
    pub fn count_admissible(&self, m: usize) -> u64 {
        let n = self.n_states();
        let mut x = vec![1u64; n];
        for _ in 1..m {
            x = (0..n).map(|u| (0..n).filter(|&v| self.adjacency[u][v]).map(|v| x[v]).sum()).collect();
        }
        x.iter().sum()
    }

    /// Number of admissible closed paths of length `n` (fixed points of `σⁿ`).
    pub fn count_closed(&self, n: usize) -> u64 {
        self.admissible_blocks(n).iter().filter(|b| self.adjacency[b[n - 1]][b[0]]).count() as u64
    }
}

/// The coding of a free group: one state per letter, `u → v` allowed unless `v = u⁻¹`.
pub fn schottky_shift(gens: &GeneratorSet) -> FiniteShift {
    let n = gens.letter_count();
    FiniteShift::new(
        (0..n).map(|u| (0..n).map(|v| Letter::from_index(v) != Letter::from_index(u).inverse()).collect()).collect(),
    )
    .expect("free-group shift is nonempty")
}

/// A potential depending on the first `depth` symbols.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthKPotential {
    depth: usize,
    blocks: Vec<Vec<usize>>,
    values: Vec<f64>,
}

impl DepthKPotential {
    /// Evaluates `f` on every admissible `depth`-block.
    pub fn from_fn<F: FnMut(&[usize]) -> f64>(shift: &FiniteShift, depth: usize, mut f: F) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument("potential depth must be at least 1".into()));
        }
        let blocks = shift.admissible_blocks(depth);
        let values: Vec<f64> = blocks.iter().map(|b| f(b)).collect();
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("potential value {v} is not finite")));
        }
        Ok(Self { depth, blocks, values })
    }

    pub fn constant(shift: &FiniteShift, depth: usize, c: f64) -> Result<Self> {
        Self::from_fn(shift, depth, |_| c)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, block: &[usize]) -> Option<f64> {
        self.blocks.binary_search_by(|b| b.as_slice().cmp(block)).ok().map(|i| self.values[i])
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest spread of values among blocks sharing their first `depth − 1` symbols.
    pub fn variation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let mut i = 0;
        while i < self.blocks.len() {
            let prefix = &self.blocks[i][..self.depth - 1];
            let mut j = i;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            while j < self.blocks.len() && &self.blocks[j][..self.depth - 1] == prefix {
                lo = lo.min(self.values[j]);
                hi = hi.max(self.values[j]);
                j += 1;
            }
            worst = worst.max(hi - lo);
            i = j;
        }
        worst
    }

    /// Birkhoff sum of the potential around the periodic sequence `cycle^∞`.
    pub fn cyclic_sum(&self, cycle: &[usize]) -> Result<f64> {
        let m = cycle.len();
        let mut total = 0.0;
        let mut block = vec![0; self.depth];
        for i in 0..m {
            for (j, b) in block.iter_mut().enumerate() {
                *b = cycle[(i + j) % m];
            }
            total += self
                .value(&block)
                .ok_or_else(|| Error::InvalidArgument(format!("block {block:?} is not admissible")))?;
        }
        Ok(total)
    }
}

/// `log ‖ρ(x₀…x_{k−1})‖ − log ‖ρ(x₁…x_{k−1})‖` on each admissible `k`-block.
pub fn norm_potential(rep: &Representation, shift: &FiniteShift, depth: usize) -> Result<DepthKPotential> {
    if !rep.is_certified() {
        return Err(Error::NotCertified("norm potential needs a certified Schottky representation".into()));
    }
    let n = rep.generators().letter_count();
    if shift.n_states() != n || (0..n).any(|s| shift.label(s) != s) {
        return Err(Error::DimensionMismatch("shift does not match the representation's letters".into()));
    }
    let d = rep.dim();
    DepthKPotential::from_fn(shift, depth, |block| {
        let mut suffix = SquareMatrix::identity(d);
        for &s in block[1..].iter().rev() {
            suffix = rep.matrix(Letter::from_index(s)) * &suffix;
        }
        let full = rep.matrix(Letter::from_index(block[0])) * &suffix;
        top_singular_value(&full).ln() - top_singular_value(&suffix).ln()
    })
}

/// The transfer matrix with entries `exp(−s·pot)`.
///
/// For depth `k ≥ 2` the states are admissible `(k−1)`-blocks and the edge
/// `x₀…x_{k−2} → x₁…x_{k−1}` carries the value of the `k`-block. For `k = 1`
/// the states are the symbols themselves and `u → v` carries `pot(u)`.
pub fn transfer_matrix(shift: &FiniteShift, pot: &DepthKPotential, s: f64) -> WeightedTransferMatrix {
    let k = pot.depth();
    if k == 1 {
        let n = shift.n_states();
        let edges = (0..n).flat_map(|u| {
            let w = (-s * pot.value(&[u]).expect("every symbol is a block")).exp();
            (0..n).filter(move |&v| shift.allowed(u, v)).map(move |v| (u, v, w))
        });
        return WeightedTransferMatrix::new(n, edges.collect::<Vec<_>>());
    }
    let states = shift.admissible_blocks(k - 1);
    let index =
        |b: &[usize]| states.binary_search_by(|x| x.as_slice().cmp(b)).expect("suffix of a block is admissible");
    let edges: Vec<(usize, usize, f64)> = pot
        .blocks()
        .iter()
        .zip(pot.values())
        .map(|(b, v)| (index(&b[..k - 1]), index(&b[1..]), (-s * v).exp()))
        .collect();
    WeightedTransferMatrix::new(states.len(), edges)
}

/// `P(−s·pot)`, the log spectral radius of the weighted transfer matrix.
pub fn pressure(shift: &FiniteShift, pot: &DepthKPotential, s: f64) -> f64 {
    transfer_matrix(shift, pot, s).spectral_radius().ln()
}

/// The unique `s` with `P(−s·pot) = 0`, by bisection on `[0, log(max outdegree) / min pot]`.
pub fn entropy_root(shift: &FiniteShift, pot: &DepthKPotential) -> Result<f64> {
    let min = pot.min_value();
    if !(min > 0.0) {
        return Err(Error::NonPositivePotential { min_value: min });
    }
    let (mut lo, mut hi) = (0.0, (shift.max_outdegree() as f64).ln() / min);
    if pressure(shift, pot, lo) <= 0.0 {
        return Ok(0.0);
    }
    while hi - lo > 1e-13 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if pressure(shift, pot, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `h(ψ) = h(φ) / ∫F`.
pub fn abramov_entropy(h_base: f64, mean_roof: f64) -> Result<f64> {
    if !(mean_roof > 0.0) {
        return Err(Error::NonPositiveRoof(mean_roof));
    }
    Ok(h_base / mean_roof)
}

/// `Zₙ(s) = Σ_{σⁿx = x} exp(−s·Sₙ pot(x)) = trace(M_sⁿ)`.
pub fn periodic_orbit_sum(shift: &FiniteShift, pot: &DepthKPotential, s: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("period must be at least 1".into()));
    }
    Ok(transfer_matrix(shift, pot, s).trace_power(n))
}

/// Depth-`k` entropy summary for a certified representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub depth: usize,
    pub h_pressure: f64,
    pub variation_k: f64,
    pub min_potential: f64,
    pub transfer_states: usize,
}

pub fn entropy_report(rep: &Representation, depth: usize) -> Result<EntropyReport> {
    let shift = schottky_shift(rep.generators());
    let pot = norm_potential(rep, &shift, depth)?;
    Ok(EntropyReport {
        depth,
        h_pressure: entropy_root(&shift, &pot)?,
        variation_k: pot.variation(),
        min_potential: pot.min_value(),
        transfer_states: transfer_matrix(&shift, &pot, 0.0).dim(),
    })
}
