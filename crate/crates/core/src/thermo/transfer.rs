use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

/// Non-negative matrix stored as weighted edges `(from, to, weight)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedTransferMatrix {
    dim: usize,
    /// Outgoing `(to, weight)` per row.
    rows: Vec<Vec<(usize, f64)>>,
}

const MAX_ITERATIONS: usize = 200_000;
const REL_TOL: f64 = 1e-13;

impl WeightedTransferMatrix {
    pub fn new(dim: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut rows = vec![Vec::new(); dim];
        for (u, v, w) in edges {
            assert!(w >= 0.0 && w.is_finite(), "transfer weights must be finite and non-negative");
            if w > 0.0 {
                rows[u].push((v, w));
            }
        }
        Self { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, u: usize, v: usize) -> f64 {
        self.rows[u].iter().filter(|(t, _)| *t == v).map(|(_, w)| w).sum()
    }

    /// Row-major dense copy.
    pub fn dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim * self.dim];
        for (u, row) in self.rows.iter().enumerate() {
            for &(v, w) in row {
                out[u * self.dim + v] += w;
            }
        }
        out
    }

    /// `y = M x`.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (u, row) in self.rows.iter().enumerate() {
            y[u] = row.iter().map(|&(v, w)| w * x[v]).sum();
        }
    }

    /// `trace(Mⁿ)`, propagating each basis vector separately.
    pub fn trace_power(&self, n: usize) -> f64 {
        let mut total = 0.0;
        let mut x = vec![0.0; self.dim];
        let mut y = vec![0.0; self.dim];
        for start in 0..self.dim {
            x.iter_mut().for_each(|v| *v = 0.0);
            x[start] = 1.0;
            for _ in 0..n {
                // row vector times M keeps this a walk count from `start`
                y.iter_mut().for_each(|v| *v = 0.0);
                for (u, row) in self.rows.iter().enumerate() {
                    if x[u] != 0.0 {
                        for &(v, w) in row {
                            y[v] += x[u] * w;
                        }
                    }
                }
                std::mem::swap(&mut x, &mut y);
            }
            total += x[start];
        }
        total
    }

    /// Perron root.
    ///
    /// Each strongly connected class is handled separately: a periodic class is
    /// shifted by the identity to make it primitive, then power iteration runs
    /// until the Collatz–Wielandt bounds agree to a relative `1e-13`.
    pub fn spectral_radius(&self) -> f64 {
        let mut g = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..self.dim).map(|_| g.add_node(())).collect();
        for (u, row) in self.rows.iter().enumerate() {
            for &(v, _) in row {
                g.add_edge(nodes[u], nodes[v], ());
            }
        }
        let mut best: f64 = 0.0;
        for comp in tarjan_scc(&g) {
            let members: Vec<usize> = comp.iter().map(|n| n.index()).collect();
            let mut local = vec![usize::MAX; self.dim];
            for (i, &m) in members.iter().enumerate() {
                local[m] = i;
            }
            let sub: Vec<Vec<(usize, f64)>> = members
                .iter()
                .map(|&u| {
                    self.rows[u].iter().filter(|(v, _)| local[*v] != usize::MAX).map(|&(v, w)| (local[v], w)).collect()
                })
                .collect();
            if sub.iter().all(Vec::is_empty) {
                continue;
            }
            best = best.max(irreducible_radius(&sub));
        }
        best
    }
}

/// Period of an irreducible graph: gcd of `level(u) + 1 − level(v)` over edges.
fn period(rows: &[Vec<(usize, f64)>]) -> usize {
    let mut level = vec![usize::MAX; rows.len()];
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in &rows[u] {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0usize;
    for (u, row) in rows.iter().enumerate() {
        for &(v, _) in row {
            let diff = (level[u] + 1).abs_diff(level[v]);
            g = gcd(g, diff);
        }
    }
    g.max(1)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn irreducible_radius(rows: &[Vec<(usize, f64)>]) -> f64 {
    let n = rows.len();
    let scale = rows.iter().flatten().map(|&(_, w)| w).fold(0.0, f64::max);
    let shift = if period(rows) > 1 { 1.0 } else { 0.0 };
    let m = WeightedTransferMatrix {
        dim: n,
        rows: rows.iter().map(|r| r.iter().map(|&(v, w)| (v, w / scale)).collect()).collect(),
    };
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for _ in 0..MAX_ITERATIONS {
        m.apply(&x, &mut y);
        let (mut l, mut h) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            y[i] += shift * x[i];
            let r = y[i] / x[i];
            l = l.min(r);
            h = h.max(r);
        }
        lo = l;
        hi = h;
        let norm = y.iter().fold(0.0f64, |a, v| a.max(*v));
        x.iter_mut().zip(&y).for_each(|(a, b)| *a = b / norm);
        if hi - lo <= REL_TOL * hi {
            break;
        }
    }
    (0.5 * (lo + hi) - shift) * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_dense(rows: &[&[f64]]) -> WeightedTransferMatrix {
        let n = rows.len();
        WeightedTransferMatrix::new(n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j, rows[i][j]))))
    }

    #[test]
    fn radius_examples() {
        assert!((from_dense(&[&[1.0, 1.0], &[1.0, 1.0]]).spectral_radius() - 2.0).abs() < 1e-12);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((from_dense(&[&[1.0, 1.0], &[1.0, 0.0]]).spectral_radius() - phi).abs() < 1e-12);
        // periodic: a 3-cycle with weights 2, 3, 4
        let cyc = from_dense(&[&[0.0, 2.0, 0.0], &[0.0, 0.0, 3.0], &[4.0, 0.0, 0.0]]);
        assert!((cyc.spectral_radius() - 24f64.cbrt()).abs() < 1e-12);
        // reducible: two loops
        let red = from_dense(&[&[3.0, 1.0], &[0.0, 5.0]]);
        assert!((red.spectral_radius() - 5.0).abs() < 1e-12);
        assert_eq!(from_dense(&[&[0.0, 1.0], &[0.0, 0.0]]).spectral_radius(), 0.0);
    }

    #[test]
    fn trace_examples() {
        let golden = from_dense(&[&[1.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(golden.trace_power(3), 4.0);
        assert_eq!(from_dense(&[&[1.0, 1.0], &[1.0, 1.0]]).trace_power(5), 32.0);
    }
}
