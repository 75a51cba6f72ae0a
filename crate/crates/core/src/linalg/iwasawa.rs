use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::cartan::CartanVector;
use super::matrix::SquareMatrix;

/// A full flag in `R^d`, stored as an orthogonal frame whose first `k`
/// columns span the `k`-dimensional subspace of the flag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagFrame {
    frame: SquareMatrix,
}

impl FlagFrame {
    pub fn new(frame: SquareMatrix) -> Result<Self> {
        let gram = &frame.transpose() * &frame;
        let err = gram.max_abs_diff(&SquareMatrix::identity(frame.dim()));
        if err > 1e-9 {
            return Err(Error::InvalidArgument(format!("frame is not orthogonal (error {err:e})")));
        }
        Ok(Self { frame })
    }

    /// The standard flag `⟨e₁⟩ ⊂ ⟨e₁,e₂⟩ ⊂ …`.
    pub fn standard(dim: usize) -> Self {
        Self { frame: SquareMatrix::identity(dim) }
    }

    /// The flag spanned by the leading columns of an invertible matrix.
    pub fn from_basis(basis: &SquareMatrix) -> Result<Self> {
        let (q, _) = qr_positive(basis)?;
        Ok(Self { frame: q })
    }

    pub fn frame(&self) -> &SquareMatrix {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// The first line of the flag.
    pub fn line(&self) -> Vec<f64> {
        self.frame.column(0)
    }

    /// `g · x`: the orthogonal factor of `g · frame(x)`.
    pub fn act(&self, g: &SquareMatrix) -> Result<FlagFrame> {
        let (q, _) = qr_positive(&(g * &self.frame))?;
        Ok(FlagFrame { frame: q })
    }

    /// `g · x` for `|det g| = 1` given with `g⁻¹`; accurate when `g` is too
    /// badly conditioned for [`FlagFrame::act`].
    pub fn act_pair(&self, g: &SquareMatrix, g_inv: &SquareMatrix) -> Result<FlagFrame> {
        Ok(two_ended(g, g_inv, self)?.1)
    }
}

/// Householder QR with the diagonal of `R` made positive.
pub(crate) fn qr_positive(a: &SquareMatrix) -> Result<(SquareMatrix, SquareMatrix)> {
    let (q, r) = householder(a);
    if (0..a.dim()).any(|k| r.get(k, k) == 0.0) {
        return Err(Error::SingularInput { det: 0.0 });
    }
    Ok((q, r))
}

/// Householder QR; the diagonal of `R` is nonnegative but may vanish.
fn householder(a: &SquareMatrix) -> (SquareMatrix, SquareMatrix) {
    let d = a.dim();
    let mut r = a.clone();
    let mut q = SquareMatrix::identity(d);
    let mut v = vec![0.0; d];
    for k in 0..d.saturating_sub(1) {
        let m = d - k;
        let norm = (k..d).map(|i| r.get(i, k).powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        for i in 0..m {
            v[i] = r.get(k + i, k);
        }
        v[0] += if v[0] >= 0.0 { norm } else { -norm };
        let vv: f64 = v[..m].iter().map(|x| x * x).sum();
        for j in 0..d {
            let s: f64 = (0..m).map(|i| v[i] * r.get(k + i, j)).sum();
            let f = 2.0 * s / vv;
            for i in 0..m {
                r.set(k + i, j, r.get(k + i, j) - f * v[i]);
            }
        }
        // Q ← Q·H
        for i in 0..d {
            let s: f64 = (0..m).map(|j| q.get(i, k + j) * v[j]).sum();
            let f = 2.0 * s / vv;
            for j in 0..m {
                q.set(i, k + j, q.get(i, k + j) - f * v[j]);
            }
        }
    }
    for k in 0..d {
        if r.get(k, k) < 0.0 {
            for j in 0..d {
                r.set(k, j, -r.get(k, j));
            }
            for i in 0..d {
                q.set(i, k, -q.get(i, k));
            }
        }
        for i in k + 1..d {
            r.set(i, k, 0.0);
        }
    }
    (q, r)
}

fn reversed_columns(a: &SquareMatrix) -> SquareMatrix {
    let d = a.dim();
    let mut out = SquareMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            out.set(i, j, a.get(i, d - 1 - j));
        }
    }
    out
}

/// `σ(g, x)` and `g·x` from both ends.
///
/// With `g·F = QR`, the factorization of `g⁻ᵀ·F·J` (`J` reverses columns) is
/// `(QJ)·(J R⁻ᵀ J)`, so its diagonal holds the reciprocals of the trailing
/// diagonal of `R`. Large entries of `R` are read from the first product and
/// small ones from the second; both are then accurate to working precision.
/// The coordinate closest to zero is fixed by `Σσ = log |det g| = 0`, and its
/// frame column by orthogonality.
fn two_ended(g: &SquareMatrix, g_inv: &SquareMatrix, x: &FlagFrame) -> Result<(CartanVector, FlagFrame)> {
    let d = g.dim();
    let (qf, rf) = householder(&(g * &x.frame));
    let (qb, rb) = householder(&(&g_inv.transpose() * &reversed_columns(&x.frame)));
    // each diagonal entry carries an absolute error of order ε times the norm
    // of its product, so take whichever reading stands further above that
    let (scale_f, scale_b) = (g.max_abs().ln(), g_inv.max_abs().ln());
    let est: Vec<f64> = (0..d)
        .map(|k| {
            let fwd = rf.get(k, k).ln();
            let bwd = rb.get(d - 1 - k, d - 1 - k).ln();
            if fwd - scale_f >= bwd - scale_b {
                fwd
            } else {
                -bwd
            }
        })
        .collect();
    // an unreadable coordinate is the natural pivot
    let pivot = (0..d)
        .min_by(|&a, &b| {
            let key = |k: usize| if est[k].is_finite() { est[k].abs() } else { -1.0 };
            key(a).total_cmp(&key(b))
        })
        .expect("d ≥ 1");
    if (0..d).any(|k| k != pivot && !est[k].is_finite()) {
        return Err(Error::SingularInput { det: 0.0 });
    }
    let mut coords = est;
    coords[pivot] = 0.0;
    coords[pivot] = -coords.iter().sum::<f64>();

    let mut frame = SquareMatrix::zeros(d);
    for k in 0..d {
        for i in 0..d {
            let v = if k < pivot { qf.get(i, k) } else { qb.get(i, d - 1 - k) };
            frame.set(i, k, v);
        }
    }
    let complement = orthogonal_complement(&frame, pivot);
    for (i, v) in complement.into_iter().enumerate() {
        frame.set(i, pivot, v);
    }
    let (q, _) = qr_positive(&frame)?;
    Ok((CartanVector::new(coords), FlagFrame { frame: q }))
}

/// Unit vector orthogonal to every column of `m` except `skip`.
fn orthogonal_complement(m: &SquareMatrix, skip: usize) -> Vec<f64> {
    let d = m.dim();
    let cols: Vec<Vec<f64>> = (0..d).filter(|&k| k != skip).map(|k| m.column(k)).collect();
    let mut best = vec![0.0; d];
    let mut best_norm = -1.0;
    for e in 0..d {
        let mut v = vec![0.0; d];
        v[e] = 1.0;
        // two passes of Gram–Schmidt
        for _ in 0..2 {
            for c in &cols {
                let p: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= p * ci;
                }
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > best_norm {
            best_norm = n;
            best = v.into_iter().map(|x| x / n).collect();
        }
    }
    best
}

/// Busemann–Iwasawa cocycle `σ(g, x)`: the log-diagonal of `R` in `g·frame(x) = Q·R`.
pub fn iwasawa_cocycle(g: &SquareMatrix, x: &FlagFrame) -> Result<CartanVector> {
    let (_, r) = qr_positive(&(g * x.frame()))?;
    Ok(CartanVector::new((0..g.dim()).map(|i| r.get(i, i).ln()).collect()))
}

/// [`iwasawa_cocycle`] for `|det g| = 1` given with `g⁻¹`, accurate for long
/// products whose smallest singular values are below `ε‖g‖`.
pub fn iwasawa_cocycle_pair(g: &SquareMatrix, g_inv: &SquareMatrix, x: &FlagFrame) -> Result<CartanVector> {
    Ok(two_ended(g, g_inv, x)?.0)
}
