use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense `d × d` real matrix stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite".into()));
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {dim}", row.len())));
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    pub fn diag(values: &[f64]) -> Self {
        let dim = values.len();
        let mut m = Self::zeros(dim);
        for (i, v) in values.iter().enumerate() {
            m.data[i * dim + i] = *v;
        }
        m
    }

    /// Rotation of the plane by `angle`.
    pub fn rotation2(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { dim: 2, data: vec![c, -s, s, c] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// `out = self * rhs` without allocating.
    pub fn mul_into(&self, rhs: &SquareMatrix, out: &mut SquareMatrix) {
        let d = self.dim;
        debug_assert_eq!(d, rhs.dim);
        debug_assert_eq!(d, out.dim);
        if d == 2 {
            let a = &self.data;
            let b = &rhs.data;
            out.data[0] = a[0] * b[0] + a[1] * b[2];
            out.data[1] = a[0] * b[1] + a[1] * b[3];
            out.data[2] = a[2] * b[0] + a[3] * b[2];
            out.data[3] = a[2] * b[1] + a[3] * b[3];
            return;
        }
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0.0;
                for k in 0..d {
                    acc += self.data[i * d + k] * rhs.data[k * d + j];
                }
                out.data[i * d + j] = acc;
            }
        }
    }

    pub fn transpose(&self) -> SquareMatrix {
        let d = self.dim;
        let mut t = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                t.data[j * d + i] = self.data[i * d + j];
            }
        }
        t
    }

    pub fn scale(&self, factor: f64) -> SquareMatrix {
        Self { dim: self.dim, data: self.data.iter().map(|x| x * factor).collect() }
    }

    /// Matrix-vector product `self · v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d).map(|i| (0..d).map(|k| self.data[i * d + k] * v[k]).sum()).collect()
    }

    /// Row-vector product `θ · self`.
    pub fn apply_left(&self, theta: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d).map(|j| (0..d).map(|k| theta[k] * self.data[k * d + j]).sum()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &SquareMatrix) -> f64 {
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// LU factorization with partial pivoting. `None` when a pivot is exactly zero.
    pub(crate) fn lu(&self) -> Option<Lu> {
        let d = self.dim;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..d).collect();
        let mut sign = 1.0;
        for k in 0..d {
            let mut p = k;
            let mut best = a[k * d + k].abs();
            for i in k + 1..d {
                let v = a[i * d + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return None;
            }
            if p != k {
                for j in 0..d {
                    a.swap(k * d + j, p * d + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[k * d + k];
            for i in k + 1..d {
                let f = a[i * d + k] / pivot;
                a[i * d + k] = f;
                for j in k + 1..d {
                    a[i * d + j] -= f * a[k * d + j];
                }
            }
        }
        Some(Lu { dim: d, lu: a, perm, sign })
    }

    pub fn det(&self) -> f64 {
        if self.dim == 2 {
            return self.data[0] * self.data[3] - self.data[1] * self.data[2];
        }
        match self.lu() {
            Some(lu) => lu.det(),
            None => 0.0,
        }
    }

    pub fn inverse(&self) -> Result<SquareMatrix> {
        let d = self.dim;
        if d == 2 {
            let det = self.det();
            if det == 0.0 || !det.is_finite() {
                return Err(Error::SingularInput { det });
            }
            let [a, b, c, e] = [self.data[0], self.data[1], self.data[2], self.data[3]];
            return Ok(Self { dim: 2, data: vec![e / det, -b / det, -c / det, a / det] });
        }
        let lu = self.lu().ok_or(Error::SingularInput { det: 0.0 })?;
        let mut inv = Self::zeros(d);
        let mut e = vec![0.0; d];
        for j in 0..d {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[j] = 1.0;
            let col = lu.solve(&e);
            for i in 0..d {
                inv.data[i * d + j] = col[i];
            }
        }
        Ok(inv)
    }
}

/// Packed LU factors with row permutation.
pub(crate) struct Lu {
    dim: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub(crate) fn det(&self) -> f64 {
        let d = self.dim;
        (0..d).fold(self.sign, |acc, i| acc * self.lu[i * d + i])
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..d {
            for k in 0..i {
                x[i] -= self.lu[i * d + k] * x[k];
            }
        }
        for i in (0..d).rev() {
            for k in i + 1..d {
                x[i] -= self.lu[i * d + k] * x[k];
            }
            x[i] /= self.lu[i * d + i];
        }
        x
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let mut out = SquareMatrix::zeros(self.dim);
        self.mul_into(rhs, &mut out);
        out
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Rescales `m` so that `|det| = 1`.
pub fn unimodularize(m: &SquareMatrix) -> Result<SquareMatrix> {
    let det = m.det();
    if !(det.abs() >= 1e-12) {
        return Err(Error::SingularInput { det });
    }
    Ok(m.scale(det.abs().powf(-1.0 / m.dim() as f64)))
}
