use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::eigen::{eigenvalue_moduli, singular_values};
use super::matrix::SquareMatrix;

/// Operator norm used for `log ‖g‖` and for the norm cocycle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    #[default]
    Euclidean,
    L1,
    Linf,
}

impl NormKind {
    /// Vector norm.
    pub fn vector_norm(self, v: &[f64]) -> f64 {
        match self {
            NormKind::Euclidean => {
                let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                if scale == 0.0 {
                    return 0.0;
                }
                scale * v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
            }
            NormKind::L1 => v.iter().map(|x| x.abs()).sum(),
            NormKind::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }

    /// The dual norm, used on covectors.
    pub fn dual(self) -> NormKind {
        match self {
            NormKind::Euclidean => NormKind::Euclidean,
            NormKind::L1 => NormKind::Linf,
            NormKind::Linf => NormKind::L1,
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::Euclidean => "euclidean",
            NormKind::L1 => "l1",
            NormKind::Linf => "linf",
        })
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "euclidean" | "l2" => Ok(NormKind::Euclidean),
            "l1" => Ok(NormKind::L1),
            "linf" => Ok(NormKind::Linf),
            other => Err(Error::InvalidArgument(format!("unknown norm `{other}`"))),
        }
    }
}

/// A point of the Cartan subspace `{v ∈ R^d : Σ v_i = 0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartanVector {
    coords: Vec<f64>,
    dominant: bool,
}

impl CartanVector {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords, dominant: false }
    }

    /// Sorts non-increasing and flags the result dominant.
    pub fn dominant(mut coords: Vec<f64>) -> Self {
        coords.sort_by(|a, b| b.total_cmp(a));
        Self { coords, dominant: true }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn is_dominant(&self) -> bool {
        self.dominant
    }

    pub fn sum(&self) -> f64 {
        self.coords.iter().sum()
    }

    pub fn norm2(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn dot(&self, w: &[f64]) -> f64 {
        self.coords.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    /// Unit-length rescaling, `None` for the zero vector.
    pub fn unit(&self) -> Option<CartanVector> {
        let n = self.norm2();
        (n > 0.0).then(|| CartanVector { coords: self.coords.iter().map(|x| x / n).collect(), dominant: self.dominant })
    }

    pub fn max_abs_diff(&self, other: &CartanVector) -> f64 {
        self.coords.iter().zip(&other.coords).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn scaled(&self, f: f64) -> CartanVector {
        CartanVector { coords: self.coords.iter().map(|x| x * f).collect(), dominant: self.dominant && f >= 0.0 }
    }
}

/// `log ‖g‖` for the chosen operator norm.
pub fn operator_norm_log(g: &SquareMatrix, norm: NormKind) -> f64 {
    let d = g.dim();
    let value = match norm {
        NormKind::Euclidean => singular_values(g)[0],
        NormKind::L1 => (0..d).map(|j| (0..d).map(|i| g.get(i, j).abs()).sum::<f64>()).fold(0.0, f64::max),
        NormKind::Linf => (0..d).map(|i| g.row(i).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max),
    };
    value.ln()
}

/// `λ₁(g)`: logarithm of the spectral radius.
pub fn spectral_radius_log(g: &SquareMatrix) -> Result<f64> {
    Ok(eigenvalue_moduli(g)?[0].ln())
}

/// Cartan projection from the singular values of `g` alone.
///
/// For products of many matrices the smallest singular values are below the
/// rounding level of the entries; prefer [`cartan_projection_pair`] there.
pub fn cartan_projection(g: &SquareMatrix) -> CartanVector {
    CartanVector::dominant(singular_values(g).iter().map(|s| s.ln()).collect())
}

/// Jordan projection from the eigenvalue moduli of `g` alone.
pub fn jordan_projection(g: &SquareMatrix) -> Result<CartanVector> {
    Ok(CartanVector::dominant(eigenvalue_moduli(g)?.iter().map(|m| m.ln()).collect()))
}

/// Combines the top half of a spectrum of `g` with the top half of the
/// spectrum of `g⁻¹`; the middle coordinate (odd `d`) comes from `Σ = 0`.
fn two_ended(top: &[f64], top_of_inverse: &[f64]) -> CartanVector {
    let d = top.len();
    let half = d / 2;
    let mut coords = vec![0.0; d];
    for i in 0..half {
        coords[i] = top[i].ln();
        coords[d - 1 - i] = -top_of_inverse[i].ln();
    }
    if d % 2 == 1 {
        coords[half] = -coords.iter().sum::<f64>();
    }
    CartanVector::dominant(coords)
}

/// Cartan projection of `g` computed from both `g` and `g⁻¹`.
///
/// Each end of the spectrum is read from the matrix in which it is the
/// large end, so `a₁` and `a_d` keep full relative accuracy however long the
/// product that produced `g`.
pub fn cartan_projection_pair(g: &SquareMatrix, g_inv: &SquareMatrix) -> CartanVector {
    two_ended(&singular_values(g), &singular_values(g_inv))
}

/// Jordan projection of `g` computed from both `g` and `g⁻¹`.
pub fn jordan_projection_pair(g: &SquareMatrix, g_inv: &SquareMatrix) -> Result<CartanVector> {
    Ok(two_ended(&eigenvalue_moduli(g)?, &eigenvalue_moduli(g_inv)?))
}

/// `(v₁, …, v_d) ↦ (−v_d, …, −v₁)`.
pub fn opposition_involution(v: &CartanVector) -> CartanVector {
    CartanVector { coords: v.coords.iter().rev().map(|x| -x).collect(), dominant: v.dominant }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn golden() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    #[test]
    fn operator_norm_examples() {
        let id = SquareMatrix::identity(3);
        assert_eq!(operator_norm_log(&id, NormKind::Euclidean), 0.0);
        let d = SquareMatrix::diag(&[2.0, 0.5]);
        assert!((operator_norm_log(&d, NormKind::Euclidean) - LN_2).abs() < 1e-15);
        let shear = SquareMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!((operator_norm_log(&shear, NormKind::Euclidean) - 0.481211825059603).abs() < 1e-12);
        assert!((operator_norm_log(&shear, NormKind::L1) - LN_2).abs() < 1e-15);
        assert!((operator_norm_log(&shear, NormKind::Linf) - LN_2).abs() < 1e-15);
    }

    #[test]
    fn spectral_radius_examples() {
        assert_eq!(spectral_radius_log(&SquareMatrix::identity(2)).unwrap(), 0.0);
        let shear = SquareMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(spectral_radius_log(&shear).unwrap().abs() < 1e-12);
        let cat = SquareMatrix::from_rows(&[[2.0, 1.0], [1.0, 1.0]]).unwrap();
        // roots of x² − 3x + 1
        let expect = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((spectral_radius_log(&cat).unwrap() - expect).abs() < 1e-15);
        assert!((expect - 0.962423650119206).abs() < 1e-12);
    }

    #[test]
    fn cartan_examples() {
        let a = cartan_projection(&SquareMatrix::diag(&[2.0, 1.0, 0.5]));
        assert!(a.max_abs_diff(&CartanVector::new(vec![LN_2, 0.0, -LN_2])) < 1e-15);
        assert!(a.is_dominant());
        let z = cartan_projection(&SquareMatrix::identity(4));
        assert!(z.coords().iter().all(|x| x.abs() < 1e-15));
        let shear = SquareMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        let a = cartan_projection(&shear);
        let lp = golden().ln();
        assert!(a.max_abs_diff(&CartanVector::new(vec![lp, -lp])) < 1e-15);
    }

    #[test]
    fn jordan_examples() {
        let l = jordan_projection(&SquareMatrix::diag(&[2.0, 1.0, 0.5])).unwrap();
        assert!(l.max_abs_diff(&CartanVector::new(vec![LN_2, 0.0, -LN_2])) < 1e-14);
        let r = jordan_projection(&SquareMatrix::rotation2(std::f64::consts::FRAC_PI_3)).unwrap();
        assert!(r.coords().iter().all(|x| x.abs() < 1e-15));
        let cat = SquareMatrix::from_rows(&[[2.0, 1.0], [1.0, 1.0]]).unwrap();
        let l = jordan_projection(&cat).unwrap();
        let lp = 2.0 * golden().ln();
        assert!(l.max_abs_diff(&CartanVector::new(vec![lp, -lp])) < 1e-14);
    }

    #[test]
    fn opposition_examples() {
        let v = CartanVector::new(vec![1.0, 0.25, -1.25]);
        assert_eq!(opposition_involution(&v).coords(), &[1.25, -0.25, -1.0]);
        assert_eq!(opposition_involution(&CartanVector::new(vec![0.0, 0.0])).coords(), &[0.0, 0.0]);
        let cat = SquareMatrix::from_rows(&[[2.0, 1.0], [1.0, 1.0]]).unwrap();
        let li = jordan_projection(&cat.inverse().unwrap()).unwrap();
        let il = opposition_involution(&jordan_projection(&cat).unwrap());
        assert!(li.max_abs_diff(&il) < 1e-14);
    }

    #[test]
    fn pair_projection_survives_long_products() {
        // λ(aⁿ) = n·(log(5+√24), −log(5+√24)) for a = [[5,4],[6,5]]
        let a = SquareMatrix::from_rows(&[[5.0, 4.0], [6.0, 5.0]]).unwrap();
        let ai = a.inverse().unwrap();
        let (mut g, mut gi) = (SquareMatrix::identity(2), SquareMatrix::identity(2));
        for _ in 0..40 {
            g = &g * &a;
            gi = &ai * &gi;
        }
        let pair = cartan_projection_pair(&g, &gi);
        assert!(pair.sum().abs() < 1e-9);
        let lam = jordan_projection_pair(&g, &gi).unwrap();
        let expect = 40.0 * (5.0 + 24f64.sqrt()).ln();
        assert!((lam.coords()[0] - expect).abs() < 1e-9);
        assert!((lam.coords()[1] + expect).abs() < 1e-9);
    }
}
