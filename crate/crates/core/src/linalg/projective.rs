use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::matrix::SquareMatrix;

/// Coordinates below this magnitude are skipped when fixing the sign.
const SIGN_CUTOFF: f64 = 1e-12;

fn normalize(v: &[f64]) -> Result<Vec<f64>> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("non-finite coordinate".into()));
    }
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Err(Error::ZeroVector);
    }
    let norm = v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt() * scale;
    let mut out: Vec<f64> = v.iter().map(|x| x / norm).collect();
    if let Some(first) = out.iter().find(|x| x.abs() > SIGN_CUTOFF) {
        if *first < 0.0 {
            out.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(out)
}

/// A line in `R^d`, stored as a unit vector whose first non-negligible coordinate is positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePoint {
    rep: Vec<f64>,
}

impl ProjectivePoint {
    pub fn new(v: &[f64]) -> Result<Self> {
        Ok(Self { rep: normalize(v)? })
    }

    /// The `i`-th coordinate line.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut rep = vec![0.0; dim];
        rep[i] = 1.0;
        Self { rep }
    }

    /// The line through `(cos θ, sin θ)` in the plane.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(&[c, s]).expect("unit vector")
    }

    pub fn dim(&self) -> usize {
        self.rep.len()
    }

    pub fn rep(&self) -> &[f64] {
        &self.rep
    }

    /// Image under `g`.
    pub fn act(&self, g: &SquareMatrix) -> Result<Self> {
        Self::new(&g.apply(&self.rep))
    }

    /// Angle between the two lines, in `[0, π/2]`.
    pub fn distance(&self, other: &ProjectivePoint) -> f64 {
        line_angle(&self.rep, &other.rep)
    }
}

/// A hyperplane `ker θ`, stored as a unit covector with the same sign convention.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveCovector {
    rep: Vec<f64>,
}

impl ProjectiveCovector {
    pub fn new(v: &[f64]) -> Result<Self> {
        Ok(Self { rep: normalize(v)? })
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut rep = vec![0.0; dim];
        rep[i] = 1.0;
        Self { rep }
    }

    pub fn dim(&self) -> usize {
        self.rep.len()
    }

    pub fn rep(&self) -> &[f64] {
        &self.rep
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        self.rep.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// The action `θ ↦ θ ∘ g⁻¹`, given `g⁻¹`.
    pub fn act_by_inverse(&self, g_inv: &SquareMatrix) -> Result<Self> {
        Self::new(&g_inv.apply_left(&self.rep))
    }

    /// Angle between the line `p` and the hyperplane `ker θ`.
    pub fn angle_to(&self, p: &ProjectivePoint) -> f64 {
        self.eval(p.rep()).abs().min(1.0).asin()
    }

    pub fn distance(&self, other: &ProjectiveCovector) -> f64 {
        line_angle(&self.rep, &other.rep)
    }
}

/// Angle between the lines spanned by two unit vectors, accurate for small angles.
pub(crate) fn line_angle(u: &[f64], v: &[f64]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let s = if dot >= 0.0 { 1.0 } else { -1.0 };
    let chord = u.iter().zip(v).map(|(a, b)| (a - s * b).powi(2)).sum::<f64>().sqrt();
    2.0 * (0.5 * chord).min(1.0).asin()
}

/// `log |θ(v)| / (‖θ‖‖v‖)`, which is always `≤ 0`.
pub fn gromov_product(theta: &ProjectiveCovector, v: &ProjectivePoint) -> Result<f64> {
    if theta.dim() != v.dim() {
        return Err(Error::DimensionMismatch(format!(
            "covector of dim {} against point of dim {}",
            theta.dim(),
            v.dim()
        )));
    }
    let value = theta.eval(v.rep()).abs();
    if value < 1e-14 {
        return Err(Error::DegeneratePair { value });
    }
    Ok(value.min(1.0).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn gromov_product_examples() {
        let e1 = ProjectiveCovector::basis(2, 0);
        assert_eq!(gromov_product(&e1, &ProjectivePoint::basis(2, 0)).unwrap(), 0.0);
        let diag = ProjectivePoint::new(&[1.0, 1.0]).unwrap();
        assert!((gromov_product(&e1, &diag).unwrap() + 0.5 * LN_2).abs() < 1e-15);
        assert!(matches!(gromov_product(&e1, &ProjectivePoint::basis(2, 1)), Err(Error::DegeneratePair { .. })));
    }

    #[test]
    fn gromov_product_is_scale_invariant() {
        let th = ProjectiveCovector::new(&[0.3, -1.2, 2.0]).unwrap();
        let th2 = ProjectiveCovector::new(&[-0.6, 2.4, -4.0]).unwrap();
        let v = ProjectivePoint::new(&[1.0, 0.5, 0.25]).unwrap();
        let v2 = ProjectivePoint::new(&[-1e5, -0.5e5, -0.25e5]).unwrap();
        assert_eq!(gromov_product(&th, &v).unwrap(), gromov_product(&th2, &v2).unwrap());
    }

    #[test]
    fn sign_convention() {
        let p = ProjectivePoint::new(&[0.0, -3.0, 4.0]).unwrap();
        assert_eq!(p.rep(), &[0.0, 0.6, -0.8]);
        assert!(matches!(ProjectivePoint::new(&[0.0, 0.0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn small_angles_are_accurate() {
        let a = ProjectivePoint::from_angle(0.0);
        let b = ProjectivePoint::from_angle(1e-9);
        assert!((a.distance(&b) - 1e-9).abs() < 1e-20);
        let c = ProjectivePoint::from_angle(std::f64::consts::PI - 1e-9);
        // π itself is rounded, so the error floor here is about 1.2e-16
        assert!((a.distance(&c) - 1e-9).abs() < 1e-15);
    }
}
