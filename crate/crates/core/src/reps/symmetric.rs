use crate::error::{Error, Result};
use crate::linalg::{ProjectivePoint, SquareMatrix};

use super::{RepKind, Representation};

/// Coefficients of `(p·x + q·y)^k` in the monomials `x^k, x^{k−1}y, …, y^k`.
fn binomial_power(p: f64, q: f64, k: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    for _ in 0..k {
        let mut next = vec![0.0; c.len() + 1];
        for (j, v) in c.iter().enumerate() {
            next[j] += p * v;
            next[j + 1] += q * v;
        }
        c = next;
    }
    c
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Action of a `2×2` matrix on degree-`m` homogeneous polynomials in the plain
/// monomial basis, normalized so that it intertwines [`veronese_map`].
pub fn symmetric_power_matrix(a: &SquareMatrix, m: usize) -> Result<SquareMatrix> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "symmetric power needs a 2x2 matrix, got {}x{}",
            a.dim(),
            a.dim()
        )));
    }
    let (p, q, r, s) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
    let mut out = SquareMatrix::zeros(m + 1);
    for i in 0..=m {
        // row i: coefficients of (p x + q y)^{m−i} (r x + s y)^i
        let row = poly_mul(&binomial_power(p, q, m - i), &binomial_power(r, s, i));
        for (j, v) in row.into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// `Sym^m ∘ ρ` for a representation in dimension 2.
pub fn symmetric_power(rep2: &Representation, m: usize) -> Result<Representation> {
    if rep2.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("symmetric power needs dimension 2, got {}", rep2.dim())));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("symmetric power degree must be at least 1".into()));
    }
    let gens = rep2.generator_matrices().iter().map(|a| symmetric_power_matrix(a, m)).collect::<Result<Vec<_>>>()?;
    let rep = Representation::new(rep2.generators().clone(), gens, RepKind::SymmetricPower { m })?;
    let cert = rep2.certification().map(|c| super::Certification { inherited: true, ..c.clone() });
    Ok(rep.with_certification(cert))
}

/// `[x : y] ↦ [x^m : x^{m−1}y : … : y^m]`.
pub fn veronese_map(p: &ProjectivePoint, m: usize) -> ProjectivePoint {
    assert_eq!(p.dim(), 2, "veronese map takes a point of the projective line");
    let (x, y) = (p.rep()[0], p.rep()[1]);
    let v: Vec<f64> = (0..=m).map(|i| x.powi((m - i) as i32) * y.powi(i as i32)).collect();
    ProjectivePoint::new(&v).expect("a unit vector has a nonzero monomial")
}
