use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::eigen::{eigenvalues, Eigenvalue};
use super::matrix::SquareMatrix;
use super::projective::{gromov_product, ProjectiveCovector, ProjectivePoint};

/// Default log-modulus gap below which a matrix is treated as not proximal.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;

/// Attracting line `g₊` and repelling hyperplane `g₋ = ker θ` of a proximal matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProximalParts {
    pub attract: ProjectivePoint,
    pub repel: ProjectiveCovector,
    /// The (real) eigenvalue of maximal modulus, with its sign.
    pub top_eigenvalue: f64,
    /// `log|μ₁| − log|μ₂|`.
    pub gap: f64,
}

pub fn proximal_parts(g: &SquareMatrix, gap_tol: f64) -> Result<ProximalParts> {
    let mut ev = eigenvalues(g)?;
    ev.sort_by(|a, b| b.modulus().total_cmp(&a.modulus()));
    let gap = if ev.len() < 2 { f64::INFINITY } else { ev[0].modulus().ln() - ev[1].modulus().ln() };
    if !(gap >= gap_tol) {
        return Err(Error::NotProximal { gap });
    }
    let Eigenvalue { re: top, .. } = ev[0];
    let attract = ProjectivePoint::new(&inverse_iteration(g, top)?)?;
    let repel = ProjectiveCovector::new(&inverse_iteration(&g.transpose(), top)?)?;
    Ok(ProximalParts { attract, repel, top_eigenvalue: top, gap })
}

/// Eigenvector of `g` for the simple real eigenvalue `mu` by shifted inverse iteration.
pub(crate) fn inverse_iteration(g: &SquareMatrix, mu: f64) -> Result<Vec<f64>> {
    let d = g.dim();
    let scale = g.max_abs();
    let gs = g.scale(1.0 / scale);
    let mut shift = mu / scale;
    let lu = loop {
        let mut m = gs.clone();
        for i in 0..d {
            m.set(i, i, m.get(i, i) - shift);
        }
        if let Some(lu) = m.lu() {
            break lu;
        }
        // exactly singular: nudge the shift off the eigenvalue
        shift += f64::EPSILON * (1.0 + shift.abs()) * 16.0;
    };
    let mut x: Vec<f64> = (0..d).map(|i| 1.0 + 0.37 * i as f64).collect();
    for _ in 0..4 {
        let y = lu.solve(&x);
        let n = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NoConvergence);
        }
        x = y.iter().map(|v| v / n).collect();
    }
    Ok(x)
}

/// Deterministic sample of unit vectors whose directions cover the sphere
/// with angular resolution at most `resolution`.
pub(crate) fn sphere_grid(dim: usize, resolution: f64) -> Vec<Vec<f64>> {
    if dim == 2 {
        // projective line: angles in [0, π)
        let n = (std::f64::consts::PI / resolution).ceil() as usize;
        return (0..n)
            .map(|k| {
                let t = std::f64::consts::PI * k as f64 / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
    }
    // faces of the cube [-1,1]^d projected radially (a 1-Lipschitz map)
    let step = 1.8 * resolution / ((dim - 1) as f64).sqrt();
    let per_axis = (2.0 / step).ceil() as usize + 1;
    let coords: Vec<f64> = (0..per_axis).map(|k| -1.0 + 2.0 * k as f64 / (per_axis - 1) as f64).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; dim - 1];
    for axis in 0..dim {
        // one face per axis suffices projectively
        loop {
            let mut v = Vec::with_capacity(dim);
            let mut it = idx.iter();
            for a in 0..dim {
                if a == axis {
                    v.push(1.0);
                } else {
                    v.push(coords[*it.next().unwrap()]);
                }
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            out.push(v.into_iter().map(|x| x / n).collect());
            let mut p = 0;
            loop {
                if p == dim - 1 {
                    break;
                }
                idx[p] += 1;
                if idx[p] < per_axis {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == dim - 1 {
                break;
            }
        }
    }
    out
}

/// Checks `(r, ε)`-proximality: proximal, `exp 𝒢(g₋, g₊) > r`, and every line at
/// angle more than `ε` from `g₋` is mapped within `ε` of `g₊`. The contraction
/// condition is checked on a grid of angular resolution `ε/4`.
pub fn is_r_eps_proximal(g: &SquareMatrix, r: f64, eps: f64) -> bool {
    let Ok(parts) = proximal_parts(g, DEFAULT_GAP_TOL) else {
        return false;
    };
    match gromov_product(&parts.repel, &parts.attract) {
        Ok(gp) if gp.exp() > r => {}
        _ => return false,
    }
    sphere_grid(g.dim(), eps / 4.0).iter().all(|v| {
        let p = ProjectivePoint::new(v).expect("unit vector");
        if parts.repel.angle_to(&p) <= eps {
            return true;
        }
        match p.act(g) {
            Ok(image) => image.distance(&parts.attract) <= eps,
            Err(_) => false,
        }
    })
}
