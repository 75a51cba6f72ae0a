//! The norm cocycle `β₁`, its dual `β̄₁`, the Gromov product of the pair, the
//! vector (Iwasawa) cocycle, limit-cone samples and dual-cone checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{enumerate_primitive_classes, evaluate, evaluate_pair, Word};
use crate::linalg::{
    gromov_product, iwasawa_cocycle_pair, jordan_projection_pair, operator_norm_log, proximal_parts, CartanVector,
    FlagFrame, NormKind, ProjectiveCovector, ProjectivePoint, SquareMatrix, DEFAULT_GAP_TOL,
};
use crate::reps::Representation;

/// `log ‖g v‖ / ‖v‖` for `v` a representative of `x`.
pub fn beta1_matrix(g: &SquareMatrix, x: &ProjectivePoint, norm: NormKind) -> f64 {
    let v = x.rep();
    (norm.vector_norm(&g.apply(v)) / norm.vector_norm(v)).ln()
}

/// `log ‖θ ∘ g⁻¹‖ / ‖θ‖` in the dual norm, given `g⁻¹`.
pub fn beta1_dual_matrix(g_inv: &SquareMatrix, theta: &ProjectiveCovector, norm: NormKind) -> f64 {
    let dual = norm.dual();
    let th = theta.rep();
    (dual.vector_norm(&g_inv.apply_left(th)) / dual.vector_norm(th)).ln()
}

/// `β₁(w, x) = log ‖ρ(w) v‖ / ‖v‖`.
pub fn beta1(rep: &Representation, w: &Word, x: &ProjectivePoint, norm: NormKind) -> Result<f64> {
    check_dim(rep, x.dim())?;
    Ok(beta1_matrix(&evaluate(rep, w)?, x, norm))
}

/// `β̄₁(w, θ) = log ‖θ ∘ ρ(w)⁻¹‖ / ‖θ‖`.
pub fn beta1_dual(rep: &Representation, w: &Word, theta: &ProjectiveCovector, norm: NormKind) -> Result<f64> {
    check_dim(rep, theta.dim())?;
    Ok(beta1_dual_matrix(&evaluate(rep, &w.inverse())?, theta, norm))
}

/// `[x, y] = 𝒢(η(x), ξ(y))` with the hyperplane `η(x)` and the line `ξ(y)` given.
pub fn pair_gromov_product(eta_x: &ProjectiveCovector, xi_y: &ProjectivePoint) -> Result<f64> {
    gromov_product(eta_x, xi_y)
}

/// `σ(ρ(w), x)`.
pub fn vector_cocycle(rep: &Representation, w: &Word, x: &FlagFrame) -> Result<CartanVector> {
    check_dim(rep, x.dim())?;
    let (g, g_inv) = evaluate_pair(rep, w)?;
    iwasawa_cocycle_pair(&g, &g_inv, x)
}

/// `log ‖g‖ − λ₁(g) + 𝒢(g₋, g₊)`, which is small for strongly proximal `g`.
pub fn benoist_defect(g: &SquareMatrix) -> Result<f64> {
    let parts = proximal_parts(g, DEFAULT_GAP_TOL)?;
    let gp = gromov_product(&parts.repel, &parts.attract)?;
    Ok(operator_norm_log(g, NormKind::Euclidean) - parts.top_eigenvalue.abs().ln() + gp)
}

fn check_dim(rep: &Representation, d: usize) -> Result<()> {
    if rep.dim() != d {
        return Err(Error::DimensionMismatch(format!("representation has dimension {}, argument {d}", rep.dim())));
    }
    Ok(())
}

/// A linear form on the Cartan subspace, stored as given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFunctional {
    coeffs: Vec<f64>,
}

impl LinearFunctional {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// `v ↦ v₁ − v_d`.
    pub fn first_minus_last(dim: usize) -> Self {
        let mut coeffs = vec![0.0; dim];
        coeffs[0] = 1.0;
        coeffs[dim - 1] -= 1.0;
        Self { coeffs }
    }

    /// `v ↦ v₁`.
    pub fn first(dim: usize) -> Self {
        let mut coeffs = vec![0.0; dim];
        coeffs[0] = 1.0;
        Self { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, v: &CartanVector) -> f64 {
        v.dot(&self.coeffs)
    }
}

/// Unit rays `λ(γ)/‖λ(γ)‖` over primitive classes, with the class lengths.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LimitConeSample {
    pub rays: Vec<CartanVector>,
    pub word_lengths: Vec<usize>,
}

impl LimitConeSample {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Largest angle between a sampled ray and the unit vector along `dir`.
    pub fn max_deviation_from(&self, dir: &[f64]) -> f64 {
        let n = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.rays
            .iter()
            .map(|r| {
                let chord = r.coords().iter().zip(dir).map(|(a, b)| (a - b / n).powi(2)).sum::<f64>().sqrt();
                2.0 * (0.5 * chord).min(1.0).asin()
            })
            .fold(0.0, f64::max)
    }
}

/// Jordan projections below this norm count as zero.
const ZERO_JORDAN: f64 = 1e-9;

/// Samples the limit cone from all primitive classes of length `≤ max_len`.
pub fn limit_cone_sample(rep: &Representation, max_len: usize) -> Result<LimitConeSample> {
    let classes = enumerate_primitive_classes(rep.generators(), max_len);
    let rays = classes
        .par_iter()
        .map(|c| {
            let w = c.to_word();
            let g = evaluate(rep, &w)?;
            let gi = evaluate(rep, &w.inverse())?;
            let lam = jordan_projection_pair(&g, &gi)?;
            Ok(if lam.norm2() > ZERO_JORDAN { lam.unit().map(|u| (u, c.len())) } else { None })
        })
        .collect::<Result<Vec<_>>>()?;
    let (rays, word_lengths) = rays.into_iter().flatten().unzip();
    Ok(LimitConeSample { rays, word_lengths })
}

/// Outcome of [`functional_interior_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorCheck {
    pub passed: bool,
    /// `min φ(ray)` over the sample (`+∞` when empty).
    pub min_value: f64,
}

/// True iff the sample is nonempty and `φ(ray) ≥ margin` for every ray.
pub fn functional_interior_check(
    phi: &LinearFunctional,
    sample: &LimitConeSample,
    margin: f64,
) -> Result<InteriorCheck> {
    if let Some(r) = sample.rays.first() {
        if r.dim() != phi.dim() {
            return Err(Error::DimensionMismatch(format!(
                "functional of dim {} on rays of dim {}",
                phi.dim(),
                r.dim()
            )));
        }
    }
    let min_value = sample.rays.iter().map(|r| phi.eval(r)).fold(f64::INFINITY, f64::min);
    Ok(InteriorCheck { passed: !sample.is_empty() && min_value >= margin, min_value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GeneratorSet;
    use crate::linalg::jordan_projection;
    use crate::reps::{builtin_representation, schottky_reference, RepKind};
    use std::f64::consts::LN_2;

    fn diag3() -> Representation {
        Representation::new(GeneratorSet::standard(1), vec![SquareMatrix::diag(&[3.0, 1.0 / 3.0])], RepKind::Loaded)
            .unwrap()
    }

    #[test]
    fn beta1_examples() {
        let rep = diag3();
        let x = ProjectivePoint::new(&[0.3, 0.7]).unwrap();
        assert_eq!(beta1(&rep, &Word::empty(), &x, NormKind::Euclidean).unwrap(), 0.0);
        let a = rep.generators().parse_word("a").unwrap();
        let e1 = ProjectivePoint::basis(2, 0);
        assert!((beta1(&rep, &a, &e1, NormKind::Euclidean).unwrap() - 3f64.ln()).abs() < 1e-15);
        let e2 = ProjectiveCovector::basis(2, 1);
        assert!((beta1_dual(&rep, &a, &e2, NormKind::Euclidean).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert_eq!(beta1_dual(&rep, &Word::empty(), &e2, NormKind::L1).unwrap(), 0.0);
    }

    #[test]
    fn periods_on_ab() {
        let rep = schottky_reference().unwrap();
        let w = rep.generators().parse_word("a b").unwrap();
        let g = evaluate(&rep, &w).unwrap();
        let parts = proximal_parts(&g, DEFAULT_GAP_TOL).unwrap();
        let lam = jordan_projection(&g).unwrap().coords()[0];
        assert!((beta1(&rep, &w, &parts.attract, NormKind::Euclidean).unwrap() - lam).abs() < 1e-8);
        let gi = g.inverse().unwrap();
        let lam_inv = jordan_projection(&gi).unwrap().coords()[0];
        // β̄₁ is evaluated at the hyperplane η(γ₊), the repelling hyperplane of γ⁻¹
        let eta = proximal_parts(&gi, DEFAULT_GAP_TOL).unwrap().repel;
        assert!((beta1_dual(&rep, &w, &eta, NormKind::Euclidean).unwrap() - lam_inv).abs() < 1e-8);
    }

    #[test]
    fn gromov_product_examples() {
        let e1 = ProjectiveCovector::basis(2, 0);
        assert_eq!(pair_gromov_product(&e1, &ProjectivePoint::basis(2, 0)).unwrap(), 0.0);
        let d = ProjectivePoint::new(&[1.0, 1.0]).unwrap();
        assert!((pair_gromov_product(&e1, &d).unwrap() + 0.5 * LN_2).abs() < 1e-15);
    }

    #[test]
    fn vector_cocycle_examples() {
        let rep = diag3();
        let z = vector_cocycle(&rep, &Word::empty(), &FlagFrame::standard(2)).unwrap();
        assert!(z.coords().iter().all(|c| *c == 0.0));
        let a = rep.generators().parse_word("a").unwrap();
        let s = vector_cocycle(&rep, &a, &FlagFrame::standard(2)).unwrap();
        assert!((s.coords()[0] - 3f64.ln()).abs() < 1e-15 && (s.coords()[1] + 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn sym2_cone_is_a_single_ray() {
        let rep = builtin_representation("sym_power:2").unwrap();
        let sample = limit_cone_sample(&rep, 5).unwrap();
        assert!(!sample.is_empty());
        assert!(sample.max_deviation_from(&[1.0, 0.0, -1.0]) < 1e-6);
        let phi = LinearFunctional::new(vec![1.0, -1.0, 0.0]);
        let check = functional_interior_check(&phi, &sample, 0.5).unwrap();
        assert!(check.passed);
        assert!((check.min_value - 0.5f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn rank_one_and_elliptic_cones() {
        let rep =
            Representation::new(GeneratorSet::standard(1), vec![SquareMatrix::diag(&[2.0, 1.0, 0.5])], RepKind::Loaded)
                .unwrap();
        let sample = limit_cone_sample(&rep, 4).unwrap();
        assert_eq!(sample.len(), 2);
        assert!(sample.max_deviation_from(&[1.0, 0.0, -1.0]) < 1e-12);
        let rot = Representation::new(GeneratorSet::standard(1), vec![SquareMatrix::rotation2(0.9)], RepKind::Loaded)
            .unwrap();
        let empty = limit_cone_sample(&rot, 4).unwrap();
        assert!(empty.is_empty());
        let check = functional_interior_check(&LinearFunctional::first_minus_last(2), &empty, 0.0).unwrap();
        assert!(!check.passed);
    }

    #[test]
    fn functional_checks() {
        let rep = schottky_reference().unwrap();
        let sample = limit_cone_sample(&rep, 4).unwrap();
        let check = functional_interior_check(&LinearFunctional::first_minus_last(2), &sample, 0.0).unwrap();
        assert!(check.passed && check.min_value > 0.0);
        let zero = functional_interior_check(&LinearFunctional::new(vec![0.0, 0.0]), &sample, 1e-3).unwrap();
        assert!(!zero.passed);
        assert!(functional_interior_check(&LinearFunctional::new(vec![1.0, 0.0, 0.0]), &sample, 0.0).is_err());
    }

    #[test]
    fn benoist_defect_is_small_for_long_words() {
        let rep = schottky_reference().unwrap();
        let w = rep.generators().parse_word("a b a⁻¹ b a b b").unwrap();
        let d = benoist_defect(&evaluate(&rep, &w).unwrap()).unwrap();
        assert!(d.abs() < 1e-3, "{d}");
    }
}
