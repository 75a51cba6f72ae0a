//! Representations of free groups into `SL(d, R)`: loading from generator
//! files, symmetric powers, ping-pong certificates and the builtin examples.

mod file;
mod pingpong;
mod symmetric;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{GeneratorSet, Letter};
use crate::linalg::{proximal_parts, unimodularize, ProjectivePoint, SquareMatrix, DEFAULT_GAP_TOL};

pub use file::{load_representation, parse_representation};
pub use pingpong::{verify_ping_pong, Neighborhood, PingPongReport, PingPongScheme, MIN_CERTIFIED_MARGIN};
pub use symmetric::{symmetric_power, symmetric_power_matrix, veronese_map};

/// How a representation was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepKind {
    Loaded,
    SymmetricPower { m: usize },
    Schottky,
}

/// A ping-pong certificate attached to a representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub scheme: PingPongScheme,
    pub margin: f64,
    /// True when the scheme certifies a base representation this one factors
    /// through injectively (symmetric powers).
    pub inherited: bool,
}

/// Generator images and their inverses, indexed by letter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Representation {
    gens: GeneratorSet,
    dim: usize,
    matrices: Vec<SquareMatrix>,
    kind: RepKind,
    certification: Option<Certification>,
}

impl Representation {
    /// Unimodularizes each generator and computes the inverses.
    pub fn new(gens: GeneratorSet, generators: Vec<SquareMatrix>, kind: RepKind) -> Result<Self> {
        if generators.len() != gens.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} generator labels but {} matrices",
                gens.rank(),
                generators.len()
            )));
        }
        let dim = generators.first().map(SquareMatrix::dim).unwrap_or(0);
        let mut matrices = Vec::with_capacity(2 * generators.len());
        for (label, g) in gens.labels().iter().zip(&generators) {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator `{label}` is {}x{}, expected {dim}x{dim}",
                    g.dim(),
                    g.dim()
                )));
            }
            let u = unimodularize(g).map_err(|_| Error::SingularGenerator(label.clone()))?;
            let inv = u.inverse().map_err(|_| Error::SingularGenerator(label.clone()))?;
            let residual = (&u * &inv).max_abs_diff(&SquareMatrix::identity(dim));
            if residual > 1e-10 * (1.0 + u.max_abs() * inv.max_abs()) {
                return Err(Error::SingularGenerator(format!("{label} (inverse residual {residual:e})")));
            }
            matrices.push(u);
            matrices.push(inv);
        }
        Ok(Self { gens, dim, matrices, kind, certification: None })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    #[inline]
    pub fn matrix(&self, l: Letter) -> &SquareMatrix {
        &self.matrices[l.index()]
    }

    /// Images of the generators (not their inverses).
    pub fn generator_matrices(&self) -> Vec<SquareMatrix> {
        self.matrices.iter().step_by(2).cloned().collect()
    }

    pub fn certification(&self) -> Option<&Certification> {
        self.certification.as_ref()
    }

    pub fn is_certified(&self) -> bool {
        self.certification.is_some()
    }

    /// Runs `verify_ping_pong` and attaches the certificate on success.
    pub fn certify(mut self, scheme: PingPongScheme) -> Result<Self> {
        let report = verify_ping_pong(&self, &scheme);
        if !report.certified {
            return Err(Error::NotCertified(report.violation.unwrap_or_default()));
        }
        self.certification = Some(Certification { scheme, margin: report.margin, inherited: false });
        Ok(self)
    }

    pub(crate) fn with_certification(mut self, cert: Option<Certification>) -> Self {
        self.certification = cert;
        self
    }

    /// `k ρ k⁻¹`, keeping the kind; the certificate is dropped unless `k` is orthogonal
    /// and `d = 2`, in which case the scheme is moved along.
    pub fn conjugated(&self, k: &SquareMatrix) -> Result<Self> {
        let k_inv = k.inverse()?;
        let gens = self.generator_matrices().iter().map(|g| &(k * g) * &k_inv).collect();
        let out = Representation::new(self.gens.clone(), gens, self.kind)?;
        let orthogonal = (&k.transpose() * k).max_abs_diff(&SquareMatrix::identity(self.dim)) < 1e-12;
        let cert = match (&self.certification, orthogonal) {
            (Some(c), true) if !c.inherited => {
                Some(Certification { scheme: c.scheme.transformed(k)?, margin: c.margin, inherited: false })
            }
            (Some(c), true) => Some(c.clone()),
            _ => None,
        };
        Ok(out.with_certification(cert))
    }
}

/// Attracting line of `g` and attracting line of `g⁻¹`.
pub fn fixed_points(g: &SquareMatrix) -> Result<(ProjectivePoint, ProjectivePoint)> {
    let plus = proximal_parts(g, DEFAULT_GAP_TOL)?.attract;
    let minus = proximal_parts(&g.inverse()?, DEFAULT_GAP_TOL)?.attract;
    Ok((plus, minus))
}

/// Radius of the ping-pong intervals of the reference pair.
pub const REFERENCE_RADIUS: f64 = 0.15;

/// The reference Schottky pair `a = diag(9, 1/9)`, `b = R(π/4) a R(−π/4)`,
/// certified with intervals of radius 0.15 around the four fixed directions.
pub fn schottky_reference() -> Result<Representation> {
    let a = SquareMatrix::diag(&[9.0, 1.0 / 9.0]);
    let r = SquareMatrix::rotation2(FRAC_PI_4);
    let b = &(&r * &a) * &SquareMatrix::rotation2(-FRAC_PI_4);
    let rep = Representation::new(GeneratorSet::standard(2), vec![a, b], RepKind::Schottky)?;
    let centers = [0.0, FRAC_PI_2, FRAC_PI_4, 3.0 * FRAC_PI_4];
    let scheme = PingPongScheme::new(
        centers
            .iter()
            .map(|&t| Neighborhood { center: ProjectivePoint::from_angle(t), radius: REFERENCE_RADIUS })
            .collect(),
    );
    rep.certify(scheme)
}

/// `schottky_reference` or `sym_power:<m>` (the `m`-th symmetric power of it).
pub fn builtin_representation(name: &str) -> Result<Representation> {
    let name = name.trim();
    if name == "schottky_reference" {
        return schottky_reference();
    }
    if let Some(m) = name.strip_prefix("sym_power:") {
        let m: usize = m.parse().map_err(|_| Error::UnknownBuiltin(name.to_string()))?;
        if m == 0 {
            return Err(Error::UnknownBuiltin(name.to_string()));
        }
        return symmetric_power(&schottky_reference()?, m);
    }
    Err(Error::UnknownBuiltin(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_is_certified() {
        let rep = schottky_reference().unwrap();
        assert!(rep.is_certified());
        assert!(rep.certification().unwrap().margin > MIN_CERTIFIED_MARGIN);
        assert_eq!(rep.dim(), 2);
        assert_eq!(rep.generators().rank(), 2);
    }

    #[test]
    fn builtins() {
        let s2 = builtin_representation("sym_power:2").unwrap();
        assert_eq!(s2.dim(), 3);
        assert!(s2.certification().unwrap().inherited);
        assert!(matches!(builtin_representation("nope"), Err(Error::UnknownBuiltin(_))));
        assert!(matches!(builtin_representation("sym_power:0"), Err(Error::UnknownBuiltin(_))));
    }

    #[test]
    fn inverses_are_consistent() {
        let rep = builtin_representation("sym_power:3").unwrap();
        for l in rep.generators().letters() {
            let p = rep.matrix(l) * rep.matrix(l.inverse());
            assert!(p.max_abs_diff(&SquareMatrix::identity(4)) < 1e-10);
        }
    }

    #[test]
    fn fixed_points_examples() {
        let (p, m) = fixed_points(&SquareMatrix::diag(&[3.0, 1.0 / 3.0])).unwrap();
        assert!(p.distance(&ProjectivePoint::basis(2, 0)) < 1e-14);
        assert!(m.distance(&ProjectivePoint::basis(2, 1)) < 1e-14);
        let cat = SquareMatrix::from_rows(&[[2.0, 1.0], [1.0, 1.0]]).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let (p, m) = fixed_points(&cat).unwrap();
        assert!(p.distance(&ProjectivePoint::new(&[phi, 1.0]).unwrap()) < 1e-12);
        assert!(m.distance(&ProjectivePoint::new(&[1.0, -phi]).unwrap()) < 1e-12);
        assert!(matches!(fixed_points(&SquareMatrix::rotation2(0.7)), Err(Error::NotProximal { .. })));
    }

    #[test]
    fn fixed_points_of_powers() {
        let rep = schottky_reference().unwrap();
        let g = rep.generators().parse_word("a b⁻¹ a a b").unwrap();
        let m = crate::groups::evaluate(&rep, &g).unwrap();
        let (p, q) = fixed_points(&m).unwrap();
        for n in [2, 3] {
            let mn = crate::groups::evaluate(&rep, &g.pow(n)).unwrap();
            let (pn, qn) = fixed_points(&mn).unwrap();
            assert!(p.distance(&pn) < 1e-8);
            assert!(q.distance(&qn) < 1e-8);
        }
    }

    #[test]
    fn orthogonal_conjugation_keeps_certificate() {
        let rep = schottky_reference().unwrap();
        let k = SquareMatrix::rotation2(0.3);
        let c = rep.conjugated(&k).unwrap();
        assert!(c.is_certified());
        let report = verify_ping_pong(&c, &c.certification().unwrap().scheme);
        assert!(report.certified);
    }
}
