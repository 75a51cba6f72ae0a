use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cutoff for [`period_arithmeticity`].
pub const DEFAULT_ARITHMETICITY_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Lattice { generator: f64 },
    NonArithmetic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArithmeticityReport {
    pub verdict: Verdict,
    /// Last gcd candidate of the cascade.
    pub candidate: f64,
    /// Largest distance from a period to the nearest multiple of the candidate.
    pub remainder: f64,
}

/// Real gcd of `periods` by a Euclidean cascade that carries an error bound
/// for every remainder. Inputs carry error `tol`; a remainder below its own
/// bound counts as zero. The verdict is `Lattice(g)` when every period lies
/// within `tol` of a multiple of the (refitted) candidate `g ≥ tol`.
pub fn period_arithmeticity(periods: &[f64], tol: f64) -> Result<ArithmeticityReport> {
    let ps: Vec<f64> = periods.iter().copied().filter(|p| *p > 0.0 && p.is_finite()).collect();
    if ps.len() < 2 {
        return Err(Error::TooFewPeriods(ps.len()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (mut g, mut eg) = (ps[0], tol);
    for &p in &ps[1..] {
        let ((mut a, mut ea), (mut b, mut eb)) = if p >= g { ((p, tol), (g, eg)) } else { ((g, eg), (p, tol)) };
        // e_{k+1} = e_{k−1} + q_k e_k bounds the accumulated error of r_{k+1}
        while b > eb {
            let q = (a / b).floor();
            let r = (a - q * b).max(0.0);
            let er = ea + q * eb;
            (a, ea, b, eb) = (b, eb, r, er);
        }
        (g, eg) = (a, ea);
    }
    let multiples: Vec<f64> = ps.iter().map(|p| (p / g).round().max(1.0)).collect();
    let refit =
        ps.iter().zip(&multiples).map(|(p, n)| p * n).sum::<f64>() / multiples.iter().map(|n| n * n).sum::<f64>();
    let remainder = ps.iter().zip(&multiples).map(|(p, n)| (p - n * refit).abs()).fold(0.0, f64::max);
    let verdict =
        if refit >= tol && remainder <= tol { Verdict::Lattice { generator: refit } } else { Verdict::NonArithmetic };
    Ok(ArithmeticityReport { verdict, candidate: refit, remainder })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_are_a_lattice() {
        let r = period_arithmeticity(&[1.0, 2.0, 3.0], 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Lattice { generator: 1.0 });
        assert_eq!(r.remainder, 0.0);
    }

    #[test]
    fn noisy_lattice() {
        let ps: Vec<f64> = [3.0, 5.0, 7.0, 12.0].iter().map(|k| k * 0.37 + 1e-12 * k).collect();
        match period_arithmeticity(&ps, 1e-9).unwrap().verdict {
            Verdict::Lattice { generator } => assert!((generator - 0.37).abs() < 1e-9),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn irrational_ratio() {
        let r = period_arithmeticity(&[1.0, 2f64.sqrt()], 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::NonArithmetic);
        assert!(r.remainder > 1e-9);
    }

    #[test]
    fn too_few() {
        assert!(matches!(period_arithmeticity(&[1.0], 1e-9), Err(Error::TooFewPeriods(1))));
        assert!(matches!(period_arithmeticity(&[1.0, -2.0], 1e-9), Err(Error::TooFewPeriods(1))));
    }
}
