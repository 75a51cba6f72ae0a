use proptest::prelude::*;

use orbitcount_core::groups::{cyclic_reduce, evaluate, reduce, GeneratorSet, Letter, Word};
use orbitcount_core::linalg::{
    cartan_projection, gromov_product, iwasawa_cocycle, jordan_projection, opposition_involution, unimodularize,
    FlagFrame, ProjectiveCovector, ProjectivePoint, SquareMatrix,
};
use orbitcount_core::reps::{schottky_reference, symmetric_power_matrix};
use orbitcount_core::thermo::{period_arithmeticity, Verdict};

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..4, 0..max_len)
        .prop_map(|v| Word::new(v.into_iter().map(Letter::from_index).collect()))
}

fn sl(d: usize) -> impl Strategy<Value = SquareMatrix> {
    prop::collection::vec(-2.0f64..2.0, d * d).prop_filter_map("singular", move |v| {
        let m = SquareMatrix::new(d, v).ok()?;
        if m.det().abs() < 0.05 {
            return None;
        }
        unimodularize(&m).ok()
    })
}

fn unit(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, d).prop_filter("zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-2)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn reduce_is_idempotent_and_respects_inverse(w in word(12)) {
        let r = reduce(&w);
        prop_assert!(r.is_reduced());
        prop_assert_eq!(reduce(&r), r.clone());
        prop_assert!(reduce(&w.mul(&w.inverse())).is_empty());
    }

    #[test]
    fn cyclic_reduce_is_a_conjugation(w in word(10)) {
        let r = reduce(&w);
        let (core, c) = cyclic_reduce(&r);
        prop_assert_eq!(reduce(&c.mul(&core.to_word()).mul(&c.inverse())), r);
    }

    #[test]
    fn format_parse_roundtrip(w in word(10)) {
        let g = GeneratorSet::standard(2);
        let w = reduce(&w);
        prop_assert_eq!(g.parse_word(&g.format(&w)).unwrap(), w);
    }

    #[test]
    fn evaluation_is_a_homomorphism(u in word(6), v in word(6)) {
        let rep = schottky_reference().unwrap();
        let lhs = evaluate(&rep, &u.mul(&v)).unwrap();
        let (a, b) = (evaluate(&rep, &u).unwrap(), evaluate(&rep, &v).unwrap());
        let rhs = &a * &b;
        // cancellation at the junction costs up to ε·‖ρ(u)‖·‖ρ(v)‖
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + a.max_abs() * b.max_abs()));
    }

    #[test]
    fn symmetric_power_is_multiplicative(a in sl(2), b in sl(2), m in 1usize..5) {
        let lhs = symmetric_power_matrix(&(&a * &b), m).unwrap();
        let rhs = &symmetric_power_matrix(&a, m).unwrap() * &symmetric_power_matrix(&b, m).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10 * (1.0 + rhs.max_abs()));
        let j = jordan_projection(&symmetric_power_matrix(&a, m).unwrap());
        if let (Ok(j), Ok(base)) = (j, jordan_projection(&a)) {
            prop_assert!((j.coords()[0] - m as f64 * base.coords()[0]).abs() < 1e-8);
        }
    }

    #[test]
    fn cartan_projection_is_dominant_and_traceless(g in sl(3)) {
        let a = cartan_projection(&g);
        prop_assert!(a.is_dominant());
        prop_assert!(a.sum().abs() < 1e-10);
        let ai = cartan_projection(&g.inverse().unwrap());
        prop_assert!(opposition_involution(&a).max_abs_diff(&ai) < 1e-10);
    }

    #[test]
    fn iwasawa_cocycle_identity(g in sl(3), h in sl(3), f in sl(3)) {
        let x = FlagFrame::from_basis(&f).unwrap();
        let lhs = iwasawa_cocycle(&(&g * &h), &x).unwrap();
        let a = iwasawa_cocycle(&g, &x.act(&h).unwrap()).unwrap();
        let b = iwasawa_cocycle(&h, &x).unwrap();
        for i in 0..3 {
            prop_assert!((lhs.coords()[i] - a.coords()[i] - b.coords()[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn gromov_product_is_nonpositive(t in unit(3), v in unit(3)) {
        let theta = ProjectiveCovector::new(&t).unwrap();
        let x = ProjectivePoint::new(&v).unwrap();
        if let Ok(gp) = gromov_product(&theta, &x) {
            prop_assert!(gp <= 1e-15);
        }
    }

    #[test]
    fn integer_multiples_form_a_lattice(g in 0.1f64..3.0, ns in prop::collection::vec(1u32..40, 2..8)) {
        let periods: Vec<f64> = ns.iter().map(|&n| n as f64 * g).collect();
        let report = period_arithmeticity(&periods, 1e-7).unwrap();
        match report.verdict {
            Verdict::Lattice { generator } => {
                let k = ns.iter().fold(0u32, |a, &b| gcd(a, b));
                prop_assert!((generator - k as f64 * g).abs() < 1e-9, "{generator} vs {k}·{g}");
            }
            Verdict::NonArithmetic => prop_assert!(false, "{periods:?} -> {report:?}"),
        }
    }
}
