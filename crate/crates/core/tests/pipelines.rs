use orbitcount_core::cocycles::LinearFunctional;
use orbitcount_core::counting::{
    factorization_deficit, fit_exponent, norm_series, pair_empirical_measure, phi_series, primitive_spectral_series,
    CountOptions, EnumerationMode, Projection, DEFAULT_WINDOW_FRACTION,
};
use orbitcount_core::groups::{enumerate_primitive_classes, evaluate, sphere_size};
use orbitcount_core::linalg::{jordan_projection, NormKind};
use orbitcount_core::reps::{builtin_representation, parse_representation, schottky_reference};
use orbitcount_core::thermo::{
    entropy_root, norm_potential, periodic_orbit_sum, pressure, schottky_shift, DepthKPotential,
};
use orbitcount_core::Error;

fn opts(workers: Option<usize>) -> CountOptions {
    CountOptions { workers, ..Default::default() }
}

#[test]
fn series_do_not_depend_on_worker_count() {
    let rep = schottky_reference().unwrap();
    let a = norm_series(&rep, 8, NormKind::Euclidean, &opts(Some(1))).unwrap();
    let b = norm_series(&rep, 8, NormKind::Euclidean, &opts(Some(3))).unwrap();
    assert_eq!(a, b);
    let a = primitive_spectral_series(&rep, 8, &opts(Some(1))).unwrap();
    let b = primitive_spectral_series(&rep, 8, &opts(Some(2))).unwrap();
    assert_eq!(a, b);
    let p = pair_empirical_measure(&rep, 7, 10.0, 2, Some(1)).unwrap();
    let q = pair_empirical_measure(&rep, 7, 10.0, 2, Some(4)).unwrap();
    assert_eq!(p, q);
}

#[test]
fn ball_series_has_every_element() {
    let rep = schottky_reference().unwrap();
    let s = norm_series(&rep, 6, NormKind::L1, &CountOptions::default()).unwrap();
    let total: u64 = (0..=6).map(|k| sphere_size(2, k)).sum();
    assert_eq!(s.len() as u64, total);
    assert_eq!(s.mode, EnumerationMode::Certified);
    assert_eq!(s.thresholds()[0], 0.0);
    assert!(s.t_max() <= s.truncation.raw_max);
}

#[test]
fn norms_give_the_same_exponent() {
    let rep = schottky_reference().unwrap();
    let h: Vec<f64> = [NormKind::Euclidean, NormKind::L1, NormKind::Linf]
        .into_iter()
        .map(|n| {
            fit_exponent(&norm_series(&rep, 11, n, &CountOptions::default()).unwrap(), DEFAULT_WINDOW_FRACTION)
                .unwrap()
                .h_hat
        })
        .collect();
    for x in &h {
        assert!((x - h[0]).abs() / h[0] < 0.03, "{h:?}");
    }
}

#[test]
fn uncertified_input_is_labelled() {
    let text = "d 2\ngen a\n9 0\n0 1/9\ngen b\n5 4\n4 5\n";
    let rep = parse_representation(text).unwrap();
    let s = norm_series(&rep, 4, NormKind::Euclidean, &CountOptions::default()).unwrap();
    assert_eq!(s.mode, EnumerationMode::Uncertified);
    let d = norm_series(&rep, 4, NormKind::Euclidean, &CountOptions { dedup_tol: Some(1e-8), ..Default::default() })
        .unwrap();
    assert_eq!(d.mode, EnumerationMode::Approximate);
    assert!(matches!(pair_empirical_measure(&rep, 3, 5.0, 1, None), Err(Error::NotCertified(_))));
}

#[test]
fn phi_series_refuses_a_functional_outside_the_dual_cone() {
    let rep = builtin_representation("sym_power:2").unwrap();
    let bad = LinearFunctional::new(vec![-1.0, 0.0, 1.0]);
    assert!(matches!(
        phi_series(&rep, 4, &bad, Projection::Cartan, &CountOptions::default()),
        Err(Error::InteriorUncertified { .. })
    ));
    let wrong_dim = LinearFunctional::first_minus_last(2);
    assert!(matches!(
        phi_series(&rep, 4, &wrong_dim, Projection::JordanPrimitive, &CountOptions::default()),
        Err(Error::DimensionMismatch(_))
    ));
}

#[test]
fn jordan_phi_series_is_four_times_the_spectral_series() {
    let base = schottky_reference().unwrap();
    let sym = builtin_representation("sym_power:2").unwrap();
    let phi = LinearFunctional::first_minus_last(3);
    let s = phi_series(&sym, 7, &phi, Projection::JordanPrimitive, &CountOptions::default()).unwrap();
    let b = primitive_spectral_series(&base, 7, &CountOptions::default()).unwrap();
    assert_eq!(s.len(), b.len());
    for (x, y) in s.thresholds().iter().zip(b.thresholds()) {
        assert!((x - 4.0 * y).abs() < 1e-8 * (1.0 + x.abs()));
    }
}

#[test]
fn deficit_shrinks_with_t() {
    let rep = schottky_reference().unwrap();
    let small = factorization_deficit(&pair_empirical_measure(&rep, 9, 10.0, 1, None).unwrap()).unwrap();
    let large = factorization_deficit(&pair_empirical_measure(&rep, 9, 17.0, 1, None).unwrap()).unwrap();
    assert!(large < small, "{small} {large}");
}

#[test]
fn birkhoff_sums_track_top_eigenvalues() {
    let rep = schottky_reference().unwrap();
    let shift = schottky_shift(rep.generators());
    for depth in [4usize, 6] {
        let pot = norm_potential(&rep, &shift, depth).unwrap();
        let var = pot.variation();
        for class in enumerate_primitive_classes(rep.generators(), 8) {
            let cycle: Vec<usize> = class.letters().iter().map(|l| l.index()).collect();
            let birkhoff = pot.cyclic_sum(&cycle).unwrap();
            let lam = jordan_projection(&evaluate(&rep, &class.to_word()).unwrap()).unwrap().coords()[0];
            assert!((birkhoff - lam).abs() < 2.0 * var, "depth {depth}: {birkhoff} vs {lam}, variation {var}");
        }
    }
}

#[test]
fn refinement_moves_the_root_less_than_the_variation() {
    let rep = schottky_reference().unwrap();
    let shift = schottky_shift(rep.generators());
    let mut prev: Option<(f64, f64)> = None;
    let mut variations = Vec::new();
    for depth in 2..=7 {
        let pot = norm_potential(&rep, &shift, depth).unwrap();
        let h = entropy_root(&shift, &pot).unwrap();
        if let Some((h0, v0)) = prev {
            assert!((h - h0).abs() <= 2.0 * v0, "depth {depth}: {h0} -> {h}, variation {v0}");
        }
        variations.push(pot.variation());
        prev = Some((h, pot.variation()));
    }
    // geometric decay
    for w in variations.windows(2) {
        assert!(w[1] < 0.5 * w[0], "{variations:?}");
    }
}

#[test]
fn finite_n_pressure_converges() {
    let rep = schottky_reference().unwrap();
    let shift = schottky_shift(rep.generators());
    let pot = norm_potential(&rep, &shift, 3).unwrap();
    let s = 0.4;
    let z = periodic_orbit_sum(&shift, &pot, s, 40).unwrap();
    assert!((z.ln() / 40.0 - pressure(&shift, &pot, s)).abs() < 1e-3);
}

#[test]
fn trace_counts_closed_blocks() {
    let rep = schottky_reference().unwrap();
    let shift = schottky_shift(rep.generators());
    for depth in 1..=3 {
        let pot = DepthKPotential::constant(&shift, depth, 0.3).unwrap();
        for n in 1..=8 {
            let z = periodic_orbit_sum(&shift, &pot, 0.0, n).unwrap();
            assert_eq!(z, shift.count_closed(n) as f64, "depth {depth} n {n}");
        }
    }
}

#[test]
fn spectral_series_matches_direct_evaluation() {
    let rep = schottky_reference().unwrap();
    let s = primitive_spectral_series(&rep, 5, &CountOptions::default()).unwrap();
    let mut direct: Vec<f64> = enumerate_primitive_classes(rep.generators(), 5)
        .iter()
        .map(|c| jordan_projection(&evaluate(&rep, &c.to_word()).unwrap()).unwrap().coords()[0])
        .collect();
    direct.sort_by(f64::total_cmp);
    assert_eq!(s.len(), direct.len());
    for (a, b) in s.thresholds().iter().zip(&direct) {
        assert!((a - b).abs() < 1e-10);
    }
}
