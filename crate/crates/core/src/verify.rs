//! End-to-end checks that tie the pipelines together. Each check returns a
//! [`CriterionOutcome`] with the numbers it compared, so a failure can be read
//! off the report without rerunning anything.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cocycles::{
    benoist_defect, beta1_dual_matrix, beta1_matrix, functional_interior_check, limit_cone_sample, LinearFunctional,
};
use crate::counting::{
    cartan_distance_series, factorization_deficit, fit_exponent, fold_ball, norm_series, pair_empirical_measure,
    phi_series, prime_orbit_ratio_curve, primitive_spectral_series, with_workers, CountOptions, CountSeries,
    Projection, DEFAULT_WINDOW_FRACTION, RATIO_POINTS,
};
use crate::error::{Error, Result};
use crate::groups::{enumerate_primitive_classes, evaluate, evaluate_pair, Letter, Word};
use crate::linalg::{
    gromov_product, iwasawa_cocycle_pair, jordan_projection_pair, opposition_involution, proximal_parts, CartanVector,
    FlagFrame, NormKind, ProjectiveCovector, ProjectivePoint, SquareMatrix, DEFAULT_GAP_TOL,
};
use crate::reps::{builtin_representation, schottky_reference, symmetric_power, Representation};
use crate::thermo::{
    entropy_report, entropy_root, period_arithmeticity, periodic_orbit_sum, pressure, schottky_shift, DepthKPotential,
    FiniteShift, Verdict, DEFAULT_ARITHMETICITY_TOL, DEFAULT_DEPTH,
};

/// Word-length ceiling of the counting checks.
pub const COUNT_LEN: usize = 12;

/// Word-length ceiling of the Benoist check.
pub const BENOIST_LEN: usize = 10;

/// Class-length ceiling of the prime-orbit ratio check. The periods of the
/// reference pair sit close to multiples of `log 9`, so `N(t)` is a staircase
/// and the ratio needs longer classes to settle than the fits do.
pub const RATIO_LEN: usize = 14;

/// Class-length ceiling of the period checks.
pub const PERIOD_LEN: usize = 6;

/// Identifiers and names of the checks, in report order.
pub const CRITERIA: [(u8, &str); 10] = [
    (1, "triangulated growth exponent"),
    (2, "symmetric-power scaling"),
    (3, "prime-orbit ratio"),
    (4, "equidistribution product structure"),
    (5, "Benoist estimate"),
    (6, "exact identities"),
    (7, "closed-form thermodynamics"),
    (8, "limit cone and phi-counting"),
    (9, "orbital bound"),
    (10, "arithmeticity diagnostic"),
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub workers: Option<usize>,
}

/// Result of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub values: BTreeMap<String, f64>,
}

impl CriterionOutcome {
    /// One line of the pass/fail table.
    pub fn summary_line(&self) -> String {
        format!("[{}] AC{:<2} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

struct Outcome {
    passed: bool,
    detail: String,
    values: BTreeMap<String, f64>,
}

impl Outcome {
    fn new(passed: bool, detail: String) -> Self {
        Self { passed, detail, values: BTreeMap::new() }
    }

    fn value(mut self, key: &str, v: f64) -> Self {
        self.values.insert(key.to_string(), v);
        self
    }
}

/// Runs check `id` (1 to 10). Module errors become a failed outcome.
pub fn run_criterion(id: u8, opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let name =
        CRITERIA.iter().find(|c| c.0 == id).ok_or_else(|| Error::InvalidArgument(format!("no check with id {id}")))?.1;
    let result = match id {
        1 => growth_exponent(opts),
        2 => symmetric_scaling(opts),
        3 => prime_orbit_ratio(opts),
        4 => product_structure(opts),
        5 => benoist_estimate(opts),
        6 => exact_identities(opts),
        7 => closed_form_thermo(),
        8 => limit_cone_counting(opts),
        9 => orbital_bound(opts),
        _ => arithmeticity(),
    };
    let out = result.unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
    Ok(CriterionOutcome { id, name: name.to_string(), passed: out.passed, detail: out.detail, values: out.values })
}

/// Runs every check in order.
pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| run_criterion(c.0, opts).expect("known id")).collect()
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().min(b.abs())
}

fn count_opts(opts: &VerifyOptions) -> CountOptions {
    CountOptions { workers: opts.workers, ..Default::default() }
}

fn growth_exponent(opts: &VerifyOptions) -> Result<Outcome> {
    let rep = schottky_reference()?;
    let co = count_opts(opts);
    let h_norm = fit_exponent(&norm_series(&rep, COUNT_LEN, NormKind::Euclidean, &co)?, DEFAULT_WINDOW_FRACTION)?.h_hat;
    let h_spec = fit_exponent(&primitive_spectral_series(&rep, COUNT_LEN, &co)?, DEFAULT_WINDOW_FRACTION)?.h_hat;
    let h_press = with_workers(opts.workers, || entropy_report(&rep, DEFAULT_DEPTH))??.h_pressure;
    let worst = rel_diff(h_norm, h_spec).max(rel_diff(h_norm, h_press)).max(rel_diff(h_spec, h_press));
    Ok(Outcome::new(
        worst <= 0.05,
        format!("h_norm={h_norm:.5} h_spectral={h_spec:.5} h_pressure={h_press:.5} max rel diff {worst:.4} (tol 0.05)"),
    )
    .value("h_norm", h_norm)
    .value("h_spectral", h_spec)
    .value("h_pressure", h_press)
    .value("max_rel_diff", worst))
}

fn symmetric_scaling(opts: &VerifyOptions) -> Result<Outcome> {
    let base = schottky_reference()?;
    let co = count_opts(opts);
    let h_base = fit_exponent(&primitive_spectral_series(&base, COUNT_LEN, &co)?, DEFAULT_WINDOW_FRACTION)?.h_hat;
    let mut out = Outcome::new(true, format!("h_base={h_base:.5}")).value("h_base", h_base);
    for m in [2usize, 3] {
        let sym = symmetric_power(&base, m)?;
        let h = fit_exponent(&primitive_spectral_series(&sym, COUNT_LEN, &co)?, DEFAULT_WINDOW_FRACTION)?.h_hat;
        let err = rel_diff(h * m as f64, h_base);
        out.passed &= err <= 0.05;
        out.detail += &format!(" h_sym{m}={h:.5} (m*h rel diff {err:.2e})");
        out = out.value(&format!("h_sym{m}"), h).value(&format!("rel_diff_m{m}"), err);
    }
    out.detail += " (tol 0.05)";
    Ok(out)
}

/// Mean `|r − 1|` over a slice of the curve.
fn mean_distance(curve: &[(f64, f64)]) -> f64 {
    curve.iter().map(|(_, r)| (r - 1.0).abs()).sum::<f64>() / curve.len() as f64
}

fn prime_orbit_ratio(opts: &VerifyOptions) -> Result<Outcome> {
    let rep = schottky_reference()?;
    let h = with_workers(opts.workers, || entropy_report(&rep, DEFAULT_DEPTH))??.h_pressure;
    let series = primitive_spectral_series(&rep, RATIO_LEN, &count_opts(opts))?;
    let curve = prime_orbit_ratio_curve(&series, h, DEFAULT_WINDOW_FRACTION)?;
    let q = RATIO_POINTS / 4;
    let (third, fourth) = (&curve[2 * q..3 * q], &curve[3 * q..]);
    let lo = fourth.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = fourth.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let (d3, d4) = (mean_distance(third), mean_distance(fourth));
    let passed = lo >= 0.7 && hi <= 1.3 && d4 <= d3;
    Ok(Outcome::new(
        passed,
        format!("final quarter in [{lo:.4}, {hi:.4}] (need [0.7, 1.3]); mean |r-1| third {d3:.4}, fourth {d4:.4}"),
    )
    .value("h_pressure", h)
    .value("final_quarter_min", lo)
    .value("final_quarter_max", hi)
    .value("third_quarter_distance", d3)
    .value("fourth_quarter_distance", d4))
}

fn product_structure(opts: &VerifyOptions) -> Result<Outcome> {
    let rep = schottky_reference()?;
    let t_max = norm_series(&rep, COUNT_LEN, NormKind::Euclidean, &count_opts(opts))?.t_max();
    let early = factorization_deficit(&pair_empirical_measure(&rep, COUNT_LEN, 0.6 * t_max, 1, opts.workers)?)?;
    let late = factorization_deficit(&pair_empirical_measure(&rep, COUNT_LEN, t_max, 1, opts.workers)?)?;
    let drop = 1.0 - late / early;
    Ok(Outcome::new(
        drop >= 0.3,
        format!(
            "deficit {early:.3e} at 0.6 t_max -> {late:.3e} at t_max = {t_max:.4}, drop {:.1}% (need 30%)",
            100.0 * drop
        ),
    )
    .value("t_max", t_max)
    .value("deficit_early", early)
    .value("deficit_late", late)
    .value("relative_drop", drop))
}

/// Length of the cyclic reduction of a reduced word.
fn cyclic_length(w: &[Letter]) -> usize {
    let n = w.len();
    let mut i = 0;
    while 2 * i + 1 < n && w[i] == w[n - 1 - i].inverse() {
        i += 1;
    }
    n - 2 * i
}

fn benoist_estimate(opts: &VerifyOptions) -> Result<Outcome> {
    const FIRST: usize = 4;
    const LAST: usize = 8;
    let rep = schottky_reference()?;
    // per cyclic length: (largest |defect|, number of non-finite values)
    let init = || (vec![0.0f64; BENOIST_LEN + 1], 0usize);
    let parts = with_workers(opts.workers, || {
        fold_ball(&rep, BENOIST_LEN, init, |acc: &mut (Vec<f64>, usize), w, g, _| {
            let c = cyclic_length(w);
            if c < FIRST {
                return;
            }
            match benoist_defect(g) {
                Ok(d) if d.is_finite() => acc.0[c] = acc.0[c].max(d.abs()),
                _ => acc.1 += 1,
            }
        })
    })?;
    let (mut by_len, mut bad) = init();
    for (v, b) in parts {
        bad += b;
        for (x, y) in by_len.iter_mut().zip(v) {
            *x = x.max(y);
        }
    }
    let sups: Vec<f64> = (FIRST..=LAST).map(|m| by_len[m..].iter().copied().fold(0.0, f64::max)).collect();
    let monotone = sups.windows(2).all(|w| w[1] <= w[0]) && sups[sups.len() - 1] < sups[0];
    let passed = bad == 0 && monotone && sups[0] < 1.0;
    let listed: Vec<String> = sups.iter().map(|s| format!("{s:.3e}")).collect();
    let mut out =
        Outcome::new(passed, format!("sup by min length {FIRST}..{LAST}: [{}]; non-finite {bad}", listed.join(", ")))
            .value("non_finite", bad as f64);
    for (m, s) in (FIRST..=LAST).zip(&sups) {
        out = out.value(&format!("sup_min_len_{m}"), *s);
    }
    Ok(out)
}

/// Smallest transported Gromov product kept in the equivariance check.
const GROMOV_FLOOR: f64 = -12.0;

/// Random reduced word of length `1..=max_len` that does not start with `avoid`.
fn random_word(rng: &mut ChaCha8Rng, letters: usize, max_len: usize, avoid: Option<Letter>) -> Word {
    let n = rng.gen_range(1..=max_len);
    let mut w: Vec<Letter> = Vec::with_capacity(n);
    while w.len() < n {
        let l = Letter::from_index(rng.gen_range(0..letters));
        let banned = w.last().map_or(avoid, |p| Some(p.inverse()));
        if banned != Some(l) {
            w.push(l);
        }
    }
    Word::new(w)
}

fn random_vec(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn random_frame(rng: &mut ChaCha8Rng, d: usize) -> Result<FlagFrame> {
    let m = SquareMatrix::new(d, (0..d * d).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
    FlagFrame::from_basis(&m)
}

/// Largest cocycle residuals `(β₁, β̄₁, σ, Gromov equivariance)` over random triples.
fn cocycle_residuals(rep: &Representation, triples: usize, seed: u64) -> Result<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (d, n) = (rep.dim(), rep.generators().letter_count());
    let norm = NormKind::Euclidean;
    let mut worst = [0.0f64; 4];
    for _ in 0..triples {
        // uv is kept reduced: a cancelling junction makes ρ(u)ρ(v) lose
        // ‖ρ(u)‖·‖ρ(v)‖·ε to rounding, which no identity check survives.
        let u = random_word(&mut rng, n, 6, None);
        let v = random_word(&mut rng, n, 6, u.letters().last().map(|l| l.inverse()));
        let (g, gi) = evaluate_pair(rep, &u)?;
        let (h, hi) = evaluate_pair(rep, &v)?;
        let (gh, ghi) = (&g * &h, &hi * &gi);
        let x = ProjectivePoint::new(&random_vec(&mut rng, d))?;
        let theta = ProjectiveCovector::new(&random_vec(&mut rng, d))?;
        let frame = random_frame(&mut rng, d)?;

        let b = beta1_matrix(&gh, &x, norm) - beta1_matrix(&g, &x.act(&h)?, norm) - beta1_matrix(&h, &x, norm);
        let hth = theta.act_by_inverse(&hi)?;
        let bd = beta1_dual_matrix(&ghi, &theta, norm)
            - beta1_dual_matrix(&gi, &hth, norm)
            - beta1_dual_matrix(&hi, &theta, norm);
        let s = iwasawa_cocycle_pair(&gh, &ghi, &frame)?;
        let s_g = iwasawa_cocycle_pair(&g, &gi, &frame.act_pair(&h, &hi)?)?;
        let s_h = iwasawa_cocycle_pair(&h, &hi, &frame)?;
        let s2 = CartanVector::new(s_g.coords().iter().zip(s_h.coords()).map(|(a, b)| a + b).collect());
        // 𝒢(kθ, kx) is the log of the pairing of two unit vectors, so rounding
        // costs about ε·e^{−𝒢(kθ, kx)}; draws below the floor are redrawn.
        let gp = loop {
            let (k, ki) = evaluate_pair(rep, &random_word(&mut rng, n, 3, None))?;
            let xk = ProjectivePoint::new(&random_vec(&mut rng, d))?;
            let tk = ProjectiveCovector::new(&random_vec(&mut rng, d))?;
            let moved = gromov_product(&tk.act_by_inverse(&ki)?, &xk.act(&k)?)?;
            if moved >= GROMOV_FLOOR {
                break moved - gromov_product(&tk, &xk)?
                    + beta1_dual_matrix(&ki, &tk, norm)
                    + beta1_matrix(&k, &xk, norm);
            }
        };
        for (w, r) in worst.iter_mut().zip([b.abs(), bd.abs(), s.max_abs_diff(&s2), gp.abs()]) {
            *w = w.max(r);
        }
    }
    Ok(worst)
}

/// Largest period residuals `(β₁ vs λ₁, β̄₁ vs λ₁ of the inverse, i∘λ vs λ∘inverse)`.
fn period_residuals(rep: &Representation, max_len: usize) -> Result<([f64; 3], usize)> {
    let classes = enumerate_primitive_classes(rep.generators(), max_len);
    let mut worst = [0.0f64; 3];
    for c in &classes {
        let w = c.to_word();
        let (g, gi) = evaluate_pair(rep, &w)?;
        let lam = jordan_projection_pair(&g, &gi)?;
        let lam_inv = jordan_projection_pair(&gi, &g)?;
        let plus = proximal_parts(&g, DEFAULT_GAP_TOL)?.attract;
        let eta = proximal_parts(&gi, DEFAULT_GAP_TOL)?.repel;
        let r = [
            (beta1_matrix(&g, &plus, NormKind::Euclidean) - lam.coords()[0]).abs(),
            (beta1_dual_matrix(&gi, &eta, NormKind::Euclidean) - lam_inv.coords()[0]).abs(),
            opposition_involution(&lam).max_abs_diff(&lam_inv),
        ];
        for (x, y) in worst.iter_mut().zip(r) {
            *x = x.max(y);
        }
    }
    Ok((worst, classes.len()))
}

fn exact_identities(opts: &VerifyOptions) -> Result<Outcome> {
    let reps = [schottky_reference()?, builtin_representation("sym_power:2")?];
    let (cocycle, periods) = with_workers(opts.workers, || -> Result<_> {
        let mut cocycle = [0.0f64; 4];
        let mut periods = [0.0f64; 3];
        let mut classes = 0;
        for (i, rep) in reps.iter().enumerate() {
            for (x, y) in cocycle.iter_mut().zip(cocycle_residuals(rep, 200, 7 + i as u64)?) {
                *x = x.max(y);
            }
            let (p, n) = period_residuals(rep, PERIOD_LEN)?;
            classes += n;
            for (x, y) in periods.iter_mut().zip(p) {
                *x = x.max(y);
            }
        }
        Ok((cocycle, (periods, classes)))
    })??;
    let (periods, classes) = periods;
    let passed = cocycle[0] < 1e-9
        && cocycle[1] < 1e-9
        && cocycle[2] < 1e-9
        && cocycle[3] < 1e-9
        && periods.iter().all(|r| *r <= 1e-8);
    Ok(Outcome::new(
        passed,
        format!(
            "cocycle residuals beta1 {:.1e} dual {:.1e} sigma {:.1e} gromov {:.1e} (tol 1e-9); periods over {classes} classes {:.1e} {:.1e} involution {:.1e} (tol 1e-8)",
            cocycle[0], cocycle[1], cocycle[2], cocycle[3], periods[0], periods[1], periods[2]
        ),
    )
    .value("beta1_cocycle", cocycle[0])
    .value("beta1_dual_cocycle", cocycle[1])
    .value("sigma_cocycle", cocycle[2])
    .value("gromov_equivariance", cocycle[3])
    .value("beta1_period", periods[0])
    .value("beta1_dual_period", periods[1])
    .value("opposition_involution", periods[2]))
}

fn closed_form_thermo() -> Result<Outcome> {
    let full = FiniteShift::full(2);
    let golden = FiniteShift::from_matrix(&[&[1, 1], &[1, 0]])?;
    let free = schottky_shift(&crate::groups::GeneratorSet::standard(2));
    let mut root_err: f64 = 0.0;
    for c in [0.5, 1.0, 1.7] {
        let h = entropy_root(&full, &DepthKPotential::constant(&full, 1, c)?)?;
        root_err = root_err.max((h - std::f64::consts::LN_2 / c).abs());
    }
    let zero = DepthKPotential::constant(&golden, 1, 0.0)?;
    let golden_err = (pressure(&golden, &zero, 1.0) - ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs();
    let mut trace_ok = true;
    let lucas = [1.0, 3.0, 4.0, 7.0, 11.0, 18.0, 29.0, 47.0];
    let full_zero = DepthKPotential::constant(&full, 1, 0.0)?;
    let free_unit = DepthKPotential::constant(&free, 1, 1.0)?;
    for n in 1..=8 {
        trace_ok &= periodic_orbit_sum(&full, &full_zero, 2.0, n)? == 2f64.powi(n as i32);
        trace_ok &= periodic_orbit_sum(&golden, &zero, 0.5, n)? == lucas[n - 1];
        trace_ok &= periodic_orbit_sum(&free, &free_unit, 0.0, n)? == free.count_closed(n) as f64;
    }
    Ok(Outcome::new(
        root_err <= 1e-10 && golden_err <= 1e-9 && trace_ok,
        format!(
            "entropy root err {root_err:.1e} (tol 1e-10); golden-mean pressure err {golden_err:.1e} (tol 1e-9); traces exact for n <= 8: {trace_ok}"
        ),
    )
    .value("entropy_root_error", root_err)
    .value("golden_mean_error", golden_err)
    .value("traces_exact", f64::from(u8::from(trace_ok))))
}

fn limit_cone_counting(opts: &VerifyOptions) -> Result<Outcome> {
    let base = schottky_reference()?;
    let sym = symmetric_power(&base, 2)?;
    let co = count_opts(opts);
    let sample = with_workers(opts.workers, || limit_cone_sample(&sym, PERIOD_LEN))??;
    let dev = sample.max_deviation_from(&[1.0, 0.0, -1.0]);
    let phi = LinearFunctional::first_minus_last(3);
    let interior = functional_interior_check(&phi, &sample, f64::MIN_POSITIVE)?;
    let h_base =
        fit_exponent(&norm_series(&base, COUNT_LEN, NormKind::Euclidean, &co)?, DEFAULT_WINDOW_FRACTION)?.h_hat;
    let h_phi =
        fit_exponent(&phi_series(&sym, COUNT_LEN, &phi, Projection::Cartan, &co)?, DEFAULT_WINDOW_FRACTION)?.h_hat;
    let target = h_base / 4.0;
    let err = rel_diff(h_phi, target);
    let passed = dev <= 1e-6 && interior.passed && err <= 0.07;
    Ok(Outcome::new(
        passed,
        format!(
            "cone deviation {dev:.1e} over {} rays (tol 1e-6); phi min {:.4}; h_phi={h_phi:.5} vs h_base/4={target:.5} rel diff {err:.4} (tol 0.07)",
            sample.len(),
            interior.min_value
        ),
    )
    .value("cone_deviation", dev)
    .value("phi_min_value", interior.min_value)
    .value("h_phi", h_phi)
    .value("h_base_norm", h_base)
    .value("rel_diff", err))
}

/// `max/min` of `e^{−ht}·N(t)` on 64 points of `[lo, hi]`.
fn normalized_spread(series: &CountSeries, h: f64, lo: f64, hi: f64) -> f64 {
    let logs: Vec<f64> = (0..64)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / 63.0;
            (series.count_le(t) as f64).ln() - h * t
        })
        .collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = logs.iter().copied().fold(f64::INFINITY, f64::min);
    (max - min).exp()
}

fn orbital_bound(opts: &VerifyOptions) -> Result<Outcome> {
    let rep = schottky_reference()?;
    let series = cartan_distance_series(&rep, COUNT_LEN, &count_opts(opts))?;
    let fit = fit_exponent(&series, DEFAULT_WINDOW_FRACTION)?;
    let spread = normalized_spread(&series, fit.h_hat, fit.window.0, fit.window.1);
    Ok(Outcome::new(
        spread < 3.0,
        format!(
            "h={:.5}, max/min of e^(-ht) N(t) over [{:.3}, {:.3}] = {spread:.4} (need < 3)",
            fit.h_hat, fit.window.0, fit.window.1
        ),
    )
    .value("h_hat", fit.h_hat)
    .value("spread", spread))
}

fn arithmeticity() -> Result<Outcome> {
    let small = period_arithmeticity(&[1.0, 2.0, 3.0], 1e-9)?;
    let small_ok = small.verdict == Verdict::Lattice { generator: 1.0 };
    let rep = schottky_reference()?;
    let periods = enumerate_primitive_classes(rep.generators(), PERIOD_LEN)
        .iter()
        .map(|c| Ok(proximal_parts(&evaluate(&rep, &c.to_word())?, DEFAULT_GAP_TOL)?.top_eigenvalue.abs().ln()))
        .collect::<Result<Vec<f64>>>()?;
    let report = period_arithmeticity(&periods, DEFAULT_ARITHMETICITY_TOL)?;
    let ref_ok = report.verdict == Verdict::NonArithmetic && report.remainder > DEFAULT_ARITHMETICITY_TOL;
    Ok(Outcome::new(
        small_ok && ref_ok,
        format!(
            "{{1,2,3}} -> {:?}; reference periods ({}) -> {:?}, remainder {:.3e} (tol {:.0e})",
            small.verdict,
            periods.len(),
            report.verdict,
            report.remainder,
            DEFAULT_ARITHMETICITY_TOL
        ),
    )
    .value("reference_remainder", report.remainder)
    .value("reference_candidate", report.candidate))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_lengths() {
        let g = crate::groups::GeneratorSet::standard(2);
        for (w, n) in [("a", 1), ("a b a⁻¹", 1), ("a b b a⁻¹", 2), ("a b a", 3), ("b a b a⁻¹ b⁻¹", 1)] {
            assert_eq!(cyclic_length(g.parse_word(w).unwrap().letters()), n, "{w}");
        }
    }

    #[test]
    fn cheap_checks_pass() {
        for id in [7, 10] {
            let out = run_criterion(id, &VerifyOptions::default()).unwrap();
            assert!(out.passed, "{}", out.summary_line());
        }
        assert!(run_criterion(11, &VerifyOptions::default()).is_err());
    }
}
