use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::CountSeries;

/// Sample points of the least-squares fit.
pub const FIT_POINTS: usize = 64;

/// Sample points of a ratio curve.
pub const RATIO_POINTS: usize = 32;

/// Minimum number of entries below `t_max` for a fit.
const MIN_ENTRIES: usize = 50;

/// Result of [`fit_exponent`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub h_hat: f64,
    pub intercept: f64,
    pub window: (f64, f64),
    /// Root-mean-square residual of the line.
    pub residual: f64,
    /// True when `log t` was added to `log N(t)` before fitting.
    pub log_t_corrected: bool,
}

fn window(series: &CountSeries, fraction: f64) -> Result<(f64, f64)> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!("window fraction must lie in (0, 1], got {fraction}")));
    }
    let t_hi = series.t_max();
    let below = series.count_le(t_hi);
    if below < MIN_ENTRIES || !(t_hi > 0.0) {
        return Err(Error::InsufficientData(format!("{below} entries below t_max = {t_hi}, need {MIN_ENTRIES}")));
    }
    Ok((t_hi * (1.0 - fraction), t_hi))
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Least-squares slope of `log N(t)` against `t` at 64 evenly spaced points of
/// `[t_max·(1 − window_fraction), t_max]`.
///
/// Class counts behave like `e^{ht}/(ht)`, so for primitive-class series the
/// regressand is `log N(t) + log t`; ball counts behave like `c·e^{ht}` and are
/// fitted as is.
pub fn fit_exponent(series: &CountSeries, window_fraction: f64) -> Result<GrowthFit> {
    let (lo, hi) = window(series, window_fraction)?;
    let corrected = series.kind.is_primitive();
    let pts: Vec<(f64, f64)> = grid(lo, hi, FIT_POINTS)
        .filter_map(|t| {
            let n = series.count_le(t);
            if n == 0 || (corrected && t <= 0.0) {
                return None;
            }
            let y = (n as f64).ln() + if corrected { t.ln() } else { 0.0 };
            Some((t, y))
        })
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientData("fewer than two nonzero counts in the fit window".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let h_hat = sxy / sxx;
    let intercept = my - h_hat * mx;
    let residual = (pts.iter().map(|p| (p.1 - intercept - h_hat * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(GrowthFit { h_hat, intercept, window: (lo, hi), residual, log_t_corrected: corrected })
}

/// `(t, h·t·e^{−ht}·N(t))` at 32 evenly spaced points of the fit window.
pub fn prime_orbit_ratio_curve(series: &CountSeries, h: f64, window_fraction: f64) -> Result<Vec<(f64, f64)>> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("growth rate must be positive, got {h}")));
    }
    let (lo, hi) = window(series, window_fraction)?;
    Ok(grid(lo, hi, RATIO_POINTS)
        .map(|t| {
            let n = series.count_le(t) as f64;
            // e^{−ht}·N(t) computed in logs to stay finite
            let r = if n > 0.0 { (h * t).ln() - h * t + n.ln() } else { f64::NEG_INFINITY };
            (t, if t > 0.0 { r.exp() } else { 0.0 })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::SeriesKind;

    /// Thresholds with `N(t) = ⌈f(t)⌉` for increasing `f` with `f(0) ≤ 1`.
    fn synthetic(kind: SeriesKind, f: impl Fn(f64) -> f64, t_max: f64) -> CountSeries {
        let total = f(t_max).ceil() as usize;
        let mut values = vec![0.0];
        for n in 2..=total {
            // smallest t with f(t) > n − 1
            let (mut lo, mut hi) = (0.0, t_max);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if f(mid) > (n - 1) as f64 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            values.push(hi);
        }
        CountSeries::from_values(kind, values, 0, t_max)
    }

    #[test]
    fn pure_exponential() {
        let s = synthetic(SeriesKind::Norm, |t| (2.0 * t).exp(), 5.0);
        let fit = fit_exponent(&s, 0.4).unwrap();
        assert!((fit.h_hat - 2.0).abs() < 1e-3, "{}", fit.h_hat);
        assert_eq!(fit.window, (3.0, 5.0));
    }

    #[test]
    fn exponential_with_constant() {
        let s = synthetic(SeriesKind::Norm, |t| 5.0 * (0.7 * t).exp(), 12.0);
        let fit = fit_exponent(&s, 0.5).unwrap();
        assert!((fit.h_hat - 0.7).abs() < 1e-2);
        assert!((fit.intercept - 5f64.ln()).abs() < 0.05);
    }

    #[test]
    fn too_little_data() {
        let s = CountSeries::from_values(SeriesKind::Norm, (0..10).map(f64::from).collect(), 0, 9.0);
        assert!(matches!(fit_exponent(&s, 0.4), Err(Error::InsufficientData(_))));
        assert!(matches!(fit_exponent(&s, 0.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn ratio_of_prime_orbit_shape() {
        let h = 0.8;
        let f = |t: f64| if t < 1.0 { 1.0 } else { (h * t).exp() / (h * t) };
        let s = synthetic(SeriesKind::SpectralPrimitive, f, 16.0);
        let curve = prime_orbit_ratio_curve(&s, h, 0.4).unwrap();
        assert_eq!(curve.len(), RATIO_POINTS);
        for &(_, r) in &curve[RATIO_POINTS / 2..] {
            assert!((r - 1.0).abs() < 0.02, "{r}");
        }
        // the log-t corrected fit recovers h
        let fit = fit_exponent(&s, 0.4).unwrap();
        assert!(fit.log_t_corrected);
        assert!((fit.h_hat - h).abs() < 1e-2);
    }

    #[test]
    fn ratio_with_wrong_h_drifts_monotonically() {
        let h = 0.8;
        let f = |t: f64| if t < 1.0 { 1.0 } else { (h * t).exp() / (h * t) };
        let s = synthetic(SeriesKind::SpectralPrimitive, f, 16.0);
        let curve = prime_orbit_ratio_curve(&s, 2.0 * h, 0.4).unwrap();
        let dist: Vec<f64> = curve.iter().map(|(_, r)| (r - 1.0).abs()).collect();
        assert!(dist.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!(matches!(prime_orbit_ratio_curve(&s, 0.0, 0.4), Err(Error::InvalidArgument(_))));
    }
}
