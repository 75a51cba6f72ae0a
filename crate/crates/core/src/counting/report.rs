use std::io::{self, Write};

use serde_json::{json, Value};

use crate::groups::GeneratorSet;

use super::{CountSeries, GrowthFit, PairMeasure};

/// Rows in `series.csv`.
pub const SERIES_GRID_POINTS: usize = 512;

/// `t,count,log_count` on an even grid from the smallest entry to `t_max`.
pub fn write_series_csv<W: Write>(series: &CountSeries, mut out: W) -> io::Result<()> {
    writeln!(out, "t,count,log_count")?;
    let Some(&first) = series.thresholds().first() else {
        return Ok(());
    };
    let hi = series.t_max().max(first);
    for i in 0..SERIES_GRID_POINTS {
        let t = first + (hi - first) * i as f64 / (SERIES_GRID_POINTS - 1) as f64;
        let n = series.count_le(t);
        writeln!(out, "{t},{n},{}", (n as f64).ln())?;
    }
    Ok(())
}

/// `{h_hat, intercept, window, residual, truncation}`.
pub fn fit_json(fit: &GrowthFit, series: &CountSeries) -> Value {
    json!({
        "h_hat": fit.h_hat,
        "intercept": fit.intercept,
        "window": [fit.window.0, fit.window.1],
        "residual": fit.residual,
        "log_t_corrected": fit.log_t_corrected,
        "truncation": {
            "kind": series.kind,
            "mode": series.mode,
            "max_len": series.truncation.max_len,
            "t_max": series.truncation.t_max,
            "percentile": series.truncation.percentile,
            "raw_max": series.truncation.raw_max,
            "entries": series.len(),
        },
    })
}

/// `cell_a,cell_b,count`, cells in lexicographic order.
pub fn write_pairs_csv<W: Write>(m: &PairMeasure, gens: &GeneratorSet, mut out: W) -> io::Result<()> {
    writeln!(out, "cell_a,cell_b,count")?;
    for ((a, b), n) in &m.cells {
        writeln!(out, "{},{},{n}", gens.format(a), gens.format(b))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{fit_exponent, SeriesKind};

    #[test]
    fn series_csv_shape() {
        let s = CountSeries::from_values(SeriesKind::Norm, (0..100).map(|i| i as f64 * 0.1).collect(), 3, 5.0);
        let mut buf = Vec::new();
        write_series_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,count,log_count");
        assert_eq!(lines.len(), SERIES_GRID_POINTS + 1);
        assert_eq!(lines[1], "0,1,0");
        let fit = fit_exponent(&s, 0.4).unwrap();
        let v = fit_json(&fit, &s);
        assert_eq!(v["truncation"]["t_max"], 5.0);
        assert_eq!(v["window"][1], 5.0);
    }
}
