use std::path::Path;

use crate::error::{Error, Result};
use crate::groups::GeneratorSet;
use crate::linalg::SquareMatrix;

use super::{RepKind, Representation};

fn parse_entry(tok: &str, line: usize) -> Result<f64> {
    let bad = || Error::ParseError { line, message: format!("invalid number `{tok}`") };
    let v = match tok.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.parse().map_err(|_| bad())?;
            let q: f64 = q.parse().map_err(|_| bad())?;
            p / q
        }
        None => tok.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Parses the generator-file format:
///
/// ```text
/// # comment
/// d 2
/// gen a
/// 3 0
/// 0 1/3
/// ```
///
/// Entries are decimals or `p/q` fractions. Inverses are computed.
pub fn parse_representation(text: &str) -> Result<Representation> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (n, header) = lines.next().ok_or(Error::ParseError { line: 1, message: "empty file".into() })?;
    let dim = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["d", v] => v
            .parse::<usize>()
            .ok()
            .filter(|&d| d >= 1)
            .ok_or(Error::ParseError { line: n, message: format!("invalid dimension `{v}`") })?,
        _ => return Err(Error::ParseError { line: n, message: "expected `d <dim>`".into() }),
    };

    let mut labels = Vec::new();
    let mut mats = Vec::new();
    let mut current: Option<(String, Vec<f64>)> = None;
    let finish = |cur: Option<(String, Vec<f64>)>,
                  labels: &mut Vec<String>,
                  mats: &mut Vec<SquareMatrix>,
                  line: usize|
     -> Result<()> {
        if let Some((label, data)) = cur {
            if data.len() != dim * dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator `{label}` has {} rows, expected {dim} (line {line})",
                    data.len() / dim
                )));
            }
            mats.push(SquareMatrix::new(dim, data)?);
            labels.push(label);
        }
        Ok(())
    };
    for (n, l) in lines {
        if let Some(rest) = l.strip_prefix("gen") {
            let label = rest.trim();
            if label.is_empty()
                || label.contains(char::is_whitespace)
                || rest.chars().next().is_some_and(|c| !c.is_whitespace())
            {
                return Err(Error::ParseError { line: n, message: format!("expected `gen <label>`, got `{l}`") });
            }
            finish(current.take(), &mut labels, &mut mats, n)?;
            current = Some((label.to_string(), Vec::new()));
            continue;
        }
        let Some((label, data)) = current.as_mut() else {
            return Err(Error::ParseError { line: n, message: "matrix row before any `gen` line".into() });
        };
        let row = l.split_whitespace().map(|t| parse_entry(t, n)).collect::<Result<Vec<_>>>()?;
        if row.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "row of generator `{label}` at line {n} has {} entries, expected {dim}",
                row.len()
            )));
        }
        if data.len() == dim * dim {
            return Err(Error::DimensionMismatch(format!("generator `{label}` has more than {dim} rows (line {n})")));
        }
        data.extend(row);
    }
    let last_line = text.lines().count();
    finish(current.take(), &mut labels, &mut mats, last_line)?;
    if labels.is_empty() {
        return Err(Error::ParseError { line: last_line, message: "no generators".into() });
    }
    let gens = GeneratorSet::new(labels).map_err(|e| Error::ParseError { line: last_line, message: e.to_string() })?;
    Representation::new(gens, mats, RepKind::Loaded)
}

/// Reads and parses a generator file.
pub fn load_representation(path: &Path) -> Result<Representation> {
    let text = std::fs::read_to_string(path)?;
    parse_representation(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_diagonal() {
        let rep = parse_representation("d 2\n# a hyperbolic generator\ngen a\n3 0\n0 1/3\n").unwrap();
        assert_eq!(rep.dim(), 2);
        assert_eq!(rep.generators().rank(), 1);
        assert_eq!(rep.kind(), RepKind::Loaded);
        assert!(!rep.is_certified());
        let a = rep.matrix(crate::groups::Letter::generator(0));
        assert!(a.max_abs_diff(&SquareMatrix::diag(&[3.0, 1.0 / 3.0])) < 1e-15);
    }

    #[test]
    fn unimodularizes() {
        let rep = parse_representation("d 2\ngen a\n2 0\n0 8\n").unwrap();
        let a = rep.matrix(crate::groups::Letter::generator(0));
        assert!((a.det() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_square_is_dimension_mismatch() {
        assert!(matches!(parse_representation("d 2\ngen a\n1 2 3\n0 1 0\n"), Err(Error::DimensionMismatch(_))));
        assert!(matches!(parse_representation("d 2\ngen a\n1 2\n"), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn singular_generator() {
        assert!(matches!(parse_representation("d 2\ngen a\n1 2\n2 4\n"), Err(Error::SingularGenerator(_))));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_representation(""), Err(Error::ParseError { .. })));
        assert!(matches!(parse_representation("dim 2\n"), Err(Error::ParseError { line: 1, .. })));
        assert!(matches!(parse_representation("d 2\n1 0\n"), Err(Error::ParseError { line: 2, .. })));
        assert!(matches!(parse_representation("d 2\ngen a\n1 x\n0 1\n"), Err(Error::ParseError { line: 3, .. })));
        assert!(matches!(
            parse_representation("d 2\ngen a\n1 0\n0 1\ngen a\n1 0\n0 1\n"),
            Err(Error::ParseError { .. })
        ));
    }
}
