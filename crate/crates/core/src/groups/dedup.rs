use std::collections::BTreeMap;

use crate::error::Result;
use crate::linalg::SquareMatrix;
use crate::reps::Representation;

use super::{Letter, Word};

/// One element found by [`enumerate_ball_dedup`], with a shortest word found for it.
#[derive(Clone, Debug)]
pub struct DedupElement {
    pub word: Word,
    pub matrix: SquareMatrix,
    pub inverse: SquareMatrix,
}

/// Breadth-first ball of radius `max_len` in the group generated by `rep`,
/// identifying words whose matrices agree entrywise within `tol`.
///
/// Meant for representations of groups that are not known to be free; the
/// output is approximate whenever distinct elements come within `tol`.
pub fn enumerate_ball_dedup(rep: &Representation, max_len: usize, tol: f64) -> Result<Vec<DedupElement>> {
    let d = rep.dim();
    let n_letters = rep.generators().letter_count();
    // bucket on the entry sum; equal matrices differ in sum by at most d²·tol
    let width = (d * d) as f64 * tol;
    let bucket = |m: &SquareMatrix| (m.as_slice().iter().sum::<f64>() / width).floor() as i64;
    let mut index: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut out = vec![DedupElement {
        word: Word::empty(),
        matrix: SquareMatrix::identity(d),
        inverse: SquareMatrix::identity(d),
    }];
    index.entry(bucket(&out[0].matrix)).or_default().push(0);
    let mut frontier = vec![0usize];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for &i in &frontier {
            for li in 0..n_letters {
                let l = Letter::from_index(li);
                if out[i].word.letters().last() == Some(&l.inverse()) {
                    continue;
                }
                let m = &out[i].matrix * rep.matrix(l);
                let b = bucket(&m);
                let seen = (b - 1..=b + 1)
                    .filter_map(|k| index.get(&k))
                    .flatten()
                    .any(|&j| out[j].matrix.max_abs_diff(&m) <= tol);
                if seen {
                    continue;
                }
                let inv = rep.matrix(l.inverse()) * &out[i].inverse;
                let mut letters = out[i].word.letters().to_vec();
                letters.push(l);
                index.entry(b).or_default().push(out.len());
                next.push(out.len());
                out.push(DedupElement { word: Word::new(letters), matrix: m, inverse: inv });
            }
        }
        frontier = next;
    }
    Ok(out)
}
