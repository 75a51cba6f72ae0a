use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::{enumerate_ball_dedup, reduced_words_of_length, walk_reduced, Letter};
use crate::linalg::SquareMatrix;
use crate::reps::Representation;

/// Length of the prefixes that partition the ball between workers.
const SPLIT_DEPTH: usize = 2;

/// Runs `f` on a dedicated pool when a worker count is given.
pub(crate) fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::InvalidArgument("workers must be at least 1".into())),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Visits every reduced word extending `root` up to `max_len`, with `ρ(w)` and
/// `ρ(w)⁻¹` maintained incrementally along the depth-first walk.
fn walk_root<A, F>(rep: &Representation, root: &[Letter], max_len: usize, acc: &mut A, visit: &F)
where
    F: Fn(&mut A, &[Letter], &SquareMatrix, &SquareMatrix),
{
    let d = rep.dim();
    let mut mats = vec![SquareMatrix::identity(d); max_len + 1];
    let mut invs = vec![SquareMatrix::identity(d); max_len + 1];
    for (i, &l) in root.iter().enumerate() {
        mats[i + 1] = &mats[i] * rep.matrix(l);
        invs[i + 1] = rep.matrix(l.inverse()) * &invs[i];
    }
    let base = root.len();
    walk_reduced(rep.generators().letter_count(), root, max_len, &mut |w: &[Letter]| {
        let n = w.len();
        if n > base {
            let l = w[n - 1];
            let (lo, hi) = mats.split_at_mut(n);
            lo[n - 1].mul_into(rep.matrix(l), &mut hi[0]);
            let (lo, hi) = invs.split_at_mut(n);
            rep.matrix(l.inverse()).mul_into(&lo[n - 1], &mut hi[0]);
        }
        visit(acc, w, &mats[n], &invs[n]);
        true
    });
}

/// Folds `visit` over the ball of radius `max_len`, one accumulator per
/// subtree, returned in enumeration order of the subtree roots.
pub(crate) fn fold_ball<A, I, F>(rep: &Representation, max_len: usize, init: I, visit: F) -> Vec<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &[Letter], &SquareMatrix, &SquareMatrix) + Sync,
{
    let split = SPLIT_DEPTH.min(max_len);
    let mut short = init();
    if split == 0 {
        walk_root(rep, &[], 0, &mut short, &visit);
        return vec![short];
    }
    walk_root(rep, &[], split - 1, &mut short, &visit);
    let roots = reduced_words_of_length(rep.generators().letter_count(), split);
    let mut parts: Vec<A> = roots
        .par_iter()
        .map(|root| {
            let mut acc = init();
            walk_root(rep, root, max_len, &mut acc, &visit);
            acc
        })
        .collect();
    parts.insert(0, short);
    parts
}

/// Same as [`fold_ball`] over the approximate ball from matrix deduplication.
pub(crate) fn fold_ball_dedup<A, I, F>(
    rep: &Representation,
    max_len: usize,
    tol: f64,
    init: I,
    visit: F,
) -> Result<Vec<A>>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &[Letter], &SquareMatrix, &SquareMatrix) + Sync,
{
    let elements = enumerate_ball_dedup(rep, max_len, tol)?;
    Ok(elements
        .par_chunks(4096)
        .map(|chunk| {
            let mut acc = init();
            for e in chunk {
                visit(&mut acc, e.word.letters(), &e.matrix, &e.inverse);
            }
            acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{evaluate, Word};
    use crate::reps::schottky_reference;

    #[test]
    fn walker_matrices_match_evaluation() {
        let rep = schottky_reference().unwrap();
        let parts = fold_ball(&rep, 5, Vec::new, |acc: &mut Vec<f64>, w, g, gi| {
            let word = Word::new(w.to_vec());
            let e = evaluate(&rep, &word).unwrap();
            let ei = evaluate(&rep, &word.inverse()).unwrap();
            acc.push(g.max_abs_diff(&e) / (1.0 + e.max_abs()) + gi.max_abs_diff(&ei) / (1.0 + ei.max_abs()));
        });
        let all: Vec<f64> = parts.into_iter().flatten().collect();
        assert_eq!(all.len(), 1 + 4 + 12 + 36 + 108 + 324);
        assert!(all.iter().all(|r| *r < 1e-12));
    }

    #[test]
    fn tiny_balls() {
        let rep = schottky_reference().unwrap();
        for (l, n) in [(0, 1), (1, 5), (2, 17)] {
            let parts = fold_ball(&rep, l, || 0usize, |c, _, _, _| *c += 1);
            assert_eq!(parts.iter().sum::<usize>(), n);
        }
    }

    #[test]
    fn dedup_matches_exact_on_free_group() {
        let rep = schottky_reference().unwrap();
        let parts = fold_ball_dedup(&rep, 4, 1e-8, || 0usize, |c, _, _, _| *c += 1).unwrap();
        assert_eq!(parts.iter().sum::<usize>(), 161);
    }

    #[test]
    fn dedup_collapses_finite_order() {
        // rotation by π/2 generates a group of order 4
        let rep = crate::reps::Representation::new(
            crate::groups::GeneratorSet::standard(1),
            vec![SquareMatrix::rotation2(std::f64::consts::FRAC_PI_2)],
            crate::reps::RepKind::Loaded,
        )
        .unwrap();
        let parts = fold_ball_dedup(&rep, 6, 1e-8, || 0usize, |c, _, _, _| *c += 1).unwrap();
        assert_eq!(parts.iter().sum::<usize>(), 4);
    }
}
