//! Free groups: reduced words, balls, cyclic words and primitive conjugacy
//! classes, plus evaluation of words in a representation.
//!
//! Letters are numbered `2i` for generator `i` and `2i + 1` for its inverse,
//! and this numbering is the lexicographic order used everywhere: balls are
//! emitted by length, then lexicographically, and a cyclic word is stored as
//! its least rotation.

mod dedup;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::reps::Representation;

pub use dedup::{enumerate_ball_dedup, DedupElement};

/// A generator or the inverse of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(u16);

impl Letter {
    pub fn generator(i: usize) -> Self {
        Letter((2 * i) as u16)
    }

    pub fn from_index(index: usize) -> Self {
        Letter(index as u16)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    pub fn generator_index(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }
}

/// A finite sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].inverse())
    }

    /// Formal inverse (reduced if `self` is).
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        reduce(&Word(letters))
    }

    /// `n`-th power, reduced.
    pub fn pow(&self, n: usize) -> Word {
        (0..n).fold(Word::empty(), |acc, _| acc.mul(self))
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k.min(self.0.len())].to_vec())
    }
}

/// Free reduction: cancels adjacent inverse pairs until none remain.
pub fn reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// Labels of the free generators; inverses are formal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    labels: Vec<String>,
}

impl GeneratorSet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("at least one generator is required".into()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() || l.chars().any(|c| c.is_whitespace() || c == '⁻' || c == '^' || c == '#') {
                return Err(Error::InvalidArgument(format!("invalid generator label `{l}`")));
            }
            if !seen.insert(l.clone()) {
                return Err(Error::InvalidArgument(format!("duplicate generator label `{l}`")));
            }
        }
        Ok(Self { labels })
    }

    /// Generators named `a, b, c, …`.
    pub fn standard(rank: usize) -> Self {
        assert!((1..=26).contains(&rank), "standard generator sets have rank 1..=26");
        Self { labels: (0..rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect() }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// Number of letters, `2 · rank`.
    pub fn letter_count(&self) -> usize {
        2 * self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.letter_count()).map(Letter::from_index)
    }

    pub fn label(&self, l: Letter) -> String {
        let base = &self.labels[l.generator_index()];
        if l.is_inverse() {
            format!("{base}⁻¹")
        } else {
            base.clone()
        }
    }

    /// Parses `a`, `a⁻¹`, `a^-1`, or (for single-character lowercase labels) `A`.
    pub fn parse_letter(&self, token: &str) -> Result<Letter> {
        let (base, inv) = if let Some(b) = token.strip_suffix("⁻¹") {
            (b, true)
        } else if let Some(b) = token.strip_suffix("^-1") {
            (b, true)
        } else {
            (token, false)
        };
        if let Some(i) = self.labels.iter().position(|l| l == base) {
            let g = Letter::generator(i);
            return Ok(if inv { g.inverse() } else { g });
        }
        if !inv {
            let lower = base.to_lowercase();
            if base.chars().count() == 1 && lower != base {
                if let Some(i) = self.labels.iter().position(|l| *l == lower) {
                    return Ok(Letter::generator(i).inverse());
                }
            }
        }
        Err(Error::UnknownLabel(token.to_string()))
    }

    /// Parses a word. Tokens are whitespace-separated; when every label is a
    /// single character a token may also be a run such as `abA` or `ab⁻¹a`.
    /// `ε` alone is the empty word.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        if s.trim() == "ε" {
            return Ok(Word::empty());
        }
        let single = self.labels.iter().all(|l| l.chars().count() == 1);
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            match self.parse_letter(token) {
                Ok(l) => letters.push(l),
                Err(e) if !single => return Err(e),
                Err(_) => {
                    let chars: Vec<char> = token.chars().collect();
                    let mut i = 0;
                    while i < chars.len() {
                        let mut t = chars[i].to_string();
                        let rest: String = chars[i + 1..].iter().collect();
                        if rest.starts_with("⁻¹") {
                            t.push_str("⁻¹");
                            i += 2;
                        } else if rest.starts_with("^-1") {
                            t.push_str("^-1");
                            i += 3;
                        }
                        letters.push(self.parse_letter(&t)?);
                        i += 1;
                    }
                }
            }
        }
        Ok(Word(letters))
    }

    /// Space-separated labels; the empty word prints as `ε`.
    pub fn format(&self, w: &Word) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        w.letters().iter().map(|&l| self.label(l)).collect::<Vec<_>>().join(" ")
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|l| l.index() >= self.letter_count()) {
            Some(l) => Err(Error::UnknownLabel(format!("letter #{}", l.index()))),
            None => Ok(()),
        }
    }

    /// Free reduction with label validation.
    pub fn reduce(&self, w: &Word) -> Result<Word> {
        self.check(w)?;
        Ok(reduce(w))
    }
}

/// A cyclically reduced word up to rotation, stored as its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicWord(Vec<Letter>);

impl CyclicWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        let w = Word(letters);
        if !is_cyclically_reduced(w.letters()) {
            return Err(Error::InvalidArgument("word is not cyclically reduced".into()));
        }
        let r = least_rotation(w.letters());
        Ok(CyclicWord(rotate(w.letters(), r)))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word(self.0.clone())
    }

    /// True iff the class is not a proper power.
    pub fn is_primitive(&self) -> bool {
        is_primitive_letters(&self.0)
    }
}

pub(crate) fn is_cyclically_reduced(w: &[Letter]) -> bool {
    let n = w.len();
    n == 0 || (0..n).all(|i| w[(i + 1) % n] != w[i].inverse())
}

fn rotate(w: &[Letter], r: usize) -> Vec<Letter> {
    w[r..].iter().chain(&w[..r]).copied().collect()
}

fn least_rotation(w: &[Letter]) -> usize {
    let n = w.len();
    (0..n).min_by(|&a, &b| rotate(w, a).cmp(&rotate(w, b))).unwrap_or(0)
}

fn is_primitive_letters(w: &[Letter]) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    // w is a proper power iff it equals its rotation by a proper divisor of n
    (1..n).filter(|p| n.is_multiple_of(*p)).all(|p| (0..n).any(|i| w[i] != w[(i + p) % n]))
}

/// Strictly smaller than every proper rotation: least rotation and primitive.
pub(crate) fn is_lyndon(w: &[Letter]) -> bool {
    let n = w.len();
    (1..n).all(|r| {
        for i in 0..n {
            let (a, b) = (w[i], w[(i + r) % n]);
            if a != b {
                return a < b;
            }
        }
        false
    })
}

/// Splits `w = conjugator · core · conjugator⁻¹` with `core` cyclically reduced
/// and stored as its least rotation.
pub fn cyclic_reduce(w: &Word) -> (CyclicWord, Word) {
    let w = reduce(w);
    let l = w.letters();
    let (mut i, mut j) = (0, l.len());
    while j - i >= 2 && l[i] == l[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    let raw = &l[i..j];
    let r = least_rotation(raw);
    let core = CyclicWord(rotate(raw, r));
    // raw = u·(v u)·u⁻¹ with u = raw[..r]
    let mut conj = l[..i].to_vec();
    conj.extend_from_slice(&raw[..r]);
    (core, reduce(&Word(conj)))
}

/// `is_primitive` on a cyclic word.
pub fn is_primitive(c: &CyclicWord) -> bool {
    c.is_primitive()
}

#[inline]
fn smallest_after(prev: Option<Letter>, from: usize, n_letters: usize) -> Option<Letter> {
    (from..n_letters).map(Letter::from_index).find(|&c| prev.is_none_or(|p| c != p.inverse()))
}

/// Iterator over the reduced words of length `≤ L`, by length then lexicographically.
pub struct BallIter {
    n_letters: usize,
    max_len: usize,
    current: Option<Vec<Letter>>,
}

impl Iterator for BallIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.take()?;
        let out = Word(cur.clone());
        self.current = advance(cur, self.n_letters, self.max_len);
        Some(out)
    }
}

fn fill_smallest(w: &mut Vec<Letter>, upto: usize, n_letters: usize) {
    while w.len() < upto {
        let prev = w.last().copied();
        w.push(smallest_after(prev, 0, n_letters).expect("at least two letters"));
    }
}

fn advance(mut w: Vec<Letter>, n_letters: usize, max_len: usize) -> Option<Vec<Letter>> {
    let n = w.len();
    for i in (0..n).rev() {
        let prev = if i > 0 { Some(w[i - 1]) } else { None };
        if let Some(c) = smallest_after(prev, w[i].index() + 1, n_letters) {
            w.truncate(i);
            w.push(c);
            fill_smallest(&mut w, n, n_letters);
            return Some(w);
        }
    }
    if n + 1 > max_len {
        return None;
    }
    let mut next = Vec::with_capacity(n + 1);
    fill_smallest(&mut next, n + 1, n_letters);
    Some(next)
}

/// Every reduced word of length `≤ max_len` exactly once, by length then lexicographically.
pub fn enumerate_ball(gens: &GeneratorSet, max_len: usize) -> BallIter {
    BallIter { n_letters: gens.letter_count(), max_len, current: Some(Vec::new()) }
}

/// Number of reduced words of length exactly `k` in a free group of rank `n`.
pub fn sphere_size(rank: usize, k: usize) -> u64 {
    if k == 0 {
        1
    } else {
        2 * rank as u64 * (2 * rank as u64 - 1).pow(k as u32 - 1)
    }
}

/// Depth-first pre-order walk over reduced words extending `prefix` with
/// length `≤ max_len`. `visit` sees each word once and returns `false` to skip
/// the subtree below it.
pub(crate) fn walk_reduced<F>(n_letters: usize, prefix: &[Letter], max_len: usize, visit: &mut F)
where
    F: FnMut(&[Letter]) -> bool,
{
    let mut w = prefix.to_vec();
    if !visit(&w) {
        return;
    }
    if w.len() >= max_len {
        return;
    }
    // explicit stack of "next candidate letter" per depth
    let base = w.len();
    let mut next: Vec<usize> = vec![0];
    while let Some(cand) = next.last_mut() {
        let prev = w.last().copied();
        match smallest_after(prev, *cand, n_letters) {
            None => {
                next.pop();
                if w.len() > base {
                    w.pop();
                }
            }
            Some(c) => {
                *cand = c.index() + 1;
                w.push(c);
                if visit(&w) && w.len() < max_len {
                    next.push(0);
                } else {
                    w.pop();
                }
            }
        }
    }
}

/// Reduced words of length exactly `k`, in lexicographic order.
pub(crate) fn reduced_words_of_length(n_letters: usize, k: usize) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    walk_reduced(n_letters, &[], k, &mut |w: &[Letter]| {
        if w.len() == k {
            out.push(w.to_vec());
        }
        true
    });
    out
}

/// Primitive conjugacy classes whose cyclically reduced length is `≤ max_len`,
/// by length then lexicographically.
pub fn enumerate_primitive_classes(gens: &GeneratorSet, max_len: usize) -> Vec<CyclicWord> {
    let mut by_len: Vec<Vec<CyclicWord>> = vec![Vec::new(); max_len + 1];
    for_each_primitive_class(gens.letter_count(), max_len, &[], |w| {
        by_len[w.len()].push(CyclicWord(w.to_vec()));
    });
    by_len
        .into_iter()
        .flat_map(|v| {
            let mut v = v;
            v.sort();
            v
        })
        .collect()
}

/// Calls `f` on every Lyndon, cyclically reduced word of length `1..=max_len`
/// extending `prefix` (the least-rotation representatives of primitive classes).
pub(crate) fn for_each_primitive_class<F: FnMut(&[Letter])>(
    n_letters: usize,
    max_len: usize,
    prefix: &[Letter],
    mut f: F,
) {
    walk_reduced(n_letters, prefix, max_len, &mut |w: &[Letter]| {
        if w.is_empty() {
            return true;
        }
        // a least rotation starts with its smallest letter
        if w[w.len() - 1] < w[0] {
            return false;
        }
        if w[w.len() - 1] != w[0].inverse() && is_lyndon(w) {
            f(w);
        }
        true
    });
}

/// `ρ(w)`: ordered product of generator images; the identity for the empty word.
pub fn evaluate(rep: &Representation, w: &Word) -> Result<SquareMatrix> {
    rep.generators().check(w)?;
    let mut acc = SquareMatrix::identity(rep.dim());
    let mut tmp = SquareMatrix::zeros(rep.dim());
    for &l in w.letters() {
        acc.mul_into(rep.matrix(l), &mut tmp);
        std::mem::swap(&mut acc, &mut tmp);
    }
    Ok(acc)
}

/// `(ρ(w), ρ(w)⁻¹)`, the inverse evaluated as the product of inverse generators.
pub fn evaluate_pair(rep: &Representation, w: &Word) -> Result<(SquareMatrix, SquareMatrix)> {
    Ok((evaluate(rep, w)?, evaluate(rep, &w.inverse())?))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.index().to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}
