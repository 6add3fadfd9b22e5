//! Descent statistics and the multilinear part of the BCH series.
//!
//! The multilinear part of `log(e^{X1} ... e^{Xn})` is
//! `sum_sigma c_sigma X_sigma(1) ... X_sigma(n)` with
//! `c_sigma = (-1)^d / (n * C(n-1, d))`, `d` the number of descents of
//! `sigma`. Over right-nested brackets ending in the last argument the same
//! coefficients appear, summed over the `(n-1)!` orderings of the others.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{AssocPoly, Generator, LieExpr, Word};
use crate::error::{BchError, Result};
use crate::rational::{binomial, Rational};

/// A bijection on `{1, ..., n}`, stored as `(sigma(1), ..., sigma(n))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(BchError::InvalidPermutation(images));
            }
            seen[i - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn descents(&self) -> DescentCount {
        descents(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DescentCount(pub usize);

/// Number of positions `i` with `sigma(i) > sigma(i+1)`.
pub fn descents(p: &Permutation) -> DescentCount {
    DescentCount(count_descents(&p.images))
}

fn count_descents<T: Ord>(seq: &[T]) -> usize {
    seq.windows(2).filter(|w| w[0] > w[1]).count()
}

/// `(-1)^d / (n * C(n-1, d))`.
pub fn eulerian_coeff(n: usize, d: DescentCount) -> Result<Rational> {
    let d = d.0;
    if n == 0 || d >= n {
        return Err(BchError::DescentOutOfRange { n, d });
    }
    let sign = if d.is_multiple_of(2) { 1 } else { -1 };
    Ok(Rational::new(
        BigInt::from(sign),
        BigInt::from(n) * binomial(n - 1, d),
    ))
}

/// Coefficients `c(n, d)` for `d = 0..n`.
pub(crate) fn eulerian_table(n: usize) -> Vec<Rational> {
    (0..n)
        .map(|d| eulerian_coeff(n, DescentCount(d)).expect("d < n"))
        .collect()
}

/// Eulerian number `A(n, d)`: permutations of `n` elements with `d` descents.
pub fn eulerian_number(n: usize, d: usize) -> BigInt {
    // A(n, d) = sum_{k=0}^{d} (-1)^k C(n+1, k) (d+1-k)^n
    let mut acc = BigInt::zero();
    for k in 0..=d {
        let term = binomial(n + 1, k) * BigInt::from(d + 1 - k).pow(n as u32);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Calls `f` on every permutation of `0..n` in lexicographic order.
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        f(&p);
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return;
        };
        let j = (i..n)
            .rev()
            .find(|&j| p[j] > p[i - 1])
            .expect("pivot exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Per-key histograms of descent counts, merged into exact coefficients at the end.
struct DescentHistogram {
    n: usize,
    counts: HashMap<Vec<Generator>, Vec<i64>>,
}

impl DescentHistogram {
    fn new(n: usize) -> Self {
        DescentHistogram {
            n,
            counts: HashMap::new(),
        }
    }

    fn record(&mut self, key: Vec<Generator>, d: usize) {
        let n = self.n;
        self.counts.entry(key).or_insert_with(|| vec![0; n])[d] += 1;
    }

    fn into_coefficients(self) -> Vec<(Vec<Generator>, Rational)> {
        let table = eulerian_table(self.n);
        let mut out: Vec<(Vec<Generator>, Rational)> = self
            .counts
            .into_iter()
            .map(|(key, hist)| {
                let coeff = hist
                    .iter()
                    .zip(&table)
                    .filter(|(&k, _)| k != 0)
                    .fold(Rational::zero(), |acc, (&k, c)| {
                        acc + c * Rational::from_integer(BigInt::from(k))
                    });
                (key, coeff)
            })
            .collect();
        out.sort();
        out
    }
}

/// Word form: `sum over sigma in S_n of c_sigma a_sigma(1) ... a_sigma(n)`.
///
/// Repeated arguments are allowed; coinciding words are merged.
pub fn varphi_words(args: &[Generator]) -> AssocPoly {
    let n = args.len();
    if n == 0 {
        return AssocPoly::zero();
    }
    let mut hist = DescentHistogram::new(n);
    for_each_permutation(n, |p| {
        let w: Vec<Generator> = p.iter().map(|&i| args[i]).collect();
        hist.record(w, count_descents(p));
    });
    let mut out = AssocPoly::zero();
    for (w, c) in hist.into_coefficients() {
        out.add_term(Word::new(w), c);
    }
    out
}

/// Right-nested form anchored at the last argument:
/// `sum over sigma in S_{n-1} of c_sigma [a_sigma(1),[...,[a_sigma(n-1), a_n]...]]`,
/// with `c_sigma` taken at size `n`.
///
/// A single argument returns the bare generator.
pub fn varphi_nested(args: &[Generator]) -> LieExpr {
    let n = args.len();
    match n {
        0 => return LieExpr::zero(),
        1 => return LieExpr::generator(args[0]),
        _ => {}
    }
    let anchor = args[n - 1];
    // Brackets ending in [z,z] vanish, so skip those orderings up front.
    let mut hist = DescentHistogram::new(n);
    for_each_permutation(n - 1, |p| {
        let last = args[p[n - 2]];
        if last == anchor {
            return;
        }
        let mut leaves: Vec<Generator> = Vec::with_capacity(n);
        leaves.extend(p.iter().map(|&i| args[i]));
        leaves.push(anchor);
        hist.record(leaves, count_descents(p));
    });
    let mut out = LieExpr::zero();
    for (leaves, c) in hist.into_coefficients() {
        out.add_raw(&leaves, c);
    }
    out
}
