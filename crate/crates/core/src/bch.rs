//! Homogeneous terms of the BCH series.
//!
//! [`phi_m`] assembles `Phi_m(X1, ..., Xn)` by polarizing the multilinear
//! part: each multidegree `(i1, ..., in)` with `sum = m` contributes
//! `varphi_m(X1 x i1, ..., Xn x in) / (i1! ... in!)`. Two independent
//! constructions serve as oracles: Dynkin's bracket formula
//! ([`dynkin_phi_m`]) and direct truncation of the logarithm in the free
//! associative algebra ([`log_product_words`]).
//!
//! The symmetric series `log(e^{X/2} e^Y e^{X/2})` is obtained by conjugation,
//! `Psi = exp(-ad_{X/2}) Phi`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{AssocPoly, Generator, LieExpr, Word};
use crate::error::{BchError, Result};
use crate::eulerian::varphi_nested;
use crate::rational::{factorial, Rational};

/// One summand of the polarization formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarization {
    pub multidegree: Vec<usize>,
    pub weight: Rational,
}

impl Polarization {
    pub fn new(multidegree: Vec<usize>) -> Polarization {
        let denom = multidegree
            .iter()
            .fold(BigInt::one(), |acc, &i| acc * factorial(i));
        Polarization {
            multidegree,
            weight: Rational::new(BigInt::one(), denom),
        }
    }

    pub fn grade(&self) -> usize {
        self.multidegree.iter().sum()
    }

    /// `X1` repeated `i1` times, then `X2` repeated `i2` times, and so on.
    pub fn arguments(&self) -> Vec<Generator> {
        self.multidegree
            .iter()
            .enumerate()
            .flat_map(|(j, &i)| std::iter::repeat_n(Generator::new(j), i))
            .collect()
    }
}

/// All multidegrees of total `m` over `n` generators, lexicographically descending.
pub fn polarizations(m: usize, n: usize) -> Vec<Polarization> {
    fn rec(rest: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Polarization>) {
        if slots == 1 {
            prefix.push(rest);
            out.push(Polarization::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for i in (0..=rest).rev() {
            prefix.push(i);
            rec(rest - i, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(m, n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Plain,
    Symmetric,
}

/// A request for a homogeneous BCH term, optionally with rescaled generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRequest {
    pub grade: usize,
    pub alphabet: usize,
    pub scaling: Option<Vec<Rational>>,
    pub variant: Variant,
}

impl SeriesRequest {
    pub fn plain(grade: usize, alphabet: usize) -> SeriesRequest {
        SeriesRequest {
            grade,
            alphabet,
            scaling: None,
            variant: Variant::Plain,
        }
    }

    pub fn symmetric(grade: usize) -> SeriesRequest {
        SeriesRequest {
            grade,
            alphabet: 2,
            scaling: None,
            variant: Variant::Symmetric,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grade == 0 {
            return Err(BchError::GradeTooSmall(0));
        }
        if self.alphabet < 2 {
            return Err(BchError::GeneratorOutOfRange {
                index: 1,
                size: self.alphabet,
            });
        }
        if self.variant == Variant::Symmetric && self.alphabet != 2 {
            return Err(BchError::UnsupportedAlphabet);
        }
        if let Some(factors) = &self.scaling {
            if factors.len() != self.alphabet {
                return Err(BchError::GeneratorOutOfRange {
                    index: factors.len(),
                    size: self.alphabet,
                });
            }
            if let Some(i) = factors.iter().position(Zero::is_zero) {
                return Err(BchError::ZeroFactor(i));
            }
        }
        Ok(())
    }

    pub fn compute(&self) -> Result<LieExpr> {
        self.validate()?;
        let e = match self.variant {
            Variant::Plain => phi_m(self.grade, self.alphabet),
            Variant::Symmetric => sym_bch_m(self.grade),
        };
        match &self.scaling {
            None => Ok(e),
            Some(factors) => {
                let sub = Substitution::new(
                    factors
                        .iter()
                        .enumerate()
                        .map(|(i, f)| (Generator::new(i), f.clone()))
                        .collect(),
                )?;
                scale_substitute(&e, &sub)
            }
        }
    }
}

/// `Phi_m(X1, ..., Xn)` over right-nested commutators, like terms merged.
/// Grade one gives `X1 + ... + Xn`.
pub fn phi_m(m: usize, n: usize) -> LieExpr {
    let mut out = LieExpr::zero();
    for pol in polarizations(m, n) {
        // a single repeated generator contributes nothing beyond grade one
        if m > 1 && pol.multidegree.iter().filter(|&&i| i > 0).count() < 2 {
            continue;
        }
        let part = varphi_nested(&pol.arguments());
        out.add_assign_scaled(&part, &pol.weight);
    }
    out
}

/// Dynkin's formula for `Phi_m(X, Y)`:
/// `sum_k (-1)^(k-1)/k sum [X^p1 Y^q1 ... X^pk Y^qk] / (m p1! q1! ... pk! qk!)`
/// over blocks with `pi + qi > 0` and total length `m`.
pub fn dynkin_phi_m(m: usize) -> LieExpr {
    if m == 0 {
        return LieExpr::zero();
    }
    let mut acc: HashMap<Vec<Generator>, Rational> = HashMap::new();

    fn rec(
        remaining: usize,
        m: usize,
        k: usize,
        leaves: &mut Vec<Generator>,
        denom: &BigInt,
        acc: &mut HashMap<Vec<Generator>, Rational>,
    ) {
        if remaining == 0 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let coeff = Rational::new(
                BigInt::from(sign),
                denom * BigInt::from(k) * BigInt::from(m),
            );
            *acc.entry(leaves.clone()).or_insert_with(Rational::zero) += coeff;
            return;
        }
        for len in 1..=remaining {
            for p in 0..=len {
                let q = len - p;
                let before = leaves.len();
                leaves.extend(std::iter::repeat_n(Generator::X, p));
                leaves.extend(std::iter::repeat_n(Generator::Y, q));
                let d = denom * factorial(p) * factorial(q);
                rec(remaining - len, m, k + 1, leaves, &d, acc);
                leaves.truncate(before);
            }
        }
    }

    rec(
        m,
        m,
        0,
        &mut Vec::with_capacity(m),
        &BigInt::one(),
        &mut acc,
    );
    let mut raw: Vec<(Vec<Generator>, Rational)> = acc.into_iter().collect();
    raw.sort();
    let mut out = LieExpr::zero();
    for (leaves, c) in raw {
        out.add_raw(&leaves, c);
    }
    out
}

/// Grade-`m` part of `log(e^{X1} ... e^{Xn})`, computed by truncated power
/// series in the free associative algebra.
pub fn log_product_words(m: usize, n: usize) -> AssocPoly {
    if m == 0 {
        return AssocPoly::zero();
    }
    // E = prod_j sum_{p<=m} Xj^p / p!, truncated at grade m
    let mut product = AssocPoly::one();
    for j in 0..n {
        let g = Generator::new(j);
        let mut series = AssocPoly::zero();
        for p in 0..=m {
            series.add_term(
                Word::new(vec![g; p]),
                Rational::new(BigInt::one(), factorial(p)),
            );
        }
        product = product.mul_truncated(&series, m);
    }
    // Z = E - 1, split by grade
    let z: Vec<AssocPoly> = (0..=m).map(|h| product.homogeneous_part(h)).collect();

    // power[g] = grade-g part of Z^k
    let mut power: Vec<AssocPoly> = z.clone();
    power[0] = AssocPoly::zero();
    let mut out = power[m].clone();
    for k in 2..=m {
        let mut next = vec![AssocPoly::zero(); m + 1];
        for (g, slot) in next.iter_mut().enumerate().skip(k) {
            for h in 1..=(g - (k - 1)) {
                if power[g - h].is_zero() {
                    continue;
                }
                let prod = power[g - h].mul(&z[h]);
                slot.add_assign_scaled(&prod, &Rational::one());
            }
        }
        power = next;
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out.add_assign_scaled(
            &power[m],
            &Rational::new(BigInt::from(sign), BigInt::from(k)),
        );
    }
    out
}

/// `ad_a^k b = [a, [a, ..., [a, b]...]]`, canonicalized.
pub fn ad_power(a: Generator, b: &LieExpr, k: usize) -> LieExpr {
    let mut current = b.clone();
    for _ in 0..k {
        let mut next = LieExpr::zero();
        for (c, coeff) in current.iter() {
            if let Some((bracketed, sign)) = c.bracket_left(a) {
                next.add_canonical(bracketed, coeff * sign);
            }
        }
        current = next;
    }
    current
}

/// Grade-`m` part of `exp(-ad_{X/2}) Phi`, with `phi(j)` supplying `Phi_j`:
/// `sum_k (-1)^k / (2^k k!) ad_X^k Phi_{m-k}`.
pub fn sym_bch_from(m: usize, mut phi: impl FnMut(usize) -> LieExpr) -> LieExpr {
    let mut out = LieExpr::zero();
    for k in 0..m {
        let inner = phi(m - k);
        if inner.is_zero() {
            continue;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let weight = Rational::new(
            BigInt::from(sign),
            BigInt::from(2).pow(k as u32) * factorial(k),
        );
        out.add_assign_scaled(&ad_power(Generator::X, &inner, k), &weight);
    }
    out
}

/// `Psi_m(X, Y)` for `e^{X/2} e^Y e^{X/2} = e^Psi`, built from the
/// uncompressed `Phi_j` terms.
pub fn sym_bch_m(m: usize) -> LieExpr {
    sym_bch_from(m, |j| phi_m(j, 2))
}

/// Linear substitution of generators: source generator `i` maps to
/// `factor_i * target_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    map: Vec<(Generator, Rational)>,
}

impl Substitution {
    pub fn new(map: Vec<(Generator, Rational)>) -> Result<Substitution> {
        if let Some(i) = map.iter().position(|(_, f)| f.is_zero()) {
            return Err(BchError::ZeroFactor(i));
        }
        Ok(Substitution { map })
    }

    pub fn identity(n: usize) -> Substitution {
        Substitution {
            map: (0..n)
                .map(|i| (Generator::new(i), Rational::one()))
                .collect(),
        }
    }

    /// `x1 -> X/2, x2 -> Y, x3 -> X/2`
    pub fn symmetric_split() -> Substitution {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        Substitution {
            map: vec![
                (Generator::X, half.clone()),
                (Generator::Y, Rational::one()),
                (Generator::X, half),
            ],
        }
    }

    /// `X <-> Y`
    pub fn swap_two() -> Substitution {
        Substitution {
            map: vec![
                (Generator::Y, Rational::one()),
                (Generator::X, Rational::one()),
            ],
        }
    }

    /// Every generator multiplied by `factor`.
    pub fn uniform(n: usize, factor: Rational) -> Result<Substitution> {
        Substitution::new(
            (0..n)
                .map(|i| (Generator::new(i), factor.clone()))
                .collect(),
        )
    }

    fn get(&self, g: Generator) -> Result<&(Generator, Rational)> {
        self.map
            .get(g.index())
            .ok_or(BchError::GeneratorOutOfRange {
                index: g.index(),
                size: self.map.len(),
            })
    }
}

/// Substitutes each leaf, multiplying the coefficient by the leaves' factors,
/// then canonicalizes and merges.
pub fn scale_substitute(e: &LieExpr, sub: &Substitution) -> Result<LieExpr> {
    let mut out = LieExpr::zero();
    for (c, coeff) in e.iter() {
        let mut leaves = Vec::with_capacity(c.grade());
        let mut k = coeff.clone();
        for &g in c.leaves() {
            let (target, factor) = sub.get(g)?;
            leaves.push(*target);
            k *= factor;
        }
        out.add_raw(&leaves, k);
    }
    Ok(out)
}

/// `Phi_m(X/2, Y, X/2)` from the three-variable series; an independent route
/// to [`sym_bch_m`].
pub fn sym_bch_via_three_variables(m: usize) -> Result<LieExpr> {
    scale_substitute(&phi_m(m, 3), &Substitution::symmetric_split())
}
