//! Term representations: words in the free associative algebra and
//! right-nested commutators, with conversions between the two.
//!
//! A right-nested commutator `[l1,[l2,...,[l(k-1),lk]...]]` is stored by its
//! leaf sequence. The canonical form keeps the innermost pair ascending;
//! `[z,z]` is zero and never stored. Single-leaf "commutators" stand for bare
//! generators and only occur at grade one.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{BchError, Result};
use crate::rational::{int, sign_and_abs, to_display_string, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(pub u8);

impl Generator {
    pub const X: Generator = Generator(0);
    pub const Y: Generator = Generator(1);

    pub fn new(index: usize) -> Generator {
        Generator(u8::try_from(index).expect("generator index fits in u8"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Naming scheme for generators: `X, Y` for two letters, `X1, X2, ...` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alphabet {
    size: usize,
}

impl Alphabet {
    pub fn new(size: usize) -> Alphabet {
        Alphabet { size }
    }

    pub fn two() -> Alphabet {
        Alphabet { size: 2 }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn name(&self, g: Generator) -> String {
        if self.size <= 2 {
            match g.0 {
                0 => "X".to_string(),
                1 => "Y".to_string(),
                i => format!("X{}", i + 1),
            }
        } else {
            format!("X{}", g.0 as usize + 1)
        }
    }

    pub fn parse(&self, name: &str) -> Result<Generator> {
        let g = match (self.size <= 2, name) {
            (true, "X") => Generator::X,
            (true, "Y") => Generator::Y,
            (_, s) => {
                let idx: usize = s
                    .strip_prefix('X')
                    .and_then(|rest| rest.parse().ok())
                    .filter(|&i| i >= 1)
                    .ok_or(BchError::GeneratorOutOfRange {
                        index: usize::MAX,
                        size: self.size,
                    })?;
                Generator::new(idx - 1)
            }
        };
        self.check(g)?;
        Ok(g)
    }

    pub fn check(&self, g: Generator) -> Result<()> {
        if g.index() < self.size {
            Ok(())
        } else {
            Err(BchError::GeneratorOutOfRange {
                index: g.index(),
                size: self.size,
            })
        }
    }

    /// Smallest alphabet naming every generator in `gens`, at least two letters.
    pub fn covering<'a>(gens: impl IntoIterator<Item = &'a Generator>) -> Alphabet {
        let max = gens.into_iter().map(|g| g.index() + 1).max().unwrap_or(0);
        Alphabet::new(max.max(2))
    }
}

/// A word in the free associative algebra. Ordered by length, then
/// lexicographically with `X1 < X2 < ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn new(letters: Vec<Generator>) -> Word {
        Word(letters)
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn grade(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + other.0.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        let sep = if alphabet.size() <= 2 { "" } else { " " };
        self.0
            .iter()
            .map(|&g| alphabet.name(g))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl From<&[Generator]> for Word {
    fn from(letters: &[Generator]) -> Self {
        Word(letters.to_vec())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of the free associative algebra: a finite map from words to
/// nonzero rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssocPoly {
    terms: BTreeMap<Word, Rational>,
}

impl AssocPoly {
    pub fn zero() -> AssocPoly {
        AssocPoly::default()
    }

    pub fn one() -> AssocPoly {
        AssocPoly::monomial(Word::new(Vec::new()), Rational::one())
    }

    pub fn monomial(word: Word, coeff: Rational) -> AssocPoly {
        let mut p = AssocPoly::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn generator(g: Generator) -> AssocPoly {
        AssocPoly::monomial(Word::new(vec![g]), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &Word) -> Rational {
        self.terms.get(word).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, word: Word, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &AssocPoly, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * factor);
        }
    }

    pub fn scale(&self, factor: &Rational) -> AssocPoly {
        let mut out = AssocPoly::zero();
        out.add_assign_scaled(self, factor);
        out
    }

    pub fn add(&self, other: &AssocPoly) -> AssocPoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &AssocPoly) -> AssocPoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-Rational::one());
        out
    }

    pub fn mul(&self, other: &AssocPoly) -> AssocPoly {
        let mut out = AssocPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// Product keeping only words of length at most `max_grade`.
    pub fn mul_truncated(&self, other: &AssocPoly, max_grade: usize) -> AssocPoly {
        let mut out = AssocPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                if w1.grade() + w2.grade() <= max_grade {
                    out.add_term(w1.concat(w2), c1 * c2);
                }
            }
        }
        out
    }

    /// Distinct word lengths present, ascending.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(Word::grade).collect();
        g.dedup();
        g
    }

    /// The common grade of all words, `None` for the zero polynomial.
    pub fn grade(&self) -> Result<Option<usize>> {
        match self.grades().as_slice() {
            [] => Ok(None),
            [g] => Ok(Some(*g)),
            gs => Err(BchError::NonHomogeneous(gs.to_vec())),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.grades().len() <= 1
    }

    pub fn homogeneous_part(&self, grade: usize) -> AssocPoly {
        AssocPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.grade() == grade)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        render_sum(
            self.terms
                .iter()
                .map(|(w, c)| (w.display(alphabet), c.clone())),
        )
    }
}

impl fmt::Display for AssocPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alphabet = Alphabet::covering(self.terms.keys().flat_map(|w| w.letters().iter()));
        f.write_str(&self.display(&alphabet))
    }
}

/// A right-nested commutator, identified by its leaves.
///
/// Ordered by grade, then colexicographically (compare the last leaf first),
/// which groups commutators by their innermost bracket.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NestedComm {
    leaves: Vec<Generator>,
}

impl NestedComm {
    /// Degenerate single-leaf term standing for the bare generator.
    pub fn generator(g: Generator) -> NestedComm {
        NestedComm { leaves: vec![g] }
    }

    /// Builds a commutator from leaves already in canonical form.
    pub fn from_canonical(leaves: Vec<Generator>) -> Option<NestedComm> {
        if is_canonical(&leaves) {
            Some(NestedComm { leaves })
        } else {
            None
        }
    }

    pub fn leaves(&self) -> &[Generator] {
        &self.leaves
    }

    pub fn grade(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.leaves.len() == 1
    }

    /// `[g, self]`, canonicalized. Zero only when `self` is the bare generator `g`.
    pub fn bracket_left(&self, g: Generator) -> Option<(NestedComm, Rational)> {
        let mut leaves = Vec::with_capacity(self.leaves.len() + 1);
        leaves.push(g);
        leaves.extend_from_slice(&self.leaves);
        canonicalize(&leaves, Rational::one())
    }

    /// `[X,[Y,[X,Y]]]`
    pub fn display_nested(&self, alphabet: &Alphabet) -> String {
        let names: Vec<String> = self.leaves.iter().map(|&g| alphabet.name(g)).collect();
        if names.len() == 1 {
            return names[0].clone();
        }
        let mut s = String::new();
        for name in &names[..names.len() - 1] {
            s.push('[');
            s.push_str(name);
            s.push(',');
        }
        s.push_str(&names[names.len() - 1]);
        s.push_str(&"]".repeat(names.len() - 1));
        s
    }

    /// `[X,Y,X,Y]`
    pub fn display_flat(&self, alphabet: &Alphabet) -> String {
        let names: Vec<String> = self.leaves.iter().map(|&g| alphabet.name(g)).collect();
        if names.len() == 1 {
            return names[0].clone();
        }
        format!("[{}]", names.join(","))
    }
}

impl Ord for NestedComm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.leaves
            .len()
            .cmp(&other.leaves.len())
            .then_with(|| self.leaves.iter().rev().cmp(other.leaves.iter().rev()))
    }
}

impl PartialOrd for NestedComm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NestedComm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_nested(&Alphabet::covering(&self.leaves)))
    }
}

fn is_canonical(leaves: &[Generator]) -> bool {
    match leaves.len() {
        0 => false,
        1 => true,
        k => leaves[k - 2] < leaves[k - 1],
    }
}

/// Brings a raw right-nested bracket into canonical form.
///
/// Returns `None` when the bracket vanishes (`[z,z]` innermost, or a zero
/// coefficient). A descending innermost pair is swapped and the coefficient
/// negated. Single leaves pass through unchanged.
pub fn canonicalize(raw_leaves: &[Generator], coeff: Rational) -> Option<(NestedComm, Rational)> {
    if coeff.is_zero() || raw_leaves.is_empty() {
        return None;
    }
    let k = raw_leaves.len();
    if k == 1 {
        return Some((NestedComm::generator(raw_leaves[0]), coeff));
    }
    match raw_leaves[k - 2].cmp(&raw_leaves[k - 1]) {
        Ordering::Equal => None,
        Ordering::Less => Some((
            NestedComm {
                leaves: raw_leaves.to_vec(),
            },
            coeff,
        )),
        Ordering::Greater => {
            let mut leaves = raw_leaves.to_vec();
            leaves.swap(k - 2, k - 1);
            Some((NestedComm { leaves }, -coeff))
        }
    }
}

/// A Lie polynomial written over right-nested commutators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LieExpr {
    terms: BTreeMap<NestedComm, Rational>,
}

impl LieExpr {
    pub fn zero() -> LieExpr {
        LieExpr::default()
    }

    pub fn generator(g: Generator) -> LieExpr {
        LieExpr::term(NestedComm::generator(g), Rational::one())
    }

    pub fn term(c: NestedComm, coeff: Rational) -> LieExpr {
        let mut e = LieExpr::zero();
        e.add_canonical(c, coeff);
        e
    }

    /// A single raw bracket, canonicalized.
    pub fn bracket(raw_leaves: &[Generator], coeff: Rational) -> LieExpr {
        let mut e = LieExpr::zero();
        e.add_raw(raw_leaves, coeff);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero canonical terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NestedComm, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, c: &NestedComm) -> Rational {
        self.terms.get(c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_canonical(&mut self, c: NestedComm, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(c) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_raw(&mut self, raw_leaves: &[Generator], coeff: Rational) {
        if let Some((c, k)) = canonicalize(raw_leaves, coeff) {
            self.add_canonical(c, k);
        }
    }

    pub fn add_assign_scaled(&mut self, other: &LieExpr, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (c, k) in &other.terms {
            self.add_canonical(c.clone(), k * factor);
        }
    }

    pub fn add(&self, other: &LieExpr) -> LieExpr {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &LieExpr) -> LieExpr {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, factor: &Rational) -> LieExpr {
        let mut out = LieExpr::zero();
        out.add_assign_scaled(self, factor);
        out
    }

    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(NestedComm::grade).collect();
        g.dedup();
        g
    }

    pub fn grade(&self) -> Result<Option<usize>> {
        match self.grades().as_slice() {
            [] => Ok(None),
            [g] => Ok(Some(*g)),
            gs => Err(BchError::NonHomogeneous(gs.to_vec())),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.grades().len() <= 1
    }

    pub fn homogeneous_part(&self, grade: usize) -> LieExpr {
        LieExpr {
            terms: self
                .terms
                .iter()
                .filter(|(c, _)| c.grade() == grade)
                .map(|(c, k)| (c.clone(), k.clone()))
                .collect(),
        }
    }

    pub fn display(&self, alphabet: &Alphabet, flat: bool) -> String {
        render_sum(self.terms.iter().map(|(c, k)| {
            let body = if flat {
                c.display_flat(alphabet)
            } else {
                c.display_nested(alphabet)
            };
            (body, k.clone())
        }))
    }
}

impl FromIterator<(NestedComm, Rational)> for LieExpr {
    fn from_iter<I: IntoIterator<Item = (NestedComm, Rational)>>(iter: I) -> Self {
        let mut e = LieExpr::zero();
        for (c, k) in iter {
            e.add_canonical(c, k);
        }
        e
    }
}

impl fmt::Display for LieExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alphabet = Alphabet::covering(self.terms.keys().flat_map(|c| c.leaves().iter()));
        f.write_str(&self.display(&alphabet, false))
    }
}

/// `c1 A + c2 B - c3 C`, with unit coefficients omitted and `0` for the empty sum.
pub(crate) fn render_sum(terms: impl Iterator<Item = (String, Rational)>) -> String {
    let mut out = String::new();
    for (i, (body, coeff)) in terms.enumerate() {
        let (neg, abs) = sign_and_abs(&coeff);
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        if !abs.is_one() {
            out.push_str(&to_display_string(&abs));
            out.push(' ');
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Integer word expansion of a right-nested commutator.
///
/// Built from the inside out: `p <- a p - p a` for each leaf `a` left of the
/// innermost one.
pub(crate) fn expand_leaves_int(leaves: &[Generator]) -> Vec<(Vec<Generator>, i64)> {
    let k = leaves.len();
    let mut current: BTreeMap<Vec<Generator>, i64> = BTreeMap::new();
    current.insert(vec![leaves[k - 1]], 1);
    for &a in leaves[..k - 1].iter().rev() {
        let mut next: BTreeMap<Vec<Generator>, i64> = BTreeMap::new();
        for (w, c) in &current {
            let mut left = Vec::with_capacity(w.len() + 1);
            left.push(a);
            left.extend_from_slice(w);
            *next.entry(left).or_insert(0) += c;
            let mut right = w.clone();
            right.push(a);
            *next.entry(right).or_insert(0) -= c;
        }
        next.retain(|_, c| *c != 0);
        current = next;
    }
    current.into_iter().collect()
}

/// Image of a right-nested commutator in the free associative algebra.
pub fn expand_nested(c: &NestedComm) -> AssocPoly {
    let mut p = AssocPoly::zero();
    for (w, k) in expand_leaves_int(c.leaves()) {
        p.add_term(Word::new(w), int(k));
    }
    p
}

/// Linear extension of [`expand_nested`].
pub fn expand_lie(e: &LieExpr) -> AssocPoly {
    let mut p = AssocPoly::zero();
    for (c, k) in e.iter() {
        for (w, n) in expand_leaves_int(c.leaves()) {
            p.add_term(Word::new(w), k * int(n));
        }
    }
    p
}

/// Right-to-left bracketing `w = a1...an -> [a1,[a2,...,[a(n-1),an]...]]`,
/// extended linearly. On a homogeneous Lie polynomial of grade `n` this
/// multiplies by `n`.
pub fn dsw_bracketing(p: &AssocPoly) -> Result<LieExpr> {
    p.grade()?;
    let mut e = LieExpr::zero();
    for (w, k) in p.iter() {
        e.add_raw(w.letters(), k.clone());
    }
    Ok(e)
}
