//! Short representations of a Lie polynomial over right-nested commutators.
//!
//! A representation with the fewest terms always lives on some basis made of
//! grade-`m` commutators, so the search walks over such bases: a tableau
//! holds every commutator in the coordinates of the current basis and the
//! target's coordinates are updated by basis exchange, as in the simplex
//! method. Each step brings in the commutator that leaves the fewest nonzero
//! coordinates. Plateaus are crossed with random sideways exchanges and a
//! short tabu list.
//!
//! The walk runs modulo the prime `2^61 - 1`. The winning support is then
//! solved for exactly over the rationals and checked by word expansion.

use std::collections::{HashMap, VecDeque};

use num_bigint::{BigInt, Sign};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{expand_lie, LieExpr, NestedComm};
use crate::error::{BchError, Result};
use crate::identities::{identity_report, lifted_system, rref_in_place, IdentityReport};
use crate::rational::Rational;

const P: u64 = (1 << 61) - 1;

#[inline]
fn mul(a: u64, b: u64) -> u64 {
    let t = (a as u128) * (b as u128);
    let lo = (t as u64) & P;
    let hi = (t >> 61) as u64;
    let s = lo + hi;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    acc
}

fn inv(a: u64) -> u64 {
    debug_assert!(a != 0);
    pow(a, P - 2)
}

fn bigint_mod(n: &BigInt) -> u64 {
    let (sign, digits) = n.to_u64_digits();
    // fold base-2^64 digits, 2^64 = 8 mod P
    let mut acc = 0u64;
    for &d in digits.iter().rev() {
        acc = add(mul(acc, 8), d % P);
    }
    if sign == Sign::Minus {
        sub(0, acc)
    } else {
        acc
    }
}

fn rational_mod(r: &Rational) -> u64 {
    let den = bigint_mod(r.denom());
    assert!(den != 0, "denominator divisible by the search modulus");
    mul(bigint_mod(r.numer()), inv(den))
}

/// Search limits. `budget` caps the number of bases visited per call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompactOptions {
    pub budget: usize,
    pub seed: u64,
}

impl Default for CompactOptions {
    fn default() -> Self {
        CompactOptions {
            budget: 10_000,
            seed: 0x05ee_dbc4,
        }
    }
}

/// Coordinates of every grade-`m` commutator in the report's basis.
struct Coordinates {
    exact: Vec<Vec<(usize, Rational)>>,
    modular: Vec<Vec<u64>>,
    rank: usize,
}

impl Coordinates {
    fn new(report: &IdentityReport) -> Coordinates {
        let list = &report.commutators;
        let rank = report.basis.len();
        let basis_index: HashMap<&NestedComm, usize> = report
            .basis
            .iter()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        let system = report.rewrite_system();
        let mut exact = Vec::with_capacity(list.len());
        for c in list.entries() {
            let image = system
                .apply(&LieExpr::term(c.clone(), Rational::from_integer(1.into())))
                .expect("same grade");
            let coords: Vec<(usize, Rational)> = image
                .iter()
                .map(|(b, k)| (basis_index[b], k.clone()))
                .collect();
            exact.push(coords);
        }
        let modular = exact
            .iter()
            .map(|coords| {
                let mut v = vec![0u64; rank];
                for (i, k) in coords {
                    v[*i] = rational_mod(k);
                }
                v
            })
            .collect();
        Coordinates {
            exact,
            modular,
            rank,
        }
    }
}

/// Basis-exchange state, all arithmetic modulo `P`.
#[derive(Clone)]
struct Tableau {
    /// basis[row] = commutator index
    basis: Vec<usize>,
    /// row of each commutator in the basis, if any
    row_of: Vec<Option<usize>>,
    /// t[row][col]: commutator `col` in basis coordinates
    t: Vec<Vec<u64>>,
    /// target in basis coordinates
    x: Vec<u64>,
}

impl Tableau {
    fn new(coords: &Coordinates, report_basis: &[usize], target: Vec<u64>) -> Tableau {
        let n = coords.modular.len();
        let r = coords.rank;
        let mut t = vec![vec![0u64; n]; r];
        for (col, v) in coords.modular.iter().enumerate() {
            for row in 0..r {
                t[row][col] = v[row];
            }
        }
        let mut row_of = vec![None; n];
        for (row, &c) in report_basis.iter().enumerate() {
            row_of[c] = Some(row);
        }
        Tableau {
            basis: report_basis.to_vec(),
            row_of,
            t,
            x: target,
        }
    }

    fn support(&self) -> usize {
        self.x.iter().filter(|&&v| v != 0).count()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col];
        debug_assert!(p != 0);
        let ip = inv(p);
        let n = self.t[row].len();
        for v in self.t[row].iter_mut() {
            *v = mul(*v, ip);
        }
        self.x[row] = mul(self.x[row], ip);
        let pivot_row = self.t[row].clone();
        let x_row = self.x[row];
        let support: Vec<usize> = (0..n).filter(|&j| pivot_row[j] != 0).collect();
        for k in 0..self.t.len() {
            if k == row {
                continue;
            }
            let f = self.t[k][col];
            if f == 0 {
                continue;
            }
            let r = &mut self.t[k];
            for &j in &support {
                r[j] = sub(r[j], mul(f, pivot_row[j]));
            }
            self.x[k] = sub(self.x[k], mul(f, x_row));
        }
        let leaving = self.basis[row];
        self.row_of[leaving] = None;
        self.row_of[col] = Some(row);
        self.basis[row] = col;
    }

    /// Best exchange for every non-basis column: `(resulting support, col, leaving row)`.
    fn moves(&self) -> Vec<(usize, usize, usize)> {
        let r = self.x.len();
        let n = self.row_of.len();
        let support = self.support();
        let mut out = Vec::new();
        let mut rows = Vec::with_capacity(r);
        let mut prefix = Vec::with_capacity(r);
        let mut counts: HashMap<u64, (usize, usize)> = HashMap::new();
        for col in 0..n {
            if self.row_of[col].is_some() {
                continue;
            }
            rows.clear();
            rows.extend((0..r).filter(|&k| self.t[k][col] != 0));
            if rows.is_empty() {
                continue;
            }
            // batch inversion of the column entries
            prefix.clear();
            let mut acc = 1u64;
            for &k in &rows {
                prefix.push(acc);
                acc = mul(acc, self.t[k][col]);
            }
            let mut inv_acc = inv(acc);
            counts.clear();
            let mut in_support = 0;
            let mut zero_row = None;
            for (idx, &k) in rows.iter().enumerate().rev() {
                let inv_k = mul(inv_acc, prefix[idx]);
                inv_acc = mul(inv_acc, self.t[k][col]);
                if self.x[k] == 0 {
                    zero_row.get_or_insert(k);
                    continue;
                }
                in_support += 1;
                let lambda = mul(self.x[k], inv_k);
                let e = counts.entry(lambda).or_insert((0, k));
                e.0 += 1;
                e.1 = k;
            }
            let outside = support - in_support;
            match counts.values().max_by_key(|(c, k)| (*c, usize::MAX - *k)) {
                Some(&(cnt, k)) => {
                    out.push((outside + (rows.len() - cnt) + 1, col, k));
                }
                None => {
                    // column only touches zero coordinates: x is unchanged
                    if let Some(k) = zero_row {
                        out.push((support, col, k));
                    }
                }
            }
        }
        out
    }

    /// Moves a commutator into the basis without disturbing `locked` rows.
    fn bring_in(&mut self, col: usize, locked: &[bool]) -> bool {
        if self.row_of[col].is_some() {
            return true;
        }
        let row = (0..self.basis.len()).find(|&k| !locked[self.basis[k]] && self.t[k][col] != 0);
        match row {
            Some(k) => {
                self.pivot(k, col);
                true
            }
            None => false,
        }
    }

    fn support_columns(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = (0..self.x.len())
            .filter(|&k| self.x[k] != 0)
            .map(|k| self.basis[k])
            .collect();
        cols.sort_unstable();
        cols
    }
}

fn target_coordinates(
    e: &LieExpr,
    report: &IdentityReport,
    coords: &Coordinates,
) -> Result<Vec<u64>> {
    let mut x = vec![0u64; coords.rank];
    for (c, k) in e.iter() {
        let idx = report
            .commutators
            .index_of(c)
            .ok_or(BchError::UnsupportedAlphabet)?;
        let km = rational_mod(k);
        for (row, v) in coords.modular[idx].iter().enumerate() {
            if *v != 0 {
                x[row] = add(x[row], mul(km, *v));
            }
        }
    }
    Ok(x)
}

/// Exact coefficients of `e` over the commutators `support`, if `e` lies in their span.
fn solve_exact(
    e: &LieExpr,
    support: &[usize],
    report: &IdentityReport,
    coords: &Coordinates,
) -> Option<LieExpr> {
    let r = coords.rank;
    let s = support.len();
    let mut rows = vec![vec![Rational::zero(); s + 1]; r];
    for (j, &col) in support.iter().enumerate() {
        for (i, k) in &coords.exact[col] {
            rows[*i][j] = k.clone();
        }
    }
    for (c, k) in e.iter() {
        let idx = report.commutators.index_of(c)?;
        for (i, v) in &coords.exact[idx] {
            rows[*i][s] += k * v;
        }
    }
    let pivots = rref_in_place(&mut rows, s + 1);
    if pivots.len() != s || pivots.iter().any(|&p| p >= s) {
        return None;
    }
    let out: LieExpr = support
        .iter()
        .enumerate()
        .map(|(j, &col)| {
            (
                report.commutators.entries()[col].clone(),
                rows[j][s].clone(),
            )
        })
        .collect();
    Some(out)
}

struct Search<'a> {
    coords: &'a Coordinates,
    rng: ChaCha8Rng,
    remaining: usize,
}

impl<'a> Search<'a> {
    /// Basis containing as much of `seed_support` as possible.
    fn seeded(&mut self, base: &Tableau, seed_support: &[usize]) -> Tableau {
        let mut tab = base.clone();
        let mut locked = vec![false; self.coords.modular.len()];
        for &c in seed_support {
            if tab.bring_in(c, &locked) {
                locked[c] = true;
            }
        }
        tab
    }

    fn walk(&mut self, mut tab: Tableau, steps: usize) -> Tableau {
        let mut best = tab.clone();
        let mut best_size = tab.support();
        let mut tabu: VecDeque<usize> = VecDeque::new();
        let tabu_len = (self.coords.rank / 4).max(3);
        let mut stall = 0usize;
        for _ in 0..steps {
            if self.remaining == 0 || best_size <= 1 {
                break;
            }
            let current = tab.support();
            let moves = tab.moves();
            let Some(&(min_size, _, _)) = moves.iter().min_by_key(|m| m.0) else {
                break;
            };
            let allowed: Vec<&(usize, usize, usize)> = moves
                .iter()
                .filter(|m| !tabu.contains(&m.1) || m.0 < best_size)
                .collect();
            let chosen = if min_size < current {
                let best_moves: Vec<&(usize, usize, usize)> =
                    moves.iter().filter(|m| m.0 == min_size).collect();
                **best_moves.choose(&mut self.rng).expect("nonempty")
            } else {
                stall += 1;
                let sideways: Vec<&&(usize, usize, usize)> =
                    allowed.iter().filter(|m| m.0 <= current).collect();
                if !sideways.is_empty() && !stall.is_multiple_of(8) {
                    ***sideways.choose(&mut self.rng).expect("nonempty")
                } else {
                    let worse: Vec<&&(usize, usize, usize)> =
                        allowed.iter().filter(|m| m.0 <= current + 2).collect();
                    match worse.choose(&mut self.rng) {
                        Some(m) => ***m,
                        None => break,
                    }
                }
            };
            let (_, col, row) = chosen;
            let leaving = tab.basis[row];
            tab.pivot(row, col);
            self.remaining -= 1;
            tabu.push_back(leaving);
            if tabu.len() > tabu_len {
                tabu.pop_front();
            }
            let size = tab.support();
            if size < best_size {
                best_size = size;
                best = tab.clone();
                stall = 0;
            } else if stall > 4 * self.coords.rank && self.rng.gen_bool(0.5) {
                tab = best.clone();
                stall = 0;
            }
        }
        best
    }
}

/// Shortest representation of `e` found within `opts.budget` basis exchanges.
///
/// Seeds the search with `e` itself, its rewrite in the elimination basis,
/// and its rewrites under the grade-4 and grade-6 identity regimes, so the
/// result is never longer than any of those. Word expansion is preserved
/// exactly.
pub fn compact_reduce_with(e: &LieExpr, m: usize, opts: CompactOptions) -> Result<LieExpr> {
    if e.is_zero() {
        return Ok(LieExpr::zero());
    }
    if let Some(g) = e.grade()? {
        if g != m {
            return Err(BchError::GradeMismatch {
                expected: m,
                found: g,
            });
        }
    }
    if m < 2 {
        return Ok(e.clone());
    }
    let report = identity_report(m)?;
    let full = report.rewrite_system().apply(e)?;
    if report.identities.is_empty() {
        return Ok(full);
    }
    let mut seeds = vec![e.clone(), full];
    for k in [4, 6] {
        if k <= m {
            seeds.push(lifted_system(m, k)?.apply(e)?);
        }
    }
    seeds.sort_by_key(LieExpr::len);
    let mut best = seeds[0].clone();

    let coords = Coordinates::new(&report);
    let target = target_coordinates(e, &report, &coords)?;
    let basis_cols: Vec<usize> = report
        .basis
        .iter()
        .map(|c| report.commutators.index_of(c).expect("basis in list"))
        .collect();
    let base = Tableau::new(&coords, &basis_cols, target);
    let mut search = Search {
        coords: &coords,
        rng: ChaCha8Rng::seed_from_u64(opts.seed ^ (m as u64)),
        remaining: opts.budget,
    };

    let rounds = 4 * seeds.len();
    let per_round = (opts.budget / rounds).max(1);
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for round in 0..rounds {
        if search.remaining == 0 {
            break;
        }
        let seed = &seeds[round % seeds.len()];
        let mut support: Vec<usize> = seed
            .iter()
            .map(|(c, _)| {
                report
                    .commutators
                    .index_of(c)
                    .ok_or(BchError::UnsupportedAlphabet)
            })
            .collect::<Result<_>>()?;
        if round >= seeds.len() {
            support.shuffle(&mut search.rng);
        }
        let start = search.seeded(&base, &support);
        let found = search.walk(start, per_round);
        candidates.push(found.support_columns());
    }
    candidates.sort_by_key(Vec::len);
    candidates.dedup();
    for support in candidates {
        if support.len() >= best.len() {
            break;
        }
        if let Some(exact) = solve_exact(e, &support, &report, &coords) {
            if expand_lie(&exact) == expand_lie(e) {
                best = exact;
                break;
            }
        }
    }
    Ok(best)
}

/// [`compact_reduce_with`] under the default budget.
pub fn compact_reduce(e: &LieExpr, m: usize) -> Result<LieExpr> {
    compact_reduce_with(e, m, CompactOptions::default())
}
