//! Linear identities among right-nested commutators in two generators.
//!
//! At grade `m` the `2^(m-2)` canonical commutators ending in `[X,Y]` span
//! the homogeneous component of the free Lie algebra but are not
//! independent. Expanding each into words gives a matrix `A`; exact
//! Gauss-Jordan elimination of `(A | I)` yields `(M | P)`, whose rows with a
//! vanishing `M` part are the identities `P . C = 0`. Each identity is
//! normalized with a leading one on some commutator; those leading
//! commutators are eliminated and the rest form a basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::algebra::{expand_leaves_int, expand_lie, Generator, LieExpr, NestedComm, Word};
use crate::error::{BchError, Result};
use crate::rational::{int, Rational};

/// Canonical grade-`m` commutators over `{X, Y}`, in colexicographic order
/// of their leaves (the order used for matrix rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorList {
    grade: usize,
    entries: Vec<NestedComm>,
}

impl CommutatorList {
    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn entries(&self) -> &[NestedComm] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Position of `c` in the list.
    pub fn index_of(&self, c: &NestedComm) -> Option<usize> {
        if c.grade() != self.grade {
            return None;
        }
        let leaves = c.leaves();
        let m = self.grade;
        if leaves[m - 2] != Generator::X || leaves[m - 1] != Generator::Y {
            return None;
        }
        let mut idx = 0usize;
        for (i, g) in leaves[..m - 2].iter().enumerate() {
            match g.0 {
                0 => {}
                1 => idx |= 1 << i,
                _ => return None,
            }
        }
        Some(idx)
    }
}

/// All canonical right-nested commutators of grade `m` in `X, Y`.
///
/// Every one ends in `[X,Y]`; the `m-2` outer leaves run over all words,
/// with the first leaf varying fastest.
pub fn enumerate_nested(m: usize) -> Result<CommutatorList> {
    if m < 2 {
        return Err(BchError::GradeTooSmall(m));
    }
    let outer = m - 2;
    let entries = (0..1usize << outer)
        .map(|idx| {
            let mut leaves: Vec<Generator> = (0..outer)
                .map(|i| Generator(((idx >> i) & 1) as u8))
                .collect();
            leaves.push(Generator::X);
            leaves.push(Generator::Y);
            NestedComm::from_canonical(leaves).expect("ends in [X,Y]")
        })
        .collect();
    Ok(CommutatorList { grade: m, entries })
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ColumnLabel {
    Word(Word),
    Comm(NestedComm),
}

/// Dense matrix of exact rationals with labelled rows and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: Vec<Vec<Rational>>,
    row_labels: Vec<NestedComm>,
    col_labels: Vec<ColumnLabel>,
}

impl ExactMatrix {
    pub fn new(
        rows: Vec<Vec<Rational>>,
        row_labels: Vec<NestedComm>,
        col_labels: Vec<ColumnLabel>,
    ) -> ExactMatrix {
        assert_eq!(rows.len(), row_labels.len(), "row label count");
        assert!(
            rows.iter().all(|r| r.len() == col_labels.len()),
            "ragged matrix"
        );
        ExactMatrix {
            rows,
            row_labels,
            col_labels,
        }
    }

    /// Word expansions of `list` as rows. Columns are the words occurring in
    /// at least one expansion, in lexicographic order.
    pub fn from_commutators(list: &CommutatorList) -> ExactMatrix {
        let expansions: Vec<Vec<(Vec<Generator>, i64)>> = list
            .entries
            .iter()
            .map(|c| expand_leaves_int(c.leaves()))
            .collect();
        let mut words: Vec<Vec<Generator>> = expansions
            .iter()
            .flat_map(|e| e.iter().map(|(w, _)| w.clone()))
            .collect();
        words.sort();
        words.dedup();
        let col_of: HashMap<&[Generator], usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i))
            .collect();
        let rows = expansions
            .iter()
            .map(|e| {
                let mut row = vec![Rational::zero(); words.len()];
                for (w, k) in e {
                    row[col_of[w.as_slice()]] = int(*k);
                }
                row
            })
            .collect();
        ExactMatrix {
            rows,
            row_labels: list.entries.clone(),
            col_labels: words
                .into_iter()
                .map(|w| ColumnLabel::Word(Word::new(w)))
                .collect(),
        }
    }

    /// `(A | I)`, the identity block labelled by the row commutators.
    pub fn augment_identity(&self) -> ExactMatrix {
        let n = self.rows.len();
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                }));
                row
            })
            .collect();
        let mut col_labels = self.col_labels.clone();
        col_labels.extend(self.row_labels.iter().cloned().map(ColumnLabel::Comm));
        ExactMatrix {
            rows,
            row_labels: self.row_labels.clone(),
            col_labels,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row_labels(&self) -> &[NestedComm] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[ColumnLabel] {
        &self.col_labels
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    /// Number of leading columns labelled by words (the `A` or `M` block).
    pub fn word_columns(&self) -> usize {
        self.col_labels
            .iter()
            .take_while(|c| matches!(c, ColumnLabel::Word(_)))
            .count()
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let split = self.word_columns();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|r| r.to_string()).collect();
            if split < cells.len() {
                writeln!(
                    f,
                    "{} | {}",
                    cells[..split].join(" "),
                    cells[split..].join(" ")
                )?;
            } else {
                writeln!(f, "{}", cells.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Reduced row-echelon form over the rationals.
///
/// Columns are scanned left to right; the pivot is the first row at or below
/// the current one with a nonzero entry. Pivot rows are scaled to a leading
/// one and the pivot column is cleared in every other row.
pub fn gauss_jordan(a: &ExactMatrix) -> ExactMatrix {
    let mut rows = a.rows.clone();
    rref_in_place(&mut rows, a.ncols());
    ExactMatrix {
        rows,
        row_labels: a.row_labels.clone(),
        col_labels: a.col_labels.clone(),
    }
}

/// Returns the pivot columns.
pub(crate) fn rref_in_place(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r].iter_mut().skip(c) {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let support: Vec<usize> = (c..ncols).filter(|&j| !rows[r][j].is_zero()).collect();
        let (before, rest) = rows.split_at_mut(r);
        let (pivot_row, after) = rest.split_first_mut().expect("row r exists");
        for row in before.iter_mut().chain(after.iter_mut()) {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                row[j] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Substitution rules eliminating some commutators of one grade in favour of
/// the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    grade: usize,
    rules: BTreeMap<NestedComm, LieExpr>,
}

impl RewriteSystem {
    /// Row-reduces `relations` (each a grade-`m` Lie expression equal to zero)
    /// in commutator-list order and turns every nonzero row into a rule for
    /// its leading commutator.
    pub fn from_relations(m: usize, relations: &[LieExpr]) -> Result<RewriteSystem> {
        RewriteSystem::from_relations_preferring(m, relations, &[])
    }

    /// Like [`RewriteSystem::from_relations`], but the commutators in
    /// `preferred` come first in the column order, so they are eliminated
    /// whenever the relations allow it.
    pub fn from_relations_preferring(
        m: usize,
        relations: &[LieExpr],
        preferred: &[NestedComm],
    ) -> Result<RewriteSystem> {
        let list = enumerate_nested(m)?;
        let mut order: Vec<usize> = Vec::with_capacity(list.len());
        let mut placed = vec![false; list.len()];
        for c in preferred {
            let idx = list.index_of(c).ok_or(BchError::UnsupportedAlphabet)?;
            if !placed[idx] {
                placed[idx] = true;
                order.push(idx);
            }
        }
        order.extend((0..list.len()).filter(|&i| !placed[i]));
        let mut column_of = vec![0; list.len()];
        for (col, &idx) in order.iter().enumerate() {
            column_of[idx] = col;
        }

        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(relations.len());
        for rel in relations {
            let mut row = vec![Rational::zero(); list.len()];
            for (c, k) in rel.iter() {
                let idx = list.index_of(c).ok_or(BchError::UnsupportedAlphabet)?;
                row[column_of[idx]] += k;
            }
            rows.push(row);
        }
        let pivots = rref_in_place(&mut rows, list.len());
        let rules = rows
            .iter()
            .zip(&pivots)
            .map(|(row, &p)| {
                let replacement: LieExpr = row
                    .iter()
                    .enumerate()
                    .filter(|(j, k)| *j != p && !k.is_zero())
                    .map(|(j, k)| (list.entries[order[j]].clone(), -k.clone()))
                    .collect();
                (list.entries[order[p]].clone(), replacement)
            })
            .collect();
        Ok(RewriteSystem { grade: m, rules })
    }

    pub fn empty(grade: usize) -> RewriteSystem {
        RewriteSystem {
            grade,
            rules: BTreeMap::new(),
        }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn eliminated(&self) -> impl Iterator<Item = &NestedComm> {
        self.rules.keys()
    }

    /// Replaces every eliminated commutator by its rule. One pass suffices:
    /// right-hand sides never mention eliminated commutators.
    pub fn apply(&self, e: &LieExpr) -> Result<LieExpr> {
        if let Some(g) = e.grade()? {
            if g != self.grade {
                return Err(BchError::GradeMismatch {
                    expected: self.grade,
                    found: g,
                });
            }
        }
        let mut out = LieExpr::zero();
        for (c, k) in e.iter() {
            match self.rules.get(c) {
                Some(rhs) => out.add_assign_scaled(rhs, k),
                None => out.add_canonical(c.clone(), k.clone()),
            }
        }
        Ok(out)
    }
}

/// Everything the elimination produces at one grade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub grade: usize,
    pub commutators: CommutatorList,
    /// Commutators not eliminated by any identity, in list order.
    pub basis: Vec<NestedComm>,
    /// Each identity equals zero and has coefficient one on its leading commutator.
    pub identities: Vec<LieExpr>,
    /// `(A | I)` before elimination.
    pub augmented: ExactMatrix,
    /// `(M | P)` after elimination.
    pub reduced: ExactMatrix,
    system: RewriteSystem,
}

impl IdentityReport {
    pub fn rewrite_system(&self) -> &RewriteSystem {
        &self.system
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Runs the elimination at grade `m` and checks every identity by word expansion.
pub fn identities_and_basis(m: usize) -> Result<IdentityReport> {
    let commutators = enumerate_nested(m)?;
    let a = ExactMatrix::from_commutators(&commutators);
    let augmented = a.augment_identity();
    let reduced = gauss_jordan(&augmented);
    let split = a.ncols();
    let n = commutators.len();

    let mut identities = Vec::new();
    let mut eliminated = vec![false; n];
    for row in reduced.rows() {
        if row[..split].iter().any(|x| !x.is_zero()) {
            continue;
        }
        let p_block = &row[split..];
        let Some(lead) = p_block.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        eliminated[lead] = true;
        let identity: LieExpr = p_block
            .iter()
            .enumerate()
            .filter(|(_, k)| !k.is_zero())
            .map(|(j, k)| (commutators.entries[j].clone(), k.clone()))
            .collect();
        if !expand_lie(&identity).is_zero() {
            return Err(BchError::IdentityCheckFailed { grade: m });
        }
        identities.push(identity);
    }
    let basis = commutators
        .entries
        .iter()
        .zip(&eliminated)
        .filter(|(_, &e)| !e)
        .map(|(c, _)| c.clone())
        .collect();
    let system = RewriteSystem::from_relations(m, &identities)?;
    Ok(IdentityReport {
        grade: m,
        commutators,
        basis,
        identities,
        augmented,
        reduced,
        system,
    })
}

fn report_cache() -> &'static Mutex<HashMap<usize, Arc<IdentityReport>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<IdentityReport>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized [`identities_and_basis`].
pub fn identity_report(m: usize) -> Result<Arc<IdentityReport>> {
    if let Some(r) = report_cache().lock().expect("cache lock").get(&m) {
        return Ok(Arc::clone(r));
    }
    let report = Arc::new(identities_and_basis(m)?);
    report_cache()
        .lock()
        .expect("cache lock")
        .entry(m)
        .or_insert_with(|| Arc::clone(&report));
    Ok(report)
}

/// Expresses `e` over `report.basis`, leaving its word expansion unchanged.
pub fn rewrite_in_basis(e: &LieExpr, report: &IdentityReport) -> Result<LieExpr> {
    report.system.apply(e)
}

/// Identities of one grade, separated by whether they follow from identities
/// of lower grades.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySplit {
    /// Consequences of lower-grade identities.
    pub lifted: Vec<LieExpr>,
    /// A basis of the identities free of every commutator that the lifted
    /// ones eliminate. Together with `lifted` it spans all identities.
    pub new: Vec<LieExpr>,
}

/// Splits the grade-`m` identities into lifted and new ones.
pub fn split_identities(m: usize) -> Result<IdentitySplit> {
    let report = identity_report(m)?;
    if m < 5 {
        return Ok(IdentitySplit {
            lifted: Vec::new(),
            new: report.identities.clone(),
        });
    }
    let lower = lifted_system(m, m - 1)?;
    let eliminated: Vec<NestedComm> = lower.eliminated().cloned().collect();
    let system = RewriteSystem::from_relations_preferring(m, &report.identities, &eliminated)?;
    let mut split = IdentitySplit {
        lifted: Vec::new(),
        new: Vec::new(),
    };
    for (lead, rhs) in &system.rules {
        let relation = LieExpr::term(lead.clone(), Rational::one()).sub(rhs);
        if lower.rules.contains_key(lead) {
            split.lifted.push(relation);
        } else {
            split.new.push(relation);
        }
    }
    Ok(split)
}

/// All grade-`m` identities, with leading commutators picked to keep the
/// support of `e` in the basis where possible: commutators absent from `e`
/// are eliminated first, then those with the smallest coefficients.
pub fn adapted_system(e: &LieExpr, m: usize) -> Result<RewriteSystem> {
    let report = identity_report(m)?;
    if report.identities.is_empty() {
        return Ok(RewriteSystem::empty(m));
    }
    let mut preferred: Vec<NestedComm> = report
        .commutators
        .entries()
        .iter()
        .filter(|c| e.coeff(c).is_zero())
        .cloned()
        .collect();
    let mut present: Vec<(&NestedComm, &Rational)> = e.iter().collect();
    present.sort_by(|a, b| a.1.abs().cmp(&b.1.abs()).then_with(|| a.0.cmp(b.0)));
    preferred.extend(present.into_iter().map(|(c, _)| c.clone()));
    RewriteSystem::from_relations_preferring(m, &report.identities, &preferred)
}

/// Commutators the low-grade regimes eliminate, as leaf words. With these
/// choices `Phi_6` needs 4 terms under the grade-6 regime; the colex-first
/// choice needs 5.
const REGIME_ELIMINATIONS: &[(usize, &[&str])] =
    &[(4, &["YXXY"]), (6, &["XXXYXY", "XXYYXY", "YXYYXY"])];

fn comm_from_word(s: &str) -> NestedComm {
    let leaves = s
        .chars()
        .map(|ch| {
            if ch == 'X' {
                Generator::X
            } else {
                Generator::Y
            }
        })
        .collect();
    NestedComm::from_canonical(leaves).expect("regime eliminations are canonical")
}

fn outer_words(len: usize) -> impl Iterator<Item = Vec<Generator>> {
    (0..1usize << len).map(move |idx| {
        (0..len)
            .map(|i| Generator(((idx >> i) & 1) as u8))
            .collect()
    })
}

fn with_prefix(prefix: &[Generator], c: &NestedComm) -> NestedComm {
    let mut leaves = prefix.to_vec();
    leaves.extend_from_slice(c.leaves());
    NestedComm::from_canonical(leaves).expect("prefix keeps canonical form")
}

/// Grade-`m` consequences of the identities of grades `4..=max_identity_grade`:
/// every identity `I` of grade `j` yields `[w1,[w2,...,[w(m-j), I]...]]` for
/// each word `w` of length `m - j`. The regime eliminations, lifted the
/// same way, are preferred as leading commutators.
pub fn lifted_system(m: usize, max_identity_grade: usize) -> Result<RewriteSystem> {
    if m < 2 {
        return Err(BchError::GradeTooSmall(m));
    }
    let top = max_identity_grade.min(m);
    let mut relations = Vec::new();
    for j in 4..=top {
        let report = identity_report(j)?;
        for prefix in outer_words(m - j) {
            for identity in &report.identities {
                relations.push(
                    identity
                        .iter()
                        .map(|(c, k)| (with_prefix(&prefix, c), k.clone()))
                        .collect::<LieExpr>(),
                );
            }
        }
    }
    if relations.is_empty() {
        return Ok(RewriteSystem::empty(m));
    }
    let mut preferred = Vec::new();
    for &(j, words) in REGIME_ELIMINATIONS.iter().filter(|(j, _)| *j <= top) {
        for prefix in outer_words(m - j) {
            preferred.extend(
                words
                    .iter()
                    .map(|w| with_prefix(&prefix, &comm_from_word(w))),
            );
        }
    }
    RewriteSystem::from_relations_preferring(m, &relations, &preferred)
}
