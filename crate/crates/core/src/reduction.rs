//! Identity regimes and the term counts they produce.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use crate::algebra::{expand_lie, LieExpr};
use crate::bch::{phi_m, sym_bch_from, Variant};
use crate::compact::compact_reduce;
use crate::error::{BchError, Result};
use crate::identities::{adapted_system, identity_report, lifted_system};

/// Which commutator identities are used when rewriting a series term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Canonical right-nested form, nothing eliminated.
    None,
    /// Grade-4 identities lifted to the target grade.
    Grade4,
    /// Grade-4 and grade-6 identities lifted to the target grade.
    Grade6,
    /// Every identity of the target grade.
    Full,
    /// Heuristic search for the shortest form.
    Compact,
}

impl Regime {
    pub const ALL: [Regime; 5] = [
        Regime::None,
        Regime::Grade4,
        Regime::Grade6,
        Regime::Full,
        Regime::Compact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Regime::None => "none",
            Regime::Grade4 => "grade4",
            Regime::Grade6 => "grade6",
            Regime::Full => "full",
            Regime::Compact => "compact",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = BchError;

    fn from_str(s: &str) -> Result<Regime> {
        Regime::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| BchError::UnknownRegime(s.to_string()))
    }
}

/// Rewrites a homogeneous grade-`m` expression in two generators under `regime`.
/// The word expansion is unchanged.
pub fn reduce(e: &LieExpr, m: usize, regime: Regime) -> Result<LieExpr> {
    if e.is_zero() || m < 4 || regime == Regime::None {
        return Ok(e.clone());
    }
    match regime {
        Regime::None => unreachable!(),
        Regime::Grade4 => lifted_system(m, 4)?.apply(e),
        Regime::Grade6 => lifted_system(m, 6)?.apply(e),
        Regime::Full => adapted_system(e, m)?.apply(e),
        Regime::Compact => compact_reduce(e, m),
    }
}

fn compact_phi(m: usize) -> Result<LieExpr> {
    static CACHE: OnceLock<Mutex<HashMap<usize, LieExpr>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().expect("cache lock").get(&m) {
        return Ok(e.clone());
    }
    let e = reduce(&phi_m(m, 2), m, Regime::Compact)?;
    cache.lock().expect("cache lock").insert(m, e.clone());
    Ok(e)
}

fn plain_term(m: usize, regime: Regime) -> Result<LieExpr> {
    match regime {
        Regime::Compact => compact_phi(m),
        _ => reduce(&phi_m(m, 2), m, regime),
    }
}

/// Grade-`m` term of the plain or symmetric series in two generators,
/// reduced under `regime`. Outside the `none` regime the symmetric term is
/// assembled from compact plain terms and then reduced.
pub fn series_term(m: usize, variant: Variant, regime: Regime) -> Result<LieExpr> {
    if m == 0 {
        return Err(BchError::GradeTooSmall(m));
    }
    match variant {
        Variant::Plain => plain_term(m, regime),
        Variant::Symmetric => {
            let mut inputs = Vec::with_capacity(m + 1);
            inputs.push(LieExpr::zero());
            let input_regime = match regime {
                Regime::None => Regime::None,
                _ => Regime::Compact,
            };
            for j in 1..=m {
                inputs.push(plain_term(j, input_regime)?);
            }
            let psi = sym_bch_from(m, |j| inputs[j].clone());
            if expand_lie(&psi).is_zero() {
                return Ok(LieExpr::zero());
            }
            reduce(&psi, m, regime)
        }
    }
}

/// Term counts for grades `2..=max_m`.
pub fn table_counts(max_m: usize, regime: Regime, variant: Variant) -> Result<Vec<usize>> {
    (2..=max_m)
        .map(|m| series_term(m, variant, regime).map(|e| e.len()))
        .collect()
}

/// Dimension of the grade-`m` part of the free Lie algebra on two generators,
/// for `m = 2..=max_m`.
pub fn dimension_row(max_m: usize) -> Result<Vec<usize>> {
    (2..=max_m)
        .map(|m| identity_report(m).map(|r| r.dimension()))
        .collect()
}
