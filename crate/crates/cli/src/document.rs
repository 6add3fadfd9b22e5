//! Output documents and their text, JSON, and LaTeX renderings.

use std::fmt::Write as _;

use bch_core::rational::{parse_rational, to_fraction_string};
use bch_core::{Alphabet, LieExpr, NestedComm, Rational};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::args::LatexStyle;
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub grade: usize,
    pub vars: usize,
    pub regime: String,
    pub variant: String,
    pub version: String,
}

impl Meta {
    pub fn new(grade: usize, vars: usize, regime: &str, variant: &str) -> Meta {
        Meta {
            grade,
            vars,
            regime: regime.to_string(),
            variant: variant.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub leaves: Vec<String>,
    pub coeff: String,
}

pub fn records(e: &LieExpr, alphabet: &Alphabet) -> Vec<TermRecord> {
    e.iter()
        .map(|(c, k)| TermRecord {
            leaves: leaf_names(c, alphabet),
            coeff: to_fraction_string(k),
        })
        .collect()
}

fn leaf_names(c: &NestedComm, alphabet: &Alphabet) -> Vec<String> {
    c.leaves().iter().map(|&g| alphabet.name(g)).collect()
}

/// Rebuilds an expression from serialized terms.
pub fn expr_from_records(terms: &[TermRecord], alphabet: &Alphabet) -> Result<LieExpr, CliError> {
    let mut e = LieExpr::zero();
    for t in terms {
        let leaves = t
            .leaves
            .iter()
            .map(|name| alphabet.parse(name))
            .collect::<Result<Vec<_>, _>>()?;
        let coeff = parse_rational(&t.coeff)?;
        e.add_raw(&leaves, coeff);
    }
    Ok(e)
}

/// Series terms grouped by grade.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub symbol: &'static str,
    pub meta: Meta,
    pub alphabet: Alphabet,
    pub terms: Vec<(usize, LieExpr)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub meta: Meta,
    pub terms: Vec<TermRecord>,
}

impl Series {
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            meta: self.meta.clone(),
            terms: self
                .terms
                .iter()
                .flat_map(|(_, e)| records(e, &self.alphabet))
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (m, e) in &self.terms {
            writeln!(
                out,
                "{}_{} = {}",
                self.symbol,
                m,
                e.display(&self.alphabet, false)
            )
            .unwrap();
        }
        out
    }

    pub fn to_latex(&self, style: LatexStyle) -> String {
        let mut out = String::from("\\begin{align*}\n");
        let n = self.terms.len();
        for (i, (m, e)) in self.terms.iter().enumerate() {
            let end = if i + 1 < n { " \\\\" } else { "" };
            writeln!(
                out,
                "\\{}_{{{}}} &= {}{}",
                self.symbol,
                m,
                latex_expr(e, &self.alphabet, style),
                end
            )
            .unwrap();
        }
        out.push_str("\\end{align*}\n");
        out
    }
}

fn latex_name(name: &str) -> String {
    match name.split_at(1) {
        (head, digits) if !digits.is_empty() => format!("{head}_{{{digits}}}"),
        _ => name.to_string(),
    }
}

fn latex_comm(c: &NestedComm, alphabet: &Alphabet, style: LatexStyle) -> String {
    let names: Vec<String> = c
        .leaves()
        .iter()
        .map(|&g| latex_name(&alphabet.name(g)))
        .collect();
    if names.len() == 1 {
        return names[0].clone();
    }
    match style {
        LatexStyle::Flat => format!("[{}]", names.join(",")),
        LatexStyle::Nested => {
            let (last, init) = names.split_last().expect("nonempty");
            let mut s: String = init.iter().map(|n| format!("[{n},")).collect();
            s.push_str(last);
            s.push_str(&"]".repeat(init.len()));
            s
        }
    }
}

fn latex_coeff(abs: &Rational) -> String {
    if abs.is_one() {
        String::new()
    } else if abs.denom().is_one() {
        format!("{} ", abs.numer())
    } else {
        format!("\\frac{{{}}}{{{}}} ", abs.numer(), abs.denom())
    }
}

pub fn latex_expr(e: &LieExpr, alphabet: &Alphabet, style: LatexStyle) -> String {
    let mut out = String::new();
    for (i, (c, k)) in e.iter().enumerate() {
        let neg = k.is_negative();
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&latex_coeff(&k.abs()));
        out.push_str(&latex_comm(c, alphabet, style));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Identities and basis of one grade.
#[derive(Clone, Debug, PartialEq)]
pub struct Identities {
    pub meta: Meta,
    pub alphabet: Alphabet,
    pub commutators: usize,
    /// identities not implied by lower grades
    pub identities: Vec<LieExpr>,
    /// identities implied by lower grades
    pub lifted: Vec<LieExpr>,
    pub basis: Vec<NestedComm>,
    /// augmented and reduced matrices, when requested
    pub matrices: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitiesJson {
    pub meta: Meta,
    pub commutators: usize,
    pub identities: Vec<Vec<TermRecord>>,
    pub lifted: Vec<Vec<TermRecord>>,
    pub basis: Vec<Vec<String>>,
}

impl Identities {
    pub fn to_json(&self) -> IdentitiesJson {
        IdentitiesJson {
            meta: self.meta.clone(),
            commutators: self.commutators,
            identities: self
                .identities
                .iter()
                .map(|e| records(e, &self.alphabet))
                .collect(),
            lifted: self
                .lifted
                .iter()
                .map(|e| records(e, &self.alphabet))
                .collect(),
            basis: self
                .basis
                .iter()
                .map(|c| leaf_names(c, &self.alphabet))
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let count = self.identities.len();
        writeln!(
            out,
            "grade {}: {} right-nested {}, {} new {}, {} lifted from lower grades, basis of {}",
            self.meta.grade,
            self.commutators,
            if self.commutators == 1 {
                "commutator"
            } else {
                "commutators"
            },
            count,
            if count == 1 { "identity" } else { "identities" },
            self.lifted.len(),
            self.basis.len()
        )
        .unwrap();
        if count == 0 {
            out.push_str("identities: none\n");
        } else {
            out.push_str("identities:\n");
            for e in &self.identities {
                writeln!(out, "  {} = 0", e.display(&self.alphabet, false)).unwrap();
            }
        }
        if !self.lifted.is_empty() {
            out.push_str("lifted:\n");
            for e in &self.lifted {
                writeln!(out, "  {} = 0", e.display(&self.alphabet, false)).unwrap();
            }
        }
        out.push_str("basis:\n");
        for c in &self.basis {
            writeln!(out, "  {}", c.display_nested(&self.alphabet)).unwrap();
        }
        if let Some((augmented, reduced)) = &self.matrices {
            out.push_str("augmented:\n");
            out.push_str(augmented);
            out.push_str("reduced:\n");
            out.push_str(reduced);
        }
        out
    }

    pub fn to_latex(&self, style: LatexStyle) -> String {
        let mut out = String::from("\\begin{align*}\n");
        for e in &self.identities {
            writeln!(out, "0 &= {} \\\\", latex_expr(e, &self.alphabet, style)).unwrap();
        }
        let basis: Vec<String> = self
            .basis
            .iter()
            .map(|c| latex_comm(c, &self.alphabet, style))
            .collect();
        writeln!(
            out,
            "\\mathcal{{B}}_{{{}}} &= \\{{{}\\}}",
            self.meta.grade,
            basis.join(", ")
        )
        .unwrap();
        out.push_str("\\end{align*}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub name: String,
    pub computed: Vec<usize>,
    /// published value per grade, where one exists
    pub published: Vec<Option<usize>>,
    /// grades where computed and published values differ
    pub mismatches: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub meta: Meta,
    pub grades: Vec<usize>,
    pub rows: Vec<TableRow>,
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl TableRow {
    fn status(&self, grades: &[usize]) -> String {
        if self.published.iter().all(Option::is_none) {
            return "no published values".to_string();
        }
        if self.mismatches.is_empty() {
            return "match".to_string();
        }
        let parts: Vec<String> = self
            .mismatches
            .iter()
            .map(|m| {
                let i = grades.iter().position(|g| g == m).expect("grade in table");
                format!(
                    "m={} computed {} published {}",
                    m,
                    self.computed[i],
                    self.published[i].expect("mismatch has a published value")
                )
            })
            .collect();
        format!("mismatch ({})", parts.join("; "))
    }
}

impl Table {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "grades: {}", join(&self.grades)).unwrap();
        for row in &self.rows {
            writeln!(out, "{}: {}", row.name, join(&row.computed)).unwrap();
            let published = row
                .published
                .iter()
                .map(|p| p.map_or("-".to_string(), |v| v.to_string()));
            writeln!(out, "  published: {}", join(published)).unwrap();
            writeln!(out, "  status: {}", row.status(&self.grades)).unwrap();
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "\\begin{{tabular}}{{|l|{}|}}",
            "c".repeat(self.grades.len())
        )
        .unwrap();
        out.push_str("\\hline\n");
        writeln!(
            out,
            "$m$ & {} \\\\ \\hline",
            self.grades
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(" & ")
        )
        .unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row
                .computed
                .iter()
                .zip(&self.grades)
                .map(|(c, g)| {
                    if row.mismatches.contains(g) {
                        format!("{c}$^*$")
                    } else {
                        c.to_string()
                    }
                })
                .collect();
            writeln!(out, "{} & {} \\\\", row.name, cells.join(" & ")).unwrap();
        }
        out.push_str("\\hline\n\\end{tabular}\n");
        out
    }
}
