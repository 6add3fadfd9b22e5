//! Command-line front end: series terms, commutator identities, and term-count
//! tables, rendered as text, JSON, or LaTeX.

pub mod args;
pub mod document;
pub mod error;

use std::ffi::OsString;
use std::fmt::Write as _;

use bch_core::bch::sym_bch_via_three_variables;
use bch_core::{
    dimension_row, dynkin_phi_m, expand_lie, identity_report, log_product_words, phi_m,
    series_term, split_identities, sym_bch_m, table_counts, Alphabet, LieExpr, Regime, Variant,
};
use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{
    Cli, Command, Format, IdentityArgs, LatexStyle, OutputArgs, RowArg, SeriesArgs, TableArgs,
};
use crate::document::{Identities, Meta, Series, Table, TableRow};
use crate::error::CliError;

/// Grades above this need `--unsafe-grade`.
pub const GRADE_CAP: usize = 10;

/// Published term counts for grades 2 through 10.
pub const PUBLISHED: &[(&str, [usize; 9])] = &[
    ("dim", [1, 2, 3, 6, 9, 18, 30, 56, 99]),
    ("none", [1, 2, 1, 8, 7, 32, 31, 96, 97]),
    ("grade4", [1, 2, 1, 6, 5, 24, 23, 78, 78]),
    ("grade6", [1, 2, 1, 6, 4, 18, 17, 67, 65]),
    ("compact", [1, 2, 1, 6, 4, 18, 13, 38, 52]),
    ("symmetric", [0, 2, 0, 6, 0, 18, 0, 42, 0]),
];

pub fn published(name: &str, grade: usize) -> Option<usize> {
    PUBLISHED
        .iter()
        .find(|(n, _)| *n == name)
        .and_then(|(_, row)| grade.checked_sub(2).and_then(|i| row.get(i)).copied())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Series(Series),
    Identities(Identities),
    Table(Table),
}

impl Document {
    pub fn render(&self, format: Format, style: LatexStyle) -> String {
        match (self, format) {
            (Document::Series(s), Format::Text) => s.to_text(),
            (Document::Series(s), Format::Latex) => s.to_latex(style),
            (Document::Series(s), Format::Json) => to_json(&s.to_json()),
            (Document::Identities(d), Format::Text) => d.to_text(),
            (Document::Identities(d), Format::Latex) => d.to_latex(style),
            (Document::Identities(d), Format::Json) => to_json(&d.to_json()),
            (Document::Table(t), Format::Text) => t.to_text(),
            (Document::Table(t), Format::Latex) => t.to_latex(),
            (Document::Table(t), Format::Json) => to_json(t),
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

/// Captured result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let mut stderr = String::new();
    match execute(&cli, &mut stderr) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr,
        },
        Err(e) => {
            writeln!(stderr, "error: {e}").unwrap();
            Outcome {
                code: e.exit_code(),
                stdout: String::new(),
                stderr,
            }
        }
    }
}

fn out_args(cli: &Cli) -> &OutputArgs {
    match &cli.command {
        Command::Bch(a) | Command::Symbch(a) => &a.out,
        Command::Identities(a) => &a.out,
        Command::Table(a) => &a.out,
    }
}

/// Runs the command and returns what belongs on standard output.
pub fn execute(cli: &Cli, warnings: &mut String) -> Result<String, CliError> {
    let doc = build(&cli.command, warnings)?;
    let out = out_args(cli);
    let text = doc.render(out.format, out.latex_style);
    match &out.output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn build(command: &Command, warnings: &mut String) -> Result<Document, CliError> {
    match command {
        Command::Bch(a) => series(a, Variant::Plain, warnings).map(Document::Series),
        Command::Symbch(a) => series(a, Variant::Symmetric, warnings).map(Document::Series),
        Command::Identities(a) => identities(a, warnings).map(Document::Identities),
        Command::Table(a) => table(a, warnings).map(Document::Table),
    }
}

fn check_grade(
    grade: usize,
    min: usize,
    out: &OutputArgs,
    warnings: &mut String,
) -> Result<(), CliError> {
    if grade < min {
        return Err(CliError::Usage(format!(
            "grade must be at least {min}, got {grade}"
        )));
    }
    if grade > GRADE_CAP {
        if !out.unsafe_grade {
            return Err(CliError::Usage(format!(
                "grade {grade} exceeds the cap of {GRADE_CAP}; pass --unsafe-grade to continue"
            )));
        }
        writeln!(
            warnings,
            "warning: grade {grade} is above {GRADE_CAP}; memory use and run time grow quickly"
        )
        .unwrap();
    }
    Ok(())
}

fn require_two(vars: usize, what: &str) -> Result<(), CliError> {
    if vars != 2 {
        return Err(CliError::Usage(format!(
            "{what} needs --vars 2, got {vars}"
        )));
    }
    Ok(())
}

fn series(a: &SeriesArgs, variant: Variant, warnings: &mut String) -> Result<Series, CliError> {
    check_grade(a.grade, 1, &a.out, warnings)?;
    let regime = Regime::from(a.regime);
    if a.vars == 0 {
        return Err(CliError::Usage("--vars must be at least 1".into()));
    }
    if variant == Variant::Symmetric {
        require_two(a.vars, "the symmetric series")?;
    }
    if regime != Regime::None {
        require_two(a.vars, &format!("regime {regime}"))?;
    }
    if a.verify {
        verify_oracles(a.grade, a.vars, variant)?;
    }
    let mut terms = Vec::with_capacity(a.grade);
    for m in 1..=a.grade {
        let term = if a.vars == 2 {
            series_term(m, variant, regime)?
        } else {
            phi_m(m, a.vars)
        };
        if a.verify {
            let reference = match variant {
                Variant::Plain => phi_m(m, a.vars),
                Variant::Symmetric => sym_bch_m(m),
            };
            if expand_lie(&term) != expand_lie(&reference) {
                return Err(CliError::Verification(format!(
                    "regime {regime} changed the grade-{m} element"
                )));
            }
        }
        terms.push((m, term));
    }
    let (symbol, name) = match variant {
        Variant::Plain => ("Phi", "plain"),
        Variant::Symmetric => ("Psi", "symmetric"),
    };
    Ok(Series {
        symbol,
        meta: Meta::new(a.grade, a.vars, regime.name(), name),
        alphabet: Alphabet::new(a.vars),
        terms,
    })
}

/// The series term, the Dynkin form, and the logarithm of the product of
/// exponentials must agree word by word at every grade.
pub fn verify_oracles(max_grade: usize, vars: usize, variant: Variant) -> Result<(), CliError> {
    for m in 1..=max_grade {
        let words = expand_lie(&phi_m(m, vars));
        if words != log_product_words(m, vars) {
            return Err(CliError::Verification(format!(
                "grade {m}: series and logarithm of the product differ"
            )));
        }
        if vars == 2 && expand_lie(&dynkin_phi_m(m)) != words {
            return Err(CliError::Verification(format!(
                "grade {m}: series and Dynkin form differ"
            )));
        }
        if variant == Variant::Symmetric
            && expand_lie(&sym_bch_m(m)) != expand_lie(&sym_bch_via_three_variables(m)?)
        {
            return Err(CliError::Verification(format!(
                "grade {m}: symmetric series and three-factor route differ"
            )));
        }
    }
    Ok(())
}

fn identities(a: &IdentityArgs, warnings: &mut String) -> Result<Identities, CliError> {
    check_grade(a.grade, 2, &a.out, warnings)?;
    require_two(a.vars, "identities")?;
    let report = identity_report(a.grade)?;
    let split = split_identities(a.grade)?;
    let matrices = a
        .matrices
        .then(|| (report.augmented.to_string(), report.reduced.to_string()));
    Ok(Identities {
        meta: Meta::new(a.grade, 2, "full", "plain"),
        alphabet: Alphabet::two(),
        commutators: report.commutators.len(),
        identities: split.new,
        lifted: split.lifted,
        basis: report.basis.clone(),
        matrices,
    })
}

fn row_names(row: RowArg) -> Vec<&'static str> {
    match row {
        RowArg::Dim => vec!["dim"],
        RowArg::None => vec!["none"],
        RowArg::Grade4 => vec!["grade4"],
        RowArg::Grade6 => vec!["grade6"],
        RowArg::Full => vec!["full"],
        RowArg::Compact => vec!["compact"],
        RowArg::Symmetric => vec!["symmetric"],
        RowArg::All => vec![
            "dim",
            "none",
            "grade4",
            "grade6",
            "full",
            "compact",
            "symmetric",
        ],
    }
}

/// Computed counts for one named row, grades `2..=max_grade`.
pub fn computed_row(name: &str, max_grade: usize) -> Result<Vec<usize>, CliError> {
    let counts = match name {
        "dim" => dimension_row(max_grade)?,
        "symmetric" => table_counts(max_grade, Regime::Compact, Variant::Symmetric)?,
        regime => table_counts(max_grade, regime.parse::<Regime>()?, Variant::Plain)?,
    };
    Ok(counts)
}

fn table(a: &TableArgs, warnings: &mut String) -> Result<Table, CliError> {
    check_grade(a.max_grade, 2, &a.out, warnings)?;
    require_two(a.vars, "the table")?;
    let grades: Vec<usize> = (2..=a.max_grade).collect();
    let mut rows = Vec::new();
    for name in row_names(a.row) {
        let computed = computed_row(name, a.max_grade)?;
        let published: Vec<Option<usize>> = grades.iter().map(|&m| published(name, m)).collect();
        let mismatches = grades
            .iter()
            .zip(&computed)
            .zip(&published)
            .filter(|((_, c), p)| p.is_some_and(|p| p != **c))
            .map(|((m, _), _)| *m)
            .collect();
        rows.push(TableRow {
            name: name.to_string(),
            computed,
            published,
            mismatches,
        });
    }
    let (regime, variant) = match a.row {
        RowArg::All => ("all", "all"),
        RowArg::Symmetric => ("compact", "symmetric"),
        RowArg::Dim => ("none", "plain"),
        other => (row_names(other)[0], "plain"),
    };
    Ok(Table {
        meta: Meta::new(a.max_grade, 2, regime, variant),
        grades,
        rows,
    })
}

/// Rebuilds every grade's expression from a JSON series document.
pub fn series_from_json(json: &str) -> Result<Vec<(usize, LieExpr)>, CliError> {
    let doc: document::SeriesJson =
        serde_json::from_str(json).map_err(|e| CliError::Usage(e.to_string()))?;
    let alphabet = Alphabet::new(doc.meta.vars);
    let mut by_grade: Vec<(usize, LieExpr)> = Vec::new();
    for t in &doc.terms {
        let e = document::expr_from_records(std::slice::from_ref(t), &alphabet)?;
        let m = t.leaves.len();
        match by_grade.iter_mut().find(|(g, _)| *g == m) {
            Some((_, acc)) => *acc = acc.add(&e),
            None => by_grade.push((m, e)),
        }
    }
    by_grade.sort_by_key(|(m, _)| *m);
    Ok(by_grade)
}
