use std::path::PathBuf;

use bch_core::Regime;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "rnbch",
    version,
    about = "Exact Baker-Campbell-Hausdorff series over right-nested commutators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Terms Phi_1..Phi_m of log(exp(X) exp(Y))
    Bch(SeriesArgs),
    /// Terms Psi_1..Psi_m of log(exp(X/2) exp(Y) exp(X/2))
    Symbch(SeriesArgs),
    /// Identities among right-nested commutators of one grade, and a basis
    Identities(IdentityArgs),
    /// Term counts per grade beside the published values
    Table(TableArgs),
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the document here instead of standard output
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Bracket notation in LaTeX output
    #[arg(long, value_enum, default_value_t = LatexStyle::Nested)]
    pub latex_style: LatexStyle,

    /// Allow grades above the default cap
    #[arg(long)]
    pub unsafe_grade: bool,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    /// Highest grade to compute
    #[arg(long, visible_alias = "max-grade", default_value_t = 10)]
    pub grade: usize,

    /// Number of generators
    #[arg(long, default_value_t = 2)]
    pub vars: usize,

    #[arg(long, value_enum, default_value_t = RegimeArg::None)]
    pub regime: RegimeArg,

    /// Check the series against the independent oracles first
    #[arg(long)]
    pub verify: bool,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct IdentityArgs {
    #[arg(long, visible_alias = "max-grade")]
    pub grade: usize,

    #[arg(long, default_value_t = 2)]
    pub vars: usize,

    /// Include the augmented and reduced matrices (text format)
    #[arg(long)]
    pub matrices: bool,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, visible_alias = "grade", default_value_t = 10)]
    pub max_grade: usize,

    #[arg(long, default_value_t = 2)]
    pub vars: usize,

    #[arg(long, value_enum, default_value_t = RowArg::All)]
    pub row: RowArg,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LatexStyle {
    Nested,
    Flat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    None,
    Grade4,
    Grade6,
    Full,
    Compact,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Regime {
        match r {
            RegimeArg::None => Regime::None,
            RegimeArg::Grade4 => Regime::Grade4,
            RegimeArg::Grade6 => Regime::Grade6,
            RegimeArg::Full => Regime::Full,
            RegimeArg::Compact => Regime::Compact,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RowArg {
    Dim,
    None,
    Grade4,
    Grade6,
    Full,
    Compact,
    Symmetric,
    All,
}
