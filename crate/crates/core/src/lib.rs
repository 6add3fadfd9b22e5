//! Exact Baker-Campbell-Hausdorff series over right-nested commutators.
//!
//! - [`algebra`]: words, right-nested commutators, and conversions between them
//! - [`eulerian`]: descent statistics and the multilinear part of the series
//! - [`bch`]: homogeneous terms `Phi_m`, the symmetric series, and two oracles
//! - [`identities`]: commutator identities by exact Gauss-Jordan elimination,
//!   bases of right-nested commutators, and rewriting against them
//! - [`compact`]: heuristic search for short representations
//! - [`reduction`]: identity regimes and term-count rows

pub mod algebra;
pub mod bch;
pub mod compact;
pub mod error;
pub mod eulerian;
pub mod identities;
pub mod rational;
pub mod reduction;

pub use algebra::{
    canonicalize, dsw_bracketing, expand_lie, expand_nested, Alphabet, AssocPoly, Generator,
    LieExpr, NestedComm, Word,
};
pub use bch::{
    ad_power, dynkin_phi_m, log_product_words, phi_m, scale_substitute, sym_bch_from, sym_bch_m,
    Polarization, SeriesRequest, Substitution, Variant,
};
pub use compact::{compact_reduce, compact_reduce_with, CompactOptions};
pub use error::{BchError, Result};
pub use eulerian::{
    descents, eulerian_coeff, varphi_nested, varphi_words, DescentCount, Permutation,
};
pub use identities::{
    adapted_system, enumerate_nested, gauss_jordan, identities_and_basis, identity_report,
    lifted_system, rewrite_in_basis, split_identities, CommutatorList, ExactMatrix, IdentityReport,
    IdentitySplit, RewriteSystem,
};
pub use rational::Rational;
pub use reduction::{dimension_row, reduce, series_term, table_counts, Regime};
