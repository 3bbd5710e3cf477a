//! Self-descriptive squares.
//!
//! An `n x n` integer square is *self-descriptive* when the sum of each row
//! equals the number of times that row's rightmost entry occurs in the whole
//! square, and the sum of each column equals the number of times the
//! column's bottom entry occurs. It is *nontrivial* when the L-shaped border
//! (right column plus bottom row, `2n - 1` cells) holds every distinct value
//! of the square exactly once.
//!
//! | module | contents |
//! |---|---|
//! | [`square`] | the grid type, sums, frequencies, border, text format |
//! | [`verify`] | condition checks, error counts, variant classification |
//! | [`canon`] | rearrangements, standard normal form, equivalence |
//! | [`search`] | hill climber with incremental error evaluation |
//! | [`generic`] | affine-expression squares, forbidden values, derivation |
//! | [`enumerate`] | exhaustive bounded enumeration |
//! | [`cli`] | the `sdsq` command-line front end and report formats |
//! | [`fixtures`] | reference squares |

pub mod canon;
pub mod cli;
pub mod enumerate;
pub mod fixtures;
pub mod generic;
pub mod search;
pub mod square;
pub mod verify;

pub use canon::{equivalent, is_anagram, to_snf, SnfKey};
pub use enumerate::{enumerate_all, EnumConfig};
pub use generic::{AffineExpr, GenericSquare};
pub use search::{solve, SearchConfig, SearchOutcome, SearchState, Variant};
pub use square::{Entry, FrequencyTable, Square};
pub use verify::{classify, count_errors, ErrorReport, VariantFlags};
