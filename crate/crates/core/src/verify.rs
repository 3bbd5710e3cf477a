//! The four self-description conditions, violation counting, and the
//! exotic variants (magic, bi-directional, perfect, minimal, concentric).
//!
//! A square is *self-descriptive* when every row sum equals the frequency of
//! the row's rightmost entry and every column sum equals the frequency of the
//! column's bottom entry. It is additionally *nontrivial* when the border
//! holds every distinct value of the square exactly once.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::square::{Entry, FrequencyTable, Square};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{check} is not applicable: {reason}")]
    NotApplicable { check: &'static str, reason: String },
}

fn not_applicable(check: &'static str, reason: impl Into<String>) -> VerifyError {
    VerifyError::NotApplicable {
        check,
        reason: reason.into(),
    }
}

/// Violation counts for the four conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ErrorReport {
    /// `(2n - 1)` minus the number of distinct border values.
    pub border_duplication_errors: usize,
    /// Non-border cells whose value does not appear on the border.
    pub interior_coverage_errors: usize,
    /// Rows whose sum differs from the frequency of their rightmost entry.
    pub row_errors: usize,
    /// Columns whose sum differs from the frequency of their bottom entry.
    pub col_errors: usize,
    pub total: usize,
}

impl ErrorReport {
    pub fn is_clean(&self) -> bool {
        self.total == 0
    }
}

pub fn count_errors(square: &Square) -> ErrorReport {
    let n = square.order();
    let freq = square.frequencies();
    let border: BTreeSet<Entry> = square.border().values().into_iter().collect();

    let border_duplication_errors = (2 * n - 1) - border.len();
    let interior_coverage_errors = (0..n - 1)
        .flat_map(|r| (0..n - 1).map(move |c| (r, c)))
        .filter(|&(r, c)| !border.contains(&square.get(r, c)))
        .count();
    let row_errors = (0..n)
        .filter(|&r| {
            let row = square.row(r);
            !freq.describes(row[n - 1], row.iter().sum())
        })
        .count();
    let col_errors = (0..n)
        .filter(|&c| !freq.describes(square.get(n - 1, c), square.column(c).sum()))
        .count();

    ErrorReport {
        border_duplication_errors,
        interior_coverage_errors,
        row_errors,
        col_errors,
        total: border_duplication_errors + interior_coverage_errors + row_errors + col_errors,
    }
}

/// Rows and columns describe their terminal entries. Triviality is ignored.
pub fn is_self_descriptive(square: &Square) -> bool {
    let report = count_errors(square);
    report.row_errors == 0 && report.col_errors == 0
}

pub fn is_nontrivial(square: &Square) -> bool {
    count_errors(square).is_clean()
}

/// One main diagonal: its sum and which of its two end cells it describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalReport {
    pub sum: Entry,
    /// Entry at the diagonal's top end.
    pub first: Entry,
    /// Entry at the diagonal's bottom end.
    pub last: Entry,
    pub first_matches: bool,
    pub last_matches: bool,
}

impl DiagonalReport {
    pub fn is_self_descriptive(&self) -> bool {
        self.first_matches || self.last_matches
    }

    pub fn is_bidirectional(&self) -> bool {
        self.first_matches && self.last_matches
    }
}

/// The main (top-left to bottom-right) and co-diagonal (top-right to
/// bottom-left).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagonals {
    pub main: DiagonalReport,
    pub anti: DiagonalReport,
}

pub fn diagonals(square: &Square, freq: &FrequencyTable) -> Diagonals {
    let n = square.order();
    let report = |cells: Vec<Entry>| {
        let sum = cells.iter().sum();
        let first = cells[0];
        let last = cells[n - 1];
        DiagonalReport {
            sum,
            first,
            last,
            first_matches: freq.describes(first, sum),
            last_matches: freq.describes(last, sum),
        }
    };
    Diagonals {
        main: report((0..n).map(|i| square.get(i, i)).collect()),
        anti: report((0..n).map(|i| square.get(i, n - 1 - i)).collect()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagicReport {
    pub magic: bool,
    #[serde(flatten)]
    pub diagonals: Diagonals,
}

/// Both diagonals describe one of their own end cells. Only defined for
/// nontrivial squares.
pub fn is_magic(square: &Square) -> Result<MagicReport, VerifyError> {
    if !is_nontrivial(square) {
        return Err(not_applicable(
            "magic",
            "square is not a nontrivial s-d square",
        ));
    }
    let diagonals = diagonals(square, &square.frequencies());
    Ok(MagicReport {
        magic: diagonals.main.is_self_descriptive() && diagonals.anti.is_self_descriptive(),
        diagonals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bidirectional {
    pub rows: bool,
    pub cols: bool,
}

fn line_is_bidirectional(freq: &FrequencyTable, line: &[Entry]) -> bool {
    let sum: Entry = line.iter().sum();
    freq.describes(line[0], sum) && freq.describes(line[line.len() - 1], sum)
}

pub fn is_bidirectional(square: &Square) -> Bidirectional {
    let freq = square.frequencies();
    let n = square.order();
    Bidirectional {
        rows: square.rows().all(|row| line_is_bidirectional(&freq, row)),
        cols: (0..n).all(|c| {
            let col: Vec<Entry> = square.column(c).collect();
            line_is_bidirectional(&freq, &col)
        }),
    }
}

/// Magic with every row, column and diagonal bi-directional.
pub fn is_perfect(square: &Square) -> bool {
    let Ok(magic) = is_magic(square) else {
        return false;
    };
    let bidi = is_bidirectional(square);
    magic.magic
        && bidi.rows
        && bidi.cols
        && magic.diagonals.main.is_bidirectional()
        && magic.diagonals.anti.is_bidirectional()
}

/// Distinct entries are exactly `1 - n ..= n - 1`.
pub fn is_minimal(square: &Square) -> bool {
    let n = square.order() as Entry;
    let freq = square.frequencies();
    freq.distinct() == (2 * n - 1) as usize && freq.values().all(|v| v.abs() < n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreStatus {
    pub self_descriptive: bool,
    pub nontrivial: bool,
}

/// Status of the centred `(n - 2) x (n - 2)` core viewed as a square of
/// its own.
pub fn core_status(square: &Square) -> Result<CoreStatus, VerifyError> {
    let n = square.order();
    if n < 3 {
        return Err(not_applicable(
            "concentric",
            format!("order {n} has no core"),
        ));
    }
    let core = square
        .sub_square(1, n - 2)
        .expect("core lies inside the square");
    let report = count_errors(&core);
    Ok(CoreStatus {
        self_descriptive: report.row_errors == 0 && report.col_errors == 0,
        nontrivial: report.is_clean(),
    })
}

/// The core is itself a nontrivial s-d square.
pub fn is_concentric(square: &Square) -> Result<bool, VerifyError> {
    core_status(square).map(|s| s.nontrivial)
}

/// For a minimal nontrivial square the corner value `k` is even and occurs
/// `k / 2` times. Returns whether that holds for `square`.
pub fn check_minimal_corner_theorem(square: &Square) -> Result<bool, VerifyError> {
    if !is_minimal(square) {
        return Err(not_applicable(
            "minimal corner theorem",
            "square is not minimal",
        ));
    }
    if !is_nontrivial(square) {
        return Err(not_applicable(
            "minimal corner theorem",
            "square is not a nontrivial s-d square",
        ));
    }
    let k = square.corner();
    Ok(k % 2 == 0 && square.frequencies().describes(k, k / 2))
}

/// Every variant property of a square in one pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantFlags {
    pub self_descriptive: bool,
    pub nontrivial: bool,
    pub magic: bool,
    /// Present for nontrivial squares.
    pub diagonals: Option<Diagonals>,
    pub bidirectional_rows: bool,
    pub bidirectional_cols: bool,
    pub perfect: bool,
    pub minimal: bool,
    pub concentric: bool,
    /// Present for orders of at least 3.
    pub core: Option<CoreStatus>,
}

pub fn classify(square: &Square) -> VariantFlags {
    let report = count_errors(square);
    let magic = is_magic(square).ok();
    let bidi = is_bidirectional(square);
    let core = core_status(square).ok();
    VariantFlags {
        self_descriptive: report.row_errors == 0 && report.col_errors == 0,
        nontrivial: report.is_clean(),
        magic: magic.is_some_and(|m| m.magic),
        diagonals: magic.map(|m| m.diagonals),
        bidirectional_rows: bidi.rows,
        bidirectional_cols: bidi.cols,
        perfect: is_perfect(square),
        minimal: is_minimal(square),
        concentric: core.is_some_and(|c| c.nontrivial),
        core,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn unit() -> Square {
        Square::filled(1, 1).unwrap()
    }

    #[test]
    fn clean_fixtures() {
        for sq in [
            fixtures::fig2(),
            fixtures::fig3(),
            fixtures::fig4(),
            fixtures::fig8a(),
            fixtures::fig8b(),
            fixtures::fig14_left(),
            fixtures::fig19(),
            fixtures::fig20(),
            unit(),
        ] {
            assert_eq!(count_errors(&sq).total, 0, "{sq}");
        }
    }

    #[test]
    fn figure_one_is_trivial() {
        let report = count_errors(&fixtures::fig1());
        assert_eq!(report.row_errors, 0);
        assert_eq!(report.col_errors, 0);
        // border [2,-4,-1,4,-4,-2,3]: one duplicate, and the interior 1s are uncovered
        assert_eq!(report.border_duplication_errors, 1);
        assert_eq!(report.interior_coverage_errors, 3);
        assert!(is_self_descriptive(&fixtures::fig1()));
        assert!(!is_nontrivial(&fixtures::fig1()));
    }

    #[test]
    fn single_edit_breaks_self_description() {
        let edited = fixtures::fig2().with_cell(0, 0, 2).unwrap();
        assert!(!is_self_descriptive(&edited));
        assert!(is_self_descriptive(&fixtures::fig4()));
        assert!(is_nontrivial(&unit()));
    }

    #[test]
    fn magic_reports_matched_corners() {
        let m = is_magic(&fixtures::fig19()).unwrap();
        assert!(m.magic);
        assert_eq!(m.diagonals.main.sum, 2);
        assert!(m.diagonals.main.last_matches);
        assert_eq!(m.diagonals.anti.sum, 1);
        assert_eq!(m.diagonals.anti.last, 5);
        assert!(m.diagonals.anti.last_matches);

        let m = is_magic(&fixtures::fig2()).unwrap();
        assert!(!m.magic);
        assert_eq!(m.diagonals.main.sum, -4);

        assert!(is_magic(&unit()).unwrap().magic);
        assert!(is_magic(&fixtures::fig1()).is_err());
    }

    #[test]
    fn bidirectional_rows_and_columns() {
        let sq = fixtures::fig8a();
        let freq = sq.frequencies();
        assert!(line_is_bidirectional(&freq, sq.row(0)));
        assert!(!is_bidirectional(&fixtures::fig2()).rows);
        assert_eq!(
            is_bidirectional(&unit()),
            Bidirectional {
                rows: true,
                cols: true
            }
        );
    }

    #[test]
    fn perfect_only_for_unit() {
        assert!(is_perfect(&unit()));
        assert!(!is_perfect(&fixtures::fig19()));
        assert!(!is_perfect(&fixtures::fig2()));
    }

    #[test]
    fn minimal() {
        assert!(is_minimal(&fixtures::fig19()));
        assert!(!is_minimal(&fixtures::fig2()));
        assert!(!is_minimal(&unit()));
    }

    #[test]
    fn concentric() {
        assert_eq!(is_concentric(&fixtures::fig20()), Ok(true));
        assert_eq!(is_concentric(&fixtures::fig2()), Ok(false));
        assert_eq!(is_concentric(&fixtures::fig19()), Ok(false));
        assert!(is_concentric(&Square::filled(2, 1).unwrap()).is_err());
    }

    #[test]
    fn minimal_corner_theorem() {
        assert_eq!(check_minimal_corner_theorem(&fixtures::fig19()), Ok(true));
        assert!(check_minimal_corner_theorem(&fixtures::fig2()).is_err());
    }

    #[test]
    fn classify_figures() {
        let f = classify(&fixtures::fig19());
        assert!(f.nontrivial && f.magic && f.minimal && !f.perfect && !f.concentric);
        let f = classify(&fixtures::fig20());
        assert!(f.nontrivial && f.concentric);
        let f = classify(&fixtures::fig4());
        assert!(f.nontrivial && !f.magic && !f.minimal && !f.concentric && !f.perfect);
        let f = classify(&fixtures::fig1());
        assert!(f.self_descriptive && !f.nontrivial && f.diagonals.is_none());
    }

    #[test]
    fn nontrivial_fixtures_have_two_n_minus_one_values_and_parity() {
        for (name, sq) in fixtures::numeric_fixtures() {
            if !is_nontrivial(&sq) {
                continue;
            }
            let n = sq.order();
            assert_eq!(sq.frequencies().distinct(), 2 * n - 1, "{name}");
            let corner_row = sq.row_sum(n - 1).unwrap();
            assert_eq!(corner_row, sq.col_sum(n - 1).unwrap(), "{name}");
            assert_eq!(corner_row.rem_euclid(2), (n % 2) as Entry, "{name}");
        }
    }
}
