//! Self-description preserving rearrangements, standard normal form (SNF),
//! equivalence and anagram tests.
//!
//! The first `n - 1` rows and the first `n - 1` columns may be permuted
//! freely and the square may be reflected about its main diagonal; none of
//! these moves touch what a row or column describes. Two squares related by
//! such moves are *equivalent*. SNF picks one representative per class:
//! bottom row and right column sorted ascending (corner excluded) and the
//! top-right entry greater than the bottom-left one.

use std::collections::BTreeSet;

use itertools::Itertools;
use thiserror::Error;

use crate::square::{Entry, Square};
use crate::verify::is_nontrivial;

/// Largest order [`equivalence_class`] accepts unless told otherwise.
pub const DEFAULT_CLASS_ORDER_LIMIT: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("standard normal form needs a nontrivial s-d square")]
    NotNontrivial,
    #[error("{0:?} is not a permutation of 0..{1}")]
    NotAPermutation(Vec<usize>, usize),
    #[error("permutation moves the last {0}, which belongs to the border")]
    MovesBorder(&'static str),
    #[error("orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("order {order} exceeds the class generation limit {limit}")]
    OrderTooLarge { order: usize, limit: usize },
}

/// Row-major cells of a square in SNF; equal keys mean equivalent squares.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SnfKey(Square);

impl SnfKey {
    pub fn cells(&self) -> &[Entry] {
        self.0.cells()
    }

    pub fn square(&self) -> &Square {
        &self.0
    }

    pub fn into_square(self) -> Square {
        self.0
    }
}

/// Accepts either `n - 1` indices or `n` indices ending in `n - 1`.
fn checked_permutation(
    perm: &[usize],
    n: usize,
    axis: &'static str,
) -> Result<Vec<usize>, CanonError> {
    let mut full = perm.to_vec();
    if full.len() + 1 == n {
        full.push(n - 1);
    }
    let mut seen = vec![false; n];
    if full.len() != n
        || full
            .iter()
            .any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
    {
        return Err(CanonError::NotAPermutation(perm.to_vec(), n));
    }
    if full[n - 1] != n - 1 {
        return Err(CanonError::MovesBorder(axis));
    }
    Ok(full)
}

fn rearranged(square: &Square, rows: &[usize], cols: &[usize]) -> Square {
    let cells = rows
        .iter()
        .flat_map(|&r| cols.iter().map(move |&c| square.get(r, c)))
        .collect();
    Square::from_parts_unchecked(square.order(), cells)
}

/// Row `i` of the result is row `perm[i]` of the input.
pub fn permute_rows(square: &Square, perm: &[usize]) -> Result<Square, CanonError> {
    let n = square.order();
    let rows = checked_permutation(perm, n, "row")?;
    Ok(rearranged(square, &rows, &(0..n).collect_vec()))
}

/// Column `i` of the result is column `perm[i]` of the input.
pub fn permute_cols(square: &Square, perm: &[usize]) -> Result<Square, CanonError> {
    let n = square.order();
    let cols = checked_permutation(perm, n, "column")?;
    Ok(rearranged(square, &(0..n).collect_vec(), &cols))
}

/// Reflection about the main diagonal.
pub fn reflect(square: &Square) -> Square {
    square.transpose()
}

fn sorted_by_border(square: &Square) -> Square {
    let n = square.order();
    let mut cols = (0..n - 1).collect_vec();
    cols.sort_by_key(|&c| square.get(n - 1, c));
    cols.push(n - 1);
    let mut rows = (0..n - 1).collect_vec();
    rows.sort_by_key(|&r| square.get(r, n - 1));
    rows.push(n - 1);
    rearranged(square, &rows, &cols)
}

/// Whether the square satisfies the three ordering rules of SNF.
pub fn is_snf(square: &Square) -> bool {
    let n = square.order();
    let bottom_sorted = (1..n - 1).all(|c| square.get(n - 1, c - 1) < square.get(n - 1, c));
    let right_sorted = (1..n - 1).all(|r| square.get(r - 1, n - 1) < square.get(r, n - 1));
    bottom_sorted && right_sorted && (n == 1 || square.get(0, n - 1) > square.get(n - 1, 0))
}

pub fn to_snf(square: &Square) -> Result<Square, CanonError> {
    if !is_nontrivial(square) {
        return Err(CanonError::NotNontrivial);
    }
    if square.order() == 1 {
        return Ok(square.clone());
    }
    let candidate = sorted_by_border(square);
    if is_snf(&candidate) {
        Ok(candidate)
    } else {
        let reflected = sorted_by_border(&reflect(square));
        debug_assert!(is_snf(&reflected));
        Ok(reflected)
    }
}

pub fn snf_key(square: &Square) -> Result<SnfKey, CanonError> {
    to_snf(square).map(SnfKey)
}

pub fn equivalent(a: &Square, b: &Square) -> Result<bool, CanonError> {
    Ok(a.order() == b.order() && snf_key(a)? == snf_key(b)?)
}

/// Same multiset of entries.
pub fn is_anagram(a: &Square, b: &Square) -> Result<bool, CanonError> {
    if a.order() != b.order() {
        return Err(CanonError::OrderMismatch(a.order(), b.order()));
    }
    Ok(a.frequencies() == b.frequencies())
}

/// Every square reachable by the rearrangement group, without any
/// self-description requirement on the input.
pub(crate) fn orbit(square: &Square) -> BTreeSet<Square> {
    let n = square.order();
    let perms = || {
        (0..n - 1).permutations(n - 1).map(|mut p| {
            p.push(n - 1);
            p
        })
    };
    let mut out = BTreeSet::new();
    for base in [square.clone(), reflect(square)] {
        for rows in perms() {
            for cols in perms() {
                out.insert(rearranged(&base, &rows, &cols));
            }
        }
    }
    out
}

/// Lexicographically least member of the orbit. Serves as a class
/// representative for squares that have no SNF.
pub(crate) fn orbit_min(square: &Square) -> Square {
    orbit(square)
        .into_iter()
        .next()
        .expect("orbit contains the square itself")
}

/// All distinct squares equivalent to `square`. The class has at most
/// `(n-1)!^2 * 2` members and fewer when rearrangements coincide.
pub fn equivalence_class(square: &Square, limit: usize) -> Result<BTreeSet<Square>, CanonError> {
    let n = square.order();
    if n > limit {
        return Err(CanonError::OrderTooLarge { order: n, limit });
    }
    if !is_nontrivial(square) {
        return Err(CanonError::NotNontrivial);
    }
    Ok(orbit(square))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::verify::count_errors;

    #[test]
    fn row_rotation_preserves_self_description() {
        let rotated = permute_rows(&fixtures::fig2(), &[1, 2, 0]).unwrap();
        assert_eq!(count_errors(&rotated).total, 0);
        assert_ne!(rotated, fixtures::fig2());
        assert_eq!(
            permute_rows(&fixtures::fig2(), &[0, 1, 2, 3]).unwrap(),
            fixtures::fig2()
        );
        let swapped = permute_rows(&fixtures::fig8a(), &[1, 0]).unwrap();
        assert_eq!(count_errors(&swapped).total, 0);
    }

    #[test]
    fn column_permutations() {
        let swapped = permute_cols(&fixtures::fig2(), &[2, 1, 0]).unwrap();
        assert_eq!(count_errors(&swapped).total, 0);
        assert_eq!(
            permute_cols(&fixtures::fig2(), &[0, 1, 2]).unwrap(),
            fixtures::fig2()
        );
        let swapped = permute_cols(&fixtures::fig8b(), &[1, 0]).unwrap();
        assert_eq!(count_errors(&swapped).total, 0);
    }

    #[test]
    fn permutations_must_fix_the_border() {
        assert_eq!(
            permute_rows(&fixtures::fig2(), &[3, 1, 2, 0]),
            Err(CanonError::MovesBorder("row"))
        );
        assert!(matches!(
            permute_cols(&fixtures::fig2(), &[0, 0, 1]),
            Err(CanonError::NotAPermutation(..))
        ));
        assert!(permute_cols(&fixtures::fig2(), &[0, 1]).is_err());
    }

    #[test]
    fn reflection() {
        let sq = fixtures::fig2();
        assert_eq!(reflect(&reflect(&sq)), sq);
        assert_eq!(count_errors(&reflect(&sq)).total, 0);
        let r = reflect(&fixtures::fig4());
        assert!(r.get(0, 3) < r.get(3, 0));
        assert!(!is_snf(&r));
    }

    #[test]
    fn snf_of_figures() {
        assert_eq!(to_snf(&fixtures::fig2()), Ok(fixtures::fig4()));
        assert_eq!(to_snf(&fixtures::fig3()), Ok(fixtures::fig4()));
        assert_eq!(to_snf(&fixtures::fig4()), Ok(fixtures::fig4()));
        assert_eq!(to_snf(&fixtures::fig8a()), Ok(fixtures::fig8a()));
        assert_eq!(to_snf(&fixtures::fig8b()), Ok(fixtures::fig8b()));
        assert_eq!(to_snf(&fixtures::fig1()), Err(CanonError::NotNontrivial));
    }

    #[test]
    fn equivalence_and_anagrams() {
        assert_eq!(equivalent(&fixtures::fig2(), &fixtures::fig3()), Ok(true));
        assert_eq!(
            equivalent(&fixtures::fig8a(), &fixtures::fig8b()),
            Ok(false)
        );
        assert_eq!(
            equivalent(&fixtures::fig2(), &reflect(&fixtures::fig2())),
            Ok(true)
        );
        assert_eq!(is_anagram(&fixtures::fig2(), &fixtures::fig3()), Ok(true));
        assert_eq!(
            is_anagram(&fixtures::fig8a(), &fixtures::fig8b()),
            Ok(false)
        );
        assert_eq!(is_anagram(&fixtures::fig2(), &fixtures::fig2()), Ok(true));
        assert!(is_anagram(&fixtures::fig2(), &fixtures::fig8a()).is_err());
    }

    #[test]
    fn class_sizes() {
        let class = equivalence_class(&fixtures::fig2(), DEFAULT_CLASS_ORDER_LIMIT).unwrap();
        assert_eq!(class.len(), 72);
        assert!(class.iter().all(|s| count_errors(s).total == 0));
        assert_eq!(class.iter().filter(|s| is_snf(s)).count(), 1);

        let unit = Square::filled(1, 1).unwrap();
        assert_eq!(equivalence_class(&unit, 5).unwrap().len(), 1);

        let class = equivalence_class(&fixtures::fig8a(), 5).unwrap();
        assert_eq!(class.len(), 8);
        assert!(class.contains(&fixtures::fig8a()));

        assert!(matches!(
            equivalence_class(&fixtures::fig19(), 5),
            Err(CanonError::OrderTooLarge { order: 6, limit: 5 })
        ));
    }
}
