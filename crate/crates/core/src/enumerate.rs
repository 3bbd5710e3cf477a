//! Exhaustive enumeration of self-descriptive squares with entries in
//! `[-M, M]`.
//!
//! Cells are filled border first (right column top to bottom, then the
//! bottom row), then the interior row by row. For nontrivial squares border
//! values are pairwise distinct and interior values are drawn from the
//! border. After every assignment each row and column is checked: its final
//! sum must still be able to meet the final frequency of its terminal value.
//! In nontrivial mode a complete bottom row must also have the parity of
//! `n`, since twice the grid total minus the corner line sum equals `n^2`.
//!
//! With symmetry reduction (nontrivial only) the border is additionally
//! forced into standard normal form order, so exactly one square per
//! equivalence class is produced; raw listings expand each class again.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::canon::{orbit, orbit_min, to_snf};
use crate::square::{Entry, Square};
use crate::verify::{classify, count_errors};

pub const DEFAULT_ORDER_LIMIT: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("order {order} exceeds the enumeration limit {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("invalid enumeration bounds: order {order}, max_abs {max_abs}")]
    InvalidBounds { order: usize, max_abs: Entry },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dedupe {
    /// Every square.
    Raw,
    /// One representative per equivalence class: the SNF for nontrivial
    /// squares, the least member of the class otherwise.
    UpToEquivalence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumConfig {
    pub order: usize,
    pub max_abs: Entry,
    pub dedupe: Dedupe,
    /// Also list self-descriptive squares whose border is incomplete or
    /// redundant.
    pub include_trivial: bool,
    /// Restrict the border to SNF order and expand afterwards. Ignored when
    /// trivial squares are included.
    pub symmetry_reduction: bool,
    pub order_limit: usize,
}

impl EnumConfig {
    pub fn new(order: usize, max_abs: Entry) -> Self {
        Self {
            order,
            max_abs,
            dedupe: Dedupe::Raw,
            include_trivial: false,
            symmetry_reduction: true,
            order_limit: DEFAULT_ORDER_LIMIT,
        }
    }

    pub fn unique(mut self) -> Self {
        self.dedupe = Dedupe::UpToEquivalence;
        self
    }

    pub fn include_trivial(mut self) -> Self {
        self.include_trivial = true;
        self
    }

    pub fn without_symmetry_reduction(mut self) -> Self {
        self.symmetry_reduction = false;
        self
    }
}

/// All squares matching `config`, sorted.
pub fn enumerate_all(config: &EnumConfig) -> Result<Vec<Square>, EnumError> {
    let n = config.order;
    if n == 0 || config.max_abs < 1 {
        return Err(EnumError::InvalidBounds {
            order: n,
            max_abs: config.max_abs,
        });
    }
    if n > config.order_limit {
        return Err(EnumError::TooLarge {
            order: n,
            limit: config.order_limit,
        });
    }
    let reduce = config.symmetry_reduction && !config.include_trivial;
    let mut search = Backtrack::new(n, config.max_abs, !config.include_trivial, reduce);
    search.run(0);
    let found = search.found;

    let out: BTreeSet<Square> = match (config.dedupe, reduce) {
        (Dedupe::UpToEquivalence, true) => found.into_iter().collect(),
        (Dedupe::Raw, true) => found.iter().flat_map(orbit).collect(),
        (Dedupe::Raw, false) => found.into_iter().collect(),
        (Dedupe::UpToEquivalence, false) => found
            .iter()
            .map(|sq| to_snf(sq).unwrap_or_else(|_| orbit_min(sq)))
            .collect(),
    };
    Ok(out.into_iter().collect())
}

struct Backtrack {
    n: usize,
    max_abs: Entry,
    nontrivial: bool,
    snf_order: bool,
    cells: Vec<(usize, usize)>,
    grid: Vec<Entry>,
    counts: Vec<u32>,
    /// rows `0..n`, columns `n..2n`
    sums: Vec<Entry>,
    open: Vec<usize>,
    unassigned: usize,
    border_values: Vec<Entry>,
    found: Vec<Square>,
}

impl Backtrack {
    fn new(n: usize, max_abs: Entry, nontrivial: bool, snf_order: bool) -> Self {
        let border = (0..n)
            .map(|r| (r, n - 1))
            .chain((0..n - 1).map(|c| (n - 1, c)));
        let interior = (0..n - 1).flat_map(|r| (0..n - 1).map(move |c| (r, c)));
        Self {
            n,
            max_abs,
            nontrivial,
            snf_order,
            cells: border.chain(interior).collect(),
            grid: vec![0; n * n],
            counts: vec![0; (2 * max_abs + 1) as usize],
            sums: vec![0; 2 * n],
            open: vec![n; 2 * n],
            unassigned: n * n,
            border_values: Vec::new(),
            found: Vec::new(),
        }
    }

    fn border_len(&self) -> usize {
        2 * self.n - 1
    }

    fn count(&self, v: Entry) -> u32 {
        self.counts[(v + self.max_abs) as usize]
    }

    fn candidates(&self, step: usize) -> Vec<Entry> {
        let n = self.n;
        let (r, c) = self.cells[step];
        let all = -self.max_abs..=self.max_abs;
        if step >= self.border_len() {
            return if self.nontrivial {
                self.border_values.clone()
            } else {
                all.collect()
            };
        }
        let mut lo = -self.max_abs;
        if self.snf_order && n > 1 {
            if c == n - 1 && r > 0 && r < n - 1 {
                lo = self.grid[(r - 1) * n + n - 1] + 1;
            } else if r == n - 1 && c > 0 && c < n - 1 {
                lo = self.grid[(n - 1) * n + c - 1] + 1;
            }
        }
        let hi = if self.snf_order && n > 1 && r == n - 1 && c == 0 {
            self.grid[n - 1] - 1
        } else {
            self.max_abs
        };
        (lo..=hi)
            .filter(|v| !self.nontrivial || !self.border_values.contains(v))
            .collect()
    }

    fn assign(&mut self, step: usize, v: Entry) {
        let (r, c) = self.cells[step];
        self.grid[r * self.n + c] = v;
        self.counts[(v + self.max_abs) as usize] += 1;
        self.sums[r] += v;
        self.sums[self.n + c] += v;
        self.open[r] -= 1;
        self.open[self.n + c] -= 1;
        self.unassigned -= 1;
        if step < self.border_len() {
            self.border_values.push(v);
        }
    }

    fn unassign(&mut self, step: usize, v: Entry) {
        let (r, c) = self.cells[step];
        self.counts[(v + self.max_abs) as usize] -= 1;
        self.sums[r] -= v;
        self.sums[self.n + c] -= v;
        self.open[r] += 1;
        self.open[self.n + c] += 1;
        self.unassigned += 1;
        if step < self.border_len() {
            self.border_values.pop();
        }
    }

    fn terminal(&self, line: usize) -> Entry {
        let n = self.n;
        if line < n {
            self.grid[line * n + n - 1]
        } else {
            self.grid[(n - 1) * n + line - n]
        }
    }

    /// Every line whose terminal is known can still reach its frequency.
    fn feasible(&self, step: usize) -> bool {
        let n = self.n;
        let assigned = step + 1;
        // the terminal of row r is assigned at step r, of column c at step n + c
        // (the corner closes both the last row and the last column)
        let (lo, hi) = if self.nontrivial && assigned >= self.border_len() {
            let lo = *self.border_values.iter().min().expect("border is set");
            let hi = *self.border_values.iter().max().expect("border is set");
            (lo, hi)
        } else {
            (-self.max_abs, self.max_abs)
        };
        let spare = self.unassigned as Entry;
        for line in 0..2 * n {
            let known = if line < n {
                line < assigned
            } else if line == 2 * n - 1 {
                n <= assigned
            } else {
                n + (line - n) < assigned
            };
            if !known {
                continue;
            }
            let left = self.open[line] as Entry;
            let count = self.count(self.terminal(line)) as Entry;
            let (min_sum, max_sum) = (self.sums[line] + left * lo, self.sums[line] + left * hi);
            if max_sum < count.max(1) || min_sum > count + spare {
                return false;
            }
        }
        if self.open[n - 1] == 0 {
            let corner_sum = self.sums[n - 1];
            if self.nontrivial && corner_sum.rem_euclid(2) != (n % 2) as Entry {
                return false;
            }
            if self.open[2 * n - 1] == 0 && self.sums[2 * n - 1] != corner_sum {
                return false;
            }
        }
        true
    }

    fn run(&mut self, step: usize) {
        if step == self.cells.len() {
            let square = Square::from_parts_unchecked(self.n, self.grid.clone());
            let report = count_errors(&square);
            let accepted = if self.nontrivial {
                report.is_clean()
            } else {
                report.row_errors == 0 && report.col_errors == 0
            };
            if accepted {
                self.found.push(square);
            }
            return;
        }
        for v in self.candidates(step) {
            self.assign(step, v);
            if self.feasible(step) {
                self.run(step + 1);
            }
            self.unassign(step, v);
        }
    }
}

/// Every square has order 3 and a corner line sum of 1 or 3.
pub fn check_three_by_three_bound(results: &[Square]) -> bool {
    results
        .iter()
        .all(|sq| sq.order() == 3 && matches!(sq.row_sum(2), Ok(1 | 3)))
}

/// Number of equivalence classes among `results` with each property. A
/// class counts toward a variant when any of its members has it, since the
/// diagonal-based properties are not preserved by rearrangement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct VariantCounts {
    pub classes: usize,
    pub self_descriptive: usize,
    pub nontrivial: usize,
    pub minimal: usize,
    pub magic: usize,
    pub minimal_magic: usize,
    pub perfect: usize,
    pub concentric: usize,
}

pub fn count_by_variant(results: &[Square]) -> VariantCounts {
    let mut classes: BTreeMap<Square, Vec<Square>> = BTreeMap::new();
    for sq in results {
        let key = to_snf(sq).unwrap_or_else(|_| orbit_min(sq));
        classes
            .entry(key)
            .or_insert_with(|| orbit(sq).into_iter().collect());
    }
    let mut counts = VariantCounts {
        classes: classes.len(),
        ..VariantCounts::default()
    };
    for members in classes.values() {
        let flags: Vec<_> = members.iter().map(classify).collect();
        let any = |f: &dyn Fn(&crate::verify::VariantFlags) -> bool| flags.iter().any(f);
        counts.self_descriptive += usize::from(any(&|f| f.self_descriptive));
        counts.nontrivial += usize::from(any(&|f| f.nontrivial));
        counts.minimal += usize::from(any(&|f| f.nontrivial && f.minimal));
        counts.magic += usize::from(any(&|f| f.magic));
        counts.minimal_magic += usize::from(any(&|f| f.magic && f.minimal));
        counts.perfect += usize::from(any(&|f| f.perfect));
        counts.concentric += usize::from(any(&|f| f.nontrivial && f.concentric));
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::verify::is_self_descriptive;

    /// Plain product enumeration over `[-m, m]^(n*n)` for tiny cases.
    fn brute_force(n: usize, m: Entry, nontrivial: bool) -> Vec<Square> {
        let width = (2 * m + 1) as usize;
        let total = width.pow((n * n) as u32);
        (0..total)
            .map(|mut code| {
                let cells = (0..n * n)
                    .map(|_| {
                        let v = (code % width) as Entry - m;
                        code /= width;
                        v
                    })
                    .collect();
                Square::new(n, cells).unwrap()
            })
            .filter(|sq| {
                if nontrivial {
                    count_errors(sq).is_clean()
                } else {
                    is_self_descriptive(sq)
                }
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    #[test]
    fn order_one() {
        let unit = vec![Square::filled(1, 1).unwrap()];
        assert_eq!(enumerate_all(&EnumConfig::new(1, 1)).unwrap(), unit);
        assert_eq!(
            enumerate_all(&EnumConfig::new(1, 3).include_trivial()).unwrap(),
            unit
        );
    }

    #[test]
    fn order_two_has_only_trivial_squares() {
        assert!(enumerate_all(&EnumConfig::new(2, 4)).unwrap().is_empty());
        let trivial = enumerate_all(&EnumConfig::new(2, 4).include_trivial()).unwrap();
        assert_eq!(trivial, brute_force(2, 4, false));
        // Two one-parameter families and one sporadic square.
        let family = |sq: &Square| {
            let [a, b, c, d] = sq.cells() else {
                unreachable!()
            };
            match (b == c && a + b == 2, d - a) {
                (true, 0) => Some('A'),
                (true, -1) => Some('B'),
                _ if sq.cells() == [2, 2, 2, 2] => Some('C'),
                _ => None,
            }
        };
        let families: BTreeSet<char> = trivial.iter().map(|sq| family(sq).unwrap()).collect();
        assert_eq!(families.len(), 3);
        let classes = enumerate_all(&EnumConfig::new(2, 4).include_trivial().unique()).unwrap();
        assert_eq!(classes.len(), 13);
    }

    #[test]
    fn matches_brute_force_on_small_bounds() {
        for m in 1..=2 {
            let raw = enumerate_all(&EnumConfig::new(3, m)).unwrap();
            assert_eq!(raw, brute_force(3, m, true), "m={m}");
        }
    }

    #[test]
    fn symmetry_reduction_agrees_with_full_search() {
        let reduced = enumerate_all(&EnumConfig::new(3, 4)).unwrap();
        let full = enumerate_all(&EnumConfig::new(3, 4).without_symmetry_reduction()).unwrap();
        assert_eq!(reduced, full);
        let reduced = enumerate_all(&EnumConfig::new(3, 4).unique()).unwrap();
        let full =
            enumerate_all(&EnumConfig::new(3, 4).unique().without_symmetry_reduction()).unwrap();
        assert_eq!(reduced, full);
    }

    #[test]
    fn the_two_squares_of_order_three() {
        let unique = enumerate_all(&EnumConfig::new(3, 5).unique()).unwrap();
        let mut expected = vec![fixtures::fig8a(), fixtures::fig8b()];
        expected.sort();
        assert_eq!(unique, expected);
        assert!(check_three_by_three_bound(&unique));
        let raw = enumerate_all(&EnumConfig::new(3, 5)).unwrap();
        assert_eq!(raw.len(), 16);
        assert!(check_three_by_three_bound(&raw));
    }

    #[test]
    fn bound_check_on_single_figures() {
        assert!(check_three_by_three_bound(&[fixtures::fig8a()]));
        assert!(check_three_by_three_bound(&[fixtures::fig8b()]));
        assert!(!check_three_by_three_bound(&[fixtures::fig2()]));
    }

    #[test]
    fn guard() {
        assert!(matches!(
            enumerate_all(&EnumConfig::new(5, 2)),
            Err(EnumError::TooLarge { order: 5, limit: 4 })
        ));
        assert!(enumerate_all(&EnumConfig::new(2, 0)).is_err());
    }

    #[test]
    fn variant_counts_for_low_orders() {
        let one = count_by_variant(&enumerate_all(&EnumConfig::new(1, 1)).unwrap());
        assert_eq!(
            (one.nontrivial, one.magic, one.perfect, one.minimal),
            (1, 1, 1, 0)
        );
        let two = count_by_variant(&enumerate_all(&EnumConfig::new(2, 4)).unwrap());
        assert_eq!(two, VariantCounts::default());
        let three = count_by_variant(&enumerate_all(&EnumConfig::new(3, 5)).unwrap());
        assert_eq!((three.nontrivial, three.magic, three.minimal), (2, 0, 0));
    }
}
