//! Incremental error bookkeeping for the hill climber.
//!
//! Every row and column ("tuple") contributes 1 to the error when its sum
//! differs from the frequency of its terminal value. Group tuples by
//! terminal value `v`: with `T(v)` such tuples, of which `P(v, s)` have sum
//! `s`, the tuples ending in `v` contribute `T(v) - P(v, count(v))`. A
//! single-cell change only alters these numbers for the old value, the new
//! value and the terminals of the cell's row and column, so the update is
//! O(1). Border coverage is kept the same way from per-value counts split
//! between border and interior cells.

use crate::square::{Entry, Square};
use crate::verify::count_errors;

use super::{variant_errors, SearchError, Variant};

#[derive(Debug)]
pub struct SearchState {
    n: usize,
    max_abs: Entry,
    variant: Variant,
    grid: Vec<Entry>,
    /// rows `0..n`, then columns `n..2n`
    sums: Vec<Entry>,
    counts: Vec<u32>,
    border_counts: Vec<u32>,
    interior_counts: Vec<u32>,
    distinct_border: usize,
    coverage_errors: usize,
    /// `T(v)`
    terminal_tuples: Vec<u32>,
    /// `P(v, s)` for `s` in `0..=n*n`, flattened by value
    terminal_sums: Vec<u32>,
    tuple_errors: usize,
    main_diagonal: Entry,
    anti_diagonal: Entry,
    core: Option<Box<SearchState>>,
    variant_penalty: usize,
}

impl Clone for SearchState {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            max_abs: self.max_abs,
            variant: self.variant,
            grid: self.grid.clone(),
            sums: self.sums.clone(),
            counts: self.counts.clone(),
            border_counts: self.border_counts.clone(),
            interior_counts: self.interior_counts.clone(),
            distinct_border: self.distinct_border,
            coverage_errors: self.coverage_errors,
            terminal_tuples: self.terminal_tuples.clone(),
            terminal_sums: self.terminal_sums.clone(),
            tuple_errors: self.tuple_errors,
            main_diagonal: self.main_diagonal,
            anti_diagonal: self.anti_diagonal,
            core: self.core.clone(),
            variant_penalty: self.variant_penalty,
        }
    }

    /// Reuses the existing buffers; the solver copies a state every iteration.
    fn clone_from(&mut self, source: &Self) {
        self.n = source.n;
        self.max_abs = source.max_abs;
        self.variant = source.variant;
        self.grid.clone_from(&source.grid);
        self.sums.clone_from(&source.sums);
        self.counts.clone_from(&source.counts);
        self.border_counts.clone_from(&source.border_counts);
        self.interior_counts.clone_from(&source.interior_counts);
        self.distinct_border = source.distinct_border;
        self.coverage_errors = source.coverage_errors;
        self.terminal_tuples.clone_from(&source.terminal_tuples);
        self.terminal_sums.clone_from(&source.terminal_sums);
        self.tuple_errors = source.tuple_errors;
        self.main_diagonal = source.main_diagonal;
        self.anti_diagonal = source.anti_diagonal;
        match (&mut self.core, &source.core) {
            (Some(mine), Some(theirs)) => mine.clone_from(theirs),
            (mine, theirs) => mine.clone_from(theirs),
        }
        self.variant_penalty = source.variant_penalty;
    }
}

impl SearchState {
    /// Builds the state for `square`. Every cell must lie in
    /// `[-max_abs, max_abs]`.
    pub fn new(square: &Square, max_abs: Entry, variant: Variant) -> Result<Self, SearchError> {
        if max_abs < 0 {
            return Err(SearchError::InvalidConfig(format!(
                "max_abs {max_abs} is negative"
            )));
        }
        if let Some(&v) = square.cells().iter().find(|v| v.abs() > max_abs) {
            return Err(SearchError::OutOfBound { value: v, max_abs });
        }
        let n = square.order();
        if variant == Variant::Concentric && n < 3 {
            return Err(SearchError::InvalidConfig(format!(
                "order {n} has no core for a concentric search"
            )));
        }
        let width = (2 * max_abs + 1) as usize;
        let core = match variant {
            Variant::Concentric => {
                let inner = square.sub_square(1, n - 2).expect("core lies inside");
                Some(Box::new(Self::new(&inner, max_abs, Variant::Plain)?))
            }
            _ => None,
        };
        let mut state = Self {
            n,
            max_abs,
            variant,
            grid: square.cells().to_vec(),
            sums: vec![0; 2 * n],
            counts: vec![0; width],
            border_counts: vec![0; width],
            interior_counts: vec![0; width],
            distinct_border: 0,
            coverage_errors: 0,
            terminal_tuples: vec![0; width],
            terminal_sums: vec![0; width * (n * n + 1)],
            tuple_errors: 0,
            main_diagonal: 0,
            anti_diagonal: 0,
            core,
            variant_penalty: 0,
        };
        for r in 0..n {
            for c in 0..n {
                let v = state.grid[r * n + c];
                state.sums[r] += v;
                state.sums[n + c] += v;
                if r == c {
                    state.main_diagonal += v;
                }
                if r + c == n - 1 {
                    state.anti_diagonal += v;
                }
                state.add_occurrence(r, c, v);
            }
        }
        for t in 0..2 * n {
            state.insert_tuple(t);
        }
        let values: Vec<Entry> = (-max_abs..=max_abs).collect();
        state.tuple_errors = values.iter().map(|&v| state.value_errors(v)).sum();
        state.variant_penalty = state.compute_variant_penalty();
        Ok(state)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn max_abs(&self) -> Entry {
        self.max_abs
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn get(&self, row: usize, col: usize) -> Entry {
        self.grid[row * self.n + col]
    }

    pub fn square(&self) -> Square {
        Square::from_parts_unchecked(self.n, self.grid.clone())
    }

    /// Condition-1 plus condition-2 plus tuple errors plus variant penalty.
    pub fn total(&self) -> usize {
        self.base_errors() + self.variant_penalty
    }

    /// Errors of the four basic conditions only.
    pub fn base_errors(&self) -> usize {
        (2 * self.n - 1 - self.distinct_border) + self.coverage_errors + self.tuple_errors
    }

    /// Sets cell `(row, col)` to `value` and returns the change in
    /// [`total`](Self::total).
    pub fn apply_delta(
        &mut self,
        row: usize,
        col: usize,
        value: Entry,
    ) -> Result<i64, SearchError> {
        let n = self.n;
        if row >= n || col >= n {
            return Err(SearchError::IndexOutOfRange { row, col, order: n });
        }
        if value.abs() > self.max_abs {
            return Err(SearchError::OutOfBound {
                value,
                max_abs: self.max_abs,
            });
        }
        Ok(self.set(row, col, value))
    }

    /// Unchecked [`apply_delta`](Self::apply_delta) for the solver's inner
    /// loop.
    pub(crate) fn set(&mut self, row: usize, col: usize, value: Entry) -> i64 {
        let n = self.n;
        let old = self.grid[row * n + col];
        if old == value {
            return 0;
        }
        let before = self.total() as i64;

        let row_terminal = self.grid[row * n + n - 1];
        let col_terminal = self.grid[(n - 1) * n + col];
        let affected = [old, value, row_terminal, col_terminal];
        let is_first = |i: usize| !affected[..i].contains(&affected[i]);
        for (i, &v) in affected.iter().enumerate() {
            if is_first(i) {
                self.tuple_errors -= self.value_errors(v);
            }
        }

        let (row_tuple, col_tuple) = (row, n + col);
        self.remove_tuple(row_tuple);
        self.remove_tuple(col_tuple);

        self.remove_occurrence(row, col, old);
        self.grid[row * n + col] = value;
        self.add_occurrence(row, col, value);
        let diff = value - old;
        self.sums[row_tuple] += diff;
        self.sums[col_tuple] += diff;
        if row == col {
            self.main_diagonal += diff;
        }
        if row + col == n - 1 {
            self.anti_diagonal += diff;
        }

        self.insert_tuple(row_tuple);
        self.insert_tuple(col_tuple);

        for (i, &v) in affected.iter().enumerate() {
            if is_first(i) {
                self.tuple_errors += self.value_errors(v);
            }
        }

        if let Some(core) = self.core.as_mut() {
            if (1..n - 1).contains(&row) && (1..n - 1).contains(&col) {
                core.set(row - 1, col - 1, value);
            }
        }
        if self.variant != Variant::Plain {
            self.variant_penalty = self.compute_variant_penalty();
        }
        self.total() as i64 - before
    }

    /// Compares every cached quantity with a fresh rebuild and the cached
    /// total with the from-scratch error count.
    pub fn is_consistent(&self) -> bool {
        let square = self.square();
        let Ok(fresh) = Self::new(&square, self.max_abs, self.variant) else {
            return false;
        };
        let scratch = count_errors(&square).total + variant_errors(&square, self.variant);
        self.total() == scratch
            && fresh.total() == scratch
            && self.sums == fresh.sums
            && self.counts == fresh.counts
            && self.border_counts == fresh.border_counts
            && self.interior_counts == fresh.interior_counts
            && self.terminal_tuples == fresh.terminal_tuples
            && self.terminal_sums == fresh.terminal_sums
            && self.tuple_errors == fresh.tuple_errors
            && self.coverage_errors == fresh.coverage_errors
            && self.distinct_border == fresh.distinct_border
            && (self.main_diagonal, self.anti_diagonal)
                == (fresh.main_diagonal, fresh.anti_diagonal)
            && self.core.as_ref().is_none_or(|c| c.is_consistent())
    }

    fn idx(&self, v: Entry) -> usize {
        (v + self.max_abs) as usize
    }

    fn count(&self, v: Entry) -> u32 {
        self.counts[self.idx(v)]
    }

    fn sum_slot(&self, v: Entry, sum: Entry) -> Option<usize> {
        let cap = (self.n * self.n) as Entry;
        (0..=cap)
            .contains(&sum)
            .then(|| self.idx(v) * (self.n * self.n + 1) + sum as usize)
    }

    /// Tuples ending in `v` whose sum is not the frequency of `v`.
    fn value_errors(&self, v: Entry) -> usize {
        let i = self.idx(v);
        // a count never exceeds n*n, so it always has a slot
        let matching = self.terminal_sums[i * (self.n * self.n + 1) + self.counts[i] as usize];
        (self.terminal_tuples[i] - matching) as usize
    }

    fn terminal(&self, tuple: usize) -> Entry {
        let n = self.n;
        if tuple < n {
            self.grid[tuple * n + n - 1]
        } else {
            self.grid[(n - 1) * n + (tuple - n)]
        }
    }

    fn insert_tuple(&mut self, tuple: usize) {
        let v = self.terminal(tuple);
        let i = self.idx(v);
        self.terminal_tuples[i] += 1;
        if let Some(slot) = self.sum_slot(v, self.sums[tuple]) {
            self.terminal_sums[slot] += 1;
        }
    }

    fn remove_tuple(&mut self, tuple: usize) {
        let v = self.terminal(tuple);
        let i = self.idx(v);
        self.terminal_tuples[i] -= 1;
        if let Some(slot) = self.sum_slot(v, self.sums[tuple]) {
            self.terminal_sums[slot] -= 1;
        }
    }

    fn is_border(&self, row: usize, col: usize) -> bool {
        row == self.n - 1 || col == self.n - 1
    }

    fn add_occurrence(&mut self, row: usize, col: usize, v: Entry) {
        let i = self.idx(v);
        self.counts[i] += 1;
        if self.is_border(row, col) {
            if self.border_counts[i] == 0 {
                self.distinct_border += 1;
                self.coverage_errors -= self.interior_counts[i] as usize;
            }
            self.border_counts[i] += 1;
        } else {
            self.interior_counts[i] += 1;
            if self.border_counts[i] == 0 {
                self.coverage_errors += 1;
            }
        }
    }

    fn remove_occurrence(&mut self, row: usize, col: usize, v: Entry) {
        let i = self.idx(v);
        self.counts[i] -= 1;
        if self.is_border(row, col) {
            self.border_counts[i] -= 1;
            if self.border_counts[i] == 0 {
                self.distinct_border -= 1;
                self.coverage_errors += self.interior_counts[i] as usize;
            }
        } else {
            self.interior_counts[i] -= 1;
            if self.border_counts[i] == 0 {
                self.coverage_errors -= 1;
            }
        }
    }

    fn describes(&self, v: Entry, sum: Entry) -> bool {
        sum >= 0 && self.count(v) as Entry == sum
    }

    fn diagonal_misses(&self) -> usize {
        let n = self.n;
        let (tl, br) = (self.grid[0], self.grid[n * n - 1]);
        let (tr, bl) = (self.grid[n - 1], self.grid[(n - 1) * n]);
        let main = self.describes(tl, self.main_diagonal) || self.describes(br, self.main_diagonal);
        let anti = self.describes(tr, self.anti_diagonal) || self.describes(bl, self.anti_diagonal);
        usize::from(!main) + usize::from(!anti)
    }

    fn bidirectional_misses(&self) -> usize {
        let n = self.n;
        (0..2 * n)
            .filter(|&t| {
                let (first, last) = if t < n {
                    (self.grid[t * n], self.grid[t * n + n - 1])
                } else {
                    let c = t - n;
                    (self.grid[c], self.grid[(n - 1) * n + c])
                };
                !(self.describes(first, self.sums[t]) && self.describes(last, self.sums[t]))
            })
            .count()
    }

    fn compute_variant_penalty(&self) -> usize {
        let n = self.n;
        match self.variant {
            Variant::Plain => 0,
            Variant::Magic => self.diagonal_misses(),
            Variant::Bidirectional => self.bidirectional_misses(),
            Variant::Perfect => {
                let (tl, br) = (self.grid[0], self.grid[n * n - 1]);
                let (tr, bl) = (self.grid[n - 1], self.grid[(n - 1) * n]);
                self.diagonal_misses()
                    + self.bidirectional_misses()
                    + usize::from(self.count(tl) != self.count(br))
                    + usize::from(self.count(tr) != self.count(bl))
            }
            Variant::Minimal => {
                let limit = n as Entry - 1;
                let absent = (-limit..=limit)
                    .filter(|&v| v.abs() > self.max_abs || self.count(v) == 0)
                    .count();
                let outside: u32 = (-self.max_abs..=self.max_abs)
                    .filter(|v| v.abs() > limit)
                    .map(|v| self.count(v))
                    .sum();
                absent + outside as usize
            }
            Variant::Concentric => self.core.as_ref().map_or(0, |c| c.total()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::verify::count_errors;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fresh_state_matches_scratch() {
        for (_, sq) in fixtures::numeric_fixtures() {
            let state = SearchState::new(&sq, 5, Variant::Plain).unwrap();
            assert_eq!(state.total(), count_errors(&sq).total);
            assert!(state.is_consistent());
        }
    }

    #[test]
    fn same_value_is_a_no_op() {
        let mut state = SearchState::new(&fixtures::fig2(), 4, Variant::Plain).unwrap();
        assert_eq!(state.apply_delta(1, 2, 2), Ok(0));
        assert_eq!(state.square(), fixtures::fig2());
    }

    #[test]
    fn corrupting_figure_two() {
        let mut state = SearchState::new(&fixtures::fig2(), 4, Variant::Plain).unwrap();
        let delta = state.apply_delta(0, 0, 2).unwrap();
        let edited = fixtures::fig2().with_cell(0, 0, 2).unwrap();
        assert_eq!(delta, count_errors(&edited).total as i64);
        assert!(state.is_consistent());
    }

    #[test]
    fn rejects_bad_moves() {
        let mut state = SearchState::new(&fixtures::fig2(), 4, Variant::Plain).unwrap();
        assert!(matches!(
            state.apply_delta(4, 0, 1),
            Err(SearchError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            state.apply_delta(0, 0, 9),
            Err(SearchError::OutOfBound { value: 9, .. })
        ));
        assert!(SearchState::new(&fixtures::fig8a(), 4, Variant::Plain).is_err());
        assert!(SearchState::new(&Square::filled(2, 0).unwrap(), 2, Variant::Concentric).is_err());
    }

    #[test]
    fn random_edits_stay_consistent_for_every_variant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for variant in Variant::ALL {
            for n in 3..=5 {
                let m = 3;
                let cells = (0..n * n).map(|_| rng.gen_range(-m..=m)).collect();
                let sq = Square::new(n, cells).unwrap();
                let mut state = SearchState::new(&sq, m, variant).unwrap();
                for _ in 0..400 {
                    let (r, c, v) = (
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                        rng.gen_range(-m..=m),
                    );
                    let before = state.total() as i64;
                    let delta = state.apply_delta(r, c, v).unwrap();
                    let scratch = count_errors(&state.square()).total
                        + variant_errors(&state.square(), variant);
                    assert_eq!(state.total(), scratch, "{variant:?} n={n}");
                    assert_eq!(before + delta, scratch as i64);
                }
                assert!(state.is_consistent());
            }
        }
    }
}
