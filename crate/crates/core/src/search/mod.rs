//! Hill-climbing search for self-descriptive squares.
//!
//! Each iteration copies the best square found so far, applies a few random
//! single-cell mutations, then sweeps every cell and every value in
//! `[-M, M]`, keeping a change only when it strictly lowers the error count.
//! The result replaces the best square when its error is strictly lower.
//! Error deltas come from [`SearchState`], which updates in O(1) per cell
//! change; [`ScratchEvaluator`] recomputes from scratch and exists as an
//! oracle for it.

mod state;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::canon::{snf_key, SnfKey};
use crate::square::{Entry, Square};
use crate::verify::{count_errors, diagonals, is_bidirectional, is_minimal};

pub use state::SearchState;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("value {value} lies outside [-{max_abs}, {max_abs}]")]
    OutOfBound { value: Entry, max_abs: Entry },
    #[error("cell ({row}, {col}) is outside a square of order {order}")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        order: usize,
    },
}

/// Extra property demanded of a solution on top of being a nontrivial
/// s-d square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Plain,
    Magic,
    Bidirectional,
    Perfect,
    Minimal,
    Concentric,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Plain,
        Variant::Magic,
        Variant::Bidirectional,
        Variant::Perfect,
        Variant::Minimal,
        Variant::Concentric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Magic => "magic",
            Variant::Bidirectional => "bidirectional",
            Variant::Perfect => "perfect",
            Variant::Minimal => "minimal",
            Variant::Concentric => "concentric",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown variant {s:?}"))
    }
}

/// Penalty added to the basic error count for `variant`; zero exactly when
/// the square has the variant's property (given it is a nontrivial s-d
/// square).
///
/// - magic: diagonals that describe neither end cell
/// - bidirectional: rows and columns whose sum misses either end's frequency
/// - perfect: magic + bidirectional + diagonals whose ends differ in frequency
/// - minimal: values of `1-n..=n-1` that are absent plus cells outside that range
/// - concentric: error count of the centred core (1 when there is no core)
pub fn variant_errors(square: &Square, variant: Variant) -> usize {
    let n = square.order();
    let freq = square.frequencies();
    let diagonal_misses = || {
        let d = diagonals(square, &freq);
        usize::from(!d.main.is_self_descriptive()) + usize::from(!d.anti.is_self_descriptive())
    };
    let bidirectional_misses = || {
        let row_misses = square
            .rows()
            .filter(|row| {
                let sum = row.iter().sum();
                !(freq.describes(row[0], sum) && freq.describes(row[n - 1], sum))
            })
            .count();
        let col_misses = (0..n)
            .filter(|&c| {
                let sum = square.column(c).sum();
                !(freq.describes(square.get(0, c), sum)
                    && freq.describes(square.get(n - 1, c), sum))
            })
            .count();
        row_misses + col_misses
    };
    match variant {
        Variant::Plain => 0,
        Variant::Magic => diagonal_misses(),
        Variant::Bidirectional => bidirectional_misses(),
        Variant::Perfect => {
            let d = diagonals(square, &freq);
            diagonal_misses()
                + bidirectional_misses()
                + usize::from(freq.get(d.main.first) != freq.get(d.main.last))
                + usize::from(freq.get(d.anti.first) != freq.get(d.anti.last))
        }
        Variant::Minimal => {
            let limit = n as Entry - 1;
            let absent = (-limit..=limit).filter(|&v| !freq.contains(v)).count();
            let outside = square.cells().iter().filter(|v| v.abs() > limit).count();
            absent + outside
        }
        Variant::Concentric => {
            if n < 3 {
                1
            } else {
                count_errors(&square.sub_square(1, n - 2).expect("core lies inside")).total
            }
        }
    }
}

/// Whether a nontrivial square has the variant's property.
pub fn has_variant(square: &Square, variant: Variant) -> bool {
    match variant {
        Variant::Bidirectional => {
            let b = is_bidirectional(square);
            b.rows && b.cols
        }
        Variant::Minimal => is_minimal(square),
        _ => variant_errors(square, variant) == 0,
    }
}

/// Callback receiving `(iteration, best_error)` after every iteration.
pub type Progress<'a> = &'a mut dyn FnMut(u64, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub order: usize,
    pub max_abs: Entry,
    pub mutations_per_iteration: usize,
    pub seed: u64,
    /// Zero means unbounded.
    pub max_iterations: u64,
    /// Non-improving iterations before a fresh random start; zero disables
    /// restarts.
    pub restart_interval: u64,
    pub variant: Variant,
    /// Wall-clock budget; `None` means unbounded.
    pub time_limit: Option<Duration>,
}

impl SearchConfig {
    pub const DEFAULT_MUTATIONS: usize = 3;
    pub const DEFAULT_MAX_ITERATIONS: u64 = 10_000_000;
    pub const DEFAULT_RESTART_INTERVAL: u64 = 10_000;

    pub fn new(order: usize, max_abs: Entry) -> Self {
        Self {
            order,
            max_abs,
            mutations_per_iteration: Self::DEFAULT_MUTATIONS,
            seed: 0,
            max_iterations: Self::DEFAULT_MAX_ITERATIONS,
            restart_interval: Self::DEFAULT_RESTART_INTERVAL,
            variant: Variant::Plain,
            time_limit: None,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn max_iterations(mut self, iterations: u64) -> Self {
        self.max_iterations = iterations;
        self
    }

    pub fn restart_interval(mut self, iterations: u64) -> Self {
        self.restart_interval = iterations;
        self
    }

    pub fn time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |msg: String| Err(SearchError::InvalidConfig(msg));
        if self.order == 0 {
            return bad("order must be at least 1".into());
        }
        if self.max_abs < 1 {
            return bad(format!("max_abs must be at least 1, got {}", self.max_abs));
        }
        if self.mutations_per_iteration == 0 {
            return bad("at least one mutation per iteration is required".into());
        }
        if self.variant == Variant::Concentric && self.order < 3 {
            return bad(format!(
                "order {} has no core for a concentric search",
                self.order
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub solution: Option<Square>,
    /// Lowest-error square seen; equals `solution` on success.
    pub best: Square,
    pub iterations: u64,
    pub restarts: u64,
    pub elapsed: Duration,
    pub best_error: usize,
}

/// The cell operations the solver needs from an error evaluator.
pub trait Evaluator: Clone {
    fn from_square(square: &Square, max_abs: Entry, variant: Variant) -> Result<Self, SearchError>;
    fn order(&self) -> usize;
    fn get(&self, row: usize, col: usize) -> Entry;
    /// Current error including the variant penalty.
    fn total(&self) -> usize;
    /// Sets one cell and returns the change in [`total`](Self::total).
    fn set(&mut self, row: usize, col: usize, value: Entry) -> i64;
    fn square(&self) -> Square;
}

impl Evaluator for SearchState {
    fn from_square(square: &Square, max_abs: Entry, variant: Variant) -> Result<Self, SearchError> {
        SearchState::new(square, max_abs, variant)
    }

    fn order(&self) -> usize {
        SearchState::order(self)
    }

    fn get(&self, row: usize, col: usize) -> Entry {
        SearchState::get(self, row, col)
    }

    fn total(&self) -> usize {
        SearchState::total(self)
    }

    fn set(&mut self, row: usize, col: usize, value: Entry) -> i64 {
        SearchState::set(self, row, col, value)
    }

    fn square(&self) -> Square {
        SearchState::square(self)
    }
}

/// Recomputes [`count_errors`] and [`variant_errors`] after every change.
#[derive(Debug, Clone)]
pub struct ScratchEvaluator {
    square: Square,
    variant: Variant,
    total: usize,
}

impl ScratchEvaluator {
    fn score(square: &Square, variant: Variant) -> usize {
        count_errors(square).total + variant_errors(square, variant)
    }
}

impl Evaluator for ScratchEvaluator {
    fn from_square(
        square: &Square,
        _max_abs: Entry,
        variant: Variant,
    ) -> Result<Self, SearchError> {
        Ok(Self {
            square: square.clone(),
            variant,
            total: Self::score(square, variant),
        })
    }

    fn order(&self) -> usize {
        self.square.order()
    }

    fn get(&self, row: usize, col: usize) -> Entry {
        self.square.get(row, col)
    }

    fn total(&self) -> usize {
        self.total
    }

    fn set(&mut self, row: usize, col: usize, value: Entry) -> i64 {
        self.square = self
            .square
            .with_cell(row, col, value)
            .expect("cell in range");
        let before = self.total as i64;
        self.total = Self::score(&self.square, self.variant);
        self.total as i64 - before
    }

    fn square(&self) -> Square {
        self.square.clone()
    }
}

/// Every cell uniform over `[-max_abs, max_abs]`.
pub fn initialize<R: Rng>(order: usize, max_abs: Entry, rng: &mut R) -> Square {
    let cells = (0..order * order)
        .map(|_| rng.gen_range(-max_abs..=max_abs))
        .collect();
    Square::from_parts_unchecked(order, cells)
}

fn draw_mutation<R: Rng>(order: usize, max_abs: Entry, rng: &mut R) -> (usize, usize, Entry) {
    let row = rng.gen_range(0..order);
    let col = rng.gen_range(0..order);
    (row, col, rng.gen_range(-max_abs..=max_abs))
}

/// `count` independent random single-cell replacements.
pub fn mutate<R: Rng>(square: &Square, count: usize, max_abs: Entry, rng: &mut R) -> Square {
    let mut out = square.clone();
    for _ in 0..count {
        let (r, c, v) = draw_mutation(square.order(), max_abs, rng);
        out = out.with_cell(r, c, v).expect("drawn cell is in range");
    }
    out
}

fn mutate_in_place<E: Evaluator, R: Rng>(state: &mut E, count: usize, max_abs: Entry, rng: &mut R) {
    for _ in 0..count {
        let (r, c, v) = draw_mutation(state.order(), max_abs, rng);
        state.set(r, c, v);
    }
}

/// One sweep over every cell (row-major) and every value in
/// `[-max_abs, max_abs]` (ascending), keeping a value only when it strictly
/// lowers the error.
///
/// With the other cells fixed, that rule leaves each cell at the first value
/// of minimal error, or unchanged when nothing beats its current value, so
/// each cell is walked through the range once and then settled.
pub fn optimize<E: Evaluator>(state: &mut E, max_abs: Entry) {
    let n = state.order();
    for r in 0..n {
        for c in 0..n {
            let mut error = state.total();
            if error == 0 {
                return;
            }
            let original = state.get(r, c);
            let (mut best_value, mut best_error) = (original, error);
            for m in -max_abs..=max_abs {
                if m == original {
                    continue;
                }
                error = (error as i64 + state.set(r, c, m)) as usize;
                if error < best_error {
                    best_value = m;
                    best_error = error;
                }
            }
            state.set(r, c, best_value);
        }
    }
}

pub fn solve(config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    solve_with::<SearchState>(config, &mut |_, _| {})
}

/// [`solve`] with a chosen evaluator and a progress callback.
pub fn solve_with<E: Evaluator>(
    config: &SearchConfig,
    progress: Progress<'_>,
) -> Result<SearchOutcome, SearchError> {
    config.validate()?;
    let start = Instant::now();
    let (n, m) = (config.order, config.max_abs);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut best = E::from_square(&initialize(n, m, &mut rng), m, config.variant)?;
    let mut candidate = best.clone();
    let mut best_error = usize::MAX;
    let mut lowest = best.total();
    let mut lowest_square = best.square();
    let mut stale = 0u64;
    let mut restarts = 0u64;
    let mut iteration = 0u64;

    let outcome = |solution, best, iterations, restarts, best_error| SearchOutcome {
        solution,
        best,
        iterations,
        restarts,
        elapsed: start.elapsed(),
        best_error,
    };

    while config.max_iterations == 0 || iteration < config.max_iterations {
        if config
            .time_limit
            .is_some_and(|limit| start.elapsed() >= limit)
        {
            break;
        }
        iteration += 1;
        candidate.clone_from(&best);
        mutate_in_place(&mut candidate, config.mutations_per_iteration, m, &mut rng);
        optimize(&mut candidate, m);
        let e = candidate.total();
        if e < best_error {
            std::mem::swap(&mut best, &mut candidate);
            best_error = e;
            if e < lowest {
                lowest = e;
                lowest_square = best.square();
            }
            stale = 0;
        } else {
            stale += 1;
        }
        progress(iteration, best_error);
        if best_error == 0 {
            let square = best.square();
            return Ok(outcome(
                Some(square.clone()),
                square,
                iteration,
                restarts,
                0,
            ));
        }
        if config.restart_interval > 0 && stale >= config.restart_interval {
            best = E::from_square(&initialize(n, m, &mut rng), m, config.variant)?;
            best_error = usize::MAX;
            stale = 0;
            restarts += 1;
        }
    }
    Ok(outcome(None, lowest_square, iteration, restarts, lowest))
}

/// One solution of a multi-run collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Found {
    pub seed: u64,
    pub square: Square,
    pub key: SnfKey,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collection {
    /// First solution of each equivalence class, in seed order.
    pub distinct: Vec<Found>,
    /// Runs that returned a solution.
    pub raw_solutions: usize,
    pub runs: u64,
}

/// Runs `solve` with seeds `config.seed, config.seed + 1, ...` until `count`
/// equivalence classes have been seen or `max_runs` runs are spent. Runs are
/// spread over `jobs` threads; the result does not depend on `jobs`.
pub fn collect_distinct(
    config: &SearchConfig,
    count: usize,
    max_runs: u64,
    jobs: usize,
) -> Result<Collection, SearchError> {
    config.validate()?;
    let jobs = jobs.max(1) as u64;
    let mut seen = BTreeSet::new();
    let mut collection = Collection {
        distinct: Vec::new(),
        raw_solutions: 0,
        runs: 0,
    };
    let mut next = 0u64;
    while collection.distinct.len() < count && next < max_runs {
        let batch: Vec<u64> = (next..(next + jobs).min(max_runs)).collect();
        next += batch.len() as u64;
        let results: Vec<Result<SearchOutcome, SearchError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = batch
                .iter()
                .map(|&i| {
                    let cfg = config.clone().seed(config.seed.wrapping_add(i));
                    scope.spawn(move || solve(&cfg))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("solver thread panicked"))
                .collect()
        });
        for (i, result) in batch.into_iter().zip(results) {
            if collection.distinct.len() >= count {
                break;
            }
            collection.runs += 1;
            let Some(square) = result?.solution else {
                continue;
            };
            collection.raw_solutions += 1;
            let key = snf_key(&square).expect("solutions are nontrivial");
            if seen.insert(key.clone()) {
                collection.distinct.push(Found {
                    seed: config.seed.wrapping_add(i),
                    square,
                    key,
                });
            }
        }
    }
    Ok(collection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::verify::{check_minimal_corner_theorem, is_nontrivial};

    #[test]
    fn variant_errors_on_figures() {
        assert_eq!(variant_errors(&fixtures::fig19(), Variant::Minimal), 0);
        assert_eq!(variant_errors(&fixtures::fig19(), Variant::Magic), 0);
        assert!(variant_errors(&fixtures::fig2(), Variant::Magic) >= 1);
        assert_eq!(variant_errors(&fixtures::fig20(), Variant::Concentric), 0);
        assert_eq!(variant_errors(&fixtures::fig2(), Variant::Plain), 0);
        let unit = Square::filled(1, 1).unwrap();
        assert_eq!(variant_errors(&unit, Variant::Perfect), 0);
        assert_eq!(variant_errors(&unit, Variant::Concentric), 1);
    }

    #[test]
    fn initialize_respects_bounds_and_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sq = initialize(4, 4, &mut rng);
        assert!(sq.cells().iter().all(|v| v.abs() <= 4));
        let sq = initialize(1, 1, &mut rng);
        assert!((-1..=1).contains(&sq.get(0, 0)));
        let a = initialize(5, 3, &mut ChaCha8Rng::seed_from_u64(9));
        let b = initialize(5, 3, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn mutation_touches_at_most_k_cells() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let base = initialize(5, 4, &mut rng);
        for _ in 0..50 {
            let m = mutate(&base, 3, 4, &mut rng);
            let changed = base
                .cells()
                .iter()
                .zip(m.cells())
                .filter(|(a, b)| a != b)
                .count();
            assert!(changed <= 3);
        }
        let a = mutate(&base, 3, 4, &mut ChaCha8Rng::seed_from_u64(11));
        let b = mutate(&base, 3, 4, &mut ChaCha8Rng::seed_from_u64(11));
        assert_eq!(a, b);
    }

    #[test]
    fn optimize_fixed_point_and_repair() {
        let mut state = SearchState::new(&fixtures::fig2(), 4, Variant::Plain).unwrap();
        optimize(&mut state, 4);
        assert_eq!(state.square(), fixtures::fig2());

        let corrupted = fixtures::fig2().with_cell(0, 0, 2).unwrap();
        let mut state = SearchState::new(&corrupted, 4, Variant::Plain).unwrap();
        assert!(state.total() > 0);
        optimize(&mut state, 4);
        assert_eq!(state.total(), 0);
    }

    #[test]
    fn optimize_never_increases_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let sq = initialize(5, 4, &mut rng);
            let mut state = SearchState::new(&sq, 4, Variant::Plain).unwrap();
            let before = state.total();
            optimize(&mut state, 4);
            assert!(state.total() <= before);
            assert!(state.is_consistent());
        }
    }

    #[test]
    fn order_three_solutions_are_the_two_known_squares() {
        for seed in 0..5 {
            let out = solve(&SearchConfig::new(3, 5).seed(seed)).unwrap();
            let sq = out.solution.expect("3x3 squares are easy to find");
            let snf = crate::canon::to_snf(&sq).unwrap();
            assert!(
                snf == fixtures::fig8a() || snf == fixtures::fig8b(),
                "{snf}"
            );
        }
    }

    #[test]
    fn order_two_has_no_solution() {
        let out = solve(&SearchConfig::new(2, 4).seed(1).max_iterations(2000)).unwrap();
        assert!(out.solution.is_none());
        assert!(out.best_error > 0);
        assert_eq!(out.iterations, 2000);
    }

    #[test]
    fn solve_is_reproducible() {
        let cfg = SearchConfig::new(4, 4).seed(42);
        assert_eq!(solve(&cfg).unwrap().solution, solve(&cfg).unwrap().solution);
    }

    #[test]
    fn minimal_search_on_order_five() {
        let cfg = SearchConfig::new(5, 4).seed(2).variant(Variant::Minimal);
        let sq = solve(&cfg).unwrap().solution.expect("found");
        assert!(is_nontrivial(&sq) && is_minimal(&sq));
        assert_eq!(check_minimal_corner_theorem(&sq), Ok(true));
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(0, 3).validate().is_err());
        assert!(SearchConfig::new(3, 0).validate().is_err());
        assert!(SearchConfig::new(2, 3)
            .variant(Variant::Concentric)
            .validate()
            .is_err());
        let mut cfg = SearchConfig::new(3, 3);
        cfg.mutations_per_iteration = 0;
        assert!(cfg.validate().is_err());
        assert_eq!("magic".parse::<Variant>(), Ok(Variant::Magic));
        assert!("weird".parse::<Variant>().is_err());
    }
}
