//! Generic squares: grids of affine expressions that stay self-descriptive
//! under every substitution of their variables, apart from a set of
//! forbidden values where two border cells would coincide.

mod expr;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::square::{Entry, Square};
use crate::verify::is_nontrivial;

pub use expr::{parse_expr, AffineExpr, ExprError, Rational, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenericError {
    #[error("line {line}, token {token:?}: {source}")]
    Parse {
        line: usize,
        token: String,
        source: ExprError,
    },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("a square must have order at least 1")]
    Empty,
    #[error("not symbolically self-descriptive: {0}")]
    NotSelfDescriptive(GenericDefect),
    #[error("no value given for variable {0}")]
    MissingVariable(Variable),
    #[error("variable {0} does not occur in the square")]
    UnknownVariable(Variable),
    #[error(
        "forbidden assignment: border cells {} ({}) and {} ({}) both become {value}",
        first.0, first.1, second.0, second.1
    )]
    Forbidden {
        first: (Cell, AffineExpr),
        second: (Cell, AffineExpr),
        value: Rational,
    },
    #[error("{cell} ({expr}) evaluates to the non-integer {value}")]
    NonIntegerCell {
        cell: Cell,
        expr: AffineExpr,
        value: Rational,
    },
    #[error("derivation needs a nontrivial s-d square")]
    NotNontrivial,
}

/// A cell position; displayed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(row {}, column {})", self.row + 1, self.col + 1)
    }
}

/// A row or a column; displayed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Line {
    Row(usize),
    Column(usize),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(r) => write!(f, "row {}", r + 1),
            Line::Column(c) => write!(f, "column {}", c + 1),
        }
    }
}

/// First failing condition of [`generic_verify`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenericDefect {
    #[error("{line} sums to {sum}, which still depends on a variable")]
    NonConstantSum { line: Line, sum: AffineExpr },
    #[error("{line} sums to {sum} but its terminal {terminal} occurs {frequency} times")]
    SumMismatch {
        line: Line,
        sum: i64,
        terminal: AffineExpr,
        frequency: usize,
    },
    #[error("border cells {first} and {second} both hold {expr}")]
    DuplicateBorder {
        first: Cell,
        second: Cell,
        expr: AffineExpr,
    },
    #[error("{cell} holds {expr}, which does not appear on the border")]
    Uncovered { cell: Cell, expr: AffineExpr },
}

impl GenericDefect {
    /// Defects of the first two kinds break self-description itself; the
    /// other two only make the square trivial.
    pub fn is_triviality(&self) -> bool {
        matches!(self, Self::DuplicateBorder { .. } | Self::Uncovered { .. })
    }
}

/// An `n x n` grid of affine expressions, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenericSquare {
    order: usize,
    cells: Vec<AffineExpr>,
}

impl GenericSquare {
    pub fn from_rows(rows: Vec<Vec<AffineExpr>>) -> Result<Self, GenericError> {
        let order = rows.len();
        if order == 0 {
            return Err(GenericError::Empty);
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != order) {
            return Err(GenericError::RaggedRow {
                row: row + 1,
                expected: order,
                found: r.len(),
            });
        }
        Ok(Self {
            order,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_square(square: &Square) -> Self {
        Self {
            order: square.order(),
            cells: square
                .cells()
                .iter()
                .map(|&v| AffineExpr::constant(v))
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> &AffineExpr {
        &self.cells[row * self.order + col]
    }

    pub fn cells(&self) -> &[AffineExpr] {
        &self.cells
    }

    pub fn rows(&self) -> impl Iterator<Item = &[AffineExpr]> {
        self.cells.chunks(self.order)
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.cells.iter().flat_map(|e| e.variables()).collect()
    }

    /// The square itself when no cell mentions a variable.
    pub fn as_numeric(&self) -> Option<Square> {
        let cells = self
            .cells
            .iter()
            .map(AffineExpr::as_constant)
            .collect::<Option<Vec<_>>>()?;
        Some(Square::from_parts_unchecked(self.order, cells))
    }

    pub fn row_sum(&self, row: usize) -> AffineExpr {
        self.rows()
            .nth(row)
            .expect("row in range")
            .iter()
            .cloned()
            .sum()
    }

    pub fn col_sum(&self, col: usize) -> AffineExpr {
        (0..self.order).map(|r| self.get(r, col).clone()).sum()
    }

    /// Number of cells structurally equal to `expr`.
    pub fn frequency(&self, expr: &AffineExpr) -> usize {
        self.cells.iter().filter(|e| *e == expr).count()
    }

    /// Border cells in the same order as [`Square::border`].
    pub fn border(&self) -> Vec<(Cell, &AffineExpr)> {
        let n = self.order;
        (0..n)
            .map(|row| Cell { row, col: n - 1 })
            .chain((0..n - 1).map(|col| Cell { row: n - 1, col }))
            .map(|cell| (cell, self.get(cell.row, cell.col)))
            .collect()
    }

    fn lines(&self) -> impl Iterator<Item = (Line, AffineExpr, &AffineExpr)> + '_ {
        let n = self.order;
        let rows = (0..n).map(move |r| (Line::Row(r), self.row_sum(r), self.get(r, n - 1)));
        let cols = (0..n).map(move |c| (Line::Column(c), self.col_sum(c), self.get(n - 1, c)));
        rows.chain(cols)
    }
}

impl fmt::Display for GenericSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Same layout as the numeric text format, with expression cells.
impl FromStr for GenericSquare {
    type Err = GenericError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rows = Vec::new();
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    parse_expr(tok).map_err(|source| GenericError::Parse {
                        line: lineno + 1,
                        token: tok.to_string(),
                        source,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }
}

/// Line sums are variable-free and describe their terminals.
fn check_sums(g: &GenericSquare) -> Result<(), GenericDefect> {
    for (line, sum, terminal) in g.lines() {
        let Some(sum) = sum.as_constant() else {
            return Err(GenericDefect::NonConstantSum { line, sum });
        };
        let frequency = g.frequency(terminal);
        if usize::try_from(sum).ok() != Some(frequency) {
            return Err(GenericDefect::SumMismatch {
                line,
                sum,
                terminal: terminal.clone(),
                frequency,
            });
        }
    }
    Ok(())
}

/// Checks, in order: every line sum is a constant; that constant counts the
/// cells structurally equal to the line's terminal; border expressions are
/// pairwise distinct; every cell expression appears on the border.
pub fn generic_verify(g: &GenericSquare) -> Result<(), GenericDefect> {
    check_sums(g)?;
    let mut seen: BTreeMap<&AffineExpr, Cell> = BTreeMap::new();
    for (cell, expr) in g.border() {
        if let Some(&first) = seen.get(expr) {
            return Err(GenericDefect::DuplicateBorder {
                first,
                second: cell,
                expr: expr.clone(),
            });
        }
        seen.insert(expr, cell);
    }
    let n = g.order();
    for row in 0..n - 1 {
        for col in 0..n - 1 {
            let expr = g.get(row, col);
            if !seen.contains_key(expr) {
                return Err(GenericDefect::Uncovered {
                    cell: Cell { row, col },
                    expr: expr.clone(),
                });
            }
        }
    }
    Ok(())
}

/// A forbidden linear relation: the assignment must not make `expr` zero.
/// Stored with coprime coefficients and a positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearConstraint {
    expr: AffineExpr,
}

impl LinearConstraint {
    fn new(expr: AffineExpr) -> Option<Self> {
        let (_, &lead) = expr.terms().iter().next()?;
        let g = expr
            .terms()
            .values()
            .fold(expr.constant_part(), |acc, &c| acc.gcd(&c));
        let g = if lead < 0 { -g } else { g };
        let terms = expr
            .terms()
            .iter()
            .map(|(&v, &c)| AffineExpr::term(v, c / g));
        let expr = terms.fold(AffineExpr::constant(expr.constant_part() / g), |acc, t| {
            &acc + &t
        });
        Some(Self { expr })
    }

    /// The expression that must stay nonzero.
    pub fn expr(&self) -> &AffineExpr {
        &self.expr
    }

    /// For a constraint in one variable, the single excluded value.
    pub fn single_value(&self) -> Option<(Variable, Rational)> {
        let mut terms = self.expr.terms().iter();
        match (terms.next(), terms.next()) {
            (Some((&v, &a)), None) => Some((v, Rational::new(-self.expr.constant_part(), a))),
            _ => None,
        }
    }

    pub fn is_violated_by(&self, assignment: &BTreeMap<Variable, Rational>) -> bool {
        self.expr.evaluate(assignment) == Some(Rational::from(0))
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} != {}",
            self.expr.variable_part(),
            -self.expr.constant_part()
        )
    }
}

/// Substitutions that would merge two border cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForbiddenSet {
    /// One variable: an exact set of excluded values.
    Values {
        variable: Variable,
        values: BTreeSet<Rational>,
    },
    /// Several (or no) variables: excluded linear relations.
    Constraints(BTreeSet<LinearConstraint>),
}

impl ForbiddenSet {
    pub fn len(&self) -> usize {
        match self {
            Self::Values { values, .. } => values.len(),
            Self::Constraints(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Human-readable entries, e.g. `x != 1/2` or `x+y != 7`.
    pub fn describe(&self) -> Vec<String> {
        match self {
            Self::Values { variable, values } => values
                .iter()
                .map(|v| format!("{variable} != {v}"))
                .collect(),
            Self::Constraints(c) => c.iter().map(|c| c.to_string()).collect(),
        }
    }
}

/// Pairs of structurally distinct border expressions that can still become
/// equal, and the linear constraint that makes them equal.
fn colliding_border_pairs(g: &GenericSquare) -> Vec<(LinearConstraint, Cell, Cell)> {
    let border = g.border();
    let mut out = Vec::new();
    for (i, (ci, ei)) in border.iter().enumerate() {
        for (cj, ej) in &border[i + 1..] {
            if ei == ej {
                continue;
            }
            if let Some(c) = LinearConstraint::new(*ei - *ej) {
                out.push((c, *ci, *cj));
            }
        }
    }
    out
}

/// Requires symbolic self-description (line sums); trivial generics, whose
/// border repeats an expression, are accepted and the repeated pairs skipped.
pub fn forbidden_values(g: &GenericSquare) -> Result<ForbiddenSet, GenericError> {
    check_sums(g).map_err(GenericError::NotSelfDescriptive)?;
    let constraints: BTreeSet<LinearConstraint> = colliding_border_pairs(g)
        .into_iter()
        .map(|(c, ..)| c)
        .collect();
    let vars = g.variables();
    if vars.len() == 1 {
        let variable = *vars.first().expect("one variable");
        let values = constraints
            .iter()
            .filter_map(|c| c.single_value().map(|(_, v)| v))
            .collect();
        Ok(ForbiddenSet::Values { variable, values })
    } else {
        Ok(ForbiddenSet::Constraints(constraints))
    }
}

/// Substitutes `assignment` into every cell.
pub fn instantiate(
    g: &GenericSquare,
    assignment: &BTreeMap<Variable, Rational>,
) -> Result<Square, GenericError> {
    let vars = g.variables();
    if let Some(&v) = vars.iter().find(|v| !assignment.contains_key(v)) {
        return Err(GenericError::MissingVariable(v));
    }
    if let Some(&v) = assignment.keys().find(|v| !vars.contains(v)) {
        return Err(GenericError::UnknownVariable(v));
    }
    for (constraint, a, b) in colliding_border_pairs(g) {
        if constraint.is_violated_by(assignment) {
            let ea = g.get(a.row, a.col).clone();
            let value = ea.evaluate(assignment).expect("all variables assigned");
            return Err(GenericError::Forbidden {
                first: (a, ea),
                second: (b, g.get(b.row, b.col).clone()),
                value,
            });
        }
    }
    let n = g.order();
    let cells = g
        .cells()
        .iter()
        .enumerate()
        .map(|(i, expr)| {
            let value = expr.evaluate(assignment).expect("all variables assigned");
            if value.is_integer() {
                Ok(value.to_integer())
            } else {
                Err(GenericError::NonIntegerCell {
                    cell: Cell {
                        row: i / n,
                        col: i % n,
                    },
                    expr: expr.clone(),
                    value,
                })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Square::from_parts_unchecked(n, cells))
}

/// Searches for single-variable generics that specialise to `square`.
///
/// Picks a base value `b` among the square's `2n - 1` distinct values and a
/// coefficient `d(w)` in {-1, 0, +1} for every value `w`, with `d(b) = +1`.
/// Each cell holding `w` becomes `d(w)*x + (w - d(w)*b)`, so `x = b` gives
/// back the input. Candidates that pass [`generic_verify`] are returned,
/// deduplicated structurally.
pub fn derive_generic(square: &Square) -> Result<Vec<GenericSquare>, GenericError> {
    if !is_nontrivial(square) {
        return Err(GenericError::NotNontrivial);
    }
    let n = square.order();
    let values: Vec<Entry> = square.frequencies().values().collect();
    let index: Vec<usize> = square
        .cells()
        .iter()
        .map(|v| values.binary_search(v).expect("value is present"))
        .collect();
    let lines: Vec<Vec<usize>> = (0..n)
        .map(|r| (0..n).map(|c| index[r * n + c]).collect())
        .chain((0..n).map(|c| (0..n).map(|r| index[r * n + c]).collect()))
        .collect();

    let k = values.len();
    let mut found = Vec::new();
    let mut seen = HashSet::new();
    let mut coef = vec![0i64; k];
    for base in 0..k {
        let free: Vec<usize> = (0..k).filter(|&i| i != base).collect();
        coef.fill(-1);
        coef[base] = 1;
        loop {
            let cancels = lines
                .iter()
                .all(|line| line.iter().map(|&i| coef[i]).sum::<i64>() == 0);
            if cancels {
                let b = values[base];
                let cells = index
                    .iter()
                    .map(|&i| {
                        let d = coef[i];
                        &AffineExpr::term('x', d) + &AffineExpr::constant(values[i] - d * b)
                    })
                    .collect();
                let g = GenericSquare { order: n, cells };
                if generic_verify(&g).is_ok() && seen.insert(g.clone()) {
                    found.push(g);
                }
            }
            // odometer over {-1, 0, 1} for the free values
            let mut carried = true;
            for &i in &free {
                if coef[i] == 1 {
                    coef[i] = -1;
                } else {
                    coef[i] += 1;
                    carried = false;
                    break;
                }
            }
            if carried {
                break;
            }
        }
    }
    Ok(found)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellCancellation {
    pub cell: Cell,
    pub expr: String,
    pub negation_in_row: bool,
    pub negation_in_col: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CancellationReport {
    pub cells: Vec<CellCancellation>,
    /// Every variable cell finds its negated variable part elsewhere in both
    /// its row and its column. Vacuously true with no variable cells.
    pub holds: bool,
}

/// For every cell with a variable part `v`, looks for `-v` elsewhere in the
/// same row and the same column.
pub fn cancellation_report(g: &GenericSquare) -> CancellationReport {
    let n = g.order();
    let mut cells = Vec::new();
    for row in 0..n {
        for col in 0..n {
            let expr = g.get(row, col);
            if expr.is_constant() {
                continue;
            }
            let negated = -&expr.variable_part();
            let matches = |r: usize, c: usize| g.get(r, c).variable_part() == negated;
            cells.push(CellCancellation {
                cell: Cell { row, col },
                expr: expr.to_string(),
                negation_in_row: (0..n).any(|c| c != col && matches(row, c)),
                negation_in_col: (0..n).any(|r| r != row && matches(r, col)),
            });
        }
    }
    let holds = cells.iter().all(|c| c.negation_in_row && c.negation_in_col);
    CancellationReport { cells, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::verify::count_errors;

    fn assign(pairs: &[(Variable, i64)]) -> BTreeMap<Variable, Rational> {
        pairs.iter().map(|&(v, x)| (v, Rational::from(x))).collect()
    }

    #[test]
    fn fixtures_verify() {
        assert_eq!(generic_verify(&fixtures::fig13a()), Ok(()));
        assert_eq!(generic_verify(&fixtures::fig13b()), Ok(()));
        assert_eq!(generic_verify(&fixtures::fig14_right()), Ok(()));
        let defect = generic_verify(&fixtures::fig12()).unwrap_err();
        assert!(defect.is_triviality(), "{defect}");
    }

    #[test]
    fn replacing_one_x_breaks_the_sums() {
        let g = fixtures::fig14_right();
        let mut rows: Vec<Vec<AffineExpr>> = g.rows().map(|r| r.to_vec()).collect();
        rows[0][1] = AffineExpr::constant(5);
        let broken = GenericSquare::from_rows(rows).unwrap();
        assert!(matches!(
            generic_verify(&broken),
            Err(GenericDefect::NonConstantSum {
                line: Line::Row(0),
                ..
            })
        ));
    }

    #[test]
    fn forbidden_value_of_the_two_by_two() {
        let set = forbidden_values(&fixtures::fig12()).unwrap();
        assert_eq!(
            set,
            ForbiddenSet::Values {
                variable: 'x',
                values: BTreeSet::from([Rational::from(1)])
            }
        );
    }

    #[test]
    fn forbidden_values_of_fig14r() {
        let ForbiddenSet::Values { variable, values } =
            forbidden_values(&fixtures::fig14_right()).unwrap()
        else {
            panic!("single variable expected");
        };
        assert_eq!(variable, 'x');
        // border: -x, x, 0, 4, -1, 3, -2
        let expected: BTreeSet<Rational> = [0, 4, -4, 1, -1, 3, -3, 2, -2]
            .into_iter()
            .map(Rational::from)
            .collect();
        assert_eq!(values, expected);
        assert!(values.len() <= 7 * 6 / 2);
    }

    #[test]
    fn forbidden_constraints_of_fig13a() {
        let set = forbidden_values(&fixtures::fig13a()).unwrap();
        let described = set.describe();
        assert!(described.contains(&"2*x != 1".to_string()), "{described:?}");
        assert!(described.contains(&"x+y != 7".to_string()), "{described:?}");
        assert!(set.len() <= 36);
        let ForbiddenSet::Constraints(cs) = set else {
            panic!("two variables expected");
        };
        assert!(cs
            .iter()
            .any(|c| c.single_value() == Some(('x', Rational::new(1, 2)))));
    }

    #[test]
    fn instantiate_fig12() {
        let sq = instantiate(&fixtures::fig12(), &assign(&[('x', 3)])).unwrap();
        assert_eq!(sq, Square::from_rows(&[[3, -1], [-1, 3]]).unwrap());
        assert_eq!(sq.row_sums(), vec![2, 2]);
        assert_eq!(sq.col_sums(), vec![2, 2]);
        assert!(matches!(
            instantiate(&fixtures::fig12(), &assign(&[('x', 1)])),
            Err(GenericError::Forbidden { .. })
        ));
    }

    #[test]
    fn instantiate_fig13a() {
        let sq = instantiate(&fixtures::fig13a(), &assign(&[('x', -13), ('y', 0)])).unwrap();
        assert_eq!(count_errors(&sq).total, 0);
        assert_eq!(
            instantiate(&fixtures::fig13a(), &assign(&[('x', 1)])),
            Err(GenericError::MissingVariable('y'))
        );
        assert_eq!(
            instantiate(&fixtures::fig12(), &assign(&[('x', 1), ('z', 2)])),
            Err(GenericError::UnknownVariable('z'))
        );
        let half = BTreeMap::from([('x', Rational::new(1, 3))]);
        assert!(matches!(
            instantiate(&fixtures::fig14_right(), &half),
            Err(GenericError::NonIntegerCell { .. })
        ));
    }

    #[test]
    fn derivation_recovers_fig14r() {
        let derived = derive_generic(&fixtures::fig14_left()).unwrap();
        assert!(derived.contains(&fixtures::fig14_right()));
        for g in &derived {
            let b = g.cells()[..]
                .iter()
                .zip(fixtures::fig14_left().cells())
                .find(|(e, _)| *e == &AffineExpr::var('x'))
                .map(|(_, &v)| v)
                .expect("base value maps to bare x");
            let back = instantiate(g, &assign(&[('x', b)])).unwrap();
            assert_eq!(back, fixtures::fig14_left());
        }
    }

    #[test]
    fn no_generics_of_order_three() {
        assert!(derive_generic(&fixtures::fig8a()).unwrap().is_empty());
        assert!(derive_generic(&fixtures::fig8b()).unwrap().is_empty());
        assert_eq!(
            derive_generic(&fixtures::fig1()),
            Err(GenericError::NotNontrivial)
        );
    }

    #[test]
    fn half_replacement_fails() {
        // 5 -> x alone, leaving -5 constant
        let sq = fixtures::fig14_left();
        let cells = sq
            .cells()
            .iter()
            .map(|&v| {
                if v == 5 {
                    AffineExpr::var('x')
                } else {
                    AffineExpr::constant(v)
                }
            })
            .collect();
        let g = GenericSquare { order: 4, cells };
        assert!(matches!(
            generic_verify(&g),
            Err(GenericDefect::NonConstantSum { .. })
        ));
    }

    #[test]
    fn cancellation_patterns() {
        let report = cancellation_report(&fixtures::fig14_right());
        assert!(report.holds);
        assert_eq!(report.cells.len(), 4);
        assert!(cancellation_report(&fixtures::fig13a()).holds);
        let constant = GenericSquare::from_square(&fixtures::fig2());
        let report = cancellation_report(&constant);
        assert!(report.holds && report.cells.is_empty());
    }

    #[test]
    fn parse_errors_name_the_token() {
        let err = "x 2-x\n2-x 1.5\n".parse::<GenericSquare>().unwrap_err();
        assert!(matches!(err, GenericError::Parse { line: 2, .. }), "{err}");
        assert_eq!(
            fixtures::fig13a().to_string().parse::<GenericSquare>(),
            Ok(fixtures::fig13a())
        );
    }
}
