//! Numeric squares, their line sums, frequency tables and the L-shaped border.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A single cell value.
pub type Entry = i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SquareError {
    #[error("a square must have order at least 1")]
    EmptySquare,
    #[error("expected {expected} cells for order {order}, found {found}")]
    CellCount {
        order: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("{axis} {index} is out of range for a square of order {order}")]
    IndexOutOfRange {
        axis: &'static str,
        index: usize,
        order: usize,
    },
    #[error("line {line}: cannot parse {token:?} as an integer")]
    BadEntry { line: usize, token: String },
}

/// An `n x n` grid of integers, stored row-major.
///
/// Row and column indices are 0-based. Squares are plain values: every
/// transformation returns a new square.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    order: usize,
    cells: Vec<Entry>,
}

impl Square {
    pub fn new(order: usize, cells: Vec<Entry>) -> Result<Self, SquareError> {
        if order == 0 {
            return Err(SquareError::EmptySquare);
        }
        if cells.len() != order * order {
            return Err(SquareError::CellCount {
                order,
                expected: order * order,
                found: cells.len(),
            });
        }
        Ok(Self { order, cells })
    }

    pub fn from_rows<R: AsRef<[Entry]>>(rows: &[R]) -> Result<Self, SquareError> {
        let order = rows.len();
        if order == 0 {
            return Err(SquareError::EmptySquare);
        }
        let mut cells = Vec::with_capacity(order * order);
        for (row, values) in rows.iter().enumerate() {
            let values = values.as_ref();
            if values.len() != order {
                return Err(SquareError::RaggedRow {
                    row: row + 1,
                    expected: order,
                    found: values.len(),
                });
            }
            cells.extend_from_slice(values);
        }
        Ok(Self { order, cells })
    }

    /// A square with every cell set to `value`.
    pub fn filled(order: usize, value: Entry) -> Result<Self, SquareError> {
        Self::new(order, vec![value; order * order])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Row-major cell values.
    pub fn cells(&self) -> &[Entry] {
        &self.cells
    }

    /// # Panics
    /// Panics if `row` or `col` is not below the order.
    pub fn get(&self, row: usize, col: usize) -> Entry {
        assert!(
            row < self.order && col < self.order,
            "cell index out of range"
        );
        self.cells[row * self.order + col]
    }

    pub fn row(&self, row: usize) -> &[Entry] {
        &self.cells[row * self.order..(row + 1) * self.order]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = Entry> + '_ {
        self.cells.iter().skip(col).step_by(self.order).copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Entry]> {
        self.cells.chunks(self.order)
    }

    /// The lower right cell, shared by the last row and the last column.
    pub fn corner(&self) -> Entry {
        *self.cells.last().expect("squares are never empty")
    }

    /// Sum of the entries of row `row`.
    pub fn row_sum(&self, row: usize) -> Result<Entry, SquareError> {
        self.check_index("row", row)?;
        Ok(self.row(row).iter().sum())
    }

    /// Sum of the entries of column `col`.
    pub fn col_sum(&self, col: usize) -> Result<Entry, SquareError> {
        self.check_index("column", col)?;
        Ok(self.column(col).sum())
    }

    pub fn row_sums(&self) -> Vec<Entry> {
        self.rows().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<Entry> {
        (0..self.order).map(|c| self.column(c).sum()).collect()
    }

    pub fn total(&self) -> Entry {
        self.cells.iter().sum()
    }

    /// Occurrence count of every value present in the square.
    pub fn frequencies(&self) -> FrequencyTable {
        let mut counts = BTreeMap::new();
        for &v in &self.cells {
            *counts.entry(v).or_insert(0) += 1;
        }
        FrequencyTable { counts }
    }

    /// The `2n - 1` cells of the right-hand column (top to bottom) followed
    /// by the bottom row (left to right, without the corner).
    pub fn border(&self) -> Border {
        let n = self.order;
        let right = (0..n).map(|r| (r, n - 1));
        let bottom = (0..n - 1).map(|c| (n - 1, c));
        Border {
            cells: right
                .chain(bottom)
                .map(|(row, col)| BorderCell {
                    row,
                    col,
                    value: self.get(row, col),
                })
                .collect(),
        }
    }

    pub fn is_border_cell(&self, row: usize, col: usize) -> bool {
        row == self.order - 1 || col == self.order - 1
    }

    /// Returns a copy with one cell replaced.
    pub fn with_cell(&self, row: usize, col: usize, value: Entry) -> Result<Self, SquareError> {
        self.check_index("row", row)?;
        self.check_index("column", col)?;
        let mut out = self.clone();
        out.cells[row * self.order + col] = value;
        Ok(out)
    }

    /// Reflection about the main diagonal.
    pub fn transpose(&self) -> Self {
        let n = self.order;
        let cells = (0..n)
            .flat_map(|r| (0..n).map(move |c| (c, r)))
            .map(|(r, c)| self.cells[r * n + c])
            .collect();
        Self { order: n, cells }
    }

    /// The `size x size` block whose top-left cell is `(offset, offset)`.
    pub fn sub_square(&self, offset: usize, size: usize) -> Result<Self, SquareError> {
        if size == 0 {
            return Err(SquareError::EmptySquare);
        }
        self.check_index("row", offset + size - 1)?;
        let cells = (offset..offset + size)
            .flat_map(|r| (offset..offset + size).map(move |c| (r, c)))
            .map(|(r, c)| self.get(r, c))
            .collect();
        Ok(Self { order: size, cells })
    }

    pub(crate) fn from_parts_unchecked(order: usize, cells: Vec<Entry>) -> Self {
        debug_assert_eq!(cells.len(), order * order);
        Self { order, cells }
    }

    fn check_index(&self, axis: &'static str, index: usize) -> Result<(), SquareError> {
        if index < self.order {
            Ok(())
        } else {
            Err(SquareError::IndexOutOfRange {
                axis,
                index,
                order: self.order,
            })
        }
    }
}

/// Plain text form: one line per row, entries separated by single spaces.
impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Parses `n` lines of `n` whitespace-separated integers. Lines starting
/// with `#` and blank lines are skipped.
impl FromStr for Square {
    type Err = SquareError;

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
                    tok.parse::<Entry>().map_err(|_| SquareError::BadEntry {
                        line: lineno + 1,
                        token: tok.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }
}

/// Value -> number of occurrences. Absent values are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrequencyTable {
    counts: BTreeMap<Entry, usize>,
}

impl FrequencyTable {
    /// Frequency of `value`, zero when it does not occur.
    pub fn get(&self, value: Entry) -> usize {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn contains(&self, value: Entry) -> bool {
        self.counts.contains_key(&value)
    }

    /// Ascending by value.
    pub fn iter(&self) -> impl Iterator<Item = (Entry, usize)> + '_ {
        self.counts.iter().map(|(&v, &c)| (v, c))
    }

    pub fn values(&self) -> impl Iterator<Item = Entry> + '_ {
        self.counts.keys().copied()
    }

    /// Whether `sum` equals the frequency of `value`.
    pub fn describes(&self, value: Entry, sum: Entry) -> bool {
        usize::try_from(sum).is_ok_and(|s| s == self.get(value))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BorderCell {
    pub row: usize,
    pub col: usize,
    pub value: Entry,
}

/// Ordered border cells; see [`Square::border`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Border {
    cells: Vec<BorderCell>,
}

impl Border {
    pub fn cells(&self) -> &[BorderCell] {
        &self.cells
    }

    pub fn values(&self) -> Vec<Entry> {
        self.cells.iter().map(|c| c.value).collect()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}
