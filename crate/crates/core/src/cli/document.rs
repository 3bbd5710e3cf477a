//! Square files and the text and JSON reports.
//!
//! A square file holds one grid, one row per line. Comment lines start with
//! `#`; the comments `# name: ...`, `# source: ...` and `# trivial: true`
//! are kept as metadata and everything else is ignored. A file is generic
//! as soon as one cell mentions a variable.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::to_snf;
use crate::generic::{forbidden_values, AffineExpr, GenericError, GenericSquare};
use crate::square::{Entry, Square, SquareError};
use crate::verify::{classify, count_errors, ErrorReport, VariantFlags};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DocumentError {
    #[error(transparent)]
    Numeric(#[from] SquareError),
    #[error(transparent)]
    Generic(#[from] GenericError),
    #[error("line {line}: bad metadata value {value:?} for {key}")]
    Metadata {
        line: usize,
        key: String,
        value: String,
    },
    #[error("invalid JSON report: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Numeric,
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grid {
    Numeric(Square),
    Generic(GenericSquare),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareDocument {
    pub name: Option<String>,
    pub source: Option<String>,
    /// Marks squares that are self-descriptive but knowingly trivial.
    pub trivial: bool,
    pub grid: Grid,
}

impl SquareDocument {
    pub fn numeric(square: Square) -> Self {
        Self::with_grid(Grid::Numeric(square))
    }

    /// Generic squares without variables become numeric documents.
    pub fn generic(square: GenericSquare) -> Self {
        match square.as_numeric() {
            Some(sq) => Self::numeric(sq),
            None => Self::with_grid(Grid::Generic(square)),
        }
    }

    fn with_grid(grid: Grid) -> Self {
        Self {
            name: None,
            source: None,
            trivial: false,
            grid,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn kind(&self) -> Kind {
        match self.grid {
            Grid::Numeric(_) => Kind::Numeric,
            Grid::Generic(_) => Kind::Generic,
        }
    }

    pub fn as_numeric(&self) -> Option<&Square> {
        match &self.grid {
            Grid::Numeric(sq) => Some(sq),
            Grid::Generic(_) => None,
        }
    }

    /// The grid as expressions; numeric cells become constants.
    pub fn to_generic(&self) -> GenericSquare {
        match &self.grid {
            Grid::Numeric(sq) => GenericSquare::from_square(sq),
            Grid::Generic(g) => g.clone(),
        }
    }

    pub fn order(&self) -> usize {
        match &self.grid {
            Grid::Numeric(sq) => sq.order(),
            Grid::Generic(g) => g.order(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let mut name = None;
        let mut source = None;
        let mut trivial = false;
        let mut has_variable = false;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(comment) = line.strip_prefix('#') {
                let Some((key, value)) = comment.split_once(':') else {
                    continue;
                };
                let value = value.trim();
                match key.trim() {
                    "name" => name = Some(value.to_string()),
                    "source" => source = Some(value.to_string()),
                    "trivial" => {
                        trivial = value.parse().map_err(|_| DocumentError::Metadata {
                            line: i + 1,
                            key: "trivial".into(),
                            value: value.into(),
                        })?
                    }
                    _ => {}
                }
            } else if line.contains(|ch: char| ch.is_ascii_lowercase()) {
                has_variable = true;
            }
        }
        let mut doc = if has_variable {
            Self::generic(text.parse()?)
        } else {
            Self::numeric(text.parse()?)
        };
        doc.name = name;
        doc.source = source;
        doc.trivial = trivial;
        Ok(doc)
    }
}

/// The canonical file form; parsing it gives the document back.
impl fmt::Display for SquareDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "# name: {name}")?;
        }
        if let Some(source) = &self.source {
            writeln!(f, "# source: {source}")?;
        }
        if self.trivial {
            writeln!(f, "# trivial: true")?;
        }
        match &self.grid {
            Grid::Numeric(sq) => write!(f, "{sq}"),
            Grid::Generic(g) => write!(f, "{g}"),
        }
    }
}

/// A JSON cell: integers as numbers, expressions as canonical strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonCell {
    Int(Entry),
    Expr(String),
}

impl From<&AffineExpr> for JsonCell {
    fn from(e: &AffineExpr) -> Self {
        match e.as_constant() {
            Some(v) => JsonCell::Int(v),
            None => JsonCell::Expr(e.to_string()),
        }
    }
}

impl fmt::Display for JsonCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JsonCell::Int(v) => write!(f, "{v}"),
            JsonCell::Expr(e) => f.write_str(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonReport {
    pub square: Vec<Vec<JsonCell>>,
    pub row_sums: Vec<JsonCell>,
    pub col_sums: Vec<JsonCell>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_report: Option<ErrorReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant_flags: Option<VariantFlags>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snf: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forbidden: Option<Vec<String>>,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub trivial: bool,
}

fn rows_of(square: &Square) -> Vec<Vec<Entry>> {
    square.rows().map(<[Entry]>::to_vec).collect()
}

impl JsonReport {
    pub fn new(doc: &SquareDocument) -> Self {
        let g = doc.to_generic();
        let n = g.order();
        let mut report = Self {
            square: g
                .rows()
                .map(|r| r.iter().map(JsonCell::from).collect())
                .collect(),
            row_sums: (0..n).map(|r| JsonCell::from(&g.row_sum(r))).collect(),
            col_sums: (0..n).map(|c| JsonCell::from(&g.col_sum(c))).collect(),
            error_report: None,
            variant_flags: None,
            snf: None,
            forbidden: None,
            kind: doc.kind(),
            name: doc.name.clone(),
            source: doc.source.clone(),
            trivial: doc.trivial,
        };
        match &doc.grid {
            Grid::Numeric(sq) => {
                report.error_report = Some(count_errors(sq));
                report.variant_flags = Some(classify(sq));
                report.snf = to_snf(sq).ok().map(|s| rows_of(&s));
            }
            Grid::Generic(g) => {
                report.forbidden = forbidden_values(g).ok().map(|f| f.describe());
            }
        }
        report
    }

    /// Rebuilds the document from the grid and metadata fields.
    pub fn to_document(&self) -> Result<SquareDocument, DocumentError> {
        let text: String = self
            .square
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(JsonCell::to_string).collect();
                cells.join(" ") + "\n"
            })
            .collect();
        let mut doc = SquareDocument::parse(&text)?;
        doc.name = self.name.clone();
        doc.source = self.source.clone();
        doc.trivial = self.trivial;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        serde_json::from_str(text).map_err(|e| DocumentError::Json(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Grid with each row followed by its sum and a final line of column sums.
pub fn emit_report(doc: &SquareDocument, format: Format) -> String {
    let report = JsonReport::new(doc);
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => text_report(&report),
    }
}

fn text_report(report: &JsonReport) -> String {
    let cells = |row: &[JsonCell]| row.iter().map(JsonCell::to_string).collect::<Vec<_>>();
    let grid: Vec<Vec<String>> = report.square.iter().map(|r| cells(r)).collect();
    let rows = cells(&report.row_sums);
    let cols = cells(&report.col_sums);
    let width = grid
        .iter()
        .flatten()
        .chain(&rows)
        .chain(&cols)
        .map(String::len)
        .max()
        .unwrap_or(1);
    let line = |items: &[String]| {
        items
            .iter()
            .map(|s| format!("{s:>width$}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    if let Some(name) = &report.name {
        out += &format!("# name: {name}\n");
    }
    for (row, sum) in grid.iter().zip(&rows) {
        out += &format!("{} | {sum:>width$}\n", line(row));
    }
    let span = grid.len() * (width + 1) - 1;
    out += &format!("{}-+\n", "-".repeat(span));
    out += &line(&cols);
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn figure_layout() {
        let text = emit_report(&SquareDocument::numeric(fixtures::fig8a()), Format::Text);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], " 2 -2  2 |  2");
        assert_eq!(lines[2], " 0  5 -2 |  3");
        let col_sums: Vec<&str> = lines[4].split_whitespace().collect();
        assert_eq!(col_sums, ["2", "1", "3"]);
    }

    #[test]
    fn generic_cells_print_canonically() {
        let doc = SquareDocument::parse(fixtures::FIG13A).unwrap();
        assert_eq!(doc.kind(), Kind::Generic);
        let text = emit_report(&doc, Format::Text);
        assert!(text.contains("1-x"));
        assert!(text.contains("y-6"));
    }

    #[test]
    fn unit_square_json() {
        let doc = SquareDocument::numeric(Square::filled(1, 1).unwrap());
        let json: serde_json::Value =
            serde_json::from_str(&emit_report(&doc, Format::Json)).unwrap();
        assert_eq!(json["square"], serde_json::json!([[1]]));
        assert_eq!(json["row_sums"], serde_json::json!([1]));
        assert_eq!(json["col_sums"], serde_json::json!([1]));
        assert_eq!(json["error_report"]["total"], 0);
    }

    #[test]
    fn json_round_trip() {
        for (name, text) in fixtures::ALL {
            let doc = SquareDocument::parse(text).unwrap();
            let json = JsonReport::new(&doc).to_json();
            let back = JsonReport::from_json(&json).unwrap().to_document().unwrap();
            assert_eq!(back, doc, "{name}");
        }
    }

    #[test]
    fn canonical_text_round_trip() {
        for (name, text) in fixtures::ALL {
            let doc = SquareDocument::parse(text).unwrap();
            let emitted = doc.to_string();
            let again = SquareDocument::parse(&emitted).unwrap();
            assert_eq!(again, doc, "{name}");
            assert_eq!(again.to_string(), emitted, "{name}");
        }
    }

    #[test]
    fn metadata() {
        let doc = SquareDocument::parse(fixtures::FIG1).unwrap();
        assert_eq!(doc.name.as_deref(), Some("fig1"));
        assert!(doc.trivial);
        assert!(SquareDocument::parse("# trivial: maybe\n1\n").is_err());
        assert!(SquareDocument::parse("1 2\n3\n").is_err());
    }
}
