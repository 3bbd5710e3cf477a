//! Checks every bundled reference square and prints its error counts.
//!
//! ```text
//! cargo run --example verify_figures
//! ```

use sdsq::cli::{emit_report, Format, Grid, SquareDocument};
use sdsq::fixtures;
use sdsq::generic::generic_verify;
use sdsq::verify::count_errors;

fn main() {
    for (name, text) in fixtures::ALL {
        let doc = SquareDocument::parse(text).expect("fixture parses");
        println!("== {name}");
        print!("{}", emit_report(&doc, Format::Text));
        match &doc.grid {
            Grid::Numeric(sq) => {
                let r = count_errors(sq);
                println!(
                    "border {} coverage {} rows {} columns {} -> total {}{}",
                    r.border_duplication_errors,
                    r.interior_coverage_errors,
                    r.row_errors,
                    r.col_errors,
                    r.total,
                    if doc.trivial { " (marked trivial)" } else { "" }
                );
            }
            Grid::Generic(g) => match generic_verify(g) {
                Ok(()) => println!("valid generic"),
                Err(defect) => println!("generic defect: {defect}"),
            },
        }
        println!();
    }
}
