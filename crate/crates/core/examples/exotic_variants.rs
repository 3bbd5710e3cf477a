//! Classification of the magic, minimal and concentric examples, and a
//! search for a magic square of order 4.

use sdsq::fixtures;
use sdsq::search::{solve, SearchConfig, Variant};
use sdsq::verify::{check_minimal_corner_theorem, classify};
use sdsq::Square;

fn describe(name: &str, sq: &Square) {
    let f = classify(sq);
    println!(
        "{name}: nontrivial {} magic {} minimal {} perfect {} concentric {}",
        f.nontrivial, f.magic, f.minimal, f.perfect, f.concentric
    );
}

fn main() {
    describe("fig4", &fixtures::fig4());
    describe("fig19", &fixtures::fig19());
    describe("fig20", &fixtures::fig20());
    println!(
        "fig19 corner theorem holds: {:?}",
        check_minimal_corner_theorem(&fixtures::fig19())
    );

    for (variant, order, max_abs) in [(Variant::Magic, 4, 4), (Variant::Minimal, 4, 3)] {
        let outcome = solve(&SearchConfig::new(order, max_abs).variant(variant).seed(1)).unwrap();
        match outcome.solution {
            Some(sq) => {
                println!(
                    "\n{variant} square after {} iterations:\n{sq}",
                    outcome.iterations
                );
                describe(variant.name(), &sq);
            }
            None => println!("\nno {variant} square found"),
        }
    }
}
