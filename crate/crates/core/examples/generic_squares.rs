//! Squares with symbolic entries: verification, forbidden values,
//! substitution and derivation from a numeric square.

use std::collections::BTreeMap;

use sdsq::fixtures;
use sdsq::generic::{
    cancellation_report, derive_generic, forbidden_values, generic_verify, instantiate, Rational,
};
use sdsq::verify::count_errors;

fn main() {
    let fig12 = fixtures::fig12();
    println!("fig12:\n{fig12}");
    println!(
        "forbidden: {:?}",
        forbidden_values(&fig12).unwrap().describe()
    );
    let at_one = BTreeMap::from([('x', Rational::from(1))]);
    println!("x = 1: {}", instantiate(&fig12, &at_one).unwrap_err());

    let fig13a = fixtures::fig13a();
    println!("\nfig13a:\n{fig13a}");
    println!("verifies: {:?}", generic_verify(&fig13a));
    for line in forbidden_values(&fig13a).unwrap().describe() {
        println!("  {line}");
    }
    let assignment = BTreeMap::from([('x', Rational::from(-13)), ('y', Rational::from(0))]);
    let square = instantiate(&fig13a, &assignment).unwrap();
    println!(
        "x = -13, y = 0:\n{square}errors: {}",
        count_errors(&square).total
    );

    let report = cancellation_report(&fig13a);
    println!(
        "every variable cell cancels in its row and column: {}",
        report.holds
    );

    let fig14 = fixtures::fig14_left();
    println!("\ngenerics behind\n{fig14}");
    for g in derive_generic(&fig14).unwrap() {
        println!("{g}");
    }
    println!(
        "order 3 generics: {}",
        derive_generic(&fixtures::fig8a()).unwrap().len()
    );
}
