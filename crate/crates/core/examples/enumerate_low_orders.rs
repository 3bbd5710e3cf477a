//! Exhaustive listing of the small orders.
//!
//! ```text
//! cargo run --release --example enumerate_low_orders
//! ```

use sdsq::enumerate::{check_three_by_three_bound, count_by_variant, enumerate_all, EnumConfig};

fn main() {
    let one = enumerate_all(&EnumConfig::new(1, 1)).unwrap();
    println!("order 1: {one:?}");

    let two = enumerate_all(&EnumConfig::new(2, 4)).unwrap();
    println!("order 2, |entries| <= 4: {} nontrivial squares", two.len());
    let trivial = enumerate_all(&EnumConfig::new(2, 4).include_trivial().unique()).unwrap();
    println!("  trivial ones, up to reflection:");
    for sq in &trivial {
        println!("{sq}");
    }

    let three = enumerate_all(&EnumConfig::new(3, 5)).unwrap();
    let classes = enumerate_all(&EnumConfig::new(3, 5).unique()).unwrap();
    println!(
        "order 3, |entries| <= 5: {} squares in {} classes",
        three.len(),
        classes.len()
    );
    for sq in &classes {
        println!("{sq}");
    }
    println!(
        "corner sums all 1 or 3: {}",
        check_three_by_three_bound(&three)
    );

    for (order, m) in [(1, 1), (2, 4), (3, 5)] {
        let counts = count_by_variant(&enumerate_all(&EnumConfig::new(order, m)).unwrap());
        println!("order {order}: {counts:?}");
    }
}
