//! Runs many seeded searches and keeps one square per equivalence class.
//!
//! ```text
//! cargo run --release --example collect_classes -- 100
//! ```

use sdsq::search::{collect_distinct, SearchConfig};

fn main() {
    let runs: u64 = std::env::args()
        .nth(1)
        .map(|a| a.parse().expect("run count"))
        .unwrap_or(100);
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let config = SearchConfig::new(4, 4);
    let found = collect_distinct(&config, usize::MAX, runs, jobs).unwrap();
    println!(
        "{} runs, {} solutions, {} distinct classes",
        found.runs,
        found.raw_solutions,
        found.distinct.len()
    );
    for f in found.distinct.iter().take(5) {
        println!("seed {}:\n{}", f.seed, f.key.square());
    }
}
