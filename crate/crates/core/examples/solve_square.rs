//! Hill-climbs to a nontrivial square.
//!
//! ```text
//! cargo run --release --example solve_square -- 5 4 7
//! ```
//! Arguments: order, largest absolute entry, seed.

use sdsq::search::{solve_with, SearchConfig};
use sdsq::verify::count_errors;
use sdsq::SearchState;

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let order = args.first().copied().unwrap_or(4) as usize;
    let max_abs = args.get(1).copied().unwrap_or(4) as i64;
    let seed = args.get(2).copied().unwrap_or(0);

    let config = SearchConfig::new(order, max_abs).seed(seed);
    let mut last_best = usize::MAX;
    let outcome = solve_with::<SearchState>(&config, &mut |iteration, best| {
        if best < last_best {
            println!("iteration {iteration:>8}: error {best}");
            last_best = best;
        }
    })
    .expect("valid configuration");

    match outcome.solution {
        Some(square) => {
            println!(
                "found after {} iterations and {} restarts in {:.2?}:",
                outcome.iterations, outcome.restarts, outcome.elapsed
            );
            print!("{square}");
            assert!(count_errors(&square).is_clean());
        }
        None => {
            println!("no solution; lowest error {}:", outcome.best_error);
            print!("{}", outcome.best);
        }
    }
}
