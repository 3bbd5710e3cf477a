use std::collections::BTreeMap;

use proptest::prelude::*;
use sdsq::canon::{permute_cols, permute_rows, reflect, to_snf};
use sdsq::generic::{forbidden_values, instantiate, ForbiddenSet, GenericSquare, Rational};
use sdsq::verify::{count_errors, is_nontrivial};
use sdsq::{equivalent, fixtures, is_anagram, Square};

fn nontrivial_fixtures() -> Vec<Square> {
    vec![
        fixtures::fig2(),
        fixtures::fig8a(),
        fixtures::fig8b(),
        fixtures::fig14_left(),
        fixtures::fig19(),
        fixtures::fig20(),
    ]
}

/// A fixture with its leading rows and columns shuffled and maybe reflected.
fn rearranged() -> impl Strategy<Value = (Square, Square)> {
    (
        0..nontrivial_fixtures().len(),
        any::<u64>(),
        any::<u64>(),
        any::<bool>(),
    )
        .prop_map(|(i, rs, cs, flip)| {
            let base = nontrivial_fixtures().swap_remove(i);
            let n = base.order();
            let shuffle = |mut seed: u64| {
                let mut p: Vec<usize> = (0..n - 1).collect();
                for k in (1..p.len()).rev() {
                    seed = seed
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    p.swap(k, (seed >> 33) as usize % (k + 1));
                }
                p
            };
            let mut sq = permute_rows(&base, &shuffle(rs)).unwrap();
            sq = permute_cols(&sq, &shuffle(cs)).unwrap();
            if flip {
                sq = reflect(&sq);
            }
            (base, sq)
        })
}

fn grid(max_order: usize) -> impl Strategy<Value = Square> {
    (1..=max_order).prop_flat_map(|n| {
        proptest::collection::vec(-9i64..10, n * n)
            .prop_map(move |cells| Square::new(n, cells).unwrap())
    })
}

proptest! {
    #[test]
    fn snf_is_a_class_invariant((base, moved) in rearranged()) {
        prop_assert!(is_nontrivial(&moved));
        prop_assert_eq!(to_snf(&moved).unwrap(), to_snf(&base).unwrap());
        prop_assert!(equivalent(&base, &moved).unwrap());
        prop_assert!(is_anagram(&base, &moved).unwrap());
    }

    #[test]
    fn snf_is_idempotent((_, moved) in rearranged()) {
        let snf = to_snf(&moved).unwrap();
        prop_assert_eq!(to_snf(&snf).unwrap(), snf);
    }

    #[test]
    fn rearrangement_preserves_error_counts(sq in grid(5), rs in any::<u64>(), flip in any::<bool>()) {
        let n = sq.order();
        let mut p: Vec<usize> = (0..n.saturating_sub(1)).collect();
        let shift = (rs as usize) % p.len().max(1);
        p.rotate_left(shift);
        let mut moved = permute_rows(&sq, &p).unwrap();
        if flip {
            moved = reflect(&moved);
        }
        let (a, b) = (count_errors(&sq), count_errors(&moved));
        prop_assert_eq!(a.total, b.total);
        prop_assert_eq!(a.border_duplication_errors, b.border_duplication_errors);
    }

    #[test]
    fn text_round_trip(sq in grid(6)) {
        prop_assert_eq!(sq.to_string().parse::<Square>().unwrap(), sq);
    }
}

fn assignment(g: &GenericSquare, values: &[i64]) -> BTreeMap<char, Rational> {
    g.variables()
        .into_iter()
        .zip(values)
        .map(|(v, &x)| (v, Rational::from(x)))
        .collect()
}

fn is_forbidden(set: &ForbiddenSet, a: &BTreeMap<char, Rational>) -> bool {
    match set {
        ForbiddenSet::Values { variable, values } => values.contains(&a[variable]),
        ForbiddenSet::Constraints(cs) => cs.iter().any(|c| c.is_violated_by(a)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn allowed_substitutions_give_nontrivial_squares(
        which in 0usize..3,
        values in proptest::collection::vec(-60i64..60, 2),
    ) {
        let g = vec![fixtures::fig13a(), fixtures::fig13b(), fixtures::fig14_right()].swap_remove(which);
        let forbidden = forbidden_values(&g).unwrap();
        let a = assignment(&g, &values);
        match instantiate(&g, &a) {
            Ok(sq) => {
                prop_assert!(!is_forbidden(&forbidden, &a));
                prop_assert!(is_nontrivial(&sq), "{a:?}\n{sq}");
            }
            Err(_) => prop_assert!(is_forbidden(&forbidden, &a)),
        }
    }
}
