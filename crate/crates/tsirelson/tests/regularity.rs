//! Schreier-family cross-checks against the literal definition.

mod common;

use common::{subsets, NaiveSchreier};
use tsirelson::index_set::IndexSet;
use tsirelson::schreier::{decompose, enumerate_members, is_member, Ordinal};

const ORDERS: [Ordinal; 5] = [
    Ordinal::Finite(1),
    Ordinal::Finite(2),
    Ordinal::Finite(3),
    Ordinal::OmegaPlus(0),
    Ordinal::OmegaPlus(1),
];

/// The engine's membership must agree with the definitional recursion on
/// every subset of {1..10}, for every supported order shape.
#[test]
fn membership_agrees_with_the_literal_definition() {
    let mut naive = NaiveSchreier::new();
    for alpha in ORDERS {
        for f in subsets(10) {
            let set = IndexSet::new(f.clone()).unwrap();
            assert_eq!(
                is_member(&set, alpha),
                naive.is_member(&f, alpha),
                "disagreement at {set} order {alpha}"
            );
        }
    }
}

/// Decomposition succeeds exactly on members, for successor orders.
#[test]
fn decompose_iff_member() {
    for alpha in [Ordinal::Finite(1), Ordinal::Finite(2), Ordinal::Finite(3), Ordinal::OmegaPlus(1)] {
        for f in subsets(10) {
            let set = IndexSet::new(f).unwrap();
            let witness = decompose(&set, alpha).unwrap();
            assert_eq!(
                witness.is_some(),
                is_member(&set, alpha),
                "decompose/member mismatch at {set} order {alpha}"
            );
            if let Some(d) = witness {
                // The witness really is one: consecutive member blocks,
                // count within the budget, union restoring the set.
                assert!(d.blocks.len() <= set.min().map_or(1, |m| m as usize).max(1));
                for (k, b) in d.blocks.iter().enumerate() {
                    assert!(is_member(b, d.order));
                    if k > 0 {
                        assert!(d.blocks[k - 1].precedes(b));
                    }
                }
                assert_eq!(d.union(), set);
            }
        }
    }
}

/// Member counts on {1..12} match the definitional filter; this is the
/// independent count the enumeration surface is held to.
#[test]
fn enumeration_counts_match_the_definitional_filter() {
    let mut naive = NaiveSchreier::new();
    for alpha in [Ordinal::Finite(1), Ordinal::Finite(2), Ordinal::OmegaPlus(0)] {
        let enumerated = enumerate_members(alpha, 12).unwrap().len();
        let filtered = subsets(12).filter(|f| naive.is_member(f, alpha)).count();
        assert_eq!(enumerated, filtered, "count mismatch for order {alpha}");
    }
}

/// Nesting into the successor, exhaustively on {1..12}: one block is
/// always a legal decomposition.
#[test]
fn nesting_step_holds_on_truncations() {
    let steps = [
        (Ordinal::Finite(0), Ordinal::Finite(1)),
        (Ordinal::Finite(1), Ordinal::Finite(2)),
        (Ordinal::Finite(2), Ordinal::Finite(3)),
        (Ordinal::OmegaPlus(0), Ordinal::OmegaPlus(1)),
    ];
    for f in subsets(12) {
        let set = IndexSet::new(f).unwrap();
        for (lo, hi) in steps {
            if is_member(&set, lo) {
                assert!(is_member(&set, hi), "{set}: S_{lo} not inside S_{hi}");
            }
        }
    }
}
