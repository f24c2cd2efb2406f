//! Shared fixtures and strategies for the integration suites.
#![allow(dead_code)] // each test binary uses its own subset

use proptest::prelude::*;
use ratefair_core::{BitSourceModel, Rat, RateVector};

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d).unwrap()
}

pub fn rv(parts: &[(i64, i64)]) -> RateVector {
    parts.iter().map(|&(n, d)| rat(n, d)).collect()
}

/// Three users over six shared bits; dependent, indecomposable.
pub fn overlap3() -> BitSourceModel {
    BitSourceModel::new(
        &[
            ("a", rat(1, 1)),
            ("b", rat(3, 10)),
            ("c", rat(1, 1)),
            ("d", rat(1, 1)),
            ("e", rat(1, 1)),
            ("f", rat(1, 2)),
        ],
        &[&["a", "b", "c", "d", "e"], &["a", "b", "f"], &["c", "d", "f"]],
    )
    .unwrap()
}

/// Three mutually independent unit-entropy sources.
pub fn independent3() -> BitSourceModel {
    BitSourceModel::new(
        &[("a", rat(1, 1)), ("b", rat(1, 1)), ("c", rat(1, 1))],
        &[&["a"], &["b"], &["c"]],
    )
    .unwrap()
}

/// Users 1 and 3 coupled through one bit; user 2 independent.
pub fn coupled3() -> BitSourceModel {
    BitSourceModel::new(
        &[("a", rat(1, 1)), ("b", rat(1, 1)), ("c", rat(3, 5)), ("d", rat(1, 1))],
        &[&["a", "b"], &["d"], &["b", "c"]],
    )
    .unwrap()
}

/// Builds a model from `(observer_mask, weight_numerator, weight_denominator)`
/// triples over `players` players.
pub fn model_from_bits(players: usize, bits: &[(u64, i64, i64)]) -> BitSourceModel {
    let named: Vec<(String, Rat)> = bits
        .iter()
        .enumerate()
        .map(|(k, &(_, n, d))| (format!("b{k}"), rat(n, d)))
        .collect();
    let mut observes: Vec<Vec<String>> = vec![Vec::new(); players];
    for (k, &(mask, _, _)) in bits.iter().enumerate() {
        for (p, obs) in observes.iter_mut().enumerate() {
            if mask & (1 << p) != 0 {
                obs.push(format!("b{k}"));
            }
        }
    }
    BitSourceModel::from_owned(named, observes).unwrap()
}

/// Random model over 1..=`max_players` players with up to 8 nonnegative
/// weighted bits on arbitrary observer sets.
pub fn arb_model(max_players: usize) -> impl Strategy<Value = BitSourceModel> {
    (1..=max_players).prop_flat_map(|n| {
        prop::collection::vec((0u64..(1u64 << n), 0i64..=20, 1i64..=10), 1..=8)
            .prop_map(move |bits| model_from_bits(n, &bits))
    })
}

/// Random rate vector with small rational coordinates, matched to `n` players.
pub fn arb_rates(n: usize) -> impl Strategy<Value = RateVector> {
    prop::collection::vec((-40i64..=120, 1i64..=10), n)
        .prop_map(|parts| parts.into_iter().map(|(p, q)| rat(p, q)).collect())
}
