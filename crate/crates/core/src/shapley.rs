//! Shapley value solvers.
//!
//! Three routes to the same allocation:
//!
//! * [`shapley_direct`] evaluates the weighted-marginal sum
//!   `r̂_i = Σ_{C ⊆ V∖{i}} |C|!(|V|−|C|−1)!/|V|! · (H(C ∪ {i}) − H(C))`
//!   in a single pass that touches every coalition exactly once;
//! * [`shapley_by_permutations`] averages the greedy marginal vector over
//!   all `|V|!` orderings, which equals the direct form identically;
//! * [`shapley_sampled`] averages over a seeded uniform sample of orderings.
//!
//! All weights are exact factorial rationals, so the first two routes agree
//! bit for bit and both sum to `H(V)` exactly.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::caps::Caps;
use crate::coalition::{for_each_permutation, shuffle, Coalition};
use crate::error::{GameError, Result};
use crate::oracle::Oracle;
use crate::polyhedron::greedy_marginals;
use crate::rate::RateVector;
use crate::rational::Rat;

/// How a Shapley value was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapleyMethod {
    /// Weighted-marginal sum over all coalitions.
    Direct,
    /// Mean greedy marginal vector over all orderings.
    PermutationAverage,
    /// Mean over a random sample of orderings.
    Sampled,
    /// Per-block direct solve on the finest decomposer, then direct sum.
    Decomposed,
}

/// A computed allocation plus its provenance.
#[derive(Clone, Debug)]
pub struct ShapleyResult {
    /// The allocation, one exact rate per player.
    pub value: RateVector,
    /// Which solver produced it.
    pub method: ShapleyMethod,
    /// Oracle calls newly charged while computing it.
    pub oracle_calls: u64,
    /// Number of sampled orderings, for [`ShapleyMethod::Sampled`].
    pub sample_count: Option<u64>,
    /// RNG seed, for [`ShapleyMethod::Sampled`].
    pub seed: Option<u64>,
    /// RNG algorithm identifier, for [`ShapleyMethod::Sampled`].
    pub rng: Option<&'static str>,
    /// Mean of the *deduplicated* extreme points, reported by
    /// [`shapley_by_permutations`]. Coincides with `value` whenever all
    /// marginal vectors are distinct; when orderings collide on a vector the
    /// two means can drift apart, so callers are given both.
    pub extreme_point_mean: Option<RateVector>,
}

impl ShapleyResult {
    /// Whether the deduplicated-extreme-point mean disagrees with the
    /// permutation average. `None` unless that mean was computed.
    pub fn extreme_point_mean_differs(&self) -> Option<bool> {
        self.extreme_point_mean.as_ref().map(|m| *m != self.value)
    }
}

pub(crate) fn factorials(n: usize) -> Vec<BigInt> {
    let mut f = Vec::with_capacity(n + 1);
    f.push(BigInt::from(1u8));
    for k in 1..=n {
        let next = &f[k - 1] * BigInt::from(k as u64);
        f.push(next);
    }
    f
}

/// Evaluates the weighted-marginal formula for every player at once.
///
/// Rearranged by coalition: `H(S)` enters `r̂_i` with weight
/// `(|S|−1)!(n−|S|)!/n!` when `i ∈ S` and `−|S|!(n−|S|−1)!/n!` otherwise,
/// so a single sweep over all `2^n` coalitions (each evaluated once, the
/// empty set included) produces the whole vector.
pub fn shapley_direct<O: Oracle + ?Sized>(oracle: &mut O, caps: Caps) -> Result<ShapleyResult> {
    let n = oracle.ground_size();
    caps.ensure_subset(n)?;
    let before = oracle.call_count();
    let fact = factorials(n);

    // accumulate n! · r̂_i to keep the weights integral
    let mut acc = alloc::vec![Rat::zero(); n];
    for mask in 0..(1u64 << n) {
        let s = Coalition::from_mask_unchecked(n, mask);
        let h = oracle.entropy(s);
        if h.is_zero() {
            continue;
        }
        let k = s.len();
        let w_in = &fact[k - 1] * &fact[n - k];
        for i in s.members() {
            acc[i] += h.mul_big(&w_in);
        }
        if k < n {
            let w_out = &fact[k] * &fact[n - k - 1];
            for i in s.complement().members() {
                acc[i] -= h.mul_big(&w_out);
            }
        }
    }

    let value: RateVector = acc.into_iter().map(|a| a.div_big(&fact[n])).collect();
    Ok(ShapleyResult {
        value,
        method: ShapleyMethod::Direct,
        oracle_calls: oracle.call_count() - before,
        sample_count: None,
        seed: None,
        rng: None,
        extreme_point_mean: None,
    })
}

/// Averages the greedy marginal vector over all `n!` orderings.
///
/// Equals [`shapley_direct`] exactly. Also reports the mean of the
/// deduplicated extreme points alongside.
pub fn shapley_by_permutations<O: Oracle + ?Sized>(
    oracle: &mut O,
    caps: Caps,
) -> Result<ShapleyResult> {
    let n = oracle.ground_size();
    caps.ensure_perm(n)?;
    let before = oracle.call_count();
    let fact = factorials(n);

    let mut sum = RateVector::zeros(n);
    let mut distinct: BTreeSet<RateVector> = BTreeSet::new();
    for_each_permutation(n, |order| {
        let r = greedy_marginals(oracle, order);
        sum.add_assign(&r);
        distinct.insert(r);
    });

    let value = sum.div_big(&fact[n]);
    let mut point_sum = RateVector::zeros(n);
    for p in &distinct {
        point_sum.add_assign(p);
    }
    let extreme_point_mean = point_sum.div_big(&BigInt::from(distinct.len()));

    Ok(ShapleyResult {
        value,
        method: ShapleyMethod::PermutationAverage,
        oracle_calls: oracle.call_count() - before,
        sample_count: None,
        seed: None,
        rng: None,
        extreme_point_mean: Some(extreme_point_mean),
    })
}

/// Identifier of the sampling RNG recorded in results.
pub const SAMPLING_RNG: &str = "chacha8";

/// Averages the greedy marginal vector over `sample_count` orderings drawn
/// uniformly with a ChaCha8 generator seeded by `seed`.
///
/// Deterministic given `(sample_count, seed)`; each sample is an exact core
/// point, so the average sums to `H(V)` exactly.
pub fn shapley_sampled<O: Oracle + ?Sized>(
    oracle: &mut O,
    sample_count: u64,
    seed: u64,
) -> Result<ShapleyResult> {
    if sample_count == 0 {
        return Err(GameError::ZeroSamples);
    }
    let n = oracle.ground_size();
    let before = oracle.call_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut sum = RateVector::zeros(n);
    let mut ordered: Vec<usize> = Vec::with_capacity(n);
    let mut scratch: Vec<u8> = Vec::with_capacity(n);
    for _ in 0..sample_count {
        scratch.clear();
        scratch.extend(0..n as u8);
        shuffle(&mut scratch, &mut rng);
        ordered.clear();
        ordered.extend(scratch.iter().map(|&p| p as usize));
        sum.add_assign(&greedy_marginals(oracle, &ordered));
    }

    Ok(ShapleyResult {
        value: sum.div_big(&BigInt::from(sample_count)),
        method: ShapleyMethod::Sampled,
        oracle_calls: oracle.call_count() - before,
        sample_count: Some(sample_count),
        seed: Some(seed),
        rng: Some(SAMPLING_RNG),
        extreme_point_mean: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testmodels::{coupled3, independent3, overlap3, two_terminal};
    use crate::model::BitSourceModel;
    use crate::oracle::EntropyOracle;
    use crate::polyhedron::check_core;
    use crate::rational::rat;

    fn rv(parts: &[(i64, i64)]) -> RateVector {
        parts.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn direct_values_on_fixtures() {
        let m = overlap3();
        let mut o = EntropyOracle::new(&m);
        let res = shapley_direct(&mut o, Caps::default()).unwrap();
        assert_eq!(res.value, rv(&[(53, 20), (9, 10), (5, 4)]));
        assert_eq!(res.oracle_calls, 8);

        let ind = independent3();
        let mut oi = EntropyOracle::new(&ind);
        assert_eq!(
            shapley_direct(&mut oi, Caps::default()).unwrap().value,
            rv(&[(1, 1), (1, 1), (1, 1)])
        );

        let c = coupled3();
        let mut oc = EntropyOracle::new(&c);
        assert_eq!(
            shapley_direct(&mut oc, Caps::default()).unwrap().value,
            rv(&[(3, 2), (1, 1), (11, 10)])
        );

        let tt = two_terminal();
        let mut ot = EntropyOracle::new(&tt);
        assert_eq!(
            shapley_direct(&mut ot, Caps::default()).unwrap().value,
            rv(&[(5, 2), (9, 2)])
        );
    }

    #[test]
    fn permutation_average_equals_direct() {
        for m in [overlap3(), independent3(), coupled3(), two_terminal()] {
            let mut o = EntropyOracle::new(&m);
            let direct = shapley_direct(&mut o, Caps::default()).unwrap();
            let perms = shapley_by_permutations(&mut o, Caps::default()).unwrap();
            assert_eq!(direct.value, perms.value);
        }
    }

    #[test]
    fn extreme_point_mean_is_reported() {
        let m = overlap3();
        let mut o = EntropyOracle::new(&m);
        let res = shapley_by_permutations(&mut o, Caps::default()).unwrap();
        // all six marginal vectors are distinct here, so both means coincide
        assert_eq!(res.extreme_point_mean_differs(), Some(false));
        assert_eq!(res.extreme_point_mean.unwrap(), res.value);
    }

    #[test]
    fn efficiency_holds_exactly() {
        for m in [overlap3(), independent3(), coupled3(), two_terminal()] {
            let mut o = EntropyOracle::new(&m);
            let total = shapley_direct(&mut o, Caps::default()).unwrap().value.total();
            assert_eq!(total, o.grand_entropy());
        }
    }

    #[test]
    fn shapley_lies_in_the_core() {
        for m in [overlap3(), independent3(), coupled3(), two_terminal()] {
            let mut o = EntropyOracle::new(&m);
            let value = shapley_direct(&mut o, Caps::default()).unwrap().value;
            assert!(check_core(&mut o, &value, Caps::default()).unwrap().is_member);
        }
    }

    #[test]
    fn symmetric_players_get_equal_rates() {
        let m = BitSourceModel::new(
            &[("a", rat(2, 3)), ("b", rat(1, 1)), ("c", rat(1, 2))],
            &[&["a", "b"], &["a", "b"], &["c"]],
        )
        .unwrap();
        let mut o = EntropyOracle::new(&m);
        let v = shapley_direct(&mut o, Caps::default()).unwrap().value;
        assert_eq!(v.rate(0), v.rate(1));
    }

    #[test]
    fn dummy_player_gets_zero() {
        let m = BitSourceModel::new(
            &[("a", rat(1, 1)), ("b", rat(2, 1))],
            &[&["a"], &["a", "b"], &[]],
        )
        .unwrap();
        let mut o = EntropyOracle::new(&m);
        let v = shapley_direct(&mut o, Caps::default()).unwrap().value;
        assert_eq!(v.rate(2), &Rat::zero());
    }

    #[test]
    fn sampled_trivial_cases() {
        let ind = independent3();
        let mut o = EntropyOracle::new(&ind);
        let res = shapley_sampled(&mut o, 1, 12345).unwrap();
        assert_eq!(res.value, rv(&[(1, 1), (1, 1), (1, 1)]));
        assert_eq!(res.sample_count, Some(1));
        assert_eq!(res.seed, Some(12345));
        assert_eq!(res.rng, Some("chacha8"));

        let single = BitSourceModel::new(&[("a", rat(9, 4))], &[&["a"]]).unwrap();
        let mut os = EntropyOracle::new(&single);
        assert_eq!(shapley_sampled(&mut os, 5, 0).unwrap().value, rv(&[(9, 4)]));

        assert_eq!(
            shapley_sampled(&mut os, 0, 0).unwrap_err(),
            GameError::ZeroSamples
        );
    }

    #[test]
    fn sampled_is_deterministic_and_sums_exactly() {
        let m = overlap3();
        let mut o1 = EntropyOracle::new(&m);
        let mut o2 = EntropyOracle::new(&m);
        let a = shapley_sampled(&mut o1, 64, 7).unwrap();
        let b = shapley_sampled(&mut o2, 64, 7).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.value.total(), rat(24, 5));
    }

    #[test]
    fn sampled_mean_over_seeds_approaches_direct() {
        let m = overlap3();
        let mut o = EntropyOracle::new(&m);
        let exact = shapley_direct(&mut o, Caps::default()).unwrap().value;
        let mut mean = RateVector::zeros(3);
        let seeds = 40u64;
        for seed in 0..seeds {
            mean.add_assign(&shapley_sampled(&mut o, 150, seed).unwrap().value);
        }
        let mean = mean.div_big(&BigInt::from(seeds));
        for i in 0..3 {
            let err = (mean.rate(i) - exact.rate(i)).abs();
            assert!(err < rat(1, 20), "coordinate {i} off by {err}");
        }
    }
}
