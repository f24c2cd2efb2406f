//! Game decomposition: detecting independent groups of sources and solving
//! each group separately.
//!
//! A partition `P` of the players decomposes the game when
//! `H(V) = Σ_{C∈P} H(C)`; its blocks are then mutually independent source
//! groups, the achievable region factors into a direct sum over the blocks,
//! and the Shapley value of the whole game is the direct sum of the
//! per-block Shapley values. The finest such partition is unique and
//! [`finest_decomposer`] finds it with `O(|V|²)` oracle calls, against the
//! `2^|V|` a full solve needs.

use alloc::vec::Vec;

use crate::caps::Caps;
use crate::coalition::{Coalition, Partition, Permutation};
use crate::error::{GameError, Result};
use crate::oracle::{Oracle, SubgameOracle};
use crate::rate::RateVector;
use crate::rational::Rat;
use crate::shapley::{shapley_direct, ShapleyMethod, ShapleyResult};

/// Output of [`finest_decomposer`].
#[derive(Clone, Debug)]
pub struct DecomposerResult {
    /// The finest decomposing partition (just `{V}` when indecomposable).
    pub finest: Partition,
    /// Whether the finest decomposer has more than one block.
    pub decomposable: bool,
    /// The greedy extreme point assembled along the way; always a member of
    /// the achievable region.
    pub witness_extreme_point: RateVector,
    /// Oracle calls newly charged during the run; grows quadratically in the
    /// number of players.
    pub oracle_calls: u64,
    /// The minimal tight set found for each player (indexed by player): the
    /// smallest prefix subset whose sum-rate meets its entropy bound.
    pub min_tight_sets: Vec<Coalition>,
}

/// Whether `Σ_{C∈P} H(C) = H(V)` exactly.
pub fn is_decomposer<O: Oracle + ?Sized>(oracle: &mut O, partition: &Partition) -> bool {
    assert_eq!(partition.ground_size(), oracle.ground_size());
    let mut sum = Rat::zero();
    for &block in partition.blocks() {
        sum += oracle.entropy(block);
    }
    sum == oracle.grand_entropy()
}

// Union-find over player indices, path-halving, union by attachment.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[rb] = ra;
        }
    }
}

/// Finds the finest decomposing partition along one ordering of the players.
///
/// For each player `φ_i` (taken in the given order) the greedy rate
/// `r_{φ_i} = H({φ_1,…,φ_i}) − H({φ_1,…,φ_{i−1}})` is assigned, then the
/// working set `X̂_{φ_i}` — initially the whole prefix — is shrunk by one
/// descending pass over the earlier players: `φ_{i−j}` is dropped exactly
/// when the remaining set stays tight, `r(X̂ ∖ {φ_{i−j}}) = H(X̂ ∖
/// {φ_{i−j}})`, tested by exact rational equality. Any two intersecting
/// working sets are finally merged; the resulting blocks form the finest
/// decomposer, which is the same for every ordering.
pub fn finest_decomposer<O: Oracle + ?Sized>(
    oracle: &mut O,
    perm: &Permutation,
) -> DecomposerResult {
    let n = oracle.ground_size();
    assert_eq!(perm.len(), n, "permutation over a different ground set");
    assert!(n >= 1);
    let before = oracle.call_count();

    let mut rates = alloc::vec![Rat::zero(); n];
    let mut min_tight_sets = alloc::vec![Coalition::empty(n); n];
    let mut prefix = Coalition::empty(n);
    let mut prefix_entropy = Rat::zero();
    let mut prefix_rate_sum = Rat::zero();

    for i in 0..n {
        let p = perm.player_at(i);
        prefix = prefix.with(p);
        let h = oracle.entropy(prefix);
        rates[p] = &h - &prefix_entropy;
        prefix_entropy = h;
        prefix_rate_sum += &rates[p];

        let mut working = prefix;
        let mut working_rate_sum = prefix_rate_sum.clone();
        for j in 1..=i {
            let candidate = perm.player_at(i - j);
            if !working.contains(candidate) {
                continue;
            }
            let reduced = working.without(candidate);
            let reduced_rate_sum = &working_rate_sum - &rates[candidate];
            if reduced_rate_sum == oracle.entropy(reduced) {
                working = reduced;
                working_rate_sum = reduced_rate_sum;
            }
        }
        min_tight_sets[p] = working;
    }

    let mut uf = UnionFind::new(n);
    for (p, tight) in min_tight_sets.iter().enumerate() {
        for q in tight.members() {
            uf.union(p, q);
        }
    }
    let mut block_masks = alloc::vec![0u64; n];
    for p in 0..n {
        block_masks[uf.find(p)] |= 1u64 << p;
    }
    let blocks: Vec<Coalition> = block_masks
        .into_iter()
        .filter(|&m| m != 0)
        .map(|m| Coalition::from_mask_unchecked(n, m))
        .collect();
    let finest = Partition::new(blocks).expect("working sets cover every player");

    DecomposerResult {
        decomposable: finest.block_count() > 1,
        finest,
        witness_extreme_point: RateVector::new(rates),
        oracle_calls: oracle.call_count() - before,
        min_tight_sets,
    }
}

/// Assembles rate vectors over disjoint coalitions into one vector over the
/// whole ground set.
///
/// Each part carries its coalition and the rates of its members in
/// ascending player order; the parts must cover the ground set without
/// overlap.
pub fn direct_sum(parts: &[(Coalition, RateVector)]) -> Result<RateVector> {
    let first = parts
        .first()
        .ok_or_else(|| GameError::InvalidDirectSum(alloc::string::String::from("no parts")))?;
    let n = first.0.ground_size();
    let mut covered = Coalition::empty(n);
    let mut rates = alloc::vec![Rat::zero(); n];
    for (block, part) in parts {
        if block.ground_size() != n {
            return Err(GameError::InvalidDirectSum(alloc::string::String::from(
                "parts disagree on the ground set",
            )));
        }
        if part.len() != block.len() {
            return Err(GameError::InvalidDirectSum(alloc::format!(
                "part over {block} carries {} rates",
                part.len()
            )));
        }
        if covered.intersects(*block) {
            return Err(GameError::InvalidDirectSum(alloc::format!(
                "coalition {block} overlaps earlier parts"
            )));
        }
        covered = covered.union(*block);
        for (local, global) in block.members().enumerate() {
            rates[global] = part.rate(local).clone();
        }
    }
    if !covered.is_full() {
        return Err(GameError::InvalidDirectSum(alloc::format!(
            "parts cover only {covered}"
        )));
    }
    Ok(RateVector::new(rates))
}

/// A decomposed solve: the allocation plus the decomposition that produced it.
#[derive(Clone, Debug)]
pub struct DecomposedShapley {
    /// The assembled allocation. Equals the direct solve exactly.
    pub shapley: ShapleyResult,
    /// The finest decomposer and its witness point.
    pub decomposer: DecomposerResult,
}

/// Computes the Shapley value by decomposition: find the finest decomposer
/// (identity ordering), solve each block's subgame directly, and assemble
/// the per-block values by direct sum.
///
/// `oracle_calls` covers the whole pipeline — the decomposer run plus every
/// subgame solve — as charged by the oracle; with memoization on, a
/// coalition already evaluated while decomposing is not charged again by a
/// subgame. The subset cap applies to the largest block only.
pub fn shapley_decomposed<O: Oracle + ?Sized>(
    oracle: &mut O,
    caps: Caps,
) -> Result<DecomposedShapley> {
    let before = oracle.call_count();
    let decomposer = finest_decomposer(oracle, &Permutation::identity(oracle.ground_size()));
    caps.ensure_subset(decomposer.finest.max_block_size())?;

    let mut parts = Vec::with_capacity(decomposer.finest.block_count());
    for &block in decomposer.finest.blocks() {
        let mut view = SubgameOracle::new(oracle, block);
        let sub = shapley_direct(&mut view, caps)?;
        parts.push((block, sub.value));
    }
    let value = direct_sum(&parts)?;

    Ok(DecomposedShapley {
        shapley: ShapleyResult {
            value,
            method: ShapleyMethod::Decomposed,
            oracle_calls: oracle.call_count() - before,
            sample_count: None,
            seed: None,
            rng: None,
            extreme_point_mean: None,
        },
        decomposer,
    })
}

/// Dimension of the achievable region: `|V| − |P*|` where `P*` is the
/// finest decomposer.
pub fn core_dimension<O: Oracle + ?Sized>(oracle: &mut O) -> usize {
    let n = oracle.ground_size();
    n - finest_decomposer(oracle, &Permutation::identity(n)).finest.block_count()
}
