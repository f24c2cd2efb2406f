//! Ground sets, coalitions, permutations and partitions.
//!
//! A coalition is a subset of the ground set `{0, …, |V|-1}` stored as a
//! machine-word bitmask, so set algebra is a handful of bit operations.
//! Player indices are 0-based everywhere inside the library; the 1-based
//! labels used by file formats and display output are translated at the
//! boundary.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{GameError, Result};

/// Widest representable ground set: one player per bit of the mask.
pub const MAX_GROUND_SIZE: usize = 64;

/// A subset of the players `{0, …, ground_size-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coalition {
    mask: u64,
    ground: u8,
}

impl Coalition {
    /// The empty coalition over a ground set of `ground_size` players.
    pub fn empty(ground_size: usize) -> Self {
        assert!(ground_size <= MAX_GROUND_SIZE);
        Coalition { mask: 0, ground: ground_size as u8 }
    }

    /// The grand coalition `V`.
    pub fn full(ground_size: usize) -> Self {
        assert!(ground_size <= MAX_GROUND_SIZE);
        let mask = if ground_size == MAX_GROUND_SIZE {
            u64::MAX
        } else {
            (1u64 << ground_size) - 1
        };
        Coalition { mask, ground: ground_size as u8 }
    }

    /// The singleton `{player}`. Panics if the index is out of range.
    pub fn singleton(ground_size: usize, player: usize) -> Self {
        assert!(player < ground_size && ground_size <= MAX_GROUND_SIZE);
        Coalition { mask: 1u64 << player, ground: ground_size as u8 }
    }

    /// Builds a coalition from explicit member indices, validating range.
    pub fn from_members<I>(ground_size: usize, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        if ground_size > MAX_GROUND_SIZE {
            return Err(GameError::GroundTooLarge { requested: ground_size, max: MAX_GROUND_SIZE });
        }
        let mut mask = 0u64;
        for p in members {
            if p >= ground_size {
                return Err(GameError::PlayerOutOfRange { player: p, ground_size });
            }
            mask |= 1u64 << p;
        }
        Ok(Coalition { mask, ground: ground_size as u8 })
    }

    /// Reinterprets a raw bitmask as a coalition, validating it fits the ground set.
    pub fn from_mask(ground_size: usize, mask: u64) -> Result<Self> {
        let full = Coalition::full(ground_size);
        if mask & !full.mask != 0 {
            return Err(GameError::PlayerOutOfRange {
                player: (63 - mask.leading_zeros()) as usize,
                ground_size,
            });
        }
        Ok(Coalition { mask, ground: ground_size as u8 })
    }

    pub(crate) fn from_mask_unchecked(ground_size: usize, mask: u64) -> Self {
        debug_assert!(Coalition::from_mask(ground_size, mask).is_ok());
        Coalition { mask, ground: ground_size as u8 }
    }

    /// The raw bitmask.
    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Number of players in the ground set.
    pub fn ground_size(&self) -> usize {
        self.ground as usize
    }

    /// Cardinality `|X|`.
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Whether the coalition is empty.
    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Whether the coalition equals the grand coalition.
    pub fn is_full(&self) -> bool {
        self.mask == Coalition::full(self.ground_size()).mask
    }

    /// Membership test.
    pub fn contains(&self, player: usize) -> bool {
        player < self.ground_size() && self.mask & (1u64 << player) != 0
    }

    /// The coalition with `player` added.
    pub fn with(&self, player: usize) -> Self {
        assert!(player < self.ground_size());
        Coalition { mask: self.mask | (1u64 << player), ground: self.ground }
    }

    /// The coalition with `player` removed.
    pub fn without(&self, player: usize) -> Self {
        assert!(player < self.ground_size());
        Coalition { mask: self.mask & !(1u64 << player), ground: self.ground }
    }

    /// Set union. Both operands must share the ground set.
    pub fn union(&self, other: Coalition) -> Self {
        assert_eq!(self.ground, other.ground);
        Coalition { mask: self.mask | other.mask, ground: self.ground }
    }

    /// Set intersection.
    pub fn intersection(&self, other: Coalition) -> Self {
        assert_eq!(self.ground, other.ground);
        Coalition { mask: self.mask & other.mask, ground: self.ground }
    }

    /// Set difference `self \ other`.
    pub fn difference(&self, other: Coalition) -> Self {
        assert_eq!(self.ground, other.ground);
        Coalition { mask: self.mask & !other.mask, ground: self.ground }
    }

    /// Complement with respect to the grand coalition.
    pub fn complement(&self) -> Self {
        let full = Coalition::full(self.ground_size());
        Coalition { mask: full.mask & !self.mask, ground: self.ground }
    }

    /// Subset test `self ⊆ other`.
    pub fn is_subset_of(&self, other: Coalition) -> bool {
        assert_eq!(self.ground, other.ground);
        self.mask & !other.mask == 0
    }

    /// Whether the two coalitions share a member.
    pub fn intersects(&self, other: Coalition) -> bool {
        assert_eq!(self.ground, other.ground);
        self.mask & other.mask != 0
    }

    /// Members in ascending order.
    pub fn members(&self) -> Members {
        Members { mask: self.mask }
    }

    /// Smallest member, if any.
    pub fn min_member(&self) -> Option<usize> {
        if self.mask == 0 {
            None
        } else {
            Some(self.mask.trailing_zeros() as usize)
        }
    }
}

impl fmt::Display for Coalition {
    /// Formats members as 1-based labels, e.g. `{1,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.members().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Ascending member iterator.
pub struct Members {
    mask: u64,
}

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.mask == 0 {
            return None;
        }
        let p = self.mask.trailing_zeros() as usize;
        self.mask &= self.mask - 1;
        Some(p)
    }
}

/// Enumerates all subsets of the ground set in increasing cardinality, and
/// lexicographic order of the ascending member tuple within one cardinality.
///
/// This is the deterministic order in which membership checks report their
/// first violated constraint. The grand coalition is always emitted last.
pub fn subsets_in_witness_order(ground_size: usize) -> WitnessOrder {
    assert!(ground_size <= MAX_GROUND_SIZE);
    WitnessOrder { ground: ground_size, size: 0, comb: Vec::new(), started: false, done: false }
}

/// Iterator state for [`subsets_in_witness_order`].
pub struct WitnessOrder {
    ground: usize,
    size: usize,
    comb: Vec<usize>,
    started: bool,
    done: bool,
}

impl WitnessOrder {
    fn emit(&self) -> Coalition {
        let mut mask = 0u64;
        for &p in &self.comb {
            mask |= 1u64 << p;
        }
        Coalition { mask, ground: self.ground as u8 }
    }

    // Standard lexicographic successor of a k-combination of {0..n-1}.
    fn advance_combination(&mut self) -> bool {
        let n = self.ground;
        let k = self.size;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.comb[i] < n - k + i {
                self.comb[i] += 1;
                for j in i + 1..k {
                    self.comb[j] = self.comb[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for WitnessOrder {
    type Item = Coalition;

    fn next(&mut self) -> Option<Coalition> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.emit()); // the empty set
        }
        if self.size > 0 && self.advance_combination() {
            return Some(self.emit());
        }
        if self.size == self.ground {
            self.done = true;
            return None;
        }
        self.size += 1;
        self.comb = (0..self.size).collect();
        Some(self.emit())
    }
}

/// An ordering of the players: position `i` holds the player chosen `i`-th.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    order: Vec<u8>,
}

impl Permutation {
    /// The identity ordering `(1, 2, …, n)`.
    pub fn identity(ground_size: usize) -> Self {
        assert!(ground_size <= MAX_GROUND_SIZE);
        Permutation { order: (0..ground_size as u8).collect() }
    }

    /// Validates that `order` is a bijection on `{0, …, n-1}`.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let n = order.len();
        if n > MAX_GROUND_SIZE {
            return Err(GameError::GroundTooLarge { requested: n, max: MAX_GROUND_SIZE });
        }
        let mut seen = 0u64;
        for &p in order {
            if p >= n {
                return Err(GameError::MalformedPermutation(alloc::format!(
                    "index {} out of range for {} players",
                    p + 1,
                    n
                )));
            }
            if seen & (1u64 << p) != 0 {
                return Err(GameError::MalformedPermutation(alloc::format!(
                    "index {} repeated",
                    p + 1
                )));
            }
            seen |= 1u64 << p;
        }
        Ok(Permutation { order: order.iter().map(|&p| p as u8).collect() })
    }

    pub(crate) fn from_positions(order: &[usize]) -> Self {
        Permutation { order: order.iter().map(|&p| p as u8).collect() }
    }

    /// Number of players.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    /// Whether the permutation is over an empty ground set.
    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Player placed at `position`.
    pub fn player_at(&self, position: usize) -> usize {
        self.order[position] as usize
    }

    /// Players in placement order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().map(|&p| p as usize)
    }

    /// Uniform random permutation via the Durstenfeld shuffle of the identity
    /// order (`j` drawn uniformly in `0..=i` for `i = n-1` down to `1`).
    pub fn sample<R: rand::Rng>(ground_size: usize, rng: &mut R) -> Self {
        let mut order: Vec<u8> = (0..ground_size as u8).collect();
        shuffle(&mut order, rng);
        Permutation { order }
    }
}

pub(crate) fn shuffle<R: rand::Rng>(order: &mut [u8], rng: &mut R) {
    for i in (1..order.len()).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
}

impl fmt::Display for Permutation {
    /// 1-based, e.g. `(3,2,1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p + 1)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Visits every permutation of `{0, …, n-1}` in lexicographic order.
pub(crate) fn for_each_permutation<F>(n: usize, mut f: F)
where
    F: FnMut(&[usize]),
{
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        f(&order);
        if !next_permutation(&mut order) {
            break;
        }
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Disjoint nonempty coalitions covering the ground set.
///
/// Blocks are kept sorted by their smallest member, so structurally equal
/// partitions compare equal and serialize identically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Coalition>,
}

impl Partition {
    /// Validates and canonicalizes a block list.
    pub fn new(mut blocks: Vec<Coalition>) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| {
            GameError::InvalidPartition(String::from("partition has no blocks"))
        })?;
        let ground = first.ground_size();
        let mut covered = 0u64;
        for b in &blocks {
            if b.ground_size() != ground {
                return Err(GameError::InvalidPartition(String::from(
                    "blocks disagree on the ground set",
                )));
            }
            if b.is_empty() {
                return Err(GameError::InvalidPartition(String::from("empty block")));
            }
            if covered & b.mask() != 0 {
                return Err(GameError::InvalidPartition(String::from("blocks overlap")));
            }
            covered |= b.mask();
        }
        if covered != Coalition::full(ground).mask() {
            return Err(GameError::InvalidPartition(String::from(
                "blocks do not cover the ground set",
            )));
        }
        blocks.sort_by_key(|b| b.min_member());
        Ok(Partition { blocks })
    }

    /// The all-singletons partition.
    pub fn singletons(ground_size: usize) -> Self {
        Partition {
            blocks: (0..ground_size).map(|p| Coalition::singleton(ground_size, p)).collect(),
        }
    }

    /// The one-block partition `{V}`.
    pub fn single_block(ground_size: usize) -> Self {
        Partition { blocks: alloc::vec![Coalition::full(ground_size)] }
    }

    /// Blocks sorted by smallest member.
    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Number of players in the ground set.
    pub fn ground_size(&self) -> usize {
        self.blocks[0].ground_size()
    }

    /// Cardinality of the largest block.
    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).max().unwrap_or(0)
    }

    /// The block containing `player`.
    pub fn block_containing(&self, player: usize) -> Option<Coalition> {
        self.blocks.iter().copied().find(|b| b.contains(player))
    }

    /// Whether every block of `self` lies inside a block of `coarser`.
    pub fn is_refinement_of(&self, coarser: &Partition) -> bool {
        self.blocks.iter().all(|b| {
            b.min_member()
                .and_then(|p| coarser.block_containing(p))
                .is_some_and(|c| b.is_subset_of(c))
        })
    }
}

impl fmt::Display for Partition {
    /// 1-based blocks, e.g. `{{1,3},{2}}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(ground: usize, members: &[usize]) -> Coalition {
        Coalition::from_members(ground, members.iter().copied()).unwrap()
    }

    #[test]
    fn set_algebra() {
        let x = c(4, &[0, 2]);
        let y = c(4, &[1, 2]);
        assert_eq!(x.union(y), c(4, &[0, 1, 2]));
        assert_eq!(x.intersection(y), c(4, &[2]));
        assert_eq!(x.difference(y), c(4, &[0]));
        assert_eq!(x.complement(), c(4, &[1, 3]));
        assert!(c(4, &[0]).is_subset_of(x));
        assert!(!y.is_subset_of(x));
        assert_eq!(x.len(), 2);
        assert!(Coalition::empty(4).is_empty());
        assert!(Coalition::full(4).is_full());
        assert_eq!(x.members().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn member_validation() {
        assert!(Coalition::from_members(3, [3]).is_err());
        assert!(Coalition::from_members(65, [0]).is_err());
        assert!(Coalition::from_mask(3, 0b1000).is_err());
        assert!(Coalition::from_mask(3, 0b101).is_ok());
    }

    #[test]
    fn full_ground_of_64_players() {
        let v = Coalition::full(64);
        assert_eq!(v.len(), 64);
        assert!(v.contains(63));
        assert_eq!(v.complement(), Coalition::empty(64));
    }

    #[test]
    fn display_uses_one_based_labels() {
        assert_eq!(alloc::format!("{}", c(4, &[0, 2])), "{1,3}");
        assert_eq!(alloc::format!("{}", Coalition::empty(4)), "{}");
    }

    #[test]
    fn witness_order_is_cardinality_then_lex() {
        // {1,4} must come before {2,3}: lexicographic on member tuples,
        // not numeric on masks.
        let order: Vec<Coalition> = subsets_in_witness_order(4).collect();
        assert_eq!(order.len(), 16);
        assert!(order[0].is_empty());
        assert!(order[15].is_full());
        let pos = |members: &[usize]| order.iter().position(|x| *x == c(4, members)).unwrap();
        assert!(pos(&[0, 3]) < pos(&[1, 2]));
        assert!(pos(&[3]) < pos(&[0, 1]));
        // within one cardinality the sequence is strictly lexicographic
        let pairs: Vec<Vec<usize>> = order
            .iter()
            .filter(|x| x.len() == 2)
            .map(|x| x.members().collect())
            .collect();
        for w in pairs.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::from_order(&[2, 0, 1]).is_ok());
        assert!(Permutation::from_order(&[2, 2, 1]).is_err());
        assert!(Permutation::from_order(&[3, 0, 1]).is_err());
        assert_eq!(alloc::format!("{}", Permutation::from_order(&[2, 1, 0]).unwrap()), "(3,2,1)");
    }

    #[test]
    fn permutation_enumeration_is_exhaustive() {
        let mut seen = Vec::new();
        for_each_permutation(3, |ord| seen.push(ord.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[5], vec![2, 1, 0]);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn partition_validation_and_canonical_order() {
        let p = Partition::new(vec![c(3, &[1]), c(3, &[0, 2])]).unwrap();
        assert_eq!(p.blocks()[0], c(3, &[0, 2]));
        assert_eq!(alloc::format!("{p}"), "{{1,3},{2}}");
        assert_eq!(p.max_block_size(), 2);
        assert!(Partition::new(vec![c(3, &[0, 1])]).is_err()); // missing player 2
        assert!(Partition::new(vec![c(3, &[0, 1]), c(3, &[1, 2])]).is_err()); // overlap
        assert!(Partition::new(vec![]).is_err());
    }

    #[test]
    fn refinement() {
        let fine = Partition::singletons(3);
        let coarse = Partition::new(vec![c(3, &[0, 2]), c(3, &[1])]).unwrap();
        assert!(fine.is_refinement_of(&coarse));
        assert!(coarse.is_refinement_of(&Partition::single_block(3)));
        assert!(!coarse.is_refinement_of(&fine));
        assert!(coarse.is_refinement_of(&coarse));
    }
}
