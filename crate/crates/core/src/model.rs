//! The concrete entropy model: independent weighted bits with an
//! observation map.
//!
//! Each source is a tuple of independent random bits. Bit `b` carries an
//! entropy weight `w(b) >= 0`, and the joint entropy of a coalition `X` is
//! the total weight of the bits observed by at least one member of `X`.
//! This coverage form is normalized, monotone and submodular, so it induces
//! a polymatroid rank function, and all values stay exact rationals.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::coalition::{Coalition, MAX_GROUND_SIZE};
use crate::error::{GameError, Result};
use crate::rational::Rat;

/// One independent random bit of the joint source.
#[derive(Clone, PartialEq, Eq)]
pub struct SourceBit {
    id: String,
    weight: Rat,
    observers: Coalition,
}

impl SourceBit {
    /// Identifier from the instance definition.
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Entropy carried by this bit.
    pub fn weight(&self) -> &Rat {
        &self.weight
    }

    /// Players observing this bit.
    pub fn observers(&self) -> Coalition {
        self.observers
    }
}

impl fmt::Debug for SourceBit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]@{}", self.id, self.weight, self.observers)
    }
}

/// Ground set of players plus the weighted bits they observe.
///
/// Immutable after construction and safe to share across threads.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitSourceModel {
    players: usize,
    bits: Vec<SourceBit>,
}

impl BitSourceModel {
    /// Builds a model from per-player observation lists.
    ///
    /// `observes[i]` names the bits player `i` observes; its length fixes the
    /// ground-set size. Bit ids must be unique, weights nonnegative, and
    /// every referenced id declared.
    pub fn new(bits: &[(&str, Rat)], observes: &[&[&str]]) -> Result<Self> {
        let owned_bits = bits.iter().map(|(id, w)| (String::from(*id), w.clone())).collect();
        let owned_obs = observes
            .iter()
            .map(|ids| ids.iter().map(|s| String::from(*s)).collect())
            .collect();
        Self::from_owned(owned_bits, owned_obs)
    }

    /// Owned-data constructor used by generators and file loaders.
    pub fn from_owned(bits: Vec<(String, Rat)>, observes: Vec<Vec<String>>) -> Result<Self> {
        let model = Self::from_owned_unchecked_weights(bits, observes)?;
        if let Some(bad) = model.bits.iter().find(|b| b.weight.is_negative()) {
            return Err(GameError::NegativeWeight(bad.id.clone()));
        }
        Ok(model)
    }

    /// Like [`Self::from_owned`] but admits negative weights.
    ///
    /// Such a model violates the type's own invariant; it exists so that
    /// [`crate::polymatroid::verify_polymatroid`] can be exercised against
    /// inputs that fail monotonicity.
    pub fn from_owned_unchecked_weights(
        bits: Vec<(String, Rat)>,
        observes: Vec<Vec<String>>,
    ) -> Result<Self> {
        let players = observes.len();
        if players == 0 {
            return Err(GameError::EmptyGroundSet);
        }
        if players > MAX_GROUND_SIZE {
            return Err(GameError::GroundTooLarge { requested: players, max: MAX_GROUND_SIZE });
        }
        let mut out: Vec<SourceBit> = Vec::with_capacity(bits.len());
        for (id, weight) in bits {
            if out.iter().any(|b| b.id == id) {
                return Err(GameError::DuplicateBit(id));
            }
            out.push(SourceBit { id, weight, observers: Coalition::empty(players) });
        }
        for (player, ids) in observes.into_iter().enumerate() {
            for id in ids {
                let bit = out
                    .iter_mut()
                    .find(|b| b.id == id)
                    .ok_or_else(|| GameError::UnknownBit(id.clone()))?;
                bit.observers = bit.observers.with(player);
            }
        }
        Ok(BitSourceModel { players, bits: out })
    }

    /// Number of players `|V|`.
    pub fn players(&self) -> usize {
        self.players
    }

    /// The declared bits, in declaration order.
    pub fn bits(&self) -> &[SourceBit] {
        &self.bits
    }

    /// Joint entropy of the sources observed by `x`: the total weight of
    /// bits seen by at least one member.
    pub fn entropy(&self, x: Coalition) -> Rat {
        assert_eq!(x.ground_size(), self.players, "coalition over a different ground set");
        let mut total = Rat::zero();
        for bit in &self.bits {
            if bit.observers.intersects(x) {
                total += &bit.weight;
            }
        }
        total
    }

    /// Bit ids observed by one player, in declaration order.
    pub fn observed_ids(&self, player: usize) -> Vec<&str> {
        self.bits
            .iter()
            .filter(|b| b.observers.contains(player))
            .map(|b| b.id.as_str())
            .collect()
    }

    /// A copy with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: &Rat) -> Self {
        BitSourceModel {
            players: self.players,
            bits: self
                .bits
                .iter()
                .map(|b| SourceBit {
                    id: b.id.clone(),
                    weight: &b.weight * factor,
                    observers: b.observers,
                })
                .collect(),
        }
    }

    /// Restricts the model to the players of `block`.
    ///
    /// Players are reindexed to `0..|block|` in ascending order of their
    /// global index; the returned wrapper keeps the reverse map. Bits
    /// observed by nobody in `block` are dropped: the restricted entropy of
    /// any `X ⊆ block` equals the original entropy of `X`.
    pub fn restrict(&self, block: Coalition) -> Result<RestrictedModel> {
        assert_eq!(block.ground_size(), self.players);
        if block.is_empty() {
            return Err(GameError::EmptyCoalition);
        }
        let global_players: Vec<usize> = block.members().collect();
        let local = global_players.len();
        let bits = self
            .bits
            .iter()
            .filter(|b| b.observers.intersects(block))
            .map(|b| {
                let mut observers = Coalition::empty(local);
                for (li, &gi) in global_players.iter().enumerate() {
                    if b.observers.contains(gi) {
                        observers = observers.with(li);
                    }
                }
                SourceBit { id: b.id.clone(), weight: b.weight.clone(), observers }
            })
            .collect();
        Ok(RestrictedModel {
            model: BitSourceModel { players: local, bits },
            global_players,
        })
    }
}

/// A model restricted to a block, with the local-to-global index map.
#[derive(Clone, Debug)]
pub struct RestrictedModel {
    model: BitSourceModel,
    global_players: Vec<usize>,
}

impl RestrictedModel {
    /// The reindexed model over the block's players.
    pub fn model(&self) -> &BitSourceModel {
        &self.model
    }

    /// Global index of each local player, ascending.
    pub fn global_players(&self) -> &[usize] {
        &self.global_players
    }

    /// Translates a local coalition back to global indices.
    pub fn lift(&self, local: Coalition, global_ground: usize) -> Coalition {
        assert_eq!(local.ground_size(), self.global_players.len());
        let mut out = Coalition::empty(global_ground);
        for li in local.members() {
            out = out.with(self.global_players[li]);
        }
        out
    }
}

#[cfg(test)]
pub(crate) mod testmodels {
    use super::*;
    use crate::rational::rat;

    /// Three users over six shared bits; the standing dependent fixture.
    /// H values: {1}=43/10, {2}=9/5, {3}=5/2, {1,2}={1,3}={1,2,3}=24/5, {2,3}=19/5.
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

    /// Users 1 and 3 coupled through bit `b`; user 2 independent.
    /// H values: {1}=2, {2}=1, {3}=8/5, {1,3}=13/5, V=18/5.
    pub fn coupled3() -> BitSourceModel {
        BitSourceModel::new(
            &[("a", rat(1, 1)), ("b", rat(1, 1)), ("c", rat(3, 5)), ("d", rat(1, 1))],
            &[&["a", "b"], &["d"], &["b", "c"]],
        )
        .unwrap()
    }

    /// Two terminals with H({1})=4, H({2})=6, H({1,2})=7.
    pub fn two_terminal() -> BitSourceModel {
        BitSourceModel::new(
            &[("s", rat(3, 1)), ("u", rat(1, 1)), ("v", rat(3, 1))],
            &[&["s", "u"], &["s", "v"]],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testmodels::*;
    use super::*;
    use crate::rational::rat;
    use alloc::vec;

    fn coal(ground: usize, members: &[usize]) -> Coalition {
        Coalition::from_members(ground, members.iter().copied()).unwrap()
    }

    #[test]
    fn entropy_of_overlapping_fixture() {
        let m = overlap3();
        assert_eq!(m.entropy(Coalition::empty(3)), Rat::zero());
        assert_eq!(m.entropy(coal(3, &[0])), rat(43, 10));
        assert_eq!(m.entropy(coal(3, &[1])), rat(9, 5));
        assert_eq!(m.entropy(coal(3, &[2])), rat(5, 2));
        assert_eq!(m.entropy(coal(3, &[1, 2])), rat(19, 5));
        assert_eq!(m.entropy(coal(3, &[0, 1])), rat(24, 5));
        assert_eq!(m.entropy(coal(3, &[0, 2])), rat(24, 5));
        assert_eq!(m.entropy(Coalition::full(3)), rat(24, 5));
    }

    #[test]
    fn entropy_of_coupled_fixture() {
        let m = coupled3();
        assert_eq!(m.entropy(coal(3, &[0])), rat(2, 1));
        assert_eq!(m.entropy(coal(3, &[2])), rat(8, 5));
        assert_eq!(m.entropy(coal(3, &[0, 2])), rat(13, 5));
        assert_eq!(m.entropy(Coalition::full(3)), rat(18, 5));
    }

    #[test]
    fn validation_errors() {
        let dup = BitSourceModel::new(&[("a", rat(1, 1)), ("a", rat(1, 2))], &[&["a"]]);
        assert_eq!(dup, Err(GameError::DuplicateBit(String::from("a"))));

        let unknown = BitSourceModel::new(&[("a", rat(1, 1))], &[&["a", "z"]]);
        assert_eq!(unknown, Err(GameError::UnknownBit(String::from("z"))));

        let negative = BitSourceModel::new(&[("a", rat(-1, 2))], &[&["a"]]);
        assert_eq!(negative, Err(GameError::NegativeWeight(String::from("a"))));

        assert_eq!(
            BitSourceModel::from_owned(vec![], vec![]),
            Err(GameError::EmptyGroundSet)
        );
    }

    #[test]
    fn unchecked_constructor_admits_negative_weights() {
        let m = BitSourceModel::from_owned_unchecked_weights(
            vec![(String::from("a"), rat(-1, 1))],
            vec![vec![String::from("a")]],
        )
        .unwrap();
        assert_eq!(m.entropy(Coalition::full(1)), rat(-1, 1));
    }

    #[test]
    fn restrict_keeps_entropy_values() {
        let m = coupled3();
        let r = m.restrict(coal(3, &[0, 2])).unwrap();
        assert_eq!(r.global_players(), &[0, 2]);
        let sub = r.model();
        assert_eq!(sub.players(), 2);
        assert_eq!(sub.entropy(coal(2, &[0])), rat(2, 1));
        assert_eq!(sub.entropy(coal(2, &[1])), rat(8, 5));
        assert_eq!(sub.entropy(Coalition::full(2)), rat(13, 5));
        assert_eq!(r.lift(coal(2, &[1]), 3), coal(3, &[2]));

        // restriction to a singleton of the overlapping fixture
        let m1 = overlap3();
        let r1 = m1.restrict(coal(3, &[1])).unwrap();
        assert_eq!(r1.model().entropy(Coalition::full(1)), rat(9, 5));
    }

    #[test]
    fn restrict_to_full_ground_is_identity_on_entropy() {
        let m = overlap3();
        let r = m.restrict(Coalition::full(3)).unwrap();
        for mask in 0..8u64 {
            let x = Coalition::from_mask(3, mask).unwrap();
            assert_eq!(r.model().entropy(x), m.entropy(x));
        }
        assert!(m.restrict(Coalition::empty(3)).is_err());
    }

    #[test]
    fn scaling_multiplies_every_entropy() {
        let m = coupled3();
        let s = m.scaled(&rat(5, 18)); // brings the total to 1
        assert_eq!(s.entropy(Coalition::full(3)), Rat::one());
        assert_eq!(s.entropy(coal(3, &[1])), rat(5, 18));
    }
}
