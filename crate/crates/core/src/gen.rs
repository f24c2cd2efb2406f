//! Random instance generation.
//!
//! Decomposable instances are built by planting a partition: players are
//! split into blocks, every bit is observed only within one block (so the
//! blocks are mutually independent by construction), and consecutive
//! members of each block share a positive-weight bit, which keeps a block
//! from silently splitting further. Finally all weights are rescaled by one
//! rational factor so the total entropy hits the requested target exactly;
//! rescaling by a positive rational changes no tightness structure, so the
//! decomposers are preserved.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalition::{Coalition, Partition, Permutation};
use crate::error::{GameError, Result};
use crate::model::BitSourceModel;
use crate::oracle::EntropyOracle;
use crate::rational::Rat;

/// How many blocks to plant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockCount {
    /// Uniformly random in `2..=players` (1 for a single player).
    Random,
    /// Exactly this many blocks.
    Fixed(usize),
}

/// Parameters of one generated instance.
#[derive(Clone, Debug)]
pub struct GenSpec {
    /// Number of players.
    pub players: usize,
    /// Total entropy `H(V)` after rescaling; must be positive.
    pub target_total_entropy: Rat,
    /// Number of planted blocks.
    pub block_count: BlockCount,
    /// Inclusive range of extra random bits per block, on top of the
    /// connectivity chain every block gets.
    pub extra_bits_per_block: (usize, usize),
    /// Inclusive range the pre-rescale bit weights are drawn from; both ends
    /// must be positive.
    pub weight_range: (Rat, Rat),
    /// Largest denominator of a drawn weight.
    pub max_weight_denominator: u32,
    /// RNG seed; generation is a pure function of the spec.
    pub seed: u64,
}

impl GenSpec {
    /// A spec with the experiment defaults: total entropy 50, random block
    /// count, one to three extra bits per block, weights in `[1/2, 2]` with
    /// denominators up to 10.
    pub fn new(players: usize, seed: u64) -> Self {
        GenSpec {
            players,
            target_total_entropy: Rat::from_int(50),
            block_count: BlockCount::Random,
            extra_bits_per_block: (1, 3),
            weight_range: (Rat::new(1, 2).unwrap(), Rat::from_int(2)),
            max_weight_denominator: 10,
            seed,
        }
    }

    fn validate(&self) -> Result<Vec<i64>> {
        if self.players == 0 {
            return Err(GameError::EmptyGroundSet);
        }
        if self.players > crate::coalition::MAX_GROUND_SIZE {
            return Err(GameError::GroundTooLarge {
                requested: self.players,
                max: crate::coalition::MAX_GROUND_SIZE,
            });
        }
        if !self.target_total_entropy.is_positive() {
            return Err(GameError::InfeasibleSpec(String::from(
                "target total entropy must be positive",
            )));
        }
        if let BlockCount::Fixed(k) = self.block_count {
            if k == 0 || k > self.players {
                return Err(GameError::InfeasibleSpec(format!(
                    "cannot split {} players into {k} blocks",
                    self.players
                )));
            }
        }
        if self.extra_bits_per_block.0 > self.extra_bits_per_block.1 {
            return Err(GameError::InfeasibleSpec(String::from("empty extra-bit range")));
        }
        let (lo, hi) = &self.weight_range;
        if !lo.is_positive() || hi < lo {
            return Err(GameError::InfeasibleSpec(String::from(
                "weight range must be positive and nonempty",
            )));
        }
        if self.max_weight_denominator == 0 {
            return Err(GameError::InfeasibleSpec(String::from(
                "weight denominator bound must be at least 1",
            )));
        }
        // denominators that admit at least one numerator inside the range
        let feasible: Vec<i64> = (1..=self.max_weight_denominator as i64)
            .filter(|&d| {
                let lo_n = (lo * &Rat::from_int(d)).ceil_int();
                let hi_n = (hi * &Rat::from_int(d)).floor_int();
                matches!((lo_n, hi_n), (Some(a), Some(b)) if a <= b && b >= 1)
            })
            .collect();
        if feasible.is_empty() {
            return Err(GameError::InfeasibleSpec(String::from(
                "no positive rational with the given denominator bound lies in the weight range",
            )));
        }
        Ok(feasible)
    }
}

/// A generated model together with the partition it was built around.
#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    /// The instance itself, rescaled to the target total entropy.
    pub model: BitSourceModel,
    /// The planted partition. The finest decomposer refines it: every
    /// detected block lies inside one planted block.
    pub planted: Partition,
}

struct WeightSampler {
    feasible_denominators: Vec<i64>,
    lo: Rat,
    hi: Rat,
}

impl WeightSampler {
    fn draw(&self, rng: &mut ChaCha8Rng) -> Rat {
        let d = self.feasible_denominators[rng.gen_range(0..self.feasible_denominators.len())];
        let scale = Rat::from_int(d);
        let lo_n = (&self.lo * &scale).ceil_int().expect("validated range").max(1);
        let hi_n = (&self.hi * &scale).floor_int().expect("validated range");
        let n = rng.gen_range(lo_n..=hi_n);
        Rat::new(n, d).expect("nonzero denominator")
    }
}

struct Builder {
    bits: Vec<(String, Rat)>,
    observes: Vec<Vec<String>>,
    next_id: usize,
}

impl Builder {
    fn new(players: usize) -> Self {
        Builder { bits: Vec::new(), observes: alloc::vec![Vec::new(); players], next_id: 0 }
    }

    fn add_bit(&mut self, weight: Rat, observers: &[usize]) {
        let id = format!("b{}", self.next_id);
        self.next_id += 1;
        self.bits.push((id.clone(), weight));
        for &p in observers {
            self.observes[p].push(id.clone());
        }
    }

    fn finish(self, target: &Rat) -> Result<BitSourceModel> {
        let raw = BitSourceModel::from_owned(self.bits, self.observes)?;
        let total = raw.entropy(Coalition::full(raw.players()));
        debug_assert!(total.is_positive());
        Ok(raw.scaled(&(target / &total)))
    }
}

fn planted_blocks(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let n = spec.players;
    let k = match spec.block_count {
        BlockCount::Fixed(k) => k,
        BlockCount::Random => {
            if n == 1 {
                1
            } else {
                rng.gen_range(2..=n)
            }
        }
    };
    let mut order: Vec<u8> = (0..n as u8).collect();
    crate::coalition::shuffle(&mut order, rng);
    // k-1 distinct cut positions make a uniformly random composition
    let mut cuts: Vec<usize> = Vec::new();
    while cuts.len() < k - 1 {
        let c = rng.gen_range(1..n);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    cuts.push(n);
    let mut blocks = Vec::with_capacity(k);
    let mut start = 0;
    for cut in cuts {
        blocks.push(order[start..cut].iter().map(|&p| p as usize).collect());
        start = cut;
    }
    blocks
}

fn random_nonempty_subset(members: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    loop {
        let picked: Vec<usize> = members.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if !picked.is_empty() {
            return picked;
        }
    }
}

/// Generates a decomposable instance around a planted partition.
///
/// Within each block, consecutive members (in ascending order) share a
/// chain bit, size-one blocks get a private bit, and a few extra bits land
/// on random nonempty subsets of the block. Blocks share no bits, so every
/// planted partition with two or more blocks decomposes the game. The
/// output is a pure function of the spec.
pub fn generate_decomposable(spec: &GenSpec) -> Result<GeneratedInstance> {
    let feasible = spec.validate()?;
    let sampler = WeightSampler {
        feasible_denominators: feasible,
        lo: spec.weight_range.0.clone(),
        hi: spec.weight_range.1.clone(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let blocks = planted_blocks(spec, &mut rng);

    let mut builder = Builder::new(spec.players);
    for block in &blocks {
        let mut members = block.clone();
        members.sort_unstable();
        if members.len() == 1 {
            builder.add_bit(sampler.draw(&mut rng), &members);
        } else {
            for pair in members.windows(2) {
                builder.add_bit(sampler.draw(&mut rng), pair);
            }
        }
        let extra = rng.gen_range(spec.extra_bits_per_block.0..=spec.extra_bits_per_block.1);
        for _ in 0..extra {
            let observers = random_nonempty_subset(&members, &mut rng);
            builder.add_bit(sampler.draw(&mut rng), &observers);
        }
    }

    let model = builder.finish(&spec.target_total_entropy)?;
    let planted = Partition::new(
        blocks
            .iter()
            .map(|b| Coalition::from_members(spec.players, b.iter().copied()))
            .collect::<Result<Vec<_>>>()?,
    )?;
    Ok(GeneratedInstance { model, planted })
}

const INDECOMPOSABLE_RETRIES: usize = 8;

/// Generates an instance whose finest decomposer is `{V}`.
///
/// A chain of positive-weight shared bits spans all players in a random
/// order, which couples every split of the ground set; extra bits land on
/// random nonempty subsets of all players. The result is verified by
/// running the decomposer, regenerating on failure up to a bounded retry
/// count. Requires at least two players.
pub fn generate_indecomposable(spec: &GenSpec) -> Result<BitSourceModel> {
    if spec.players < 2 {
        return Err(GameError::InfeasibleSpec(String::from(
            "an indecomposable instance needs at least two players",
        )));
    }
    let feasible = spec.validate()?;
    let sampler = WeightSampler {
        feasible_denominators: feasible,
        lo: spec.weight_range.0.clone(),
        hi: spec.weight_range.1.clone(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let everyone: Vec<usize> = (0..spec.players).collect();

    for _ in 0..INDECOMPOSABLE_RETRIES {
        let mut order: Vec<u8> = (0..spec.players as u8).collect();
        crate::coalition::shuffle(&mut order, &mut rng);

        let mut builder = Builder::new(spec.players);
        for pair in order.windows(2) {
            let observers = [pair[0] as usize, pair[1] as usize];
            builder.add_bit(sampler.draw(&mut rng), &observers);
        }
        let extra = rng.gen_range(spec.extra_bits_per_block.0..=spec.extra_bits_per_block.1);
        for _ in 0..extra {
            let observers = random_nonempty_subset(&everyone, &mut rng);
            builder.add_bit(sampler.draw(&mut rng), &observers);
        }

        let model = builder.finish(&spec.target_total_entropy)?;
        let mut oracle = EntropyOracle::new(&model);
        let result =
            crate::decompose::finest_decomposer(&mut oracle, &Permutation::identity(spec.players));
        if !result.decomposable {
            return Ok(model);
        }
    }
    Err(GameError::RetryBudgetExhausted)
}
