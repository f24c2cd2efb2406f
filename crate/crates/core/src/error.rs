//! Error types shared across the crate.

use alloc::string::String;
use core::fmt;

/// Which enumeration budget a refused operation would have exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapKind {
    /// Operations that enumerate all `2^|V|` coalitions.
    Subset,
    /// Operations that enumerate all `|V|!` permutations.
    Permutation,
}

/// Errors produced by model construction, geometry checks and solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameError {
    /// A player index fell outside the ground set.
    PlayerOutOfRange {
        /// The offending 0-based player index.
        player: usize,
        /// Number of players in the ground set.
        ground_size: usize,
    },
    /// Ground sets wider than the coalition bitmask cannot be represented.
    GroundTooLarge {
        /// Requested number of players.
        requested: usize,
        /// Hard representation limit.
        max: usize,
    },
    /// The ground set has no players.
    EmptyGroundSet,
    /// An exhaustive operation refused to run on a ground set this large.
    CapExceeded {
        /// Number of players the operation would have to enumerate over.
        ground_size: usize,
        /// The budget in effect.
        cap: usize,
        /// Which budget was exceeded.
        kind: CapKind,
    },
    /// A rational was constructed with a zero denominator.
    ZeroDenominator,
    /// Unparsable rational literal.
    MalformedRational(String),
    /// `observes` referenced a bit id that was never declared.
    UnknownBit(String),
    /// The same bit id was declared twice.
    DuplicateBit(String),
    /// A declared bit carries a negative weight.
    NegativeWeight(String),
    /// A permutation was not a bijection on the ground set.
    MalformedPermutation(String),
    /// Partition blocks were empty, overlapping, or did not cover the ground set.
    InvalidPartition(String),
    /// Direct-sum parts overlapped or did not cover the ground set.
    InvalidDirectSum(String),
    /// Restriction to the empty coalition is undefined.
    EmptyCoalition,
    /// Sampling requires at least one permutation.
    ZeroSamples,
    /// The generator spec cannot be satisfied.
    InfeasibleSpec(String),
    /// Instance generation kept failing its post-check.
    RetryBudgetExhausted,
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::PlayerOutOfRange { player, ground_size } => write!(
                f,
                "player index {player} out of range for ground set of {ground_size} players"
            ),
            GameError::GroundTooLarge { requested, max } => {
                write!(f, "ground set of {requested} players exceeds the supported maximum of {max}")
            }
            GameError::EmptyGroundSet => write!(f, "ground set must contain at least one player"),
            GameError::CapExceeded { ground_size, cap, kind } => {
                let what = match kind {
                    CapKind::Subset => "2^|V| subset enumeration",
                    CapKind::Permutation => "|V|! permutation enumeration",
                };
                write!(
                    f,
                    "{what} refused for {ground_size} players (cap {cap}); raise the cap explicitly to override"
                )
            }
            GameError::ZeroDenominator => write!(f, "rational denominator must be nonzero"),
            GameError::MalformedRational(s) => write!(f, "cannot parse rational from {s:?}"),
            GameError::UnknownBit(id) => write!(f, "observation references undeclared bit {id:?}"),
            GameError::DuplicateBit(id) => write!(f, "bit id {id:?} declared more than once"),
            GameError::NegativeWeight(id) => write!(f, "bit {id:?} has negative weight"),
            GameError::MalformedPermutation(s) => write!(f, "malformed permutation: {s}"),
            GameError::InvalidPartition(s) => write!(f, "invalid partition: {s}"),
            GameError::InvalidDirectSum(s) => write!(f, "invalid direct sum: {s}"),
            GameError::EmptyCoalition => write!(f, "operation undefined for the empty coalition"),
            GameError::ZeroSamples => write!(f, "sample count must be at least 1"),
            GameError::InfeasibleSpec(s) => write!(f, "infeasible generator spec: {s}"),
            GameError::RetryBudgetExhausted => {
                write!(f, "generator retry budget exhausted without a valid instance")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GameError {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, GameError>;
