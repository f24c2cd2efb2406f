//! Fair rate allocation for multiterminal lossless source coding, computed
//! exactly through a coalitional-game lens.
//!
//! A set of terminals jointly observes correlated sources and must encode
//! them separately so a sink can reconstruct everything. The achievable
//! rate region is cut out by conditional-entropy lower bounds together with
//! a total-rate equality; the same region is the core of a convex game
//! whose characteristic cost is the entropy function. This crate models
//! sources as independent weighted bits (which makes the entropy function
//! an exactly computable polymatroid rank function) and provides:
//!
//! * exact rational arithmetic end to end — membership and tightness tests
//!   never touch floating point ([`rational`]);
//! * the achievable-region geometry: membership checks in three equivalent
//!   forms, greedy extreme points, full extreme-point enumeration
//!   ([`polyhedron`]);
//! * Shapley value solvers: the direct weighted-marginal formula, the
//!   all-permutations average, and a seeded sampling estimator
//!   ([`shapley`]);
//! * decomposition: detecting mutually independent source groups in
//!   `O(|V|²)` oracle calls and solving each subgame separately, which cuts
//!   the `2^|V|` cost down to the largest group ([`decompose`]);
//! * seeded random instance generators for experiments ([`gen`]).
//!
//! Entropy values flow through the [`oracle::Oracle`] trait, and every
//! evaluation is charged to a named phase on a ledger, so solvers report
//! their oracle complexity as measured, not estimated.
//!
//! The crate is `no_std` (with `alloc`); everything that needs an operating
//! system — files, clocks, threads — lives in the companion CLI crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
#![warn(rust_2018_idioms)]

extern crate alloc;

pub mod caps;
pub mod coalition;
pub mod decompose;
pub mod error;
pub mod gen;
pub mod model;
pub mod oracle;
pub mod polyhedron;
pub mod polymatroid;
pub mod rate;
pub mod rational;
pub mod shapley;

pub use caps::Caps;
pub use coalition::{Coalition, Partition, Permutation, MAX_GROUND_SIZE};
pub use decompose::{
    core_dimension, direct_sum, finest_decomposer, is_decomposer, shapley_decomposed,
    DecomposedShapley, DecomposerResult,
};
pub use error::{CapKind, GameError, Result};
pub use gen::{generate_decomposable, generate_indecomposable, BlockCount, GenSpec,
    GeneratedInstance};
pub use model::{BitSourceModel, RestrictedModel, SourceBit};
pub use oracle::{EntropyOracle, Oracle, OracleLedger, SubgameOracle, TableOracle, TableView};
pub use polyhedron::{
    check_core, check_dual_base, check_membership, check_slepian_wolf, edmonds_greedy,
    enumerate_extreme_points, BoundForm, ExtremePointSet, MembershipReport, SumRateMode,
    Violation,
};
pub use polymatroid::{verify_polymatroid, PolymatroidReport, PolymatroidViolation};
pub use rate::RateVector;
pub use rational::Rat;
pub use shapley::{
    shapley_by_permutations, shapley_direct, shapley_sampled, ShapleyMethod, ShapleyResult,
};
