//! Entropy oracles and evaluation accounting.
//!
//! Every solver in this crate consumes entropy values through the [`Oracle`]
//! trait, so the concrete model can be swapped and every evaluation can be
//! charged to a named computation phase. Evaluations are the unit of cost
//! throughout; wall clock is measured only by the benchmark harness.
//!
//! Counting semantics: with memoization enabled, each phase charges one call
//! per *distinct* coalition it touches (repeats are free). With memoization
//! disabled, every call is charged.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::coalition::Coalition;
use crate::model::BitSourceModel;
use crate::rational::Rat;

/// Per-phase evaluation counter. Counts only ever increase.
#[derive(Clone, Debug, Default)]
pub struct OracleLedger {
    counts: BTreeMap<String, u64>,
}

impl OracleLedger {
    /// A ledger with no recorded calls.
    pub fn new() -> Self {
        Self::default()
    }

    /// Charges one call to `phase`.
    pub fn charge(&mut self, phase: &str) {
        *self.counts.entry(String::from(phase)).or_insert(0) += 1;
    }

    /// Calls charged to one phase.
    pub fn count(&self, phase: &str) -> u64 {
        self.counts.get(phase).copied().unwrap_or(0)
    }

    /// Total calls across all phases.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Phase labels and counts, sorted by label.
    pub fn entries(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Folds another ledger in; used to aggregate per-worker ledgers.
    pub fn merge(&mut self, other: &OracleLedger) {
        for (phase, n) in &other.counts {
            *self.counts.entry(phase.clone()).or_insert(0) += n;
        }
    }
}

/// A characteristic cost function evaluated one coalition at a time.
///
/// `entropy` is the single oracle call; the derived quantities below are
/// defined in terms of it and inherit its counting.
pub trait Oracle {
    /// Number of players in the ground set.
    fn ground_size(&self) -> usize;

    /// Evaluates `H(x)`.
    fn entropy(&mut self, x: Coalition) -> Rat;

    /// Total calls charged so far. Solvers report their own cost as the
    /// difference of this counter around their work.
    fn call_count(&self) -> u64;

    /// `H(V)`, the cost of the grand coalition.
    fn grand_entropy(&mut self) -> Rat {
        let v = Coalition::full(self.ground_size());
        self.entropy(v)
    }

    /// `H(X | Y) = H(X ∪ Y) − H(Y)`.
    fn conditional_entropy(&mut self, x: Coalition, y: Coalition) -> Rat {
        let joint = self.entropy(x.union(y));
        joint - self.entropy(y)
    }

    /// `I(X ∧ Y) = H(X) + H(Y) − H(X ∪ Y)`.
    fn mutual_information(&mut self, x: Coalition, y: Coalition) -> Rat {
        let hx = self.entropy(x);
        let hy = self.entropy(y);
        hx + hy - self.entropy(x.union(y))
    }

    /// The dual set function `H#(X) = H(V) − H(V \ X) = H(X | V \ X)`.
    fn dual_entropy(&mut self, x: Coalition) -> Rat {
        let grand = self.grand_entropy();
        grand - self.entropy(x.complement())
    }
}

/// The standard oracle over a [`BitSourceModel`], with per-phase memoization
/// and ledger accounting.
///
/// Not shareable across threads; parallel callers run one oracle per worker
/// and merge the ledgers afterwards.
pub struct EntropyOracle<'m> {
    model: &'m BitSourceModel,
    memoize: bool,
    memo: BTreeMap<u64, Rat>,
    phase: String,
    seen: BTreeMap<String, BTreeSet<u64>>,
    ledger: OracleLedger,
}

impl<'m> EntropyOracle<'m> {
    /// New oracle with memoization enabled, charging phase `"main"`.
    pub fn new(model: &'m BitSourceModel) -> Self {
        EntropyOracle {
            model,
            memoize: true,
            memo: BTreeMap::new(),
            phase: String::from("main"),
            seen: BTreeMap::new(),
            ledger: OracleLedger::new(),
        }
    }

    /// The backing model.
    pub fn model(&self) -> &BitSourceModel {
        self.model
    }

    /// Enables or disables memoization. The value cache survives toggling;
    /// only the charging rule changes.
    pub fn set_memoization(&mut self, on: bool) {
        self.memoize = on;
    }

    /// Switches the phase subsequent calls are charged to.
    pub fn set_phase(&mut self, label: &str) {
        self.phase = String::from(label);
    }

    /// Current phase label.
    pub fn phase(&self) -> &str {
        &self.phase
    }

    /// The evaluation ledger.
    pub fn ledger(&self) -> &OracleLedger {
        &self.ledger
    }

    /// Calls charged to one phase.
    pub fn calls_in_phase(&self, label: &str) -> u64 {
        self.ledger.count(label)
    }

    /// Number of distinct coalitions evaluated across all phases.
    pub fn distinct_coalitions(&self) -> u64 {
        let mut union: BTreeSet<u64> = BTreeSet::new();
        for set in self.seen.values() {
            union.extend(set.iter().copied());
        }
        union.len() as u64
    }
}

impl Oracle for EntropyOracle<'_> {
    fn ground_size(&self) -> usize {
        self.model.players()
    }

    fn entropy(&mut self, x: Coalition) -> Rat {
        assert_eq!(x.ground_size(), self.model.players());
        let mask = x.mask();
        let new_to_phase = self
            .seen
            .entry(self.phase.clone())
            .or_default()
            .insert(mask);
        if self.memoize {
            if new_to_phase {
                self.ledger.charge(&self.phase);
            }
            if let Some(v) = self.memo.get(&mask) {
                return v.clone();
            }
            let v = self.model.entropy(x);
            self.memo.insert(mask, v.clone());
            v
        } else {
            self.ledger.charge(&self.phase);
            self.model.entropy(x)
        }
    }

    fn call_count(&self) -> u64 {
        self.ledger.total()
    }
}

/// A view of a parent oracle restricted to one block, with local player
/// indices `0..|block|` mapped onto the block members in ascending order.
///
/// Evaluations are forwarded to (and charged on) the parent.
pub struct SubgameOracle<'a, O: Oracle + ?Sized> {
    parent: &'a mut O,
    members: Vec<usize>,
    parent_ground: usize,
}

impl<'a, O: Oracle + ?Sized> SubgameOracle<'a, O> {
    /// Restricts `parent` to the players of `block`.
    pub fn new(parent: &'a mut O, block: Coalition) -> Self {
        assert_eq!(block.ground_size(), parent.ground_size());
        assert!(!block.is_empty());
        let parent_ground = parent.ground_size();
        SubgameOracle { parent, members: block.members().collect(), parent_ground }
    }

    /// Global index of each local player.
    pub fn global_players(&self) -> &[usize] {
        &self.members
    }

    fn lift(&self, local: Coalition) -> Coalition {
        let mut out = Coalition::empty(self.parent_ground);
        for li in local.members() {
            out = out.with(self.members[li]);
        }
        out
    }
}

impl<O: Oracle + ?Sized> Oracle for SubgameOracle<'_, O> {
    fn ground_size(&self) -> usize {
        self.members.len()
    }

    fn entropy(&mut self, x: Coalition) -> Rat {
        let lifted = self.lift(x);
        self.parent.entropy(lifted)
    }

    fn call_count(&self) -> u64 {
        self.parent.call_count()
    }
}

/// A fully materialized entropy table, indexed by coalition mask.
///
/// Built once from any oracle; afterwards every evaluation is a table lookup.
/// The benchmark harness times Shapley computations against these so that
/// oracle cost stays out of the measured interval.
pub struct TableOracle {
    ground: usize,
    values: Vec<Rat>,
    lookups: u64,
}

impl TableOracle {
    /// Evaluates all `2^|V|` coalitions of `source` and stores the results.
    pub fn build<O: Oracle + ?Sized>(source: &mut O) -> Self {
        let ground = source.ground_size();
        assert!(ground < 64, "table construction needs 2^|V| entries");
        let size = 1usize << ground;
        let mut values = Vec::with_capacity(size);
        for mask in 0..size as u64 {
            values.push(source.entropy(Coalition::from_mask_unchecked(ground, mask)));
        }
        TableOracle { ground, values, lookups: 0 }
    }

    /// A read-only view restricted to `block`, with its own call counter.
    /// Views borrow the table immutably, so they can run on separate threads.
    pub fn view(&self, block: Coalition) -> TableView<'_> {
        assert_eq!(block.ground_size(), self.ground);
        TableView {
            values: &self.values,
            members: block.members().collect(),
            lookups: 0,
        }
    }

    /// A view over the whole ground set.
    pub fn view_full(&self) -> TableView<'_> {
        self.view(Coalition::full(self.ground))
    }
}

impl Oracle for TableOracle {
    fn ground_size(&self) -> usize {
        self.ground
    }

    fn entropy(&mut self, x: Coalition) -> Rat {
        assert_eq!(x.ground_size(), self.ground);
        self.lookups += 1;
        self.values[x.mask() as usize].clone()
    }

    fn call_count(&self) -> u64 {
        self.lookups
    }
}

/// Borrowed slice of a [`TableOracle`] restricted to a block.
pub struct TableView<'t> {
    values: &'t [Rat],
    members: Vec<usize>,
    lookups: u64,
}

impl Oracle for TableView<'_> {
    fn ground_size(&self) -> usize {
        self.members.len()
    }

    fn entropy(&mut self, x: Coalition) -> Rat {
        assert_eq!(x.ground_size(), self.members.len());
        let mut mask = 0u64;
        for li in x.members() {
            mask |= 1u64 << self.members[li];
        }
        self.lookups += 1;
        self.values[mask as usize].clone()
    }

    fn call_count(&self) -> u64 {
        self.lookups
    }
}
