//! Geometry of the achievable region.
//!
//! Three equivalent descriptions of the same set of rate vectors are
//! checked here: the achievability lower bounds `r(X) ≥ H(X | V \ X)`, the
//! core upper bounds `r(X) ≤ H(X)`, and the dual lower bounds
//! `r(X) ≥ H#(X)`, each together with the total-rate equality
//! `r(V) = H(V)`. Membership verdicts of the three forms agree on every
//! input; the property tests pin that down.
//!
//! Extreme points of the region come from the greedy marginal rule: fix an
//! order of the players and give each its conditional entropy given the
//! players placed before it.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::caps::Caps;
use crate::coalition::{for_each_permutation, subsets_in_witness_order, Coalition, Permutation};
use crate::error::Result;
use crate::oracle::Oracle;
use crate::rate::RateVector;
use crate::rational::Rat;

/// Which inequality family to check against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundForm {
    /// `r(X) ≥ H(X | V \ X)` for all proper `X`.
    SlepianWolf,
    /// `r(X) ≤ H(X)` for all proper `X`.
    Core,
    /// `r(X) ≥ H#(X)` for all proper `X`.
    DualBase,
}

/// How the total rate is constrained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumRateMode {
    /// `r(V) = H(V)`: the perfect-compression form all guarantees are stated for.
    Exact,
    /// `r(V) ≥ H(V)`: admits redundancy. Decomposition results do not carry
    /// over to this relaxation; it is offered for exploration only.
    AtLeast,
}

/// The first violated constraint, in deterministic enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// The coalition whose constraint failed.
    pub coalition: Coalition,
    /// The bound the constraint imposes.
    pub bound: Rat,
    /// The sum-rate actually achieved on that coalition.
    pub actual: Rat,
}

/// Outcome of a membership check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    /// Whether every constraint holds.
    pub is_member: bool,
    /// First failed constraint (cardinality, then lexicographic order).
    pub violation: Option<Violation>,
    /// Coalitions with `r(X) = H(X)`, populated only for members. Always
    /// contains the grand coalition then.
    pub tight_sets: Vec<Coalition>,
}

/// Checks `rates` against one description of the achievable region.
///
/// Subsets are enumerated in increasing cardinality and lexicographic order
/// within a cardinality, so the reported violation is deterministic. The
/// grand coalition is handled last, by the sum-rate rule.
pub fn check_membership<O: Oracle + ?Sized>(
    oracle: &mut O,
    rates: &RateVector,
    form: BoundForm,
    mode: SumRateMode,
    caps: Caps,
) -> Result<MembershipReport> {
    let n = oracle.ground_size();
    assert_eq!(rates.len(), n, "rate vector over a different ground set");
    caps.ensure_subset(n)?;

    let violated = |coalition, bound, actual| MembershipReport {
        is_member: false,
        violation: Some(Violation { coalition, bound, actual }),
        tight_sets: Vec::new(),
    };

    for x in subsets_in_witness_order(n) {
        if x.is_full() {
            break;
        }
        let actual = rates.sum_over(x);
        let bound = match form {
            BoundForm::SlepianWolf => oracle.conditional_entropy(x, x.complement()),
            BoundForm::Core => oracle.entropy(x),
            BoundForm::DualBase => oracle.dual_entropy(x),
        };
        let ok = match form {
            BoundForm::Core => actual <= bound,
            BoundForm::SlepianWolf | BoundForm::DualBase => actual >= bound,
        };
        if !ok {
            return Ok(violated(x, bound, actual));
        }
    }

    let grand = oracle.grand_entropy();
    let total = rates.total();
    let sum_ok = match mode {
        SumRateMode::Exact => total == grand,
        SumRateMode::AtLeast => total >= grand,
    };
    if !sum_ok {
        return Ok(violated(Coalition::full(n), grand, total));
    }

    let tight_sets = subsets_in_witness_order(n)
        .filter(|&x| rates.sum_over(x) == oracle.entropy(x))
        .collect();
    Ok(MembershipReport { is_member: true, violation: None, tight_sets })
}

/// Membership in the achievability form: all `2^|V| − 1` lower bounds plus
/// the exact sum-rate.
pub fn check_slepian_wolf<O: Oracle + ?Sized>(
    oracle: &mut O,
    rates: &RateVector,
    caps: Caps,
) -> Result<MembershipReport> {
    check_membership(oracle, rates, BoundForm::SlepianWolf, SumRateMode::Exact, caps)
}

/// Membership in the core / base-polyhedron form.
pub fn check_core<O: Oracle + ?Sized>(
    oracle: &mut O,
    rates: &RateVector,
    caps: Caps,
) -> Result<MembershipReport> {
    check_membership(oracle, rates, BoundForm::Core, SumRateMode::Exact, caps)
}

/// Membership against the dual set function.
pub fn check_dual_base<O: Oracle + ?Sized>(
    oracle: &mut O,
    rates: &RateVector,
    caps: Caps,
) -> Result<MembershipReport> {
    check_membership(oracle, rates, BoundForm::DualBase, SumRateMode::Exact, caps)
}

pub(crate) fn greedy_marginals<O: Oracle + ?Sized>(oracle: &mut O, order: &[usize]) -> RateVector {
    let n = oracle.ground_size();
    debug_assert_eq!(order.len(), n);
    let mut rates = alloc::vec![Rat::zero(); n];
    let mut prefix = Coalition::empty(n);
    let mut prev = Rat::zero();
    for &p in order {
        prefix = prefix.with(p);
        let h = oracle.entropy(prefix);
        rates[p] = &h - &prev;
        prev = h;
    }
    RateVector::new(rates)
}

/// The greedy marginal vector for one ordering of the players:
/// `r_{φ_i} = H({φ_1, …, φ_i}) − H({φ_1, …, φ_{i−1}})`.
///
/// The result is an extreme point of the achievable region and sums to
/// `H(V)` exactly.
pub fn edmonds_greedy<O: Oracle + ?Sized>(oracle: &mut O, perm: &Permutation) -> RateVector {
    assert_eq!(perm.len(), oracle.ground_size(), "permutation over a different ground set");
    let order: Vec<usize> = perm.iter().collect();
    greedy_marginals(oracle, &order)
}

/// All extreme points of the achievable region, with the ordering that
/// produced each one.
#[derive(Clone, Debug)]
pub struct ExtremePointSet {
    points: Vec<RateVector>,
    by_permutation: BTreeMap<Permutation, usize>,
}

impl ExtremePointSet {
    /// Deduplicated extreme points in ascending coordinate order.
    pub fn points(&self) -> &[RateVector] {
        &self.points
    }

    /// Number of distinct extreme points.
    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    /// The marginal vector a specific ordering produced.
    pub fn vector_for(&self, perm: &Permutation) -> Option<&RateVector> {
        self.by_permutation.get(perm).map(|&i| &self.points[i])
    }

    /// All (ordering, point-index) associations.
    pub fn by_permutation(&self) -> &BTreeMap<Permutation, usize> {
        &self.by_permutation
    }

    /// Arithmetic mean of the deduplicated points.
    pub fn mean(&self) -> RateVector {
        let n = self.points[0].len();
        let mut sum = RateVector::zeros(n);
        for p in &self.points {
            sum.add_assign(p);
        }
        sum.div_big(&num_bigint::BigInt::from(self.points.len()))
    }
}

/// Runs the greedy rule for every ordering of the players and collects the
/// distinct results.
pub fn enumerate_extreme_points<O: Oracle + ?Sized>(
    oracle: &mut O,
    caps: Caps,
) -> Result<ExtremePointSet> {
    let n = oracle.ground_size();
    caps.ensure_perm(n)?;

    let mut dedup: BTreeMap<RateVector, Vec<Permutation>> = BTreeMap::new();
    for_each_permutation(n, |order| {
        let v = greedy_marginals(oracle, order);
        dedup.entry(v).or_default().push(Permutation::from_positions(order));
    });

    let mut points = Vec::with_capacity(dedup.len());
    let mut by_permutation = BTreeMap::new();
    for (idx, (point, perms)) in dedup.into_iter().enumerate() {
        for perm in perms {
            by_permutation.insert(perm, idx);
        }
        points.push(point);
    }
    Ok(ExtremePointSet { points, by_permutation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::GameError;
    use crate::model::testmodels::{coupled3, independent3, overlap3, two_terminal};
    use crate::oracle::EntropyOracle;
    use crate::rational::rat;
    use alloc::vec;

    fn coal(ground: usize, members: &[usize]) -> Coalition {
        Coalition::from_members(ground, members.iter().copied()).unwrap()
    }

    fn rv(parts: &[(i64, i64)]) -> RateVector {
        parts.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn achievability_check_accepts_known_points() {
        let m = overlap3();
        let mut o = EntropyOracle::new(&m);
        let r = rv(&[(1, 1), (9, 5), (2, 1)]);
        assert!(check_slepian_wolf(&mut o, &r, Caps::default()).unwrap().is_member);
        let shapley = rv(&[(53, 20), (9, 10), (5, 4)]);
        assert!(check_slepian_wolf(&mut o, &shapley, Caps::default()).unwrap().is_member);
    }

    #[test]
    fn achievability_check_reports_first_violation() {
        let m = overlap3();
        let mut o = EntropyOracle::new(&m);
        let report = check_slepian_wolf(&mut o, &RateVector::zeros(3), Caps::default()).unwrap();
        assert!(!report.is_member);
        let v = report.violation.unwrap();
        assert_eq!(v.coalition, coal(3, &[0]));
        assert_eq!(v.bound, rat(1, 1));
        assert_eq!(v.actual, Rat::zero());
    }

    #[test]
    fn core_check_matches_upper_bounds() {
        let m = overlap3();
        let mut o = EntropyOracle::new(&m);
        assert!(check_core(&mut o, &rv(&[(1, 1), (9, 5), (2, 1)]), Caps::default())
            .unwrap()
            .is_member);

        // too much rate on player 1: first upper bound broken at {1}
        let report = check_core(&mut o, &rv(&[(24, 5), (0, 1), (0, 1)]), Caps::default()).unwrap();
        assert!(!report.is_member);
        let v = report.violation.unwrap();
        assert_eq!(v.coalition, coal(3, &[0]));
        assert_eq!(v.bound, rat(43, 10));
        assert_eq!(v.actual, rat(24, 5));
    }

    #[test]
    fn independent_sources_have_a_singleton_region() {
        let m = independent3();
        let mut o = EntropyOracle::new(&m);
        let report =
            check_core(&mut o, &rv(&[(1, 1), (1, 1), (1, 1)]), Caps::default()).unwrap();
        assert!(report.is_member);
        // every constraint is tight at the unique point
        assert_eq!(report.tight_sets.len(), 8);
    }

    #[test]
    fn dual_check_on_two_terminals() {
        let m = two_terminal();
        let mut o = EntropyOracle::new(&m);
        assert!(check_dual_base(&mut o, &rv(&[(4, 1), (3, 1)]), Caps::default())
            .unwrap()
            .is_member);
        assert!(check_dual_base(&mut o, &rv(&[(1, 1), (6, 1)]), Caps::default())
            .unwrap()
            .is_member);
        assert!(!check_dual_base(&mut o, &rv(&[(0, 1), (0, 1)]), Caps::default())
            .unwrap()
            .is_member);
    }

    #[test]
    fn relaxed_sum_rate_admits_redundancy() {
        let m = two_terminal();
        let mut o = EntropyOracle::new(&m);
        let r = rv(&[(4, 1), (4, 1)]);
        assert!(!check_dual_base(&mut o, &r, Caps::default()).unwrap().is_member);
        let relaxed = check_membership(
            &mut o,
            &r,
            BoundForm::DualBase,
            SumRateMode::AtLeast,
            Caps::default(),
        )
        .unwrap();
        assert!(relaxed.is_member);
    }

    #[test]
    fn greedy_marginal_vectors() {
        let m = overlap3();
        let mut o = EntropyOracle::new(&m);
        let perm = Permutation::from_order(&[1, 2, 0]).unwrap();
        assert_eq!(edmonds_greedy(&mut o, &perm), rv(&[(1, 1), (9, 5), (2, 1)]));

        let c = coupled3();
        let mut oc = EntropyOracle::new(&c);
        let perm = Permutation::from_order(&[2, 1, 0]).unwrap();
        assert_eq!(edmonds_greedy(&mut oc, &perm), rv(&[(1, 1), (1, 1), (8, 5)]));

        let single = crate::model::BitSourceModel::new(&[("a", rat(7, 2))], &[&["a"]]).unwrap();
        let mut os = EntropyOracle::new(&single);
        assert_eq!(
            edmonds_greedy(&mut os, &Permutation::identity(1)),
            rv(&[(7, 2)])
        );
    }

    #[test]
    fn greedy_outputs_sum_to_grand_entropy() {
        let m = overlap3();
        let mut o = EntropyOracle::new(&m);
        for_each_permutation(3, |order| {
            let r = greedy_marginals(&mut o, order);
            assert_eq!(r.total(), rat(24, 5));
        });
    }

    #[test]
    fn extreme_points_of_the_overlapping_fixture() {
        let m = overlap3();
        let mut o = EntropyOracle::new(&m);
        let ex = enumerate_extreme_points(&mut o, Caps::default()).unwrap();
        let expected: Vec<RateVector> = vec![
            rv(&[(43, 10), (1, 2), (0, 1)]),
            rv(&[(43, 10), (0, 1), (1, 2)]),
            rv(&[(3, 1), (9, 5), (0, 1)]),
            rv(&[(1, 1), (9, 5), (2, 1)]),
            rv(&[(23, 10), (0, 1), (5, 2)]),
            rv(&[(1, 1), (13, 10), (5, 2)]),
        ];
        assert_eq!(ex.point_count(), 6);
        for p in &expected {
            assert!(ex.points().contains(p), "missing extreme point {p}");
        }
        // the ordering (2,3,1) maps to its marginal vector
        let perm = Permutation::from_order(&[1, 2, 0]).unwrap();
        assert_eq!(ex.vector_for(&perm), Some(&rv(&[(1, 1), (9, 5), (2, 1)])));
    }

    #[test]
    fn extreme_points_collapse_for_independent_sources() {
        let m = independent3();
        let mut o = EntropyOracle::new(&m);
        let ex = enumerate_extreme_points(&mut o, Caps::default()).unwrap();
        assert_eq!(ex.points(), &[rv(&[(1, 1), (1, 1), (1, 1)])]);
    }

    #[test]
    fn extreme_points_of_the_coupled_fixture() {
        let m = coupled3();
        let mut o = EntropyOracle::new(&m);
        let ex = enumerate_extreme_points(&mut o, Caps::default()).unwrap();
        assert_eq!(ex.point_count(), 2);
        assert!(ex.points().contains(&rv(&[(2, 1), (1, 1), (3, 5)])));
        assert!(ex.points().contains(&rv(&[(1, 1), (1, 1), (8, 5)])));
    }

    #[test]
    fn extreme_points_of_two_terminals() {
        let m = two_terminal();
        let mut o = EntropyOracle::new(&m);
        let ex = enumerate_extreme_points(&mut o, Caps::default()).unwrap();
        assert_eq!(ex.point_count(), 2);
        assert!(ex.points().contains(&rv(&[(4, 1), (3, 1)])));
        assert!(ex.points().contains(&rv(&[(1, 1), (6, 1)])));
        assert_eq!(ex.mean(), rv(&[(5, 2), (9, 2)]));
    }

    #[test]
    fn caps_guard_exhaustive_enumeration() {
        let m = overlap3();
        let mut o = EntropyOracle::new(&m);
        let err = enumerate_extreme_points(&mut o, Caps { subset: 24, perm: 2 }).unwrap_err();
        assert!(matches!(err, GameError::CapExceeded { .. }));
        let err =
            check_core(&mut o, &RateVector::zeros(3), Caps { subset: 2, perm: 9 }).unwrap_err();
        assert!(matches!(err, GameError::CapExceeded { .. }));
    }
}
