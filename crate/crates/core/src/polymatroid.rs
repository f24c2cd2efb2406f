//! Exhaustive polymatroid verification for a model.

use alloc::vec::Vec;

use crate::caps::Caps;
use crate::coalition::Coalition;
use crate::error::Result;
use crate::model::BitSourceModel;
use crate::rational::Rat;

/// Why a model failed the polymatroid check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolymatroidViolation {
    /// `H(∅) ≠ 0`.
    NotNormalized {
        /// The offending value of `H(∅)`.
        value: Rat,
    },
    /// `H(smaller) > H(larger)` for `smaller ⊆ larger`.
    NotMonotone {
        /// The contained coalition.
        smaller: Coalition,
        /// Its superset.
        larger: Coalition,
        /// `H(smaller)`.
        smaller_value: Rat,
        /// `H(larger)`.
        larger_value: Rat,
    },
    /// `H(X) + H(Y) < H(X ∪ Y) + H(X ∩ Y)` for the witnessing pair.
    NotSubmodular {
        /// First coalition of the witness pair.
        x: Coalition,
        /// Second coalition of the witness pair.
        y: Coalition,
        /// `H(X) + H(Y)`.
        lhs: Rat,
        /// `H(X ∪ Y) + H(X ∩ Y)`.
        rhs: Rat,
    },
}

/// Outcome of [`verify_polymatroid`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolymatroidReport {
    /// Whether all three conditions hold over all pairs of coalitions.
    pub is_polymatroid: bool,
    /// A witnessing violation when `is_polymatroid` is false.
    pub violation: Option<PolymatroidViolation>,
}

/// Checks that the model's entropy is normalized, monotone and submodular
/// over the whole subset lattice.
///
/// Monotonicity and submodularity are verified through their single-element
/// forms — `H(X) ≤ H(X ∪ {i})`, and `H(X ∪ {i}) + H(X ∪ {j}) ≥
/// H(X ∪ {i,j}) + H(X)` for all `X` and `i ≠ j` outside `X` — which hold
/// exactly when the unrestricted pairwise conditions do. The reported
/// witness is the violating pair itself.
pub fn verify_polymatroid(model: &BitSourceModel, caps: Caps) -> Result<PolymatroidReport> {
    let n = model.players();
    caps.ensure_subset(n)?;

    let fail = |violation| {
        Ok(PolymatroidReport { is_polymatroid: false, violation: Some(violation) })
    };

    let size = 1usize << n;
    let mut table: Vec<Rat> = Vec::with_capacity(size);
    for mask in 0..size as u64 {
        table.push(model.entropy(Coalition::from_mask_unchecked(n, mask)));
    }

    if !table[0].is_zero() {
        return fail(PolymatroidViolation::NotNormalized { value: table[0].clone() });
    }

    for mask in 0..size as u64 {
        let x = Coalition::from_mask_unchecked(n, mask);
        for i in 0..n {
            if x.contains(i) {
                continue;
            }
            let xi = x.with(i);
            if table[mask as usize] > table[xi.mask() as usize] {
                return fail(PolymatroidViolation::NotMonotone {
                    smaller: x,
                    larger: xi,
                    smaller_value: table[mask as usize].clone(),
                    larger_value: table[xi.mask() as usize].clone(),
                });
            }
            for j in i + 1..n {
                if x.contains(j) {
                    continue;
                }
                let xj = x.with(j);
                let xij = xi.with(j);
                let lhs = &table[xi.mask() as usize] + &table[xj.mask() as usize];
                let rhs = &table[xij.mask() as usize] + &table[mask as usize];
                if lhs < rhs {
                    return fail(PolymatroidViolation::NotSubmodular { x: xi, y: xj, lhs, rhs });
                }
            }
        }
    }

    Ok(PolymatroidReport { is_polymatroid: true, violation: None })
}
