//! Enumeration budgets for exhaustive operations.

use crate::error::{CapKind, GameError, Result};

/// Size limits for operations that enumerate `2^|V|` subsets or `|V|!`
/// permutations.
///
/// The defaults keep exhaustive work tractable; both can be raised
/// explicitly (the CLI does so behind a `--force` flag, with a warning).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest ground set for which `2^|V|` enumeration is allowed.
    pub subset: usize,
    /// Largest ground set for which `|V|!` enumeration is allowed.
    pub perm: usize,
}

impl Caps {
    /// Default budget for `2^|V|` operations.
    pub const DEFAULT_SUBSET: usize = 24;
    /// Default budget for `|V|!` operations.
    pub const DEFAULT_PERM: usize = 9;

    /// Everything the bitmask representation can address. Enumeration cost
    /// is entirely on the caller at these sizes.
    pub fn unlimited() -> Self {
        Caps { subset: 63, perm: 20 }
    }

    /// Errors unless a `2^ground_size` enumeration fits the budget.
    pub fn ensure_subset(&self, ground_size: usize) -> Result<()> {
        let cap = self.subset.min(63);
        if ground_size > cap {
            return Err(GameError::CapExceeded { ground_size, cap, kind: CapKind::Subset });
        }
        Ok(())
    }

    /// Errors unless a `ground_size!` enumeration fits the budget.
    pub fn ensure_perm(&self, ground_size: usize) -> Result<()> {
        if ground_size > self.perm {
            return Err(GameError::CapExceeded {
                ground_size,
                cap: self.perm,
                kind: CapKind::Permutation,
            });
        }
        Ok(())
    }
}

impl Default for Caps {
    fn default() -> Self {
        Caps { subset: Self::DEFAULT_SUBSET, perm: Self::DEFAULT_PERM }
    }
}
