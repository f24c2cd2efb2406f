//! Rate vectors: one exact coding rate per player.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::coalition::Coalition;
use crate::rational::Rat;

/// A coding-rate assignment, indexed by player.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RateVector {
    rates: Vec<Rat>,
}

impl RateVector {
    /// Wraps a rate list.
    pub fn new(rates: Vec<Rat>) -> Self {
        RateVector { rates }
    }

    /// The all-zero vector on `n` players.
    pub fn zeros(n: usize) -> Self {
        RateVector { rates: alloc::vec![Rat::zero(); n] }
    }

    /// Number of players.
    pub fn len(&self) -> usize {
        self.rates.len()
    }

    /// Whether the vector has no coordinates.
    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Rate of one player.
    pub fn rate(&self, player: usize) -> &Rat {
        &self.rates[player]
    }

    /// All rates, by player index.
    pub fn rates(&self) -> &[Rat] {
        &self.rates
    }

    /// The sum-rate `r(X) = Σ_{i∈X} r_i`, with `r(∅) = 0`.
    pub fn sum_over(&self, x: Coalition) -> Rat {
        assert_eq!(x.ground_size(), self.rates.len());
        x.members().map(|i| &self.rates[i]).sum()
    }

    /// Total rate `r(V)`.
    pub fn total(&self) -> Rat {
        self.rates.iter().sum()
    }

    /// Coordinate-wise sum.
    pub fn add_assign(&mut self, other: &RateVector) {
        assert_eq!(self.rates.len(), other.rates.len());
        for (a, b) in self.rates.iter_mut().zip(&other.rates) {
            *a += b;
        }
    }

    /// Coordinate-wise multiple.
    pub fn scaled(&self, factor: &Rat) -> RateVector {
        RateVector { rates: self.rates.iter().map(|r| r * factor).collect() }
    }

    pub(crate) fn div_big(&self, k: &BigInt) -> RateVector {
        RateVector { rates: self.rates.iter().map(|r| r.div_big(k)).collect() }
    }
}

impl fmt::Display for RateVector {
    /// E.g. `(1, 9/5, 2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, r) in self.rates.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<Rat> for RateVector {
    fn from_iter<I: IntoIterator<Item = Rat>>(iter: I) -> Self {
        RateVector { rates: iter.into_iter().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use alloc::format;
    use alloc::vec;

    #[test]
    fn sums_over_coalitions() {
        let r = RateVector::new(vec![rat(1, 1), rat(9, 5), rat(2, 1)]);
        let x = Coalition::from_members(3, [0, 2]).unwrap();
        assert_eq!(r.sum_over(x), rat(3, 1));
        assert_eq!(r.sum_over(Coalition::empty(3)), Rat::zero());
        assert_eq!(r.total(), rat(24, 5));
        assert_eq!(format!("{r}"), "(1, 9/5, 2)");
    }
}
