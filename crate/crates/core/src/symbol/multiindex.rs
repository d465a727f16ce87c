use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Multi-index `α = (α₁, …, αₙ)` of a monomial `ξ^α`.
///
/// Ordered so that iteration runs lexicographically from the largest first
/// entry down, e.g. `(2,0), (1,1), (0,2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// `k·e_axis`.
    pub fn axis(n: usize, axis: usize, k: u32) -> Self {
        let mut e = vec![0; n];
        e[axis] = k;
        Self(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    /// `ξ^α`; the caller guarantees `xi.len() == self.dim()`.
    pub fn monomial<T: crate::Scalar>(&self, xi: &[T]) -> T {
        self.0
            .iter()
            .zip(xi)
            .fold(T::one(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// All multi-indices of dimension `n` and order `k`, largest first entry first.
/// There are `C(n+k-1, k)` of them.
pub fn enumerate_multiindices(n: usize, k: u32) -> Vec<MultiIndex> {
    fn fill(prefix: &mut Vec<u32>, remaining_dims: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
        if remaining_dims == 1 {
            prefix.push(remaining);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first);
            fill(prefix, remaining_dims - 1, remaining - first, out);
            prefix.pop();
        }
    }
    assert!(n >= 1, "ambient dimension must be positive");
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(n), n, k, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u64, k: u64) -> u64 {
        (1..=k).fold(1, |acc, i| acc * (n - k + i) / i)
    }

    #[test]
    fn enumerates_in_lexicographic_order() {
        let idx = enumerate_multiindices(2, 2);
        let entries: Vec<_> = idx.iter().map(|a| a.entries().to_vec()).collect();
        assert_eq!(entries, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(enumerate_multiindices(3, 1).len(), 3);
        let single = enumerate_multiindices(1, 5);
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].entries(), &[5]);
        assert_eq!(enumerate_multiindices(4, 0), vec![MultiIndex::zero(4)]);
    }

    #[test]
    fn counts_match_stars_and_bars() {
        for n in 1..=5usize {
            for k in 0..=8u32 {
                let idx = enumerate_multiindices(n, k);
                assert_eq!(idx.len() as u64, binomial(n as u64 + k as u64 - 1, k as u64));
                assert!(idx.iter().all(|a| a.order() == k && a.dim() == n));
                assert!(idx.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}
