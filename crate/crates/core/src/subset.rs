//! Subsets of `[n]` packed into a `u32`; element `i` (0-based) is bit `i`.

use std::cmp::Ordering;
use std::fmt;

pub const MAX_ELEMENTS: usize = 32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    /// `{0, .., k-1}`.
    pub fn prefix(k: usize) -> Self {
        if k == 0 {
            Subset(0)
        } else {
            Subset(u32::MAX >> (32 - k))
        }
    }

    /// `{n-k, .., n-1}`.
    pub fn suffix(n: usize, k: usize) -> Self {
        Subset(Self::prefix(k).0 << (n - k))
    }

    pub fn full(n: usize) -> Self {
        Self::prefix(n)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        Subset(it.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    /// Builds from 1-based labels.
    pub fn from_labels<I: IntoIterator<Item = usize>>(it: I) -> Self {
        Self::from_indices(it.into_iter().map(|i| i - 1))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    pub fn union(self, other: Self) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Subset(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        Subset(!self.0 & Self::full(n).0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// 1-based labels in increasing order.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Strong separation: `max(S∖T) < min(T∖S)` or the mirror inequality.
    /// Equal sets (both differences empty) count as separated, and so does
    /// any pair where one difference is empty.
    pub fn strongly_separated(self, other: Self) -> bool {
        self.separation_cmp(other).is_some()
    }

    /// Strong-separation order. `Less` means `self ⊑ other`, i.e.
    /// `max(self∖other) < min(other∖self)`. `None` for non-separated pairs.
    pub fn separation_cmp(self, other: Self) -> Option<Ordering> {
        let left = self.difference(other);
        let right = other.difference(self);
        match (left.max(), right.min()) {
            (None, None) => Some(Ordering::Equal),
            (None, Some(_)) => Some(Ordering::Less),
            (Some(_), None) => Some(Ordering::Greater),
            (Some(l), Some(r)) => {
                if l < r {
                    Some(Ordering::Less)
                } else if right.max().unwrap() < left.min().unwrap() {
                    Some(Ordering::Greater)
                } else {
                    None
                }
            }
        }
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}
