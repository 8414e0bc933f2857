//! The single source of Koszul-sign truth.
//!
//! Every sign in the crate comes from [`sort_anticommuting`]: bubble-sort a
//! word of odd symbols and count transpositions.  Reordering products of odd
//! coordinates, stripping a factor for an odd partial, and merging derivative
//! words all reduce to this one routine.

use std::cmp::Ordering;
use std::fmt;

/// Bubble-sorts `xs` ascending in place, tracking transposition parity.
/// Returns `None` when two entries coincide: an odd symbol squares to zero.
pub fn sort_anticommuting<T: Ord>(xs: &mut [T]) -> Option<bool> {
    let n = xs.len();
    let mut odd = false;
    loop {
        let mut swapped = false;
        for i in 1..n {
            match xs[i - 1].cmp(&xs[i]) {
                Ordering::Equal => return None,
                Ordering::Greater => {
                    xs.swap(i - 1, i);
                    odd = !odd;
                    swapped = true;
                }
                Ordering::Less => {}
            }
        }
        if !swapped {
            return Some(odd);
        }
    }
}

/// A set of odd indices (0-based, ascending), stored as a bitmask.
/// Stands both for the monomial xi^{b1}...xi^{bm} (factors in increasing
/// order) and for the index set of a derivative word.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OddSet(pub u32);

impl OddSet {
    pub const EMPTY: OddSet = OddSet(0);

    pub fn singleton(a: usize) -> OddSet {
        OddSet(1 << a)
    }

    pub fn contains(self, a: usize) -> bool {
        self.0 >> a & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Ascending member list.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let a = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(a)
            }
        })
    }

    pub fn remove(self, a: usize) -> OddSet {
        OddSet(self.0 & !(1 << a))
    }

    pub fn union(self, other: OddSet) -> OddSet {
        OddSet(self.0 | other.0)
    }

    /// Sign and index set of the product xi^self * xi^other, both factors in
    /// increasing order.  `None` when the sets overlap (the product is zero).
    pub fn mul_monomials(self, other: OddSet) -> Option<(OddSet, bool)> {
        let mut word: Vec<usize> = self.iter().chain(other.iter()).collect();
        let odd = sort_anticommuting(&mut word)?;
        Some((self.union(other), odd))
    }

    /// Sign for rewriting xi^self = +/- xi^a * xi^{self without a}, i.e. for
    /// moving the factor xi^a to the front.  The same sign applies the left
    /// partial with respect to xi^a.  `None` when `a` is not a member.
    pub fn strip_front(self, a: usize) -> Option<(OddSet, bool)> {
        if !self.contains(a) {
            return None;
        }
        let rest = self.remove(a);
        let mut word: Vec<usize> = std::iter::once(a).chain(rest.iter()).collect();
        let odd = sort_anticommuting(&mut word)?;
        Some((rest, odd))
    }

    /// Descending member list, the order in which a derivative word is written.
    pub fn iter_desc(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let a = 31 - bits.leading_zeros() as usize;
                bits &= !(1 << a);
                Some(a)
            }
        })
    }

    /// Sign and index set for concatenating two derivative words, each
    /// written in decreasing index order, renormalized to decreasing order.
    /// `None` when a partial repeats (the word is zero).
    pub fn mul_words(self, other: OddSet) -> Option<(OddSet, bool)> {
        let mut word: Vec<std::cmp::Reverse<usize>> = self
            .iter_desc()
            .chain(other.iter_desc())
            .map(std::cmp::Reverse)
            .collect();
        let odd = sort_anticommuting(&mut word)?;
        Some((self.union(other), odd))
    }
}

impl fmt::Debug for OddSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
