//! Subsets of a small ground set `{0, .., n-1}` stored as bit vectors.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor};

/// Largest supported ground-set size.
pub const MAX_ELEMENTS: usize = 16;

/// A subset of a ground set of at most [`MAX_ELEMENTS`] elements.
///
/// Bit `i` is set iff element `i` belongs to the subset. The ground-set size
/// is not stored; operations that need it (complement, full set) take it as
/// an argument.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(u16);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    #[inline]
    pub const fn from_bits(bits: u16) -> Self {
        SubsetMask(bits)
    }

    #[inline]
    pub const fn bits(self) -> u16 {
        self.0
    }

    /// The mask as a table index.
    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    /// The full set `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        SubsetMask(((1u32 << n) - 1) as u16)
    }

    #[inline]
    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_ELEMENTS);
        SubsetMask(1 << i)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        elements
            .into_iter()
            .fold(SubsetMask::EMPTY, |acc, i| acc.with(i))
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn contains(self, i: usize) -> bool {
        i < MAX_ELEMENTS && self.0 & (1 << i) != 0
    }

    #[inline]
    pub const fn is_subset(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// True iff one of the two sets contains the other.
    #[inline]
    pub const fn is_comparable(self, other: SubsetMask) -> bool {
        self.is_subset(other) || other.is_subset(self)
    }

    #[inline]
    pub const fn union(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 | other.0)
    }

    #[inline]
    pub const fn intersection(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 & other.0)
    }

    #[inline]
    pub const fn difference(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    /// Complement within `{0, .., n-1}`.
    #[inline]
    pub fn complement(self, n: usize) -> Self {
        SubsetMask::full(n).difference(self)
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        self.union(SubsetMask::singleton(i))
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        self.difference(SubsetMask::singleton(i))
    }

    /// True iff no bit at position `n` or above is set.
    #[inline]
    pub fn fits(self, n: usize) -> bool {
        self.is_subset(SubsetMask::full(n))
    }

    /// Largest element, if any.
    #[inline]
    pub fn max_element(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(15 - self.0.leading_zeros() as usize)
        }
    }

    /// Elements in increasing order.
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    /// Relabel by moving every element up by `offset` (right operand of a disjoint union).
    #[inline]
    pub fn shifted_up(self, offset: usize) -> Self {
        debug_assert!(offset + self.max_element().map_or(0, |m| m + 1) <= MAX_ELEMENTS);
        SubsetMask(((self.0 as u32) << offset) as u16)
    }

    #[inline]
    pub fn shifted_down(self, offset: usize) -> Self {
        SubsetMask(self.0 >> offset)
    }

    /// Relabel `self ∩ within` onto `{0, .., |within|-1}`, preserving element order.
    pub fn compress(self, within: SubsetMask) -> Self {
        let mut out = 0u16;
        for (pos, e) in within.elements().enumerate() {
            if self.contains(e) {
                out |= 1 << pos;
            }
        }
        SubsetMask(out)
    }

    /// Inverse of [`compress`](Self::compress): position `i` goes to the `i`-th element of `within`.
    pub fn expand(self, within: SubsetMask) -> Self {
        let mut out = 0u16;
        for (pos, e) in within.elements().enumerate() {
            if self.contains(pos) {
                out |= 1 << e;
            }
        }
        SubsetMask(out)
    }

    /// Image under `perm`, where `perm[i]` is the new label of element `i`.
    pub fn permuted(self, perm: &[usize]) -> Self {
        self.elements().fold(SubsetMask::EMPTY, |acc, e| acc.with(perm[e]))
    }

    /// Every subset of `{0, .., n-1}`, in increasing numeric order.
    pub fn all(n: usize) -> impl Iterator<Item = SubsetMask> + Clone {
        (0..1u32 << n).map(|b| SubsetMask(b as u16))
    }

    /// Every subset of `self` (including the empty set and `self`).
    pub fn subsets(self) -> Submasks {
        Submasks {
            of: self.0,
            next: Some(0),
        }
    }
}

impl BitOr for SubsetMask {
    type Output = SubsetMask;
    fn bitor(self, rhs: SubsetMask) -> SubsetMask {
        self.union(rhs)
    }
}

impl BitAnd for SubsetMask {
    type Output = SubsetMask;
    fn bitand(self, rhs: SubsetMask) -> SubsetMask {
        self.intersection(rhs)
    }
}

impl BitXor for SubsetMask {
    type Output = SubsetMask;
    fn bitxor(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 ^ rhs.0)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `{0,2,5}` style; `{}` for the empty set.
impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug)]
pub struct Elements(u16);

impl Iterator for Elements {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

#[derive(Clone, Debug)]
pub struct Submasks {
    of: u16,
    next: Option<u16>,
}

impl Iterator for Submasks {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        self.next = if cur == self.of {
            None
        } else {
            Some((cur.wrapping_sub(self.of)) & self.of)
        };
        Some(SubsetMask(cur))
    }
}

const BINOM: [[u32; MAX_ELEMENTS + 1]; MAX_ELEMENTS + 1] = {
    let mut t = [[0u32; MAX_ELEMENTS + 1]; MAX_ELEMENTS + 1];
    let mut n = 0;
    while n <= MAX_ELEMENTS {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
};

/// Binomial coefficient `C(n, k)` for `n <= 16`; zero when `k > n`.
#[inline]
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        BINOM[n][k] as usize
    }
}

/// Position of `mask` among the `|mask|`-subsets in revlex order.
///
/// `A` precedes `B` iff `max(A △ B) ∈ B`; subsets of `{0, .., k-1}` come
/// before any subset containing `k`.
pub fn revlex_rank(mask: SubsetMask) -> usize {
    mask.elements()
        .enumerate()
        .map(|(i, e)| binomial(e, i + 1))
        .sum()
}

/// Inverse of [`revlex_rank`] for `r`-subsets.
pub fn revlex_unrank(mut index: usize, r: usize) -> SubsetMask {
    let mut out = SubsetMask::EMPTY;
    for i in (1..=r).rev() {
        // largest e with C(e, i) <= index
        let mut e = i - 1;
        while binomial(e + 1, i) <= index {
            e += 1;
        }
        index -= binomial(e, i);
        out = out.with(e);
    }
    out
}

/// All `r`-subsets of `{0, .., n-1}` in revlex order.
pub fn revlex_subsets(n: usize, r: usize) -> Vec<SubsetMask> {
    (0..binomial(n, r)).map(|i| revlex_unrank(i, r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compress_expand_inverse() {
        let within = SubsetMask::from_elements([1, 3, 4, 7]);
        let a = SubsetMask::from_elements([3, 7, 9]);
        let c = a.compress(within);
        assert_eq!(c, SubsetMask::from_elements([1, 3]));
        assert_eq!(c.expand(within), SubsetMask::from_elements([3, 7]));
    }

    #[test]
    fn submasks_cover_power_set() {
        let m = SubsetMask::from_elements([0, 2, 5]);
        let subs: Vec<_> = m.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|s| s.is_subset(m)));
        assert_eq!(SubsetMask::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn revlex_order_matches_definition() {
        for n in 0..=7 {
            for r in 0..=n {
                let subs = revlex_subsets(n, r);
                assert_eq!(subs.len(), binomial(n, r));
                for (i, s) in subs.iter().enumerate() {
                    assert_eq!(s.len(), r);
                    assert_eq!(revlex_rank(*s), i);
                }
                for w in subs.windows(2) {
                    let diff = w[0] ^ w[1];
                    let top = diff.max_element().unwrap();
                    assert!(w[1].contains(top), "{:?} should precede {:?}", w[0], w[1]);
                }
            }
        }
    }

    #[test]
    fn full_sixteen() {
        assert_eq!(SubsetMask::full(16).bits(), u16::MAX);
        assert_eq!(SubsetMask::full(0), SubsetMask::EMPTY);
        assert_eq!(SubsetMask::all(16).count(), 1 << 16);
        assert_eq!(binomial(16, 8), 12870);
    }
}
