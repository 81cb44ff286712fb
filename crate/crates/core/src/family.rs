//! Explicit families of subsets and chains of subsets.

use crate::error::{MatroidError, Result};
use crate::mask::SubsetMask;

/// A sorted, duplicate-free family of subsets of `{0, .., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ambient_n: usize,
    members: Vec<SubsetMask>,
}

impl SetFamily {
    pub fn new<I: IntoIterator<Item = SubsetMask>>(ambient_n: usize, members: I) -> Result<Self> {
        let mut members: Vec<_> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|m| !m.fits(ambient_n)) {
            return Err(MatroidError::MaskOutOfRange {
                mask: bad,
                n: ambient_n,
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(SetFamily { ambient_n, members })
    }

    pub(crate) fn from_sorted(ambient_n: usize, members: Vec<SubsetMask>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        SetFamily { ambient_n, members }
    }

    pub fn empty(ambient_n: usize) -> Self {
        SetFamily {
            ambient_n,
            members: Vec::new(),
        }
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, mask: SubsetMask) -> bool {
        self.members.binary_search(&mask).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        self.members.iter().copied()
    }

    /// Smallest family containing `self`, closed under pairwise union and intersection.
    pub fn lattice_closure(&self) -> SetFamily {
        let mut seen = vec![false; 1 << self.ambient_n];
        let mut members = self.members.clone();
        for m in &members {
            seen[m.index()] = true;
        }
        let mut start = 0;
        while start < members.len() {
            let end = members.len();
            for i in start..end {
                for j in 0..end {
                    let (a, b) = (members[i], members[j]);
                    for c in [a | b, a & b] {
                        if !seen[c.index()] {
                            seen[c.index()] = true;
                            members.push(c);
                        }
                    }
                }
            }
            start = end;
        }
        members.sort_unstable();
        SetFamily::from_sorted(self.ambient_n, members)
    }

    pub fn is_lattice_closed(&self) -> bool {
        self.members.iter().all(|&a| {
            self.members
                .iter()
                .all(|&b| self.contains(a | b) && self.contains(a & b))
        })
    }

    /// True iff `mask` is comparable by inclusion with every member.
    pub fn comparable_to_all(&self, mask: SubsetMask) -> bool {
        self.members.iter().all(|m| m.is_comparable(mask))
    }
}

/// A strictly increasing chain `∅ = U_0 ⊂ U_1 ⊂ .. ⊂ U_k = S`.
///
/// For the empty ground set the chain is the single entry `∅`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flag {
    n: usize,
    chain: Vec<SubsetMask>,
}

impl Flag {
    pub fn new(n: usize, chain: Vec<SubsetMask>) -> Result<Self> {
        let bad = |msg: &str| Err(MatroidError::InvalidFlag(msg.to_string()));
        match (chain.first(), chain.last()) {
            (Some(first), Some(last)) => {
                if !first.is_empty() {
                    return bad("first entry must be the empty set");
                }
                if *last != SubsetMask::full(n) {
                    return bad("last entry must be the full ground set");
                }
            }
            _ => return bad("chain is empty"),
        }
        if n > 0 && chain.len() < 2 {
            return bad("chain needs at least two entries");
        }
        if chain
            .windows(2)
            .any(|w| !(w[0].is_subset(w[1]) && w[0] != w[1]))
        {
            return bad("entries must be strictly increasing");
        }
        Ok(Flag { n, chain })
    }

    /// The trivial flag `∅ ⊂ S` (or just `∅` when `n = 0`).
    pub fn trivial(n: usize) -> Self {
        let mut chain = vec![SubsetMask::EMPTY];
        if n > 0 {
            chain.push(SubsetMask::full(n));
        }
        Flag { n, chain }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn chain(&self) -> &[SubsetMask] {
        &self.chain
    }

    /// Consecutive pairs `(U_{i-1}, U_i)`.
    pub fn intervals(&self) -> impl Iterator<Item = (SubsetMask, SubsetMask)> + '_ {
        self.chain.windows(2).map(|w| (w[0], w[1]))
    }

    /// True iff every entry of `self` is an entry of `other`.
    pub fn is_refined_by(&self, other: &Flag) -> bool {
        self.chain.iter().all(|c| other.chain.contains(c))
    }
}
