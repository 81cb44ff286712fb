//! Canonical labeling and isomorphism-class keys.
//!
//! The canonical form of `M` is the relabeling whose revlex basis string is
//! lexicographically smallest among all relabelings that list elements in
//! increasing order of their [`ElementProfile`]. Since the profile is
//! invariant under isomorphism, two matroids are isomorphic iff their
//! canonical forms are equal.
//!
//! The search assigns new labels `0, 1, ..` in turn. Fixing the element
//! that receives label `k` fixes the block of `r`-subsets whose largest
//! element is `k`, which is the next block of the revlex string, so partial
//! labelings can be compared and pruned block by block.

use std::fmt;
use std::str::FromStr;

use crate::error::{MatroidError, Result};
use crate::format::{basis_bits, from_basis_bits};
use crate::mask::{binomial, revlex_subsets, revlex_unrank, SubsetMask};
use crate::matroid::Matroid;

/// Relabeling-equivariant data attached to one element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementProfile {
    pub is_loop: bool,
    pub is_isthmus: bool,
    pub basis_count: usize,
    pub circuit_sizes: Vec<usize>,
}

pub fn invariant_profile(m: &Matroid) -> Vec<ElementProfile> {
    let loops = m.loops();
    let isthmuses = m.isthmuses();
    let mut profiles: Vec<ElementProfile> = (0..m.n())
        .map(|e| ElementProfile {
            is_loop: loops.contains(e),
            is_isthmus: isthmuses.contains(e),
            basis_count: m.bases().iter().filter(|b| b.contains(e)).count(),
            circuit_sizes: Vec::new(),
        })
        .collect();
    for c in m.circuits() {
        for e in c.elements() {
            profiles[e].circuit_sizes.push(c.len());
        }
    }
    for p in &mut profiles {
        p.circuit_sizes.sort_unstable();
    }
    profiles
}

/// Clone classes: `a` and `b` are clones iff exchanging them is an automorphism.
/// Returns, for every element, the smallest element of its class.
pub(crate) fn clone_representatives(m: &Matroid, is_basis: &[bool]) -> Vec<usize> {
    let n = m.n();
    let mut rep: Vec<usize> = (0..n).collect();
    for a in 0..n {
        if rep[a] != a {
            continue;
        }
        for b in a + 1..n {
            if rep[b] != b {
                continue;
            }
            let pair = SubsetMask::singleton(a) | SubsetMask::singleton(b);
            let swaps = m.bases().iter().all(|&basis| {
                let inside = basis & pair;
                inside.is_empty() || inside == pair || is_basis[(basis ^ pair).index()]
            });
            if swaps {
                rep[b] = a;
            }
        }
    }
    rep
}

struct Search<'a> {
    n: usize,
    r: usize,
    is_basis: &'a [bool],
    /// `cell_of_label[k]`: profile class that label `k` must come from.
    cell_of_label: Vec<usize>,
    cell_of: Vec<usize>,
    clone_rep: Vec<usize>,
    /// `(r-1)`-subsets of `{0, .., n-2}` in revlex order.
    lower: Vec<SubsetMask>,
    order: Vec<usize>,
    best: Vec<u8>,
    best_order: Vec<usize>,
}

#[derive(PartialEq)]
enum Cmp {
    Less,
    Equal,
    Greater,
}

impl Search<'_> {
    /// Offset of the block of subsets with maximum `k`.
    fn block_start(&self, k: usize) -> usize {
        binomial(k, self.r)
    }

    /// Writes or compares the block for label `k = order.len() - 1`.
    fn block(&mut self, writing: bool) -> Cmp {
        let k = self.order.len() - 1;
        let start = self.block_start(k);
        let len = binomial(k, self.r - 1);
        let top = SubsetMask::singleton(self.order[k]);
        let mut writing = writing;
        for idx in 0..len {
            let old = self.lower[idx]
                .elements()
                .fold(top, |acc, e| acc.with(self.order[e]));
            let bit = self.is_basis[old.index()] as u8;
            if writing {
                self.best[start + idx] = bit;
            } else if bit != self.best[start + idx] {
                if bit > self.best[start + idx] {
                    return Cmp::Greater;
                }
                self.best[start + idx] = bit;
                writing = true;
            }
        }
        if writing {
            Cmp::Less
        } else {
            Cmp::Equal
        }
    }

    fn dfs(&mut self, mut less: bool, assigned: SubsetMask) {
        let k = self.order.len();
        if k == self.n {
            if less {
                self.best_order.clone_from(&self.order);
            }
            return;
        }
        let cell = self.cell_of_label[k];
        for x in 0..self.n {
            if assigned.contains(x) || self.cell_of[x] != cell {
                continue;
            }
            let rep = self.clone_rep[x];
            if rep != x && !assigned.contains(rep) {
                continue;
            }
            // Among unassigned clones of `x`, only the smallest is tried.
            if (rep..x).any(|y| self.clone_rep[y] == rep && !assigned.contains(y)) {
                continue;
            }
            self.order.push(x);
            let cmp = self.block(less);
            if cmp != Cmp::Greater {
                self.dfs(cmp == Cmp::Less, assigned.with(x));
                less = false;
            }
            self.order.pop();
        }
    }
}

/// The canonical relabeling of `m` and a permutation achieving it
/// (`perm[old] = new`).
pub fn canonical_form(m: &Matroid) -> (Matroid, Vec<usize>) {
    let n = m.n();
    let r = m.rank();
    if m.is_uniform() {
        return (m.clone(), (0..n).collect());
    }
    let mut is_basis = vec![false; 1 << n];
    for b in m.bases() {
        is_basis[b.index()] = true;
    }
    let profiles = invariant_profile(m);
    let mut distinct: Vec<&ElementProfile> = profiles.iter().collect();
    distinct.sort();
    distinct.dedup();
    let cell_of: Vec<usize> = profiles
        .iter()
        .map(|p| distinct.binary_search(&p).expect("profile present"))
        .collect();
    let mut cell_of_label = cell_of.clone();
    cell_of_label.sort_unstable();

    let mut search = Search {
        n,
        r,
        is_basis: &is_basis,
        cell_of_label,
        cell_of,
        clone_rep: clone_representatives(m, &is_basis),
        lower: revlex_subsets(n - 1, r - 1),
        order: Vec::with_capacity(n),
        best: vec![1; binomial(n, r)],
        best_order: Vec::new(),
    };
    search.dfs(true, SubsetMask::EMPTY);

    let mut perm = vec![0; n];
    for (new, &old) in search.best_order.iter().enumerate() {
        perm[old] = new;
    }
    let bases = search
        .best
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(i, _)| revlex_unrank(i, r))
        .collect();
    (Matroid::from_bases_unchecked(n, r, bases), perm)
}

/// Isomorphism-class key, rendered `n:r:<revlex bits of the canonical form>`.
///
/// Keys order as strings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IsoKey(String);

impl IsoKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn fields(&self) -> (usize, usize, &str) {
        let mut it = self.0.splitn(3, ':');
        let n = it.next().and_then(|s| s.parse().ok()).expect("validated key");
        let r = it.next().and_then(|s| s.parse().ok()).expect("validated key");
        (n, r, it.next().expect("validated key"))
    }

    pub fn n(&self) -> usize {
        self.fields().0
    }

    pub fn r(&self) -> usize {
        self.fields().1
    }

    pub fn nullity(&self) -> usize {
        let (n, r, _) = self.fields();
        n - r
    }

    /// The canonical representative.
    pub fn to_matroid(&self) -> Matroid {
        let (n, r, bits) = self.fields();
        from_basis_bits(n, r, bits).expect("validated key")
    }

    /// Wraps the key of a matroid already in canonical form.
    fn of_canonical(m: &Matroid) -> IsoKey {
        IsoKey(format!("{}:{}:{}", m.n(), m.rank(), basis_bits(m)))
    }
}

impl fmt::Display for IsoKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for IsoKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IsoKey({})", self.0)
    }
}

impl FromStr for IsoKey {
    type Err = MatroidError;

    /// Accepts only keys of matroids in canonical form.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || MatroidError::BadKey(s.to_string());
        let mut it = s.splitn(3, ':');
        let n: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        let r: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        let bits = it.next().ok_or_else(bad)?;
        let m = from_basis_bits(n, r, bits).map_err(|_| bad())?;
        let key = iso_key(&m);
        if key.0 != s {
            return Err(bad());
        }
        Ok(key)
    }
}

pub fn iso_key(m: &Matroid) -> IsoKey {
    IsoKey::of_canonical(&canonical_form(m).0)
}

pub fn are_isomorphic(m: &Matroid, n: &Matroid) -> bool {
    m.n() == n.n()
        && m.rank() == n.rank()
        && m.bases().len() == n.bases().len()
        && canonical_form(m).0 == canonical_form(n).0
}
