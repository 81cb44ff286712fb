//! The matroid kernel: a matroid is its ground-set size, rank and basis family.
//!
//! Every derived query (rank, closure, circuits, flats, minors, duality) is
//! computed from the basis list. Rank queries go through a full `2^n` rank
//! table that is built on first use and shared by clones.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::error::{MatroidError, Result};
use crate::family::SetFamily;
use crate::mask::{binomial, SubsetMask, MAX_ELEMENTS};

/// Rank, nullity and rank-lack of one subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RankStats {
    pub rank: usize,
    pub nullity: usize,
    pub rank_lack: usize,
}

/// A matroid on the ground set `{0, .., n-1}` given by its bases.
#[derive(Clone)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<SubsetMask>,
    ranks: OnceLock<Arc<[u8]>>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rank == other.rank && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl Hash for Matroid {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.rank.hash(state);
        self.bases.hash(state);
    }
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("n", &self.n)
            .field("rank", &self.rank)
            .field("bases", &self.bases)
            .finish()
    }
}

/// Rank table of the matroid whose bases are `bases` (assumed equicardinal).
///
/// The table is indexed by subset mask and holds `max |A ∩ B|` over bases `B`.
fn rank_table_from_bases(n: usize, bases: &[SubsetMask]) -> Vec<u8> {
    let size = 1usize << n;
    let mut indep = vec![false; size];
    for b in bases {
        indep[b.index()] = true;
    }
    for a in (0..size).rev() {
        if indep[a] {
            continue;
        }
        let mut free = !a & (size - 1);
        while free != 0 {
            let bit = free & free.wrapping_neg();
            if indep[a | bit] {
                indep[a] = true;
                break;
            }
            free &= free - 1;
        }
    }
    let mut rank = vec![0u8; size];
    for a in 1..size {
        if indep[a] {
            rank[a] = a.count_ones() as u8;
        } else {
            let mut best = 0;
            let mut rest = a;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                best = best.max(rank[a ^ bit]);
                rest &= rest - 1;
            }
            rank[a] = best;
        }
    }
    rank
}

/// Finds a failing exchange `(B1, B2, x)` if there is one.
fn exchange_witness(n: usize, bases: &[SubsetMask]) -> Option<(SubsetMask, SubsetMask, usize)> {
    let mut is_basis = vec![false; 1 << n];
    for b in bases {
        is_basis[b.index()] = true;
    }
    for &b1 in bases {
        for &b2 in bases {
            for x in b1.difference(b2).elements() {
                let ok = b2
                    .difference(b1)
                    .elements()
                    .any(|y| is_basis[b1.without(x).with(y).index()]);
                if !ok {
                    return Some((b1, b2, x));
                }
            }
        }
    }
    None
}

impl Matroid {
    /// Validates a basis family and builds the matroid.
    ///
    /// The family is accepted iff the function `A ↦ max |A ∩ B|` is
    /// submodular, which for equicardinal families is equivalent to the
    /// basis-exchange axiom. On failure an explicit exchange witness is
    /// searched for and returned.
    pub fn from_bases<I>(n: usize, rank: usize, bases: I) -> Result<Self>
    where
        I: IntoIterator<Item = SubsetMask>,
    {
        if n > MAX_ELEMENTS {
            return Err(MatroidError::GroundSetTooLarge(n));
        }
        if rank > n {
            return Err(MatroidError::RankOutOfRange { rank, n });
        }
        let mut bases: Vec<SubsetMask> = bases.into_iter().collect();
        if bases.is_empty() {
            return Err(MatroidError::EmptyBasisList);
        }
        for &b in &bases {
            if !b.fits(n) {
                return Err(MatroidError::MaskOutOfRange { mask: b, n });
            }
            if b.len() != rank {
                return Err(MatroidError::NotEquicardinal {
                    mask: b,
                    rank,
                    found: b.len(),
                });
            }
        }
        bases.sort_unstable();
        bases.dedup();

        let table = rank_table_from_bases(n, &bases);
        let size = 1usize << n;
        let submodular = (0..size).all(|a| {
            let ra = table[a] as i32;
            let free = !a & (size - 1);
            let mut xs = free;
            while xs != 0 {
                let x = xs & xs.wrapping_neg();
                xs &= xs - 1;
                let rx = table[a | x] as i32;
                let mut ys = xs;
                while ys != 0 {
                    let y = ys & ys.wrapping_neg();
                    ys &= ys - 1;
                    if rx + (table[a | y] as i32) < table[a | x | y] as i32 + ra {
                        return false;
                    }
                }
            }
            true
        });
        if !submodular {
            let (first, second, element) = exchange_witness(n, &bases)
                .expect("non-submodular basis family must violate exchange");
            return Err(MatroidError::ExchangeFails {
                first,
                second,
                element,
            });
        }
        let m = Matroid {
            n,
            rank,
            bases,
            ranks: OnceLock::new(),
        };
        let _ = m.ranks.set(table.into());
        Ok(m)
    }

    /// Builds a matroid from a basis family known to satisfy the axioms.
    pub(crate) fn from_bases_unchecked(n: usize, rank: usize, mut bases: Vec<SubsetMask>) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        debug_assert!(!bases.is_empty());
        debug_assert!(bases.iter().all(|b| b.len() == rank && b.fits(n)));
        bases.sort_unstable();
        bases.dedup();
        Matroid {
            n,
            rank,
            bases,
            ranks: OnceLock::new(),
        }
    }

    /// Builds the matroid whose independent sets are the subsets satisfying
    /// `is_independent`, which must describe the independent sets of a matroid.
    /// Bases are the independent sets of maximum size.
    pub(crate) fn from_independence<F>(n: usize, mut is_independent: F) -> Self
    where
        F: FnMut(SubsetMask) -> bool,
    {
        let mut best = 0;
        let mut bases = Vec::new();
        for a in SubsetMask::all(n) {
            let size = a.len();
            if size < best || !is_independent(a) {
                continue;
            }
            if size > best {
                best = size;
                bases.clear();
            }
            bases.push(a);
        }
        if bases.is_empty() {
            bases.push(SubsetMask::EMPTY);
        }
        Matroid::from_bases_unchecked(n, best, bases)
    }

    /// `U_{r,n}`: every `r`-subset is a basis.
    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(MatroidError::GroundSetTooLarge(n));
        }
        if r > n {
            return Err(MatroidError::RankOutOfRange { rank: r, n });
        }
        let bases = SubsetMask::all(n).filter(|a| a.len() == r).collect();
        Ok(Matroid::from_bases_unchecked(n, r, bases))
    }

    /// `I(S)`: every subset independent.
    pub fn free(n: usize) -> Result<Self> {
        Matroid::uniform(n, n)
    }

    /// `Z(S)`: every element a loop.
    pub fn zero(n: usize) -> Result<Self> {
        Matroid::uniform(0, n)
    }

    /// The matroid on the empty ground set.
    pub fn empty() -> Self {
        Matroid::from_bases_unchecked(0, 0, vec![SubsetMask::EMPTY])
    }

    /// The single point `I`.
    pub fn point() -> Self {
        Matroid::from_bases_unchecked(1, 1, vec![SubsetMask::singleton(0)])
    }

    /// The single loop `Z`.
    pub fn loop_() -> Self {
        Matroid::from_bases_unchecked(1, 0, vec![SubsetMask::EMPTY])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the whole matroid.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Nullity of the whole matroid.
    pub fn nullity(&self) -> usize {
        self.n - self.rank
    }

    pub fn bases(&self) -> &[SubsetMask] {
        &self.bases
    }

    pub fn ground(&self) -> SubsetMask {
        SubsetMask::full(self.n)
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn table(&self) -> &[u8] {
        self.ranks
            .get_or_init(|| rank_table_from_bases(self.n, &self.bases).into())
    }

    #[inline]
    pub fn rank_of(&self, a: SubsetMask) -> usize {
        debug_assert!(a.fits(self.n));
        self.table()[a.index()] as usize
    }

    /// Rank computed directly as `max |A ∩ B|` over the bases, bypassing the table.
    pub fn rank_by_bases(&self, a: SubsetMask) -> usize {
        self.bases
            .iter()
            .map(|b| b.intersection(a).len())
            .max()
            .unwrap_or(0)
    }

    #[inline]
    pub fn nullity_of(&self, a: SubsetMask) -> usize {
        a.len() - self.rank_of(a)
    }

    #[inline]
    pub fn rank_lack_of(&self, a: SubsetMask) -> usize {
        self.rank - self.rank_of(a)
    }

    pub fn rank_stats(&self, a: SubsetMask) -> RankStats {
        let rank = self.rank_of(a);
        RankStats {
            rank,
            nullity: a.len() - rank,
            rank_lack: self.rank - rank,
        }
    }

    #[inline]
    pub fn is_independent(&self, a: SubsetMask) -> bool {
        self.rank_of(a) == a.len()
    }

    pub fn is_basis(&self, a: SubsetMask) -> bool {
        self.bases.binary_search(&a).is_ok()
    }

    pub fn is_spanning(&self, a: SubsetMask) -> bool {
        self.rank_of(a) == self.rank
    }

    pub fn closure(&self, a: SubsetMask) -> SubsetMask {
        let ra = self.rank_of(a);
        a.complement(self.n)
            .elements()
            .filter(|&x| self.rank_of(a.with(x)) == ra)
            .fold(a, |acc, x| acc.with(x))
    }

    pub fn is_flat(&self, a: SubsetMask) -> bool {
        let ra = self.rank_of(a);
        a.complement(self.n)
            .elements()
            .all(|x| self.rank_of(a.with(x)) > ra)
    }

    /// Minimal dependent sets, in increasing mask order.
    pub fn circuits(&self) -> Vec<SubsetMask> {
        SubsetMask::all(self.n)
            .filter(|&c| {
                !self.is_independent(c) && c.elements().all(|x| self.is_independent(c.without(x)))
            })
            .collect()
    }

    pub fn flats(&self) -> SetFamily {
        SetFamily::from_sorted(
            self.n,
            SubsetMask::all(self.n).filter(|&a| self.is_flat(a)).collect(),
        )
    }

    /// True iff no element of `a` is an isthmus of the restriction to `a`.
    pub fn is_cyclic(&self, a: SubsetMask) -> bool {
        let ra = self.rank_of(a);
        a.elements().all(|x| self.rank_of(a.without(x)) == ra)
    }

    /// Flats that are unions of circuits.
    pub fn cyclic_flats(&self) -> SetFamily {
        SetFamily::from_sorted(
            self.n,
            SubsetMask::all(self.n)
                .filter(|&a| self.is_flat(a) && self.is_cyclic(a))
                .collect(),
        )
    }

    pub fn loops(&self) -> SubsetMask {
        self.closure(SubsetMask::EMPTY)
    }

    /// Elements lying in every basis.
    pub fn isthmuses(&self) -> SubsetMask {
        self.bases
            .iter()
            .fold(self.ground(), |acc, &b| acc.intersection(b))
    }

    pub fn dual(&self) -> Matroid {
        let bases = self.bases.iter().map(|b| b.complement(self.n)).collect();
        Matroid::from_bases_unchecked(self.n, self.n - self.rank, bases)
    }

    /// `M|A`, relabelled onto `{0, .., |A|-1}` in element order.
    pub fn restrict(&self, a: SubsetMask) -> Matroid {
        debug_assert!(a.fits(self.n));
        let ra = self.rank_of(a);
        let bases = self
            .bases
            .iter()
            .map(|b| b.intersection(a))
            .filter(|b| b.len() == ra)
            .map(|b| b.compress(a))
            .collect();
        Matroid::from_bases_unchecked(a.len(), ra, bases)
    }

    /// `M \ A`, the restriction to the complement of `a`.
    pub fn delete(&self, a: SubsetMask) -> Matroid {
        self.restrict(a.complement(self.n))
    }

    /// `M/A` on `S \ A`, relabelled in element order.
    pub fn contract(&self, a: SubsetMask) -> Matroid {
        debug_assert!(a.fits(self.n));
        let ra = self.rank_of(a);
        let rest = a.complement(self.n);
        let bases = self
            .bases
            .iter()
            .filter(|b| b.intersection(a).len() == ra)
            .map(|b| b.difference(a).compress(rest))
            .collect();
        Matroid::from_bases_unchecked(rest.len(), self.rank - ra, bases)
    }

    /// The minor `M(A, B) = (M|B)/A` on `B \ A`.
    pub fn minor(&self, a: SubsetMask, b: SubsetMask) -> Result<Matroid> {
        if !a.is_subset(b) {
            return Err(MatroidError::NotNested { inner: a, outer: b });
        }
        if !b.fits(self.n) {
            return Err(MatroidError::MaskOutOfRange { mask: b, n: self.n });
        }
        Ok(self.restrict(b).contract(a.compress(b)))
    }

    /// Like [`minor`](Self::minor), also returning the original element behind each new label.
    pub fn minor_with_map(&self, a: SubsetMask, b: SubsetMask) -> Result<(Matroid, Vec<usize>)> {
        let m = self.minor(a, b)?;
        Ok((m, b.difference(a).elements().collect()))
    }

    /// `M ⊕ N`, with the elements of `N` placed after those of `M`.
    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid> {
        let total = self.n + other.n;
        if total > MAX_ELEMENTS {
            return Err(MatroidError::GroundSetOverflow(total));
        }
        let mut bases = Vec::with_capacity(self.bases.len() * other.bases.len());
        for &b1 in &self.bases {
            for &b2 in &other.bases {
                bases.push(b1 | b2.shifted_up(self.n));
            }
        }
        Ok(Matroid::from_bases_unchecked(
            total,
            self.rank + other.rank,
            bases,
        ))
    }

    /// Connectivity via the transitive closure of circuit overlap.
    ///
    /// Single-element matroids are connected; the empty matroid is rejected.
    pub fn is_connected(&self) -> Result<bool> {
        if self.n == 0 {
            return Err(MatroidError::EmptyMatroid);
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for c in self.circuits() {
            let mut it = c.elements();
            if let Some(first) = it.next() {
                for x in it {
                    let (ra, rb) = (find(&mut parent, first), find(&mut parent, x));
                    parent[ra] = rb;
                }
            }
        }
        let root = find(&mut parent, 0);
        Ok((1..self.n).all(|x| find(&mut parent, x) == root))
    }

    pub fn is_uniform(&self) -> bool {
        self.bases.len() == binomial(self.n, self.rank)
    }

    /// Relabels element `i` as `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Matroid> {
        let mut seen = 0u32;
        if perm.len() != self.n {
            return Err(MatroidError::SizeMismatch {
                left: self.n,
                right: perm.len(),
            });
        }
        for &p in perm {
            if p >= self.n || seen & (1 << p) != 0 {
                return Err(MatroidError::InvalidFlag(format!(
                    "{perm:?} is not a permutation of 0..{}",
                    self.n
                )));
            }
            seen |= 1 << p;
        }
        Ok(self.relabel_unchecked(perm))
    }

    pub(crate) fn relabel_unchecked(&self, perm: &[usize]) -> Matroid {
        let bases = self.bases.iter().map(|b| b.permuted(perm)).collect();
        Matroid::from_bases_unchecked(self.n, self.rank, bases)
    }
}
