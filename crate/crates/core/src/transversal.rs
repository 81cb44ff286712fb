//! Transversal matroids from set presentations, and the presentation of a
//! free product of transversal matroids.

use crate::error::{MatroidError, Result};
use crate::mask::{SubsetMask, MAX_ELEMENTS};
use crate::matroid::Matroid;

/// A family of subsets `(A_1, .., A_k)` of `{0, .., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub n: usize,
    pub sets: Vec<SubsetMask>,
}

impl Presentation {
    pub fn new(n: usize, sets: Vec<SubsetMask>) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(MatroidError::GroundSetTooLarge(n));
        }
        if let Some(&bad) = sets.iter().find(|s| !s.fits(n)) {
            return Err(MatroidError::MaskOutOfRange { mask: bad, n });
        }
        Ok(Presentation { n, sets })
    }

    /// Drops empty sets, which never take part in a matching.
    pub fn normalized(&self) -> Presentation {
        Presentation {
            n: self.n,
            sets: self.sets.iter().copied().filter(|s| !s.is_empty()).collect(),
        }
    }

    pub fn matroid(&self) -> Matroid {
        transversal_from_presentation(self.n, &self.sets)
    }
}

/// Size of a maximum matching of the elements of `a` into `sets`
/// (Kuhn's augmenting paths).
pub fn matching_size(a: SubsetMask, sets: &[SubsetMask]) -> usize {
    let mut owner: Vec<Option<usize>> = vec![None; sets.len()];
    let mut size = 0;
    for x in a.elements() {
        let mut visited = vec![false; sets.len()];
        if augment(x, sets, &mut owner, &mut visited) {
            size += 1;
        }
    }
    size
}

fn augment(x: usize, sets: &[SubsetMask], owner: &mut [Option<usize>], visited: &mut [bool]) -> bool {
    for (j, s) in sets.iter().enumerate() {
        if !s.contains(x) || visited[j] {
            continue;
        }
        visited[j] = true;
        match owner[j] {
            None => {
                owner[j] = Some(x);
                return true;
            }
            Some(y) => {
                if augment(y, sets, owner, visited) {
                    owner[j] = Some(x);
                    return true;
                }
            }
        }
    }
    false
}

/// The transversal matroid: `A` is independent iff it is a partial transversal.
pub fn transversal_from_presentation(n: usize, sets: &[SubsetMask]) -> Matroid {
    Matroid::from_independence(n, |a| matching_size(a, sets) == a.len())
}

/// Presentation of `M□N` from a presentation `(A_i)` of `M` with exactly
/// `ρ(M)` nonempty sets and any presentation `(B_j)` of `N`:
/// `{A_i ∪ T} ∪ {B_j}`.
pub fn fp_presentation(pm: &Presentation, pn: &Presentation) -> Result<Presentation> {
    let total = pm.n + pn.n;
    if total > MAX_ELEMENTS {
        return Err(MatroidError::GroundSetOverflow(total));
    }
    let pm = pm.normalized();
    let rank = pm.matroid().rank();
    if pm.sets.len() != rank {
        return Err(MatroidError::PresentationRankMismatch {
            sets: pm.sets.len(),
            rank,
        });
    }
    let t = SubsetMask::full(pn.n).shifted_up(pm.n);
    let sets = pm
        .sets
        .iter()
        .map(|&a| a | t)
        .chain(pn.sets.iter().map(|b| b.shifted_up(pm.n)))
        .collect();
    Ok(Presentation { n: total, sets })
}
