//! Single-element extensions by modular cuts.
//!
//! Nonempty modular cuts are generated by linear subclasses: sets `H` of
//! hyperplanes such that whenever two members of `H` meet in a coline, every
//! hyperplane through that coline is in `H`. The cut of `H` is the set of
//! flats all of whose covering hyperplanes lie in `H`.

use crate::error::{MatroidError, Result};
use crate::family::SetFamily;
use crate::mask::{SubsetMask, MAX_ELEMENTS};
use crate::matroid::Matroid;

/// An up-closed family of flats closed under intersection of modular pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModularCut {
    pub flats: SetFamily,
}

impl ModularCut {
    pub fn new(m: &Matroid, flats: SetFamily) -> Result<Self> {
        let cut = ModularCut { flats };
        validate_cut(m, &cut)?;
        Ok(cut)
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }
}

fn validate_cut(m: &Matroid, cut: &ModularCut) -> Result<()> {
    let bad = |msg: String| Err(MatroidError::InvalidCut(msg));
    if cut.flats.ambient_n() != m.n() {
        return bad(format!(
            "cut lives on {} elements, matroid on {}",
            cut.flats.ambient_n(),
            m.n()
        ));
    }
    if let Some(f) = cut.flats.iter().find(|&f| !m.is_flat(f)) {
        return bad(format!("{f} is not a flat"));
    }
    let flats = m.flats();
    for f in cut.flats.iter() {
        if let Some(g) = flats.iter().find(|&g| f.is_subset(g) && !cut.flats.contains(g)) {
            return bad(format!("not up-closed: {f} is in the cut but {g} is not"));
        }
        for g in cut.flats.iter() {
            let modular = m.rank_of(f) + m.rank_of(g) == m.rank_of(f | g) + m.rank_of(f & g);
            if modular && !cut.flats.contains(f & g) {
                return bad(format!("modular pair {f}, {g} has intersection outside the cut"));
            }
        }
    }
    Ok(())
}

/// Every modular cut of `m`, the empty cut first.
pub fn modular_cuts(m: &Matroid) -> Vec<ModularCut> {
    let n = m.n();
    let r = m.rank();
    let flats = m.flats();
    let hyperplanes: Vec<SubsetMask> = flats
        .iter()
        .filter(|&f| r >= 1 && m.rank_of(f) == r - 1)
        .collect();
    // For every coline, the indices of the hyperplanes containing it.
    let colines: Vec<Vec<usize>> = flats
        .iter()
        .filter(|&f| r >= 2 && m.rank_of(f) == r - 2)
        .map(|c| {
            hyperplanes
                .iter()
                .enumerate()
                .filter(|(_, h)| c.is_subset(**h))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); hyperplanes.len()];
    for (ci, hs) in colines.iter().enumerate() {
        for &h in hs {
            through[h].push(ci);
        }
    }

    let mut subclasses = Vec::new();
    let mut state = vec![None::<bool>; hyperplanes.len()];
    linear_subclasses(0, &mut state, &colines, &through, &mut subclasses);

    let mut cuts = vec![ModularCut {
        flats: SetFamily::empty(n),
    }];
    for chosen in subclasses {
        let members = flats.iter().filter(|&f| {
            hyperplanes
                .iter()
                .enumerate()
                .all(|(i, h)| !f.is_subset(*h) || chosen[i])
        });
        cuts.push(ModularCut {
            flats: SetFamily::new(n, members).expect("flats of m"),
        });
    }
    cuts
}

fn linear_subclasses(
    i: usize,
    state: &mut Vec<Option<bool>>,
    colines: &[Vec<usize>],
    through: &[Vec<usize>],
    out: &mut Vec<Vec<bool>>,
) {
    if i == state.len() {
        out.push(state.iter().map(|s| s.unwrap_or(false)).collect());
        return;
    }
    for choice in [false, true] {
        state[i] = Some(choice);
        let ok = through[i].iter().all(|&c| {
            let mut inside = 0;
            let mut outside = 0;
            for &h in &colines[c] {
                match state[h] {
                    Some(true) => inside += 1,
                    Some(false) => outside += 1,
                    None => {}
                }
            }
            inside < 2 || outside == 0
        });
        if ok {
            linear_subclasses(i + 1, state, colines, through, out);
        }
    }
    state[i] = None;
}

/// Adds element `n` to `m`: `A + e` is independent iff `A` is independent
/// and `cl(A)` is not in the cut.
pub fn extend(m: &Matroid, cut: &ModularCut) -> Result<Matroid> {
    if m.n() + 1 > MAX_ELEMENTS {
        return Err(MatroidError::GroundSetOverflow(m.n() + 1));
    }
    validate_cut(m, cut)?;
    Ok(extend_unchecked(m, cut))
}

pub(crate) fn extend_unchecked(m: &Matroid, cut: &ModularCut) -> Matroid {
    let n = m.n();
    let mut in_cut = vec![false; 1 << n];
    for f in cut.flats.iter() {
        in_cut[f.index()] = true;
    }
    Matroid::from_independence(n + 1, |a| {
        let base = a.without(n);
        if !m.is_independent(base) {
            return false;
        }
        !a.contains(n) || !in_cut[m.closure(base).index()]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(e.iter().copied())
    }

    fn cut_of(mat: &Matroid, flats: &[SubsetMask]) -> ModularCut {
        ModularCut::new(mat, SetFamily::new(mat.n(), flats.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn cuts_of_small_matroids() {
        let i = Matroid::point();
        let cuts = modular_cuts(&i);
        let fams: Vec<&[SubsetMask]> = cuts.iter().map(|c| c.flats.members()).collect();
        assert_eq!(fams, vec![&[][..], &[m(&[0])][..], &[m(&[]), m(&[0])][..]]);
        let e = Matroid::empty();
        let fams: Vec<Vec<SubsetMask>> = modular_cuts(&e)
            .iter()
            .map(|c| c.flats.members().to_vec())
            .collect();
        assert_eq!(fams, vec![vec![], vec![m(&[])]]);
        assert_eq!(modular_cuts(&Matroid::uniform(1, 2).unwrap()).len(), 3);
    }

    #[test]
    fn extensions_of_a_point() {
        let i = Matroid::point();
        assert_eq!(extend(&i, &cut_of(&i, &[])).unwrap(), Matroid::free(2).unwrap());
        assert_eq!(
            extend(&i, &cut_of(&i, &[m(&[0])])).unwrap(),
            Matroid::uniform(1, 2).unwrap()
        );
        assert_eq!(
            extend(&i, &cut_of(&i, &[m(&[]), m(&[0])])).unwrap(),
            i.direct_sum(&Matroid::loop_()).unwrap()
        );
    }

    #[test]
    fn invalid_cuts_are_rejected() {
        let i = Matroid::point();
        let not_up = SetFamily::new(1, [m(&[])]).unwrap();
        assert!(matches!(ModularCut::new(&i, not_up), Err(MatroidError::InvalidCut(_))));
        // two points of U_{2,3} form a modular pair meeting in the empty set
        let u23 = Matroid::uniform(2, 3).unwrap();
        let fam = SetFamily::new(3, [m(&[0]), m(&[1]), m(&[0, 1, 2])]).unwrap();
        assert!(ModularCut::new(&u23, fam).is_err());
        let fam = SetFamily::new(3, [m(&[0]), m(&[0, 1, 2])]).unwrap();
        assert!(ModularCut::new(&u23, fam).is_ok());
    }

    /// Every modular cut gives a distinct extension, and every labeled
    /// single-element extension arises this way.
    #[test]
    fn cuts_match_all_labeled_extensions() {
        let samples = [
            Matroid::uniform(2, 3).unwrap(),
            Matroid::uniform(1, 2).unwrap().direct_sum(&Matroid::uniform(1, 2).unwrap()).unwrap(),
            Matroid::uniform(2, 4).unwrap(),
            Matroid::point().direct_sum(&Matroid::loop_()).unwrap(),
        ];
        for mat in &samples {
            let n = mat.n();
            let mut from_cuts: Vec<Matroid> = modular_cuts(mat)
                .iter()
                .map(|c| extend(mat, c).unwrap())
                .collect();
            from_cuts.sort_by_key(|x| (x.rank(), x.bases().to_vec()));
            let before = from_cuts.len();
            from_cuts.dedup();
            assert_eq!(before, from_cuts.len());

            let mut brute = Vec::new();
            for r in [mat.rank(), mat.rank() + 1] {
                let cands: Vec<SubsetMask> = SubsetMask::all(n + 1)
                    .filter(|a| a.len() == r && a.contains(n))
                    .collect();
                for pick in 0u32..(1 << cands.len()) {
                    let mut bases: Vec<SubsetMask> = mat
                        .bases()
                        .iter()
                        .copied()
                        .filter(|b| b.len() == r)
                        .collect();
                    bases.extend(
                        cands
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| pick & (1 << i) != 0)
                            .map(|(_, &c)| c),
                    );
                    if bases.is_empty() {
                        continue;
                    }
                    if let Ok(x) = Matroid::from_bases(n + 1, r, bases) {
                        if x.delete(SubsetMask::singleton(n)) == *mat {
                            brute.push(x);
                        }
                    }
                }
            }
            brute.sort_by_key(|x| (x.rank(), x.bases().to_vec()));
            brute.dedup();
            assert_eq!(from_cuts, brute);
        }
    }
}
