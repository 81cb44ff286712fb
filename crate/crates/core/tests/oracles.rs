//! Library results checked against naive, independently written oracles.

use std::collections::BTreeSet;

use matfp_core::enumerate::{enumerate_up_to, Catalog};
use matfp_core::free_product::free_product;
use matfp_core::transversal::{fp_presentation, Presentation};
use matfp_core::{iso_key, Matroid, SubsetMask};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn catalog() -> Catalog {
    enumerate_up_to(6).unwrap()
}

fn subsets(n: usize) -> impl Iterator<Item = SubsetMask> + Clone {
    SubsetMask::all(n)
}

/// Independent sets are the subsets of members; accepts iff the family is
/// nonempty, equicardinal and the augmentation axiom holds.
fn naive_is_basis_family(n: usize, family: &[SubsetMask]) -> bool {
    if family.is_empty() || family.iter().any(|b| b.len() != family[0].len()) {
        return false;
    }
    let indep: Vec<SubsetMask> = subsets(n)
        .filter(|a| family.iter().any(|b| a.is_subset(*b)))
        .collect();
    let is_indep = |a: SubsetMask| indep.contains(&a);
    indep.iter().all(|&i| {
        indep.iter().all(|&j| {
            i.len() >= j.len() || j.difference(i).elements().any(|x| is_indep(i.with(x)))
        })
    })
}

fn r_subsets(n: usize, r: usize) -> Vec<SubsetMask> {
    subsets(n).filter(|a| a.len() == r).collect()
}

#[test]
fn from_bases_matches_augmentation_oracle() {
    let mut cases = Vec::new();
    for n in 0..=4 {
        for r in 0..=n {
            cases.push((n, r));
        }
    }
    cases.extend([(5, 2), (5, 3)]);
    for (n, r) in cases {
        let cands = r_subsets(n, r);
        for pick in 1u32..(1 << cands.len()) {
            let family: Vec<SubsetMask> = cands
                .iter()
                .enumerate()
                .filter(|(i, _)| pick & (1 << i) != 0)
                .map(|(_, &b)| b)
                .collect();
            let lib = Matroid::from_bases(n, r, family.iter().copied()).is_ok();
            assert_eq!(lib, naive_is_basis_family(n, &family), "n={n} r={r} {family:?}");
        }
    }
}

#[test]
fn random_six_element_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cands = r_subsets(6, 3);
    let mut accepted = 0;
    for _ in 0..400 {
        let keep = rng.random_range(1..=cands.len());
        let mut family = cands.clone();
        family.shuffle(&mut rng);
        family.truncate(keep);
        let lib = Matroid::from_bases(6, 3, family.iter().copied()).is_ok();
        assert_eq!(lib, naive_is_basis_family(6, &family));
        accepted += lib as usize;
    }
    assert!(accepted > 0);
}

fn relabeled(m: &Matroid, rng: &mut ChaCha8Rng) -> Matroid {
    let mut perm: Vec<usize> = (0..m.n()).collect();
    perm.shuffle(rng);
    m.relabel(&perm).unwrap()
}

#[test]
fn rank_closure_and_cyclic_flats_by_brute_force() {
    let cat = catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for rec in cat.classes.values() {
        let m = relabeled(&rec.matroid, &mut rng);
        let n = m.n();
        let rank = |a: SubsetMask| {
            a.subsets()
                .filter(|i| m.bases().iter().any(|b| i.is_subset(*b)))
                .map(|i| i.len())
                .max()
                .unwrap()
        };
        for a in subsets(n) {
            let r = rank(a);
            assert_eq!(m.rank_of(a), r);
            assert_eq!(m.rank_of(a) + m.rank_lack_of(a), m.rank());
            assert_eq!(m.nullity_of(a) + m.rank_of(a), a.len());
            let cl: SubsetMask = SubsetMask::from_elements((0..n).filter(|&x| rank(a.with(x)) == r));
            assert_eq!(m.closure(a), cl);
            assert!(a.is_subset(cl));
            assert_eq!(m.closure(cl), cl);
        }
        for a in subsets(n) {
            for b in a.complement(n).subsets() {
                assert!(m.closure(a).is_subset(m.closure(a | b)));
            }
        }

        let circuits: Vec<SubsetMask> = subsets(n)
            .filter(|&c| rank(c) < c.len() && c.elements().all(|x| rank(c.without(x)) == c.len() - 1))
            .collect();
        assert_eq!(m.circuits(), circuits);
        let mut unions = BTreeSet::new();
        for pick in 0u64..(1 << circuits.len().min(20)) {
            let u = circuits
                .iter()
                .enumerate()
                .filter(|(i, _)| pick & (1 << i) != 0)
                .fold(SubsetMask::EMPTY, |acc, (_, &c)| acc | c);
            unions.insert(u);
        }
        if circuits.len() <= 20 {
            let from_unions: BTreeSet<SubsetMask> = unions
                .iter()
                .copied()
                .filter(|&u| m.closure(u) == u)
                .collect();
            let lib: BTreeSet<SubsetMask> = m.cyclic_flats().iter().collect();
            assert_eq!(lib, from_unions);
        }
    }
}

#[test]
fn duality_relations() {
    let cat = catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for rec in cat.classes.values() {
        let m = relabeled(&rec.matroid, &mut rng);
        let d = m.dual();
        assert_eq!(d.dual(), m);
        let n = m.n();
        for a in subsets(n) {
            let rest = a.complement(n);
            assert_eq!(m.rank_lack_of(a), d.nullity_of(rest));
            assert_eq!(m.restrict(a).dual(), d.contract(rest));
        }
        assert_eq!(iso_key(&d), iso_key(&rec.matroid.dual()));
    }
}

fn brute_isomorphic(m: &Matroid, n: &Matroid) -> bool {
    if m.n() != n.n() || m.rank() != n.rank() || m.bases().len() != n.bases().len() {
        return false;
    }
    let target: BTreeSet<SubsetMask> = n.bases().iter().copied().collect();
    let mut perm: Vec<usize> = (0..m.n()).collect();
    permutations(&mut perm, 0, &mut |p| {
        m.bases().iter().all(|b| target.contains(&b.permuted(p)))
    })
}

fn permutations(p: &mut Vec<usize>, k: usize, found: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == p.len() {
        return found(p);
    }
    for i in k..p.len() {
        p.swap(k, i);
        if permutations(p, k + 1, found) {
            p.swap(k, i);
            return true;
        }
        p.swap(k, i);
    }
    false
}

#[test]
fn isomorphism_against_all_permutations() {
    let cat = catalog();
    let recs: Vec<&Matroid> = cat.classes.values().map(|r| &r.matroid).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (i, a) in recs.iter().enumerate() {
        for b in &recs[i + 1..] {
            if a.n() == b.n() && a.rank() == b.rank() && a.bases().len() == b.bases().len() {
                assert!(!brute_isomorphic(a, b));
                assert!(!matfp_core::iso::are_isomorphic(a, b));
            }
        }
        let c = relabeled(a, &mut rng);
        assert!(brute_isomorphic(a, &c));
        assert!(matfp_core::iso::are_isomorphic(a, &c));
    }
}

#[test]
fn keys_survive_relabeling() {
    let cat = catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (key, rec) in &cat.classes {
        for _ in 0..200 {
            assert_eq!(iso_key(&relabeled(&rec.matroid, &mut rng)), *key);
        }
    }
}

#[test]
fn catalog_invariants() {
    let cat = enumerate_up_to(7).unwrap();
    for key in cat.classes.keys() {
        assert!(cat.get(&iso_key(&key.to_matroid().dual())).is_some());
    }
    let (m, _) = cat.counts_by_size();
    let t = cat.counts_by_rank_nullity();
    for n in 0..=7 {
        assert_eq!((0..=n).map(|r| t.matroids[r][n - r]).sum::<u64>(), m[n]);
    }
    let split: Vec<u64> = (0..=6).map(|r| t.irreducibles[r][6 - r]).collect();
    assert_eq!(split, [0, 0, 3, 8, 3, 0, 0]);
    for rec in cat.records_of_size(6).filter(|r| r.irreducible && r.rank == 3) {
        assert_eq!(iso_key(&rec.matroid.dual()), iso_key(&rec.matroid));
    }
}

#[test]
fn transversal_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    for _ in 0..300 {
        let random = |rng: &mut ChaCha8Rng| {
            let n = rng.random_range(1..=4);
            let k = rng.random_range(0..=n);
            let sets = (0..k)
                .map(|_| SubsetMask::from_bits(rng.random_range(0..(1u16 << n))))
                .collect();
            Presentation::new(n, sets).unwrap().normalized()
        };
        let (pm, pn) = (random(&mut rng), random(&mut rng));
        // The product presentation needs presentations whose size is the rank.
        let Ok(p) = fp_presentation(&pm, &pn) else {
            continue;
        };
        assert_eq!(p.matroid(), free_product(&pm.matroid(), &pn.matroid()).unwrap());
        checked += 1;
    }
    assert!(checked > 50);
}
