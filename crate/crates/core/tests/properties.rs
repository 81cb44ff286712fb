//! Randomized invariants. Matroids are grown one element at a time by a
//! random modular cut, then relabeled by a random permutation.

use matfp_core::coalgebra::{section_coefficient, weak_leq};
use matfp_core::extension::{extend, modular_cuts};
use matfp_core::factorization::{factor_irreducible, free_separators, is_irreducible};
use matfp_core::format::{parse_matroid, write_matroid, MatroidFormat};
use matfp_core::free_product::{fp_closure, fp_is_flat, fp_rank, free_product, lift_k, truncation_k};
use matfp_core::{iso_key, Matroid, SubsetMask};
use proptest::prelude::*;

fn grow(choices: &[u16]) -> Matroid {
    let mut m = Matroid::empty();
    for &c in choices {
        let cuts = modular_cuts(&m);
        m = extend(&m, &cuts[c as usize % cuts.len()]).unwrap();
    }
    m
}

fn matroid(max_n: usize) -> impl Strategy<Value = Matroid> {
    (prop::collection::vec(any::<u16>(), 0..=max_n), any::<u64>()).prop_map(|(choices, seed)| {
        let m = grow(&choices);
        let mut perm: Vec<usize> = (0..m.n()).collect();
        // Fisher-Yates driven by the seed, so shrinking stays deterministic.
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        m.relabel(&perm).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_identities(m in matroid(7)) {
        for a in SubsetMask::all(m.n()) {
            prop_assert_eq!(m.rank_of(a) + m.rank_lack_of(a), m.rank());
            prop_assert_eq!(m.rank_of(a), m.rank_by_bases(a));
            prop_assert_eq!(m.is_flat(a), m.closure(a) == a);
        }
        prop_assert_eq!(m.dual().dual(), m.clone());
    }

    #[test]
    fn text_forms_round_trip(m in matroid(7)) {
        for f in [MatroidFormat::Full, MatroidFormat::Compact] {
            prop_assert_eq!(parse_matroid(&write_matroid(&m, f)).unwrap(), m.clone());
        }
    }

    #[test]
    fn product_formulas(m in matroid(4), n in matroid(4)) {
        let p = free_product(&m, &n).unwrap();
        let s = m.ground();
        prop_assert_eq!(p.rank(), m.rank() + n.rank());
        prop_assert_eq!(p.restrict(s), m.clone());
        prop_assert_eq!(p.contract(s), n.clone());
        for a in SubsetMask::all(p.n()) {
            prop_assert_eq!(fp_rank(&m, &n, a), p.rank_of(a));
            prop_assert_eq!(fp_closure(&m, &n, a), p.closure(a));
            prop_assert_eq!(fp_is_flat(&m, &n, a), p.is_flat(a));
        }
        // The product sits at the top of the weak order among matroids with
        // this restriction and contraction.
        prop_assert!(weak_leq(&m.direct_sum(&n).unwrap(), &p).unwrap());
        prop_assert!(section_coefficient(&p, &m, &n) >= 1);
    }

    #[test]
    fn truncation_and_lift_are_dual(m in matroid(6), i in 0usize..4) {
        prop_assert_eq!(truncation_k(&m, i).dual(), lift_k(&m.dual(), i));
        prop_assert_eq!(truncation_k(&m, i).rank(), m.rank().saturating_sub(i));
    }

    #[test]
    fn factorizations(m in matroid(7)) {
        prop_assume!(!m.is_empty());
        let f = factor_irreducible(&m).unwrap();
        prop_assert_eq!(f.reconstruct().unwrap(), m.clone());
        prop_assert_eq!(is_irreducible(&m).unwrap(), f.factors.len() == 1);
        let separators = free_separators(&m);
        for c in f.chain.chain() {
            prop_assert!(separators.contains(*c));
        }
        let dual_keys: Vec<_> = factor_irreducible(&m.dual()).unwrap().factors.iter().rev().map(|x| iso_key(&x.dual())).collect();
        prop_assert_eq!(f.key_multiset(), {
            let mut k = dual_keys;
            k.sort();
            k
        });
    }

    #[test]
    fn section_coefficients_dualize(l in matroid(6), k in 0usize..=6) {
        let k = k.min(l.n());
        let a = SubsetMask::all(l.n()).find(|a| a.len() == k).unwrap();
        let (m, n) = (l.restrict(a), l.contract(a));
        prop_assert_eq!(
            section_coefficient(&l, &m, &n),
            section_coefficient(&l.dual(), &n.dual(), &m.dual())
        );
    }
}
