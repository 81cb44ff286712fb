//! The free product `M□N`, its cryptomorphic descriptions, truncation and
//! Higgs lift, and the structure theorems relating them.
//!
//! Throughout, `M` lives on `S = {0, .., n_M - 1}` and `N` on
//! `T = {n_M, .., n_M + n_N - 1}`. For a subset `A` of `S + T`, `A_S` is its
//! part in `S` and `A_T` its part in `T` shifted down to `N`'s labels.

use crate::error::{MatroidError, Result};
use crate::family::SetFamily;
use crate::mask::{SubsetMask, MAX_ELEMENTS};
use crate::matroid::Matroid;

/// Which characterization a product was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    Indep,
    Bases,
    Rank,
    Closure,
    Circuits,
}

impl Construction {
    pub const ALL: [Construction; 5] = [
        Construction::Indep,
        Construction::Bases,
        Construction::Rank,
        Construction::Closure,
        Construction::Circuits,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeProductWitness {
    pub product: Matroid,
    pub left_size: usize,
    pub construction: Construction,
}

fn check_size(m: &Matroid, n: &Matroid) -> Result<usize> {
    let total = m.n() + n.n();
    if total > MAX_ELEMENTS {
        return Err(MatroidError::GroundSetOverflow(total));
    }
    Ok(total)
}

#[inline]
fn split(m: &Matroid, a: SubsetMask) -> (SubsetMask, SubsetMask) {
    (a.intersection(m.ground()), a.shifted_down(m.n()))
}

/// `(λ_M(A_S), ν_N(A_T))`.
#[inline]
fn lack_and_nullity(m: &Matroid, n: &Matroid, a_s: SubsetMask, a_t: SubsetMask) -> (usize, usize) {
    (m.rank_lack_of(a_s), n.nullity_of(a_t))
}

/// `M□N` from the independent-set definition.
pub fn free_product(m: &Matroid, n: &Matroid) -> Result<Matroid> {
    let total = check_size(m, n)?;
    Ok(Matroid::from_independence(total, |a| {
        let (a_s, a_t) = split(m, a);
        m.is_independent(a_s) && m.rank_lack_of(a_s) >= n.nullity_of(a_t)
    }))
}

/// Bases of `M□N` from the basis characterization: `A_S` independent,
/// `A_T` spanning and `λ_M(A_S) = ν_N(A_T)`.
pub fn fp_bases(m: &Matroid, n: &Matroid) -> Result<Vec<SubsetMask>> {
    let total = check_size(m, n)?;
    Ok(SubsetMask::all(total)
        .filter(|&a| {
            let (a_s, a_t) = split(m, a);
            m.is_independent(a_s)
                && n.is_spanning(a_t)
                && m.rank_lack_of(a_s) == n.nullity_of(a_t)
        })
        .collect())
}

pub fn fp_rank(m: &Matroid, n: &Matroid, a: SubsetMask) -> usize {
    let (a_s, a_t) = split(m, a);
    let (lack, null) = lack_and_nullity(m, n, a_s, a_t);
    m.rank_of(a_s) + n.rank_of(a_t) + lack.min(null)
}

pub fn fp_nullity(m: &Matroid, n: &Matroid, a: SubsetMask) -> usize {
    let (a_s, a_t) = split(m, a);
    let (lack, null) = lack_and_nullity(m, n, a_s, a_t);
    m.nullity_of(a_s) + n.nullity_of(a_t) - lack.min(null)
}

pub fn fp_closure(m: &Matroid, n: &Matroid, a: SubsetMask) -> SubsetMask {
    let (a_s, a_t) = split(m, a);
    let (lack, null) = lack_and_nullity(m, n, a_s, a_t);
    if lack > null {
        m.closure(a_s) | a_t.shifted_up(m.n())
    } else {
        m.ground() | n.closure(a_t).shifted_up(m.n())
    }
}

pub fn fp_is_flat(m: &Matroid, n: &Matroid, a: SubsetMask) -> bool {
    let (a_s, a_t) = split(m, a);
    let (lack, null) = lack_and_nullity(m, n, a_s, a_t);
    if lack > null {
        m.is_flat(a_s)
    } else {
        a_s == m.ground() && n.is_flat(a_t)
    }
}

/// Circuits of `M□N`: the circuits of `M`, and the sets `C` with `C_S`
/// independent, `N|C_T` isthmusless and `λ_M(C_S) + 1 = ν_N(C_T)`.
pub fn fp_circuits(m: &Matroid, n: &Matroid) -> Result<Vec<SubsetMask>> {
    let total = check_size(m, n)?;
    let mut out = m.circuits();
    for c in SubsetMask::all(total) {
        let (c_s, c_t) = split(m, c);
        if c_t.is_empty() {
            continue;
        }
        if m.is_independent(c_s)
            && n.is_cyclic(c_t)
            && m.rank_lack_of(c_s) + 1 == n.nullity_of(c_t)
        {
            out.push(c);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Cyclic flats of `M□N`: those of `M` other than `S`, `S ∪ B` for nonempty
/// cyclic flats `B` of `N`, and `S` itself iff `M` is isthmusless and `N` loopless.
pub fn fp_cyclic_flats(m: &Matroid, n: &Matroid) -> Result<SetFamily> {
    let total = check_size(m, n)?;
    let s = m.ground();
    let mut members: Vec<SubsetMask> = m.cyclic_flats().iter().filter(|&f| f != s).collect();
    members.extend(
        n.cyclic_flats()
            .iter()
            .filter(|b| !b.is_empty())
            .map(|b| s | b.shifted_up(m.n())),
    );
    if m.isthmuses().is_empty() && n.loops().is_empty() {
        members.push(s);
    }
    SetFamily::new(total, members)
}

fn from_rank_fn(total: usize, rank: impl Fn(SubsetMask) -> usize) -> Matroid {
    Matroid::from_independence(total, |a| rank(a) == a.len())
}

/// `M□N` built from the chosen characterization, checked against
/// `(M□N)|S = M` and `(M□N)/S = N`.
pub fn free_product_via(m: &Matroid, n: &Matroid, how: Construction) -> Result<FreeProductWitness> {
    let total = check_size(m, n)?;
    let product = match how {
        Construction::Indep => free_product(m, n)?,
        Construction::Bases => {
            let bases = fp_bases(m, n)?;
            Matroid::from_bases(total, m.rank() + n.rank(), bases)?
        }
        Construction::Rank => from_rank_fn(total, |a| fp_rank(m, n, a)),
        Construction::Closure => Matroid::from_independence(total, |a| {
            a.elements().all(|x| !fp_closure(m, n, a.without(x)).contains(x))
        }),
        Construction::Circuits => {
            let size = 1usize << total;
            let mut dependent = vec![false; size];
            for c in fp_circuits(m, n)? {
                dependent[c.index()] = true;
            }
            for a in 0..size {
                if dependent[a] {
                    continue;
                }
                let mut rest = a;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    if dependent[a ^ bit] {
                        dependent[a] = true;
                        break;
                    }
                    rest &= rest - 1;
                }
            }
            Matroid::from_independence(total, |a| !dependent[a.index()])
        }
    };
    let s = m.ground();
    if product.restrict(s) != *m || product.contract(s) != *n {
        return Err(MatroidError::TheoremViolation(format!(
            "{how:?} construction does not restrict to M and contract to N"
        )));
    }
    Ok(FreeProductWitness {
        product,
        left_size: m.n(),
        construction: how,
    })
}

/// Left fold of [`free_product`]; the empty list gives the empty matroid.
pub fn multi_free_product(ms: &[Matroid]) -> Result<Matroid> {
    let total: usize = ms.iter().map(Matroid::n).sum();
    if total > MAX_ELEMENTS {
        return Err(MatroidError::GroundSetOverflow(total));
    }
    let mut acc = Matroid::empty();
    for m in ms {
        acc = free_product(&acc, m)?;
    }
    Ok(acc)
}

/// Independence in `M_1□..□M_k` via the prefix inequalities
/// `Σ_{i<j} λ_i(A_i) ≥ Σ_{i≤j} ν_i(A_i)` for every `j`.
pub fn multi_indep(ms: &[Matroid], a: SubsetMask) -> bool {
    let mut offset = 0;
    let mut lack = 0;
    let mut null = 0;
    for m in ms {
        let part = a.shifted_down(offset).intersection(m.ground());
        null += m.nullity_of(part);
        if lack < null {
            return false;
        }
        lack += m.rank_lack_of(part);
        offset += m.n();
    }
    true
}

/// `T^i M`: independent sets of `M` of size at most `max(0, ρ(M) - i)`.
pub fn truncation_k(m: &Matroid, i: usize) -> Matroid {
    if i == 0 {
        return m.clone();
    }
    let r = m.rank().saturating_sub(i);
    let bases = SubsetMask::all(m.n())
        .filter(|&a| a.len() == r && m.is_independent(a))
        .collect();
    Matroid::from_bases_unchecked(m.n(), r, bases)
}

/// `L^i M`: the sets of nullity at most `i`.
pub fn lift_k(m: &Matroid, i: usize) -> Matroid {
    if i == 0 {
        return m.clone();
    }
    let r = (m.rank() + i).min(m.n());
    let bases = SubsetMask::all(m.n())
        .filter(|&a| a.len() == r && m.nullity_of(a) <= i)
        .collect();
    Matroid::from_bases_unchecked(m.n(), r, bases)
}

pub fn truncation(m: &Matroid) -> Matroid {
    truncation_k(m, 1)
}

pub fn lift(m: &Matroid) -> Matroid {
    lift_k(m, 1)
}

/// The minor `(M□N)(U, V)` computed as
/// `(T^j M)(U_S, V_S) □ (L^i N)(U_T, V_T)` with `j = ν_N(U_T)`, `i = λ_M(V_S)`,
/// and checked against the minor of the product.
pub fn minor_of_fp(m: &Matroid, n: &Matroid, u: SubsetMask, v: SubsetMask) -> Result<Matroid> {
    let total = check_size(m, n)?;
    if !u.is_subset(v) {
        return Err(MatroidError::NotNested { inner: u, outer: v });
    }
    if !v.fits(total) {
        return Err(MatroidError::MaskOutOfRange { mask: v, n: total });
    }
    let (u_s, u_t) = split(m, u);
    let (v_s, v_t) = split(m, v);
    let j = n.nullity_of(u_t);
    let i = m.rank_lack_of(v_s);
    let left = truncation_k(m, j).minor(u_s, v_s)?;
    let right = lift_k(n, i).minor(u_t, v_t)?;
    let formula = free_product(&left, &right)?;
    let direct = free_product(m, n)?.minor(u, v)?;
    if formula != direct {
        return Err(MatroidError::TheoremViolation(format!(
            "minor ({u}, {v}) of the product differs from the truncated/lifted product of minors"
        )));
    }
    Ok(direct)
}

/// `T^i(M□N) = T^j M □ T^{i-j} N` with `j = max(i - ρ(N), 0)`.
pub fn fp_truncation_identity(m: &Matroid, n: &Matroid, i: usize) -> Result<bool> {
    let j = i.saturating_sub(n.rank());
    let lhs = truncation_k(&free_product(m, n)?, i);
    let rhs = free_product(&truncation_k(m, j), &truncation_k(n, i - j))?;
    Ok(lhs == rhs)
}

/// `L^i(M□N) = L^{i-k} M □ L^k N` with `k = max(i - ν(M), 0)`.
pub fn fp_lift_identity(m: &Matroid, n: &Matroid, i: usize) -> Result<bool> {
    let k = i.saturating_sub(m.nullity());
    let lhs = lift_k(&free_product(m, n)?, i);
    let rhs = free_product(&lift_k(m, i - k), &lift_k(n, k))?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(e.iter().copied())
    }

    fn u(r: usize, n: usize) -> Matroid {
        Matroid::uniform(r, n).unwrap()
    }

    fn double_points() -> Matroid {
        u(1, 2).direct_sum(&u(1, 2)).unwrap()
    }

    #[test]
    fn point_and_loop() {
        let i = Matroid::point();
        let z = Matroid::loop_();
        assert_eq!(free_product(&i, &z).unwrap(), u(1, 2));
        assert_eq!(free_product(&z, &i).unwrap(), z.direct_sum(&i).unwrap());
        assert_eq!(fp_bases(&i, &z).unwrap(), vec![m(&[0]), m(&[1])]);
        assert_eq!(fp_bases(&z, &i).unwrap(), vec![m(&[1])]);
        assert_eq!(fp_circuits(&i, &z).unwrap(), vec![m(&[0, 1])]);
        assert_eq!(fp_circuits(&z, &i).unwrap(), vec![m(&[0])]);
    }

    #[test]
    fn empty_is_identity() {
        let x = double_points();
        let e = Matroid::empty();
        assert_eq!(free_product(&e, &x).unwrap(), x);
        assert_eq!(free_product(&x, &e).unwrap(), x);
        assert_eq!(multi_free_product(&[]).unwrap(), e);
        assert_eq!(multi_free_product(std::slice::from_ref(&x)).unwrap(), x);
    }

    #[test]
    fn rank_closure_examples() {
        let (a, b) = (u(2, 3), double_points());
        assert_eq!(fp_rank(&a, &b, m(&[3, 4])), 2);
        assert_eq!(fp_rank(&a, &b, SubsetMask::full(7)), 4);
        assert_eq!(fp_rank(&a, &b, SubsetMask::EMPTY), 0);
        assert_eq!(fp_closure(&a, &b, m(&[3, 4, 5, 6])), SubsetMask::full(7));
        assert_eq!(fp_closure(&a, &b, SubsetMask::EMPTY), SubsetMask::EMPTY);
        assert_eq!(fp_closure(&a, &b, m(&[0])), m(&[0]));
        assert!(fp_is_flat(&a, &b, m(&[0])));
    }

    #[test]
    fn cyclic_flats_example() {
        let (a, b) = (u(2, 3), double_points());
        let expected = [
            m(&[]),
            m(&[0, 1, 2]),
            m(&[0, 1, 2, 3, 4]),
            m(&[0, 1, 2, 5, 6]),
            SubsetMask::full(7),
        ];
        let got = fp_cyclic_flats(&a, &b).unwrap();
        assert_eq!(got, SetFamily::new(7, expected).unwrap());
        assert_eq!(got, free_product(&a, &b).unwrap().cyclic_flats());
        let f2 = Matroid::free(2).unwrap();
        assert_eq!(fp_cyclic_flats(&f2, &f2).unwrap().members(), &[m(&[])]);
    }

    #[test]
    fn iterated_products() {
        let (i, z) = (Matroid::point(), Matroid::loop_());
        assert_eq!(
            multi_free_product(&[i.clone(), i.clone(), z.clone(), z.clone()]).unwrap(),
            u(2, 4)
        );
        let p = multi_free_product(&[i.clone(), z.clone(), i.clone(), z.clone()]).unwrap();
        // a three-point line whose first point is doubled
        assert_eq!(p.rank(), 2);
        assert!(!p.is_uniform());
        assert_eq!(p.circuits()[0], m(&[0, 1]));
        let ms = [u(2, 3), double_points(), i.clone()];
        let prod = multi_free_product(&ms).unwrap();
        for a in SubsetMask::all(prod.n()) {
            assert_eq!(multi_indep(&ms, a), prod.is_independent(a), "{a}");
        }
    }

    #[test]
    fn truncation_and_lift() {
        assert_eq!(truncation(&u(2, 3)), u(1, 3));
        assert_eq!(lift(&u(1, 3)), u(2, 3));
        let three = double_points().direct_sum(&u(1, 2)).unwrap();
        let t = truncation(&three);
        assert_eq!((t.n(), t.rank()), (6, 2));
        assert_eq!(t.cyclic_flats().len(), 5);
        let x = free_product(&u(2, 3), &double_points()).unwrap();
        for i in 0..6 {
            let mut t = x.clone();
            let mut l = x.clone();
            for _ in 0..i {
                t = truncation(&t);
                l = lift(&l);
            }
            assert_eq!(truncation_k(&x, i), t);
            assert_eq!(lift_k(&x, i), l);
            assert_eq!(truncation_k(&x, i).dual(), lift_k(&x.dual(), i));
        }
    }

    #[test]
    fn minor_theorem_special_cases() {
        let (a, b) = (u(2, 3), double_points());
        let s = a.ground();
        let full = SubsetMask::full(7);
        assert_eq!(minor_of_fp(&a, &b, SubsetMask::EMPTY, s).unwrap(), a);
        assert_eq!(minor_of_fp(&a, &b, s, full).unwrap(), b);
        let bt = m(&[3, 4, 5]);
        assert_eq!(
            minor_of_fp(&a, &b, bt, bt | s).unwrap(),
            truncation_k(&a, b.nullity_of(m(&[0, 1, 2])))
        );
        assert!(matches!(
            minor_of_fp(&a, &b, m(&[0]), m(&[1])),
            Err(MatroidError::NotNested { .. })
        ));
    }

    #[test]
    fn truncation_lift_identities() {
        let i = Matroid::point();
        assert!(fp_truncation_identity(&i, &i, 1).unwrap());
        assert_eq!(
            truncation(&free_product(&i, &i).unwrap()),
            free_product(&i, &truncation(&i)).unwrap()
        );
        let z = Matroid::loop_();
        for k in 0..4 {
            assert!(fp_truncation_identity(&u(2, 3), &double_points(), k).unwrap());
            assert!(fp_lift_identity(&u(2, 3), &double_points(), k).unwrap());
            assert!(fp_truncation_identity(&double_points(), &z, k).unwrap());
        }
    }

    #[test]
    fn all_constructions_agree_on_examples() {
        let pairs = [
            (u(2, 3), double_points()),
            (Matroid::point(), Matroid::loop_()),
            (double_points(), u(1, 3)),
            (Matroid::empty(), u(2, 4)),
        ];
        for (a, b) in &pairs {
            let reference = free_product(a, b).unwrap();
            for how in Construction::ALL {
                let w = free_product_via(a, b, how).unwrap();
                assert_eq!(w.product, reference, "{how:?}");
                assert_eq!(w.left_size, a.n());
            }
        }
    }
}
