//! The minor coalgebra: restriction-contraction coproduct, section and
//! multisection coefficients, weak order, the `c` matrix and its inverse,
//! the primitives `Q_M`, and the twisted product on tensors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::enumerate::Catalog;
use crate::error::{MatroidError, Result};
use crate::factorization::factor_irreducible;
use crate::free_product::{free_product, lift_k, truncation_k};
use crate::iso::{clone_representatives, iso_key, IsoKey};
use crate::mask::SubsetMask;
use crate::matroid::Matroid;

/// An ordered pair of class keys, written `(k1,k2)`; ordered left then right.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct KeyPair(pub IsoKey, pub IsoKey);

impl fmt::Display for KeyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// A finite rational combination of keys with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalSum<K: Ord> {
    terms: BTreeMap<K, BigRational>,
}

impl<K: Ord> Default for FormalSum<K> {
    fn default() -> Self {
        FormalSum {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> FormalSum<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, key: K, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_int(&mut self, key: K, coeff: i64) {
        self.add_term(key, BigRational::from_integer(BigInt::from(coeff)));
    }

    pub fn coefficient(&self, key: &K) -> BigRational {
        self.terms.get(key).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, c| a + c)
    }
}

impl<K: Ord + fmt::Display> fmt::Display for FormalSum<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{k}")?;
        }
        Ok(())
    }
}

/// Memoized canonical keys; safe to share between threads.
#[derive(Default)]
pub struct KeyCache {
    keys: Mutex<HashMap<Matroid, IsoKey>>,
}

impl KeyCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn key(&self, m: &Matroid) -> IsoKey {
        if let Some(k) = self.keys.lock().expect("cache lock").get(m) {
            return k.clone();
        }
        let k = iso_key(m);
        self.keys
            .lock()
            .expect("cache lock")
            .insert(m.clone(), k.clone());
        k
    }
}

/// `δ(M) = Σ_A M|A ⊗ M/A`.
pub fn coproduct(m: &Matroid) -> FormalSum<KeyPair> {
    coproduct_cached(m, &KeyCache::new())
}

pub fn coproduct_cached(m: &Matroid, cache: &KeyCache) -> FormalSum<KeyPair> {
    let mut counts: BTreeMap<KeyPair, i64> = BTreeMap::new();
    for a in SubsetMask::all(m.n()) {
        let pair = KeyPair(cache.key(&m.restrict(a)), cache.key(&m.contract(a)));
        *counts.entry(pair).or_default() += 1;
    }
    let mut out = FormalSum::new();
    for (k, c) in counts {
        out.add_int(k, c);
    }
    out
}

/// Cheap isomorphism pre-test against a target class.
struct Target {
    key: IsoKey,
    n: usize,
    r: usize,
    bases: usize,
}

impl Target {
    fn new(m: &Matroid) -> Self {
        Target {
            key: iso_key(m),
            n: m.n(),
            r: m.rank(),
            bases: m.bases().len(),
        }
    }

    fn matches(&self, m: &Matroid, cache: &KeyCache) -> bool {
        m.n() == self.n
            && m.rank() == self.r
            && m.bases().len() == self.bases
            && cache.key(m) == self.key
    }
}

/// `⟨L; M, N⟩`: the number of `A` with `L|A ≅ M` and `L/A ≅ N`.
pub fn section_coefficient(l: &Matroid, m: &Matroid, n: &Matroid) -> u64 {
    multisection(l, &[m.clone(), n.clone()])
}

/// `⟨L; M_1, .., M_k⟩`: the number of chains `∅ = U_0 ⊆ .. ⊆ U_k = S` with
/// `L(U_{i-1}, U_i) ≅ M_i` for every `i`.
pub fn multisection(l: &Matroid, ms: &[Matroid]) -> u64 {
    multisection_cached(l, ms, &KeyCache::new())
}

pub fn multisection_cached(l: &Matroid, ms: &[Matroid], cache: &KeyCache) -> u64 {
    if ms.iter().map(Matroid::n).sum::<usize>() != l.n() {
        return 0;
    }
    let mut ways: HashMap<SubsetMask, u64> = HashMap::from([(SubsetMask::EMPTY, 1)]);
    for m in ms {
        let target = Target::new(m);
        let mut next: HashMap<SubsetMask, u64> = HashMap::new();
        for (&u, &w) in &ways {
            let rest = u.complement(l.n());
            for add in rest.subsets().filter(|a| a.len() == m.n()) {
                let v = u | add;
                let minor = l.minor(u, v).expect("nested");
                if target.matches(&minor, cache) {
                    *next.entry(v).or_default() += w;
                }
            }
        }
        ways = next;
    }
    ways.get(&l.ground()).copied().unwrap_or(0)
}

fn clone_reps(m: &Matroid) -> Vec<usize> {
    let mut is_basis = vec![false; 1 << m.n()];
    for b in m.bases() {
        is_basis[b.index()] = true;
    }
    clone_representatives(m, &is_basis)
}

/// `M ≤ N` in the weak order: some bijection `σ` from the ground set of `N`
/// to that of `M` has `ρ_M(σ(A)) ≤ ρ_N(A)` for all `A`. Equivalently every
/// circuit of `N` is mapped onto a dependent set of `M`.
pub fn weak_leq(m: &Matroid, n: &Matroid) -> Result<bool> {
    if m.n() != n.n() {
        return Err(MatroidError::SizeMismatch {
            left: m.n(),
            right: n.n(),
        });
    }
    if m.rank() > n.rank() || m.bases().len() > n.bases().len() && m.rank() == n.rank() {
        return Ok(false);
    }
    if m.loops().len() < n.loops().len() {
        return Ok(false);
    }
    let size = m.n();
    let mut by_max: Vec<Vec<SubsetMask>> = vec![Vec::new(); size];
    for c in n.circuits() {
        by_max[c.max_element().expect("circuits are nonempty")].push(c);
    }
    let mut sigma = vec![usize::MAX; size];
    Ok(weak_search(0, &mut sigma, SubsetMask::EMPTY, m, &by_max, &clone_reps(m)))
}

fn weak_search(
    x: usize,
    sigma: &mut [usize],
    used: SubsetMask,
    m: &Matroid,
    by_max: &[Vec<SubsetMask>],
    reps: &[usize],
) -> bool {
    if x == sigma.len() {
        return true;
    }
    for y in 0..sigma.len() {
        if used.contains(y) {
            continue;
        }
        // Clones of `y` in M are interchangeable; try only the first unused one.
        let rep = reps[y];
        if (rep..y).any(|z| reps[z] == rep && !used.contains(z)) {
            continue;
        }
        sigma[x] = y;
        let ok = by_max[x].iter().all(|c| {
            let image = c.permuted(sigma);
            !m.is_independent(image)
        });
        if ok && weak_search(x + 1, sigma, used.with(y), m, by_max, reps) {
            return true;
        }
    }
    sigma[x] = usize::MAX;
    false
}

/// Weak order restricted to a list of classes of one (rank, nullity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakPoset {
    pub classes: Vec<IsoKey>,
    /// `leq[i][j]` iff `classes[i] ≤ classes[j]`.
    pub leq: Vec<Vec<bool>>,
}

impl WeakPoset {
    pub fn new(mut classes: Vec<IsoKey>) -> Result<Self> {
        classes.sort();
        classes.dedup();
        if let Some(first) = classes.first() {
            let (n, r) = (first.n(), first.r());
            if let Some(bad) = classes.iter().find(|k| k.n() != n || k.r() != r) {
                return Err(MatroidError::SizeMismatch {
                    left: n,
                    right: bad.n(),
                });
            }
        }
        let ms: Vec<Matroid> = classes.iter().map(IsoKey::to_matroid).collect();
        let leq = ms
            .iter()
            .map(|a| ms.iter().map(|b| weak_leq(a, b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(WeakPoset { classes, leq })
    }

    /// All classes of the given (rank, nullity) in the catalog.
    pub fn component(cat: &Catalog, rank: usize, nullity: usize) -> Result<Self> {
        if rank + nullity > cat.max_n {
            return Err(MatroidError::IncompleteCatalog(format!(
                "catalog stops at {} elements",
                cat.max_n
            )));
        }
        WeakPoset::new(
            cat.classes
                .values()
                .filter(|c| c.rank == rank && c.nullity == nullity)
                .map(|c| iso_key(&c.matroid))
                .collect(),
        )
    }

    /// Indices in key order, then stably sorted so that smaller classes come first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let k = self.classes.len();
        let mut placed = vec![false; k];
        let mut order = Vec::with_capacity(k);
        while order.len() < k {
            let next = (0..k)
                .find(|&i| !placed[i] && (0..k).all(|j| j == i || placed[j] || !self.leq[j][i]))
                .expect("weak order is acyclic");
            placed[next] = true;
            order.push(next);
        }
        order
    }
}

/// A square rational matrix with class keys labelling rows and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyMatrix {
    pub keys: Vec<IsoKey>,
    pub entries: Vec<Vec<BigRational>>,
}

impl KeyMatrix {
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i][j]
    }

    pub fn mul(&self, other: &KeyMatrix) -> KeyMatrix {
        let k = self.keys.len();
        let entries = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        (0..k).fold(BigRational::zero(), |acc, t| {
                            acc + &self.entries[i][t] * &other.entries[t][j]
                        })
                    })
                    .collect()
            })
            .collect();
        KeyMatrix {
            keys: self.keys.clone(),
            entries,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row[..i].iter().all(Zero::is_zero))
    }

    /// Tab-separated, with keys as row and column headers.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("*");
        for k in &self.keys {
            out.push('\t');
            out.push_str(k.as_str());
        }
        out.push('\n');
        for (k, row) in self.keys.iter().zip(&self.entries) {
            out.push_str(k.as_str());
            for x in row {
                out.push('\t');
                out.push_str(&x.to_string());
            }
            out.push('\n');
        }
        out
    }
}

fn irreducible_factors(key: &IsoKey, cat: Option<&Catalog>) -> Result<Vec<Matroid>> {
    if let Some(rec) = cat.and_then(|c| c.get(key)) {
        return Ok(rec.factor_keys.iter().map(IsoKey::to_matroid).collect());
    }
    let m = key.to_matroid();
    if m.is_empty() {
        return Ok(Vec::new());
    }
    Ok(factor_irreducible(&m)?.factors)
}

/// `c(N, M) = ⟨N; M_1, .., M_k⟩` where `M = M_1 □ .. □ M_k` into irreducibles,
/// rows `N` and columns `M` in the poset's linear extension.
pub fn c_matrix(poset: &WeakPoset, cat: Option<&Catalog>) -> Result<KeyMatrix> {
    let order = poset.linear_extension();
    let keys: Vec<IsoKey> = order.iter().map(|&i| poset.classes[i].clone()).collect();
    let ms: Vec<Matroid> = keys.iter().map(IsoKey::to_matroid).collect();
    let factors = keys
        .iter()
        .map(|k| irreducible_factors(k, cat))
        .collect::<Result<Vec<_>>>()?;
    let cache = KeyCache::new();
    let entries = ms
        .iter()
        .map(|n| {
            factors
                .iter()
                .map(|fs| {
                    BigRational::from_integer(BigInt::from(multisection_cached(n, fs, &cache)))
                })
                .collect()
        })
        .collect();
    Ok(KeyMatrix { keys, entries })
}

/// Inverse of an upper-triangular matrix by
/// `c⁻¹(M,M) = 1/c(M,M)` and
/// `c⁻¹(M,N) = -c(N,N)⁻¹ Σ_{M ≤ P < N} c⁻¹(M,P) c(P,N)`.
pub fn c_inverse(c: &KeyMatrix) -> Result<KeyMatrix> {
    let k = c.keys.len();
    let mut inv = vec![vec![BigRational::zero(); k]; k];
    for i in 0..k {
        if c.entries[i][i].is_zero() {
            return Err(MatroidError::SingularDiagonal(c.keys[i].to_string()));
        }
        inv[i][i] = c.entries[i][i].recip();
        for j in i + 1..k {
            let sum = (i..j).fold(BigRational::zero(), |acc, p| {
                acc + &inv[i][p] * &c.entries[p][j]
            });
            inv[i][j] = -sum / &c.entries[j][j];
        }
    }
    Ok(KeyMatrix {
        keys: c.keys.clone(),
        entries: inv,
    })
}

/// `Q_M = Σ_{N ≥ M} c⁻¹(M, N) N` over the (rank, nullity) component of `M`.
pub fn q_primitive(m: &Matroid, cat: &Catalog) -> Result<FormalSum<IsoKey>> {
    let key = iso_key(m);
    if cat.get(&key).is_none() {
        return Err(MatroidError::IncompleteCatalog(format!("{key} is not in the catalog")));
    }
    let poset = WeakPoset::component(cat, m.rank(), m.nullity())?;
    let c = c_matrix(&poset, Some(cat))?;
    let inv = c_inverse(&c)?;
    let row = inv.keys.iter().position(|k| *k == key).expect("key in component");
    let mut out = FormalSum::new();
    for (k, x) in inv.keys.iter().zip(&inv.entries[row]) {
        out.add_term(k.clone(), x.clone());
    }
    Ok(out)
}

/// `⟨L; M, N⟩ ≠ 0` implies `M ⊕ N ≤ L ≤ M □ N`; returns whether that holds.
pub fn initial_bounds_check(l: &Matroid, m: &Matroid, n: &Matroid) -> Result<bool> {
    if m.n() + n.n() != l.n() {
        return Err(MatroidError::SizeMismatch {
            left: l.n(),
            right: m.n() + n.n(),
        });
    }
    if section_coefficient(l, m, n) == 0 {
        return Ok(true);
    }
    Ok(weak_leq(&m.direct_sum(n)?, l)? && weak_leq(l, &free_product(m, n)?)?)
}

/// `τ(M ⊗ N) = L^{ρ(M)} N ⊗ T^{ν(N)} M`.
pub fn twist(pair: &KeyPair) -> KeyPair {
    twist_cached(pair, &KeyCache::new())
}

pub fn twist_cached(pair: &KeyPair, cache: &KeyCache) -> KeyPair {
    let (m, n) = (pair.0.to_matroid(), pair.1.to_matroid());
    KeyPair(
        cache.key(&lift_k(&n, m.rank())),
        cache.key(&truncation_k(&m, n.nullity())),
    )
}

/// `(M ⊗ N) □ (P ⊗ Q) = (M □ L^{ρ(N)} P) ⊗ (T^{ν(P)} N □ Q)`.
pub fn twisted_product(left: &KeyPair, right: &KeyPair) -> Result<KeyPair> {
    twisted_product_cached(left, right, &KeyCache::new())
}

pub fn twisted_product_cached(left: &KeyPair, right: &KeyPair, cache: &KeyCache) -> Result<KeyPair> {
    let (m, n) = (left.0.to_matroid(), left.1.to_matroid());
    let (p, q) = (right.0.to_matroid(), right.1.to_matroid());
    let first = free_product(&m, &lift_k(&p, n.rank()))?;
    let second = free_product(&truncation_k(&n, p.nullity()), &q)?;
    Ok(KeyPair(cache.key(&first), cache.key(&second)))
}

/// Product of two sums of tensors, extended bilinearly from [`twisted_product`].
pub fn twisted_product_sum(
    a: &FormalSum<KeyPair>,
    b: &FormalSum<KeyPair>,
    cache: &KeyCache,
) -> Result<FormalSum<KeyPair>> {
    let mut out = FormalSum::new();
    for (ka, ca) in a.iter() {
        for (kb, cb) in b.iter() {
            out.add_term(twisted_product_cached(ka, kb, cache)?, ca * cb);
        }
    }
    Ok(out)
}

/// Checks `δ(M □ N) = δ(M) □ δ(N)`.
pub fn bialgebra_check(m: &Matroid, n: &Matroid) -> Result<bool> {
    bialgebra_check_cached(m, n, &KeyCache::new())
}

pub fn bialgebra_check_cached(m: &Matroid, n: &Matroid, cache: &KeyCache) -> Result<bool> {
    let lhs = coproduct_cached(&free_product(m, n)?, cache);
    let rhs = twisted_product_sum(&coproduct_cached(m, cache), &coproduct_cached(n, cache), cache)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_product::multi_free_product;

    fn u(r: usize, n: usize) -> Matroid {
        Matroid::uniform(r, n).unwrap()
    }

    fn key(m: &Matroid) -> IsoKey {
        iso_key(m)
    }

    fn d() -> Matroid {
        u(1, 2).direct_sum(&u(1, 2)).unwrap()
    }

    fn p() -> Matroid {
        let (i, z) = (Matroid::point(), Matroid::loop_());
        multi_free_product(&[i.clone(), z.clone(), i, z]).unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn small_coproducts() {
        let (e, i, z) = (Matroid::empty(), Matroid::point(), Matroid::loop_());
        let mut expected = FormalSum::new();
        expected.add_int(KeyPair(key(&e), key(&u(1, 2))), 1);
        expected.add_int(KeyPair(key(&i), key(&z)), 2);
        expected.add_int(KeyPair(key(&u(1, 2)), key(&e)), 1);
        assert_eq!(coproduct(&u(1, 2)), expected);

        let mut only = FormalSum::new();
        only.add_int(KeyPair(key(&e), key(&e)), 1);
        assert_eq!(coproduct(&e), only);

        let d2 = coproduct(&u(2, 2));
        assert_eq!(d2.coefficient(&KeyPair(key(&i), key(&i))), rat(2, 1));
        assert_eq!(d2.mass(), rat(4, 1));
        assert_eq!(coproduct(&d()).mass(), rat(16, 1));
    }

    #[test]
    fn section_coefficients() {
        let (i, z) = (Matroid::point(), Matroid::loop_());
        assert_eq!(multisection(&u(2, 4), &[i.clone(), i.clone(), z.clone(), z.clone()]), 24);
        assert_eq!(multisection(&d(), &[i.clone(), z.clone(), i.clone(), z.clone()]), 8);
        assert_eq!(multisection(&d(), &[d()]), 1);
        assert_eq!(section_coefficient(&u(2, 4), &u(1, 2), &u(1, 2)), 0);
        assert_eq!(multisection(&d(), &[i]), 0);
    }

    #[test]
    fn weak_order_chain() {
        assert!(weak_leq(&d(), &p()).unwrap());
        assert!(weak_leq(&p(), &u(2, 4)).unwrap());
        assert!(!weak_leq(&u(2, 4), &d()).unwrap());
        assert!(!weak_leq(&p(), &d()).unwrap());
        assert!(weak_leq(&d(), &d()).unwrap());
        assert!(matches!(
            weak_leq(&d(), &u(1, 3)),
            Err(MatroidError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn worked_example_matrix() {
        let poset = WeakPoset::new(vec![key(&u(2, 4)), key(&p()), key(&d())]).unwrap();
        let c = c_matrix(&poset, None).unwrap();
        assert_eq!(c.keys, vec![key(&d()), key(&p()), key(&u(2, 4))]);
        let ints: Vec<Vec<BigRational>> = [[1, 8, 16], [0, 4, 20], [0, 0, 24]]
            .iter()
            .map(|row| row.iter().map(|&x| rat(x, 1)).collect())
            .collect();
        assert_eq!(c.entries, ints);
        let inv = c_inverse(&c).unwrap();
        let expected: Vec<Vec<BigRational>> = [[24, -48, 24], [0, 6, -5], [0, 0, 1]]
            .iter()
            .map(|row| row.iter().map(|&x| rat(x, 24)).collect())
            .collect();
        assert_eq!(inv.entries, expected);
        assert!(c.mul(&inv).is_identity());
        assert!(c.to_tsv().starts_with("*\t"));
    }

    #[test]
    fn singular_diagonal() {
        let c = KeyMatrix {
            keys: vec![key(&d())],
            entries: vec![vec![BigRational::zero()]],
        };
        assert!(matches!(c_inverse(&c), Err(MatroidError::SingularDiagonal(_))));
    }

    #[test]
    fn twists() {
        let (e, i) = (Matroid::empty(), Matroid::point());
        let n = d();
        assert_eq!(twist(&KeyPair(key(&e), key(&n))), KeyPair(key(&n), key(&e)));
        assert_eq!(twist(&KeyPair(key(&i), key(&i))), KeyPair(key(&i), key(&i)));
        let ie = KeyPair(key(&i), key(&e));
        assert_eq!(
            twisted_product(&ie, &ie).unwrap(),
            KeyPair(key(&u(2, 2)), key(&e))
        );
    }

    #[test]
    fn bialgebra_examples() {
        let i = Matroid::point();
        assert!(bialgebra_check(&i, &i).unwrap());
        assert!(bialgebra_check(&d(), &Matroid::empty()).unwrap());
        assert!(bialgebra_check(&u(2, 3), &d()).unwrap());
    }

    #[test]
    fn bounds() {
        assert!(initial_bounds_check(&u(2, 4), &u(1, 2), &u(1, 2)).unwrap());
        let l = free_product(&u(1, 2), &d()).unwrap();
        assert!(section_coefficient(&l, &u(1, 2), &d()) >= 1);
        assert!(initial_bounds_check(&l, &u(1, 2), &d()).unwrap());
    }

    #[test]
    fn formal_sum_rendering() {
        let mut s = FormalSum::new();
        s.add_term(key(&d()), rat(1, 1));
        s.add_term(key(&p()), rat(-2, 1));
        s.add_term(key(&u(2, 4)), rat(1, 24));
        let text = s.to_string();
        assert!(text.contains("-2*4:2:"));
        assert!(text.contains("1/24*4:2:111111"));
        s.add_term(key(&d()), rat(-1, 1));
        assert_eq!(s.len(), 2);
    }
}
