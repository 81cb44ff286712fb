//! Seeded property sweeps over a catalog. Each property reports the number of
//! cases checked and the first counterexample found, if any.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coalgebra::{
    bialgebra_check_cached, c_inverse, c_matrix, coproduct_cached, q_primitive, weak_leq, KeyCache,
    KeyPair, WeakPoset,
};
use crate::enumerate::Catalog;
use crate::error::{MatroidError, Result};
use crate::factorization::{
    chain_factorization, d_lattice, factor_irreducible, free_separators,
    free_separators_via_intervals, is_irreducible, maximal_chain_with, pinchpoints, primary_flag,
};
use crate::free_product::{
    fp_bases, fp_cyclic_flats, fp_lift_identity, fp_truncation_identity, free_product,
    free_product_via, minor_of_fp, multi_free_product, Construction,
};
use crate::iso::{iso_key, IsoKey};
use crate::mask::SubsetMask;
use crate::matroid::Matroid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Crypto,
    Factorization,
    Coalgebra,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Crypto, Suite::Factorization, Suite::Coalgebra];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Crypto => "crypto",
            Suite::Factorization => "factorization",
            Suite::Coalgebra => "coalgebra",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}` (expected crypto, factorization or coalgebra)"))
    }
}

/// Sizes and sample counts for the sweeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Exhaustive pairs have total size at most this.
    pub pair_size: usize,
    /// Exhaustive triples have total size at most this.
    pub triple_size: usize,
    /// Single-matroid sweeps use catalog classes up to this size.
    pub class_size: usize,
    /// Random pairs with total size in `random_pair_sizes`.
    pub random_pairs: usize,
    pub random_pair_sizes: (usize, usize),
    pub minor_draws: usize,
    /// Largest `i` in the truncation and lift identities.
    pub max_shift: usize,
    /// Components with `r + k` at most this get the full matrix checks.
    pub component_size: usize,
    /// Exhaustive bialgebra pairs use classes up to this size; random ones
    /// have total size within two of `bialgebra_total`.
    pub bialgebra_class_size: usize,
    pub bialgebra_random: usize,
    pub bialgebra_total: usize,
}

impl VerifyConfig {
    /// The full sweep: exhaustive pairs to total size 8, random pairs of
    /// total size 9 and 10.
    pub fn full(seed: u64) -> Self {
        VerifyConfig {
            seed,
            pair_size: 8,
            triple_size: 8,
            class_size: 7,
            random_pairs: 1000,
            random_pair_sizes: (9, 10),
            minor_draws: 10_000,
            max_shift: 4,
            component_size: 6,
            bialgebra_class_size: 4,
            bialgebra_random: 100,
            bialgebra_total: 10,
        }
    }

    /// [`full`](Self::full) with random draw counts scaled by `samples`.
    pub fn with_samples(samples: usize, seed: u64) -> Self {
        VerifyConfig {
            random_pairs: samples,
            minor_draws: samples.saturating_mul(10),
            bialgebra_random: samples.div_ceil(10),
            ..VerifyConfig::full(seed)
        }
    }

    /// Small sizes for quick runs.
    pub fn quick(seed: u64) -> Self {
        VerifyConfig {
            seed,
            pair_size: 6,
            triple_size: 6,
            class_size: 5,
            random_pairs: 20,
            random_pair_sizes: (7, 8),
            minor_draws: 200,
            max_shift: 3,
            component_size: 4,
            bialgebra_class_size: 3,
            bialgebra_random: 5,
            bialgebra_total: 7,
        }
    }
}

/// Matroids witnessing a failed property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub description: String,
    pub matroids: Vec<(String, Matroid)>,
}

impl Counterexample {
    pub fn new(description: impl Into<String>, matroids: &[(&str, &Matroid)]) -> Self {
        Counterexample {
            description: description.into(),
            matroids: matroids
                .iter()
                .map(|(l, m)| (l.to_string(), (*m).clone()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub suite: Suite,
    pub property: &'static str,
    pub checked: usize,
    pub failure: Option<Counterexample>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "PASS {}/{} ({} cases)", self.suite, self.property, self.checked),
            Some(c) => write!(
                f,
                "FAIL {}/{} ({} cases): {}",
                self.suite, self.property, self.checked, c.description
            ),
        }
    }
}

pub fn run_suite(suite: Suite, cat: &Catalog, cfg: &VerifyConfig) -> Result<Vec<PropertyReport>> {
    let sweep = Sweep::new(cat, cfg);
    let results = match suite {
        Suite::Crypto => sweep.crypto(),
        Suite::Factorization => sweep.factorization(),
        Suite::Coalgebra => sweep.coalgebra()?,
    };
    Ok(results
        .into_iter()
        .map(|(property, checked, failure)| PropertyReport {
            suite,
            property,
            checked,
            failure,
        })
        .collect())
}

type Outcome = (&'static str, usize, Option<Counterexample>);

/// First failing case in input order.
fn first_failure<T, F>(cases: &[T], check: F) -> Option<Counterexample>
where
    T: Sync,
    F: Fn(&T) -> Option<Counterexample> + Sync + Send,
{
    cases.par_iter().map(check).find_first(Option::is_some).flatten()
}

fn outcome<T, F>(name: &'static str, cases: &[T], check: F) -> Outcome
where
    T: Sync,
    F: Fn(&T) -> Option<Counterexample> + Sync + Send,
{
    (name, cases.len(), first_failure(cases, check))
}

fn error_case(e: MatroidError, ms: &[(&str, &Matroid)]) -> Option<Counterexample> {
    Some(Counterexample::new(e.to_string(), ms))
}

struct Sweep<'a> {
    cat: &'a Catalog,
    cfg: &'a VerifyConfig,
    by_size: Vec<Vec<&'a Matroid>>,
}

impl<'a> Sweep<'a> {
    fn new(cat: &'a Catalog, cfg: &'a VerifyConfig) -> Self {
        let mut by_size = vec![Vec::new(); cat.max_n + 1];
        for rec in cat.classes.values() {
            by_size[rec.matroid.n()].push(&rec.matroid);
        }
        Sweep { cat, cfg, by_size }
    }

    fn cat_max(&self) -> usize {
        self.by_size.len() - 1
    }

    fn classes_up_to(&self, n: usize) -> Vec<&'a Matroid> {
        self.by_size.iter().take(n + 1).flatten().copied().collect()
    }

    fn pairs_up_to(&self, total: usize) -> Vec<(&'a Matroid, &'a Matroid)> {
        let mut out = Vec::new();
        for a in 0..=total.min(self.cat_max()) {
            for b in 0..=(total - a).min(self.cat_max()) {
                for &m in &self.by_size[a] {
                    for &n in &self.by_size[b] {
                        out.push((m, n));
                    }
                }
            }
        }
        out
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(stream);
        rng
    }

    /// A randomly relabeled catalog class of size `n`.
    fn random_matroid(&self, n: usize, rng: &mut ChaCha8Rng) -> Matroid {
        let pool = &self.by_size[n];
        let m = pool[rng.random_range(0..pool.len())];
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        m.relabel(&perm).expect("a permutation")
    }

    /// Random pairs whose total size is drawn from `lo..=hi`.
    fn random_pairs(&self, count: usize, lo: usize, hi: usize, stream: u64) -> Vec<(Matroid, Matroid)> {
        let mut rng = self.rng(stream);
        let max = self.cat_max();
        let hi = hi.min(2 * max);
        if lo > hi {
            return Vec::new();
        }
        (0..count)
            .map(|_| {
                let total = rng.random_range(lo..=hi);
                let a = rng.random_range(total.saturating_sub(max)..=total.min(max));
                let m = self.random_matroid(a, &mut rng);
                let n = self.random_matroid(total - a, &mut rng);
                (m, n)
            })
            .collect()
    }

    // ---- free products ----

    fn crypto(&self) -> Vec<Outcome> {
        let cfg = self.cfg;
        let pairs = self.pairs_up_to(cfg.pair_size);
        let random = self.random_pairs(
            cfg.random_pairs,
            cfg.random_pair_sizes.0,
            cfg.random_pair_sizes.1,
            1,
        );
        let classes = self.classes_up_to(cfg.class_size);
        let small_pairs: Vec<(&Matroid, &Matroid)> = self.pairs_up_to(cfg.pair_size.min(7));
        let mut out = vec![
            outcome("constructions_agree", &pairs, |(m, n)| constructions_agree(m, n)),
            outcome("cyclic_flats_agree", &pairs, |(m, n)| cyclic_flats_agree(m, n)),
            outcome("random_constructions_agree", &random, |(m, n)| {
                constructions_agree(m, n).or_else(|| cyclic_flats_agree(m, n))
            }),
            outcome("duality", &pairs, |(m, n)| fp_duality(m, n)),
        ];
        let triples = self.triples_up_to(cfg.triple_size);
        out.push(outcome("associativity", &triples, |(a, b, c)| associativity(a, b, c)));
        let draws = self.minor_draws();
        out.push(outcome("minor_theorem", &draws, |(m, n, u, v)| {
            minor_of_fp(m, n, *u, *v).err().and_then(|e| {
                error_case(e, &[("left", m), ("right", n)]).map(|mut c| {
                    c.description = format!("U={u} V={v}: {}", c.description);
                    c
                })
            })
        }));
        out.push(outcome("truncation_lift_identities", &small_pairs, |(m, n)| {
            shift_identities(m, n, cfg.max_shift)
        }));
        out.push(outcome("extremality", &classes, |l| extremality(l)));
        out.push(outcome("loops_and_isthmuses", &pairs, |(m, n)| loops_and_isthmuses(m, n)));
        out.push(outcome("direct_sum_cases", &pairs, |(m, n)| direct_sum_cases(m, n)));
        out
    }

    fn triples_up_to(&self, total: usize) -> Vec<(&'a Matroid, &'a Matroid, &'a Matroid)> {
        let mut out = Vec::new();
        let max = self.cat_max().min(self.cfg.class_size);
        for a in 0..=total.min(max) {
            for b in 0..=(total - a).min(max) {
                for c in 0..=(total - a - b).min(max) {
                    for &x in &self.by_size[a] {
                        for &y in &self.by_size[b] {
                            for &z in &self.by_size[c] {
                                out.push((x, y, z));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn minor_draws(&self) -> Vec<(Matroid, Matroid, SubsetMask, SubsetMask)> {
        let cfg = self.cfg;
        let max = self.cat_max().min(cfg.class_size);
        let mut rng = self.rng(2);
        (0..cfg.minor_draws)
            .map(|_| {
                let total = rng.random_range(0..=cfg.pair_size.min(2 * max));
                let a = rng.random_range(total.saturating_sub(max)..=total.min(max));
                let m = self.random_matroid(a, &mut rng);
                let n = self.random_matroid(total - a, &mut rng);
                let (mut u, mut v) = (SubsetMask::EMPTY, SubsetMask::EMPTY);
                for x in 0..total {
                    match rng.random_range(0..3) {
                        0 => {}
                        1 => v = v.with(x),
                        _ => {
                            u = u.with(x);
                            v = v.with(x);
                        }
                    }
                }
                (m, n, u, v)
            })
            .collect()
    }

    // ---- factorization ----

    fn factorization(&self) -> Vec<Outcome> {
        let cfg = self.cfg;
        let nonempty: Vec<&Matroid> = self
            .classes_up_to(cfg.class_size)
            .into_iter()
            .filter(|m| !m.is_empty())
            .collect();
        let seeds: Vec<(&Matroid, u64)> = {
            let mut rng = self.rng(3);
            nonempty.iter().map(|&m| (m, rng.random())).collect()
        };
        let products: Vec<(&Matroid, &Matroid)> = self
            .pairs_up_to(cfg.class_size)
            .into_iter()
            .filter(|(m, n)| !m.is_empty() && !n.is_empty())
            .collect();
        vec![
            outcome("reconstruction", &nonempty, |m| reconstruction(m)),
            outcome("chains_agree", &seeds, |(m, seed)| chains_agree(m, *seed)),
            outcome("irreducible_duality", &nonempty, |m| irreducible_duality(m)),
            outcome("cancellation", &[()], |_| cancellation(&products)),
            outcome("pinchpoints", &nonempty, |m| pinchpoint_agreement(m)),
            outcome("separator_intervals", &nonempty, |m| {
                (free_separators(m) != free_separators_via_intervals(m))
                    .then(|| Counterexample::new("scan and interval formula differ", &[("matroid", m)]))
            }),
            outcome("disconnected_irreducible", &nonempty, |m| disconnected_irreducible(m)),
            outcome("self_dual_irreducible", &nonempty, |m| {
                let ok = **m != m.dual() || m.is_uniform() || is_irreducible(m).unwrap_or(false);
                (!ok).then(|| {
                    Counterexample::new("identically self-dual but neither uniform nor irreducible", &[("matroid", m)])
                })
            }),
        ]
    }

    // ---- coalgebra ----

    fn coalgebra(&self) -> Result<Vec<Outcome>> {
        let cfg = self.cfg;
        let cat_max = self.cat_max();
        let cache = KeyCache::new();
        let classes = self.classes_up_to(cfg.component_size.min(cat_max));
        let mut out = vec![
            outcome("coproduct_mass", &classes, |m| coproduct_mass(m, &cache)),
            outcome("section_duality", &classes, |m| section_duality(m, &cache)),
            outcome("initial_bounds", &classes, |m| initial_bounds(m, &cache)),
        ];

        let mut components = Vec::new();
        for total in 0..=cfg.component_size.min(cat_max) {
            for r in 0..=total {
                components.push((r, total - r));
            }
        }
        out.push(outcome("c_matrix_inverse", &components, |&(r, k)| {
            self.component_check(r, k)
        }));

        let small = self.classes_up_to(cfg.bialgebra_class_size.min(cat_max));
        let mut pairs = Vec::new();
        for &m in &small {
            for &n in &small {
                pairs.push((m.clone(), n.clone()));
            }
        }
        out.push(outcome("bialgebra_exhaustive", &pairs, |(m, n)| {
            bialgebra(m, n, &cache)
        }));
        let lo = cfg.bialgebra_total.saturating_sub(2);
        let random = self.random_pairs(cfg.bialgebra_random, lo, cfg.bialgebra_total, 4);
        out.push(outcome("bialgebra_random", &random, |(m, n)| bialgebra(m, n, &cache)));

        if cat_max >= 4 {
            out.push(("worked_example", 1, worked_example(self)?));
        }
        Ok(out)
    }

    fn component_check(&self, r: usize, k: usize) -> Option<Counterexample> {
        let keys: Vec<IsoKey> = self.by_size[r + k]
            .iter()
            .filter(|m| m.rank() == r)
            .map(|m| iso_key(m))
            .collect();
        let first = keys.first().map(IsoKey::to_matroid).unwrap_or_else(Matroid::empty);
        let fail = |msg: String| Some(Counterexample::new(msg, &[("class", &first)]));
        let poset = match WeakPoset::new(keys) {
            Ok(p) => p,
            Err(e) => return fail(e.to_string()),
        };
        let c = match c_matrix(&poset, None) {
            Ok(c) => c,
            Err(e) => return fail(e.to_string()),
        };
        if !c.is_upper_triangular() {
            return fail(format!("c matrix of component ({r},{k}) is not upper triangular"));
        }
        let index: BTreeMap<&IsoKey, usize> =
            poset.classes.iter().enumerate().map(|(i, k)| (k, i)).collect();
        for (i, row_key) in c.keys.iter().enumerate() {
            for (j, col_key) in c.keys.iter().enumerate() {
                if !c.get(i, j).is_zero() && !poset.leq[index[row_key]][index[col_key]] {
                    let m = row_key.to_matroid();
                    let n = col_key.to_matroid();
                    return Some(Counterexample::new(
                        "nonzero c(N,M) without N <= M",
                        &[("lower", &m), ("upper", &n)],
                    ));
                }
            }
        }
        let inv = match c_inverse(&c) {
            Ok(inv) => inv,
            Err(e) => return fail(e.to_string()),
        };
        if !c.mul(&inv).is_identity() || !inv.mul(&c).is_identity() {
            return fail(format!("c matrix of component ({r},{k}) is not inverted"));
        }
        None
    }
}

fn constructions_agree(m: &Matroid, n: &Matroid) -> Option<Counterexample> {
    let ms = [("left", m), ("right", n)];
    let reference = match free_product(m, n) {
        Ok(p) => p,
        Err(e) => return error_case(e, &ms),
    };
    for how in Construction::ALL {
        match free_product_via(m, n, how) {
            Ok(w) if w.product == reference => {}
            Ok(w) => {
                return Some(Counterexample::new(
                    format!("{how:?} construction differs"),
                    &[("left", m), ("right", n), ("product", &w.product)],
                ))
            }
            Err(e) => return error_case(e, &ms),
        }
    }
    match fp_bases(m, n) {
        Ok(b) if b == reference.bases() => None,
        Ok(_) => Some(Counterexample::new("basis case list differs", &ms)),
        Err(e) => error_case(e, &ms),
    }
}

fn cyclic_flats_agree(m: &Matroid, n: &Matroid) -> Option<Counterexample> {
    let ms = [("left", m), ("right", n)];
    match (fp_cyclic_flats(m, n), free_product(m, n)) {
        (Ok(f), Ok(p)) if f == p.cyclic_flats() => None,
        (Ok(_), Ok(_)) => Some(Counterexample::new("cyclic flats formula differs", &ms)),
        (Err(e), _) | (_, Err(e)) => error_case(e, &ms),
    }
}

fn fp_duality(m: &Matroid, n: &Matroid) -> Option<Counterexample> {
    let ms = [("left", m), ("right", n)];
    match (free_product(m, n), free_product(&n.dual(), &m.dual())) {
        (Ok(p), Ok(q)) if swap_sides(&p.dual(), m.n()) == q => None,
        (Ok(_), Ok(_)) => Some(Counterexample::new("dual of product is not the reversed product of duals", &ms)),
        (Err(e), _) | (_, Err(e)) => error_case(e, &ms),
    }
}

/// Moves the first `left` elements after the rest, keeping relative order.
fn swap_sides(p: &Matroid, left: usize) -> Matroid {
    let right = p.n() - left;
    let perm: Vec<usize> = (0..p.n())
        .map(|x| if x < left { x + right } else { x - left })
        .collect();
    p.relabel(&perm).expect("a permutation")
}

fn associativity(a: &Matroid, b: &Matroid, c: &Matroid) -> Option<Counterexample> {
    let ms = [("first", a), ("second", b), ("third", c)];
    let left = free_product(a, b).and_then(|ab| free_product(&ab, c));
    let right = free_product(b, c).and_then(|bc| free_product(a, &bc));
    match (left, right) {
        (Ok(x), Ok(y)) if x == y => None,
        (Ok(_), Ok(_)) => Some(Counterexample::new("products are not associative", &ms)),
        (Err(e), _) | (_, Err(e)) => error_case(e, &ms),
    }
}

fn shift_identities(m: &Matroid, n: &Matroid, max_shift: usize) -> Option<Counterexample> {
    let ms = [("left", m), ("right", n)];
    for i in 0..=max_shift {
        for (name, result) in [
            ("truncation", fp_truncation_identity(m, n, i)),
            ("lift", fp_lift_identity(m, n, i)),
        ] {
            match result {
                Ok(true) => {}
                Ok(false) => return Some(Counterexample::new(format!("{name} identity fails for i={i}"), &ms)),
                Err(e) => return error_case(e, &ms),
            }
        }
    }
    None
}

/// Every independent set of `L` is independent in `L|S' □ L/S'`, with equal
/// rank, and satisfies `λ_{L|S'}(A_S) ≥ ν_{L/S'}(A_T)`.
fn extremality(l: &Matroid) -> Option<Counterexample> {
    let n = l.n();
    for s in SubsetMask::all(n) {
        let rest = s.complement(n);
        let (left, right) = (l.restrict(s), l.contract(s));
        let product = match free_product(&left, &right) {
            Ok(p) => p,
            Err(e) => return error_case(e, &[("matroid", l)]),
        };
        let fail = |msg: &str| {
            Some(Counterexample::new(
                format!("S'={s}: {msg}"),
                &[("matroid", l), ("restriction", &left), ("contraction", &right)],
            ))
        };
        if product.rank() != l.rank() {
            return fail("ranks differ");
        }
        for a in SubsetMask::all(n).filter(|&a| l.is_independent(a)) {
            let a_s = (a & s).compress(s);
            let a_t = (a & rest).compress(rest);
            if left.rank_lack_of(a_s) < right.nullity_of(a_t) {
                return fail("rank-lack inequality fails");
            }
            if !product.is_independent(a_s | a_t.shifted_up(left.n())) {
                return fail("independent set not independent in the product");
            }
        }
    }
    None
}

fn loops_and_isthmuses(m: &Matroid, n: &Matroid) -> Option<Counterexample> {
    let ms = [("left", m), ("right", n)];
    let p = match free_product(m, n) {
        Ok(p) => p,
        Err(e) => return error_case(e, &ms),
    };
    let loops_ok = if m.rank() > 0 {
        p.loops() == m.loops()
    } else {
        m.loops().is_subset(p.loops())
    };
    let shifted = n.isthmuses().shifted_up(m.n());
    let isthmus_ok = if n.nullity() > 0 {
        p.isthmuses() == shifted
    } else {
        shifted.is_subset(p.isthmuses())
    };
    (!loops_ok || !isthmus_ok).then(|| Counterexample::new("loops or isthmuses of the product are wrong", &ms))
}

fn direct_sum_cases(m: &Matroid, n: &Matroid) -> Option<Counterexample> {
    if m.rank() > 0 && n.nullity() > 0 {
        return None;
    }
    let ms = [("left", m), ("right", n)];
    match (free_product(m, n), m.direct_sum(n)) {
        (Ok(p), Ok(d)) if p == d => None,
        (Ok(_), Ok(_)) => Some(Counterexample::new("product differs from the direct sum", &ms)),
        (Err(e), _) | (_, Err(e)) => error_case(e, &ms),
    }
}

fn reconstruction(m: &Matroid) -> Option<Counterexample> {
    let ms = [("matroid", m)];
    let f = match factor_irreducible(m) {
        Ok(f) => f,
        Err(e) => return error_case(e, &ms),
    };
    match f.reconstruct() {
        Ok(r) if r == *m => {}
        Ok(_) => return Some(Counterexample::new("factors do not multiply back to M", &ms)),
        Err(e) => return error_case(e, &ms),
    }
    for factor in &f.factors {
        match is_irreducible(factor) {
            Ok(true) => {}
            Ok(false) => {
                return Some(Counterexample::new(
                    "factor is reducible",
                    &[("matroid", m), ("factor", factor)],
                ))
            }
            Err(e) => return error_case(e, &ms),
        }
    }
    None
}

fn chains_agree(m: &Matroid, seed: u64) -> Option<Counterexample> {
    let ms = [("matroid", m)];
    let reference = match factor_irreducible(m) {
        Ok(f) => f.key_multiset(),
        Err(e) => return error_case(e, &ms),
    };
    let primary = match primary_flag(m) {
        Ok(p) => p,
        Err(e) => return error_case(e, &ms),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chains = [
        maximal_chain_with(m, |_| 0),
        maximal_chain_with(m, |c| c.len() - 1),
        maximal_chain_with(m, |c| rng.random_range(0..c.len())),
    ];
    for chain in &chains {
        if !primary.is_refined_by(chain) {
            return Some(Counterexample::new("maximal chain does not refine the primary flag", &ms));
        }
        match chain_factorization(m, chain) {
            Ok(f) if f.key_multiset() == reference => {}
            Ok(_) => return Some(Counterexample::new("maximal chains give different factors", &ms)),
            Err(e) => return error_case(e, &ms),
        }
    }
    None
}

fn irreducible_duality(m: &Matroid) -> Option<Counterexample> {
    let ms = [("matroid", m)];
    match (is_irreducible(m), is_irreducible(&m.dual())) {
        (Ok(a), Ok(b)) if a == b => None,
        (Ok(_), Ok(_)) => Some(Counterexample::new("irreducibility not preserved by duality", &ms)),
        (Err(e), _) | (_, Err(e)) => error_case(e, &ms),
    }
}

/// `M□N ≅ P□Q` with `|M| = |P|` forces `M ≅ P` and `N ≅ Q`.
fn cancellation(pairs: &[(&Matroid, &Matroid)]) -> Option<Counterexample> {
    let keyed: Vec<((IsoKey, usize), (IsoKey, IsoKey))> = pairs
        .par_iter()
        .map(|(m, n)| {
            let p = free_product(m, n).expect("sizes checked");
            ((iso_key(&p), m.n()), (iso_key(m), iso_key(n)))
        })
        .collect();
    let mut seen: BTreeMap<(IsoKey, usize), (IsoKey, IsoKey)> = BTreeMap::new();
    for (product, factors) in keyed {
        if let Some(prev) = seen.get(&product) {
            if *prev != factors {
                let ms = [
                    prev.0.to_matroid(),
                    prev.1.to_matroid(),
                    factors.0.to_matroid(),
                    factors.1.to_matroid(),
                ];
                return Some(Counterexample::new(
                    "two different splits give isomorphic products",
                    &[("m", &ms[0]), ("n", &ms[1]), ("p", &ms[2]), ("q", &ms[3])],
                ));
            }
        } else {
            seen.insert(product, factors);
        }
    }
    None
}

fn pinchpoint_agreement(m: &Matroid) -> Option<Counterexample> {
    let ms = [("matroid", m)];
    let d = d_lattice(m);
    let f = free_separators(m);
    let both: Vec<SubsetMask> = d.iter().filter(|&a| f.contains(a)).collect();
    match (pinchpoints(&d), pinchpoints(&f)) {
        (Ok(pd), Ok(pf)) if pd == pf && pd.chain() == both.as_slice() => None,
        (Ok(_), Ok(_)) => Some(Counterexample::new("pinchpoints of D(M), F(M) and D(M)∩F(M) differ", &ms)),
        (Err(e), _) | (_, Err(e)) => error_case(e, &ms),
    }
}

fn disconnected_irreducible(m: &Matroid) -> Option<Counterexample> {
    let hypothesis = m.loops().is_empty()
        && m.isthmuses().is_empty()
        && matches!(m.is_connected(), Ok(false));
    if !hypothesis || matches!(is_irreducible(m), Ok(true)) {
        return None;
    }
    Some(Counterexample::new(
        "loopless, isthmusless and disconnected but reducible",
        &[("matroid", m)],
    ))
}

fn coproduct_mass(m: &Matroid, cache: &KeyCache) -> Option<Counterexample> {
    let d = coproduct_cached(m, cache);
    let e = iso_key(&Matroid::empty());
    let k = cache.key(m);
    let full = BigRational::from_integer((1u64 << m.n()).into());
    let one = BigRational::one();
    let ok = d.mass() == full
        && d.iter().all(|(_, c)| c.is_integer() && *c > BigRational::zero())
        && (m.is_empty() || (d.coefficient(&KeyPair(e.clone(), k.clone())) == one
            && d.coefficient(&KeyPair(k, e)) == one));
    (!ok).then(|| Counterexample::new("coproduct mass or counit terms wrong", &[("matroid", m)]))
}

/// `⟨L; M, N⟩ = ⟨L*; N*, M*⟩` for all `M`, `N` at once.
fn section_duality(l: &Matroid, cache: &KeyCache) -> Option<Counterexample> {
    let direct = coproduct_cached(l, cache);
    let mut swapped = crate::coalgebra::FormalSum::new();
    for (KeyPair(m, n), c) in direct.iter() {
        let pair = KeyPair(cache.key(&n.to_matroid().dual()), cache.key(&m.to_matroid().dual()));
        swapped.add_term(pair, c.clone());
    }
    (swapped != coproduct_cached(&l.dual(), cache))
        .then(|| Counterexample::new("section coefficients do not dualize", &[("matroid", l)]))
}

/// Every `(M, N)` with `⟨L; M, N⟩ ≠ 0` satisfies `M⊕N ≤ L ≤ M□N`.
fn initial_bounds(l: &Matroid, cache: &KeyCache) -> Option<Counterexample> {
    for (KeyPair(m, n), _) in coproduct_cached(l, cache).iter() {
        let (m, n) = (m.to_matroid(), n.to_matroid());
        let ms = [("whole", l), ("left", &m), ("right", &n)];
        let lower = m.direct_sum(&n).and_then(|s| weak_leq(&s, l));
        let upper = free_product(&m, &n).and_then(|p| weak_leq(l, &p));
        match (lower, upper) {
            (Ok(true), Ok(true)) => {}
            (Ok(_), Ok(_)) => return Some(Counterexample::new("weak-order bounds fail", &ms)),
            (Err(e), _) | (_, Err(e)) => return error_case(e, &ms),
        }
    }
    None
}

fn bialgebra(m: &Matroid, n: &Matroid, cache: &KeyCache) -> Option<Counterexample> {
    let ms = [("left", m), ("right", n)];
    match bialgebra_check_cached(m, n, cache) {
        Ok(true) => None,
        Ok(false) => Some(Counterexample::new("coproduct of the product differs from the twisted product", &ms)),
        Err(e) => error_case(e, &ms),
    }
}

/// The `(2,2)` component: `c` over `D ≤ P ≤ U_{2,4}`, its inverse, and the
/// primitives `Q_D`, `Q_I`, `Q_Z`.
fn worked_example(sweep: &Sweep<'_>) -> Result<Option<Counterexample>> {
    let (i, z) = (Matroid::point(), Matroid::loop_());
    let u24 = Matroid::uniform(2, 4)?;
    let u12 = Matroid::uniform(1, 2)?;
    let d = u12.direct_sum(&u12)?;
    let p = multi_free_product(&[i.clone(), z.clone(), i.clone(), z.clone()])?;
    let ms = [("D", &d), ("P", &p), ("U24", &u24)];
    let fail = |msg: &str| Ok(Some(Counterexample::new(msg, &ms)));

    if !(weak_leq(&d, &p)? && weak_leq(&p, &u24)?) {
        return fail("D <= P <= U24 fails");
    }
    let poset = WeakPoset::new(vec![iso_key(&d), iso_key(&p), iso_key(&u24)])?;
    let c = c_matrix(&poset, None)?;
    let int = |x: i64, q: i64| BigRational::new(x.into(), q.into());
    let expect_c = [[1, 8, 16], [0, 4, 20], [0, 0, 24]];
    let expect_inv = [[24, -48, 24], [0, 6, -5], [0, 0, 1]];
    let inv = c_inverse(&c)?;
    for row in 0..3 {
        for col in 0..3 {
            if *c.get(row, col) != int(expect_c[row][col], 1) {
                return fail("c matrix entries differ");
            }
            if *inv.get(row, col) != int(expect_inv[row][col], 24) {
                return fail("inverse matrix entries differ");
            }
        }
    }

    let q_d = q_primitive(&d, sweep.cat)?;
    let mut expected = crate::coalgebra::FormalSum::new();
    expected.add_int(iso_key(&d), 1);
    expected.add_int(iso_key(&p), -2);
    expected.add_int(iso_key(&u24), 1);
    if q_d != expected {
        return fail("Q_D differs from D - 2P + U24");
    }
    for single in [&i, &z] {
        let q = q_primitive(single, sweep.cat)?;
        let mut e = crate::coalgebra::FormalSum::new();
        e.add_int(iso_key(single), 1);
        if q != e {
            return Ok(Some(Counterexample::new("Q of a single element is not itself", &[("matroid", single)])));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_up_to;

    #[test]
    fn quick_suites_pass() {
        let cat = enumerate_up_to(6).unwrap();
        let cfg = VerifyConfig::quick(7);
        for suite in Suite::ALL {
            for report in run_suite(suite, &cat, &cfg).unwrap() {
                assert!(report.passed(), "{report}");
                assert!(report.to_string().starts_with("PASS"));
            }
        }
    }

    #[test]
    fn failures_are_reported() {
        let cases = [1, 2, 3, 4];
        let m = Matroid::point();
        let got = first_failure(&cases, |&x| (x >= 2).then(|| Counterexample::new(format!("{x}"), &[("m", &m)])));
        assert_eq!(got.unwrap().description, "2");
        assert_eq!("crypto".parse::<Suite>().unwrap(), Suite::Crypto);
        assert!("nope".parse::<Suite>().is_err());
    }
}
