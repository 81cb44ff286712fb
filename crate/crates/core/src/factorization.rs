//! Free separators, the primary flag and factorization into irreducibles.

use std::fmt;

use crate::error::{MatroidError, Result};
use crate::family::{Flag, SetFamily};
use crate::format::{parse_matroid, write_matroid, MatroidFormat};
use crate::free_product::multi_free_product;
use crate::iso::{iso_key, IsoKey};
use crate::mask::SubsetMask;
use crate::matroid::Matroid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    PrimaryFactorization,
    Irreducible,
    Custom,
}

impl Flavor {
    pub fn tag(self) -> &'static str {
        match self {
            Flavor::PrimaryFactorization => "PRIMARY_FACTORIZATION",
            Flavor::Irreducible => "IRREDUCIBLE",
            Flavor::Custom => "CUSTOM",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Flavor> {
        match tag {
            "PRIMARY_FACTORIZATION" => Some(Flavor::PrimaryFactorization),
            "IRREDUCIBLE" => Some(Flavor::Irreducible),
            "CUSTOM" => Some(Flavor::Custom),
            _ => None,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// `M = M(U_0,U_1) □ .. □ M(U_{k-1},U_k)` along a chain of free separators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub chain: Flag,
    pub factors: Vec<Matroid>,
    pub flavor: Flavor,
}

impl Factorization {
    fn along(m: &Matroid, chain: Flag, flavor: Flavor) -> Result<Self> {
        let factors = chain
            .intervals()
            .map(|(a, b)| m.minor(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Factorization {
            chain,
            factors,
            flavor,
        })
    }

    /// Multiplies the factors back together and restores the original labels.
    pub fn reconstruct(&self) -> Result<Matroid> {
        let product = multi_free_product(&self.factors)?;
        let original: Vec<usize> = self
            .chain
            .intervals()
            .flat_map(|(a, b)| b.difference(a).elements())
            .collect();
        product.relabel(&original)
    }

    pub fn factor_keys(&self) -> Vec<IsoKey> {
        self.factors.iter().map(iso_key).collect()
    }

    /// Factor iso-classes as a sorted multiset.
    pub fn key_multiset(&self) -> Vec<IsoKey> {
        let mut keys = self.factor_keys();
        keys.sort();
        keys
    }

    pub fn write(&self, format: MatroidFormat) -> String {
        let chain: Vec<String> = self
            .chain
            .chain()
            .iter()
            .map(|c| format!("{:x}", c.bits()))
            .collect();
        let mut out = format!(
            "FACTORIZATION flavor={} factors={}\nCHAIN={}\n",
            self.flavor,
            self.factors.len(),
            chain.join(",")
        );
        for f in &self.factors {
            out.push_str(&write_matroid(f, format));
        }
        out
    }

    /// Parses [`write`](Self::write) output; factors may be in either matroid form.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |line: usize, message: &str| MatroidError::Parse {
            line,
            column: 1,
            message: message.to_string(),
        };
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let (hl, header) = *lines.first().ok_or_else(|| bad(1, "empty input"))?;
        let mut flavor = None;
        let mut count = None;
        for tok in header.split_whitespace() {
            if let Some(v) = tok.strip_prefix("flavor=") {
                flavor = Flavor::from_tag(v);
            } else if let Some(v) = tok.strip_prefix("factors=") {
                count = v.parse::<usize>().ok();
            } else if tok != "FACTORIZATION" {
                return Err(bad(hl, "malformed FACTORIZATION header"));
            }
        }
        let (Some(flavor), Some(count)) = (flavor, count) else {
            return Err(bad(hl, "header needs flavor= and factors="));
        };
        let (cl, chain_line) = *lines.get(1).ok_or_else(|| bad(hl + 1, "missing CHAIN="))?;
        let body = chain_line
            .strip_prefix("CHAIN=")
            .ok_or_else(|| bad(cl, "expected CHAIN="))?;
        let chain = body
            .split(',')
            .map(|h| u16::from_str_radix(h, 16).map(SubsetMask::from_bits))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad(cl, "chain entries must be hex masks"))?;
        let mut factors = Vec::with_capacity(count);
        let mut i = 2;
        while i < lines.len() {
            let (l, first) = lines[i];
            let take = if first.starts_with("MATROID") { 2 } else { 1 };
            let block: Vec<&str> = lines[i..(i + take).min(lines.len())]
                .iter()
                .map(|(_, s)| *s)
                .collect();
            factors.push(parse_matroid(&block.join("\n")).map_err(|e| match e {
                MatroidError::Parse {
                    line,
                    column,
                    message,
                } => MatroidError::Parse {
                    line: line + l - 1,
                    column,
                    message,
                },
                other => other,
            })?);
            i += take;
        }
        if factors.len() != count {
            return Err(bad(hl, "factor count does not match header"));
        }
        let n = factors.iter().map(Matroid::n).sum();
        let chain = Flag::new(n, chain)?;
        if chain.chain().len() != count + 1 {
            return Err(bad(cl, "chain length does not match factor count"));
        }
        Ok(Factorization {
            chain,
            factors,
            flavor,
        })
    }
}

/// The lattice generated by the cyclic flats together with `∅` and `S`.
pub fn d_lattice(m: &Matroid) -> SetFamily {
    let mut members: Vec<SubsetMask> = m.cyclic_flats().iter().collect();
    members.push(SubsetMask::EMPTY);
    members.push(m.ground());
    SetFamily::new(m.n(), members)
        .expect("cyclic flats lie in the ground set")
        .lattice_closure()
}

/// Members comparable to every other member, in increasing order.
pub fn pinchpoints(family: &SetFamily) -> Result<Flag> {
    let n = family.ambient_n();
    if !family.contains(SubsetMask::EMPTY) || !family.contains(SubsetMask::full(n)) {
        return Err(MatroidError::InvalidFlag(
            "family must contain the empty set and the ground set".into(),
        ));
    }
    let mut chain: Vec<SubsetMask> = family
        .iter()
        .filter(|&a| family.comparable_to_all(a))
        .collect();
    chain.sort_by_key(|a| a.len());
    Flag::new(n, chain)
}

pub fn is_free_separator(m: &Matroid, a: SubsetMask) -> bool {
    m.cyclic_flats().comparable_to_all(a)
}

/// Every subset comparable to all cyclic flats, by direct scan.
pub fn free_separators(m: &Matroid) -> SetFamily {
    let cyclic = m.cyclic_flats();
    SetFamily::new(
        m.n(),
        SubsetMask::all(m.n()).filter(|&a| cyclic.comparable_to_all(a)),
    )
    .expect("subsets of the ground set")
}

/// Free separators assembled from the primary flag: the whole interval
/// `[T_{i-1}, T_i]` when `T_i` covers `T_{i-1}` in `D(M)`, else its endpoints.
pub fn free_separators_via_intervals(m: &Matroid) -> SetFamily {
    let d = d_lattice(m);
    let flag = pinchpoints(&d).expect("D(M) contains the empty set and S");
    let mut members = vec![SubsetMask::EMPTY];
    for (lo, hi) in flag.intervals() {
        let covers = !d
            .iter()
            .any(|x| lo.is_subset(x) && x.is_subset(hi) && x != lo && x != hi);
        if covers {
            members.extend(hi.difference(lo).subsets().map(|s| s | lo));
        } else {
            members.push(hi);
        }
    }
    SetFamily::new(m.n(), members).expect("subsets of the ground set")
}

pub fn primary_flag(m: &Matroid) -> Result<Flag> {
    if m.is_empty() {
        return Err(MatroidError::EmptyMatroid);
    }
    pinchpoints(&d_lattice(m))
}

pub fn primary_factorization(m: &Matroid) -> Result<Factorization> {
    Factorization::along(m, primary_flag(m)?, Flavor::PrimaryFactorization)
}

/// Irreducibility, computed both as `F(M) = {∅, S}` and, for nonuniform `M`,
/// as the absence of nontrivial pinchpoints in `D(M)`; the two must agree.
pub fn is_irreducible(m: &Matroid) -> Result<bool> {
    if m.is_empty() {
        return Err(MatroidError::EmptyMatroid);
    }
    let by_separators = free_separators(m).len() == 2;
    let by_pinchpoints = if m.is_uniform() {
        m.n() == 1
    } else {
        primary_flag(m)?.chain().len() == 2
    };
    if by_separators != by_pinchpoints {
        return Err(MatroidError::TheoremViolation(format!(
            "irreducibility criteria disagree on\n{m}"
        )));
    }
    Ok(by_separators)
}

/// Refines the primary flag to a maximal chain of free separators. A uniform
/// primary factor `U_{r,m}` is split one element at a time in increasing
/// element order, giving `I^r □ Z^{m-r}`.
pub fn factor_irreducible(m: &Matroid) -> Result<Factorization> {
    let flag = primary_flag(m)?;
    let mut chain = vec![SubsetMask::EMPTY];
    for (lo, hi) in flag.intervals() {
        if hi.len() - lo.len() > 1 && m.minor(lo, hi)?.is_uniform() {
            let mut cur = lo;
            for x in hi.difference(lo).elements() {
                cur = cur.with(x);
                chain.push(cur);
            }
        } else {
            chain.push(hi);
        }
    }
    Factorization::along(m, Flag::new(m.n(), chain)?, Flavor::Irreducible)
}

/// Factorization along a caller-supplied chain of free separators.
pub fn chain_factorization(m: &Matroid, chain: &Flag) -> Result<Factorization> {
    if chain.ground_size() != m.n() {
        return Err(MatroidError::SizeMismatch {
            left: m.n(),
            right: chain.ground_size(),
        });
    }
    let cyclic = m.cyclic_flats();
    if let Some(&bad) = chain.chain().iter().find(|&&a| !cyclic.comparable_to_all(a)) {
        return Err(MatroidError::NotAFreeSeparator(bad));
    }
    Factorization::along(m, chain.clone(), Flavor::Custom)
}

/// A maximal chain in `F(M)`, built upward from `∅`; at each step `choose`
/// picks one of the covering free separators (given in increasing mask order).
pub fn maximal_chain_with<F>(m: &Matroid, mut choose: F) -> Flag
where
    F: FnMut(&[SubsetMask]) -> usize,
{
    let separators = free_separators(m);
    let full = m.ground();
    let mut chain = vec![SubsetMask::EMPTY];
    let mut cur = SubsetMask::EMPTY;
    while cur != full {
        let above: Vec<SubsetMask> = separators
            .iter()
            .filter(|&a| cur.is_subset(a) && a != cur)
            .collect();
        let covers: Vec<SubsetMask> = above
            .iter()
            .copied()
            .filter(|&a| !above.iter().any(|&b| b.is_subset(a) && b != a))
            .collect();
        cur = covers[choose(&covers) % covers.len()];
        chain.push(cur);
    }
    Flag::new(m.n(), chain).expect("increasing chain from the empty set to S")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_product::free_product;

    fn m(e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(e.iter().copied())
    }

    fn u(r: usize, n: usize) -> Matroid {
        Matroid::uniform(r, n).unwrap()
    }

    fn double_points() -> Matroid {
        u(1, 2).direct_sum(&u(1, 2)).unwrap()
    }

    fn l7() -> Matroid {
        free_product(&u(2, 3), &double_points()).unwrap()
    }

    #[test]
    fn d_lattices() {
        assert_eq!(d_lattice(&u(2, 3)).members(), &[m(&[]), m(&[0, 1, 2])]);
        assert_eq!(
            d_lattice(&double_points()).members(),
            &[m(&[]), m(&[0, 1]), m(&[2, 3]), m(&[0, 1, 2, 3])]
        );
        assert_eq!(d_lattice(&l7()).len(), 5);
    }

    #[test]
    fn pinchpoint_chains() {
        let full4 = m(&[0, 1, 2, 3]);
        assert_eq!(pinchpoints(&d_lattice(&double_points())).unwrap().chain(), &[m(&[]), full4]);
        assert_eq!(
            pinchpoints(&d_lattice(&l7())).unwrap().chain(),
            &[m(&[]), m(&[0, 1, 2]), SubsetMask::full(7)]
        );
    }

    #[test]
    fn free_separator_examples() {
        assert_eq!(free_separators(&u(2, 4)).len(), 16);
        assert_eq!(free_separators(&double_points()).len(), 2);
        let f = free_separators(&l7());
        let mut expected: Vec<SubsetMask> = m(&[0, 1, 2]).subsets().collect();
        expected.push(SubsetMask::full(7));
        assert_eq!(f, SetFamily::new(7, expected).unwrap());
        assert_eq!(f, free_separators_via_intervals(&l7()));
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&Matroid::point()).unwrap());
        assert!(is_irreducible(&Matroid::loop_()).unwrap());
        assert!(is_irreducible(&double_points()).unwrap());
        assert!(!is_irreducible(&u(2, 4)).unwrap());
        assert_eq!(is_irreducible(&Matroid::empty()), Err(MatroidError::EmptyMatroid));
    }

    #[test]
    fn primary_factorizations() {
        let f = primary_factorization(&u(2, 4)).unwrap();
        assert_eq!(f.factors, vec![u(2, 4)]);
        let f = primary_factorization(&l7()).unwrap();
        assert_eq!(f.factors, vec![u(2, 3), double_points()]);
        assert_eq!(f.reconstruct().unwrap(), l7());
        let f = primary_factorization(&double_points()).unwrap();
        assert_eq!(f.factors, vec![double_points()]);
    }

    #[test]
    fn irreducible_factorizations() {
        let (i, z) = (Matroid::point(), Matroid::loop_());
        let f = factor_irreducible(&u(2, 4)).unwrap();
        assert_eq!(f.factors, vec![i.clone(), i.clone(), z.clone(), z.clone()]);
        // points a, b doubled, collinear with c and d
        let bases = [m(&[0, 2]), m(&[0, 3]), m(&[1, 2]), m(&[1, 3]), m(&[2, 3])];
        let p = Matroid::from_bases(4, 2, bases).unwrap();
        let f = factor_irreducible(&p).unwrap();
        assert_eq!(f.factors, vec![i.clone(), z.clone(), i.clone(), z.clone()]);
        assert_eq!(f.reconstruct().unwrap(), p);
        let f = factor_irreducible(&l7()).unwrap();
        assert_eq!(f.factors, vec![i.clone(), i, z, double_points()]);
        assert_eq!(f.reconstruct().unwrap(), l7());
    }

    #[test]
    fn custom_chains() {
        let x = l7();
        let trivial = chain_factorization(&x, &Flag::trivial(7)).unwrap();
        assert_eq!(trivial.factors, vec![x.clone()]);
        let bad = Flag::new(7, vec![m(&[]), m(&[3, 4]), SubsetMask::full(7)]).unwrap();
        assert_eq!(
            chain_factorization(&x, &bad),
            Err(MatroidError::NotAFreeSeparator(m(&[3, 4])))
        );
        let u12 = u(1, 2);
        for pick in 0..2 {
            let chain = maximal_chain_with(&u12, |_| pick);
            let f = chain_factorization(&u12, &chain).unwrap();
            assert_eq!(f.factors, vec![Matroid::point(), Matroid::loop_()]);
        }
        let u24 = u(2, 4);
        let first = chain_factorization(&u24, &maximal_chain_with(&u24, |_| 0)).unwrap();
        let last = chain_factorization(&u24, &maximal_chain_with(&u24, |c| c.len() - 1)).unwrap();
        assert_ne!(first.chain, last.chain);
        assert_eq!(first.key_multiset(), last.key_multiset());
        let e = chain_factorization(&Matroid::empty(), &Flag::trivial(0)).unwrap();
        assert!(e.factors.is_empty());
        assert_eq!(e.reconstruct().unwrap(), Matroid::empty());
    }

    #[test]
    fn text_round_trip() {
        let f = factor_irreducible(&l7()).unwrap();
        let text = f.write(MatroidFormat::Full);
        assert!(text.starts_with("FACTORIZATION flavor=IRREDUCIBLE factors=4\nCHAIN=0,1,3,7,7f\n"));
        assert_eq!(Factorization::parse(&text).unwrap(), f);
        let compact = f.write(MatroidFormat::Compact);
        assert_eq!(Factorization::parse(&compact).unwrap(), f);
    }
}
