//! Isomorphism classes of small matroids, counted by size and by
//! (rank, nullity), with irreducibility and factorization per class.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{MatroidError, Result};
use crate::extension::{extend_unchecked, modular_cuts};
use crate::factorization::{factor_irreducible, is_irreducible};
use crate::iso::{iso_key, IsoKey};
use crate::mask::{binomial, revlex_subsets, SubsetMask, MAX_ELEMENTS};
use crate::matroid::Matroid;

/// Largest size accepted by [`brute_force_enumerate`].
pub const BRUTE_FORCE_LIMIT: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    /// The canonical representative.
    pub matroid: Matroid,
    pub rank: usize,
    pub nullity: usize,
    pub irreducible: bool,
    /// Keys of the irreducible factors, in factorization order.
    pub factor_keys: Vec<IsoKey>,
}

impl ClassRecord {
    fn new(key: &IsoKey) -> Self {
        let matroid = key.to_matroid();
        let (irreducible, factor_keys) = if matroid.is_empty() {
            (false, Vec::new())
        } else {
            (
                is_irreducible(&matroid).expect("irreducibility criteria agree"),
                factor_irreducible(&matroid)
                    .expect("nonempty matroid")
                    .factor_keys(),
            )
        };
        ClassRecord {
            rank: matroid.rank(),
            nullity: matroid.nullity(),
            matroid,
            irreducible,
            factor_keys,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub max_n: usize,
    pub classes: BTreeMap<IsoKey, ClassRecord>,
}

/// Canonical keys of all single-element extensions of the given classes.
fn next_level(parents: &[Matroid]) -> BTreeSet<IsoKey> {
    parents
        .par_iter()
        .map(|p| {
            modular_cuts(p)
                .iter()
                .map(|cut| iso_key(&extend_unchecked(p, cut)))
                .collect::<BTreeSet<_>>()
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

/// All isomorphism classes on at most `max_n` elements, level by level.
pub fn enumerate_up_to(max_n: usize) -> Result<Catalog> {
    enumerate_with_progress(max_n, |_, _| {})
}

/// Like [`enumerate_up_to`], calling `progress(n, count)` after each level.
pub fn enumerate_with_progress<F>(max_n: usize, mut progress: F) -> Result<Catalog>
where
    F: FnMut(usize, usize),
{
    if max_n > MAX_ELEMENTS {
        return Err(MatroidError::SizeTooLarge {
            size: max_n,
            limit: MAX_ELEMENTS,
        });
    }
    let mut keys: BTreeSet<IsoKey> = BTreeSet::new();
    let mut level = vec![iso_key(&Matroid::empty())];
    progress(0, 1);
    for n in 1..=max_n {
        let parents: Vec<Matroid> = level.iter().map(IsoKey::to_matroid).collect();
        keys.extend(level);
        level = next_level(&parents).into_iter().collect();
        progress(n, level.len());
    }
    keys.extend(level);
    let keys: Vec<IsoKey> = keys.into_iter().collect();
    let records: Vec<ClassRecord> = keys.par_iter().map(ClassRecord::new).collect();
    Ok(Catalog {
        max_n,
        classes: keys.into_iter().zip(records).collect(),
    })
}

/// Exchange axiom on a family of `r`-subsets given by a membership table.
fn satisfies_exchange(family: &[SubsetMask], member: &[bool]) -> bool {
    family.iter().all(|&b1| {
        family.iter().all(|&b2| {
            b1.difference(b2).elements().all(|x| {
                b2.difference(b1)
                    .elements()
                    .any(|y| member[b1.without(x).with(y).index()])
            })
        })
    })
}

/// Classes on exactly `n` elements by exhaustive search over all families of
/// equicardinal subsets. Independent of the extension pipeline.
pub fn brute_force_enumerate(n: usize) -> Result<Vec<IsoKey>> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(MatroidError::SizeTooLarge {
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut keys = BTreeSet::new();
    for r in 0..=n {
        let subsets = revlex_subsets(n, r);
        let count = binomial(n, r);
        let found: BTreeSet<IsoKey> = (1u64..1 << count)
            .into_par_iter()
            .fold(BTreeSet::new, |mut acc, pick| {
                let family: Vec<SubsetMask> = (0..count)
                    .filter(|i| pick & (1 << i) != 0)
                    .map(|i| subsets[i])
                    .collect();
                let mut member = vec![false; 1 << n];
                for b in &family {
                    member[b.index()] = true;
                }
                if satisfies_exchange(&family, &member) {
                    acc.insert(iso_key(&Matroid::from_bases_unchecked(n, r, family)));
                }
                acc
            })
            .reduce(BTreeSet::new, |mut a, b| {
                a.extend(b);
                a
            });
        keys.extend(found);
    }
    Ok(keys.into_iter().collect())
}

/// `m_{r,k}` and `i_{r,k}` for `r + k <= max_n`, indexed `[r][k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankNullityTable {
    pub max_n: usize,
    pub matroids: Vec<Vec<u64>>,
    pub irreducibles: Vec<Vec<u64>>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn get(&self, key: &IsoKey) -> Option<&ClassRecord> {
        self.classes.get(key)
    }

    pub fn keys_of_size(&self, n: usize) -> impl Iterator<Item = &IsoKey> + '_ {
        self.classes.keys().filter(move |k| k.n() == n)
    }

    pub fn records_of_size(&self, n: usize) -> impl Iterator<Item = &ClassRecord> + '_ {
        self.classes.values().filter(move |c| c.matroid.n() == n)
    }

    /// `(m_n, i_n)` for `n = 0..=max_n`.
    pub fn counts_by_size(&self) -> (Vec<u64>, Vec<u64>) {
        let mut m = vec![0u64; self.max_n + 1];
        let mut i = vec![0u64; self.max_n + 1];
        for rec in self.classes.values() {
            let n = rec.rank + rec.nullity;
            m[n] += 1;
            i[n] += rec.irreducible as u64;
        }
        (m, i)
    }

    pub fn counts_by_rank_nullity(&self) -> RankNullityTable {
        let size = self.max_n + 1;
        let mut matroids = vec![vec![0u64; size]; size];
        let mut irreducibles = vec![vec![0u64; size]; size];
        for rec in self.classes.values() {
            matroids[rec.rank][rec.nullity] += 1;
            irreducibles[rec.rank][rec.nullity] += rec.irreducible as u64;
        }
        RankNullityTable {
            max_n: self.max_n,
            matroids,
            irreducibles,
        }
    }

    /// Every level present, and every single-element deletion and
    /// contraction of a listed class listed as well.
    pub fn check_complete(&self) -> Result<()> {
        for n in 0..=self.max_n {
            if self.keys_of_size(n).next().is_none() {
                return Err(MatroidError::IncompleteCatalog(format!("no classes of size {n}")));
            }
        }
        let missing = self.classes.par_iter().find_map_any(|(key, rec)| {
            let m = &rec.matroid;
            (0..m.n()).find_map(|x| {
                let e = SubsetMask::singleton(x);
                [m.delete(e), m.contract(e)]
                    .iter()
                    .map(iso_key)
                    .find(|k| !self.classes.contains_key(k))
                    .map(|k| format!("{k} (a minor of {key}) is missing"))
            })
        });
        match missing {
            Some(msg) => Err(MatroidError::IncompleteCatalog(msg)),
            None => Ok(()),
        }
    }

    pub fn write(&self) -> String {
        let mut out = format!("MATFP-CATALOG v1 nmax={}\n", self.max_n);
        for (key, rec) in &self.classes {
            let factors: Vec<&str> = rec.factor_keys.iter().map(IsoKey::as_str).collect();
            out.push_str(&format!(
                "{key} irr={} factors={}\n",
                rec.irreducible as u8,
                factors.join(",")
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Catalog> {
        let bad = |line: usize, column: usize, message: String| MatroidError::Parse {
            line,
            column,
            message,
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (_, header) = lines
            .next()
            .ok_or_else(|| bad(1, 1, "empty catalog".into()))?;
        let max_n: usize = header
            .strip_prefix("MATFP-CATALOG v1 nmax=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad(1, 1, "expected `MATFP-CATALOG v1 nmax=<n>`".into()))?;
        let mut classes = BTreeMap::new();
        for (line, text) in lines.filter(|(_, l)| !l.is_empty()) {
            let toks: Vec<&str> = text.split(' ').collect();
            if toks.len() != 3 {
                return Err(bad(line, 1, "expected `<key> irr=<0|1> factors=<keys>`".into()));
            }
            let key: IsoKey = toks[0].parse().map_err(|_| bad(line, 1, format!("bad key `{}`", toks[0])))?;
            let col = toks[0].len() + 2;
            let irreducible = match toks[1] {
                "irr=0" => false,
                "irr=1" => true,
                other => return Err(bad(line, col, format!("bad field `{other}`"))),
            };
            let col = col + toks[1].len() + 1;
            let list = toks[2]
                .strip_prefix("factors=")
                .ok_or_else(|| bad(line, col, "expected `factors=`".into()))?;
            let factor_keys = if list.is_empty() {
                Vec::new()
            } else {
                list.split(',')
                    .map(|k| k.parse::<IsoKey>())
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| bad(line, col, e.to_string()))?
            };
            let matroid = key.to_matroid();
            classes.insert(
                key,
                ClassRecord {
                    rank: matroid.rank(),
                    nullity: matroid.nullity(),
                    matroid,
                    irreducible,
                    factor_keys,
                },
            );
        }
        Ok(Catalog { max_n, classes })
    }
}

/// Checks `M(t) = 1/(1 - I(t))` coefficientwise in one and two variables:
/// `m_n` is the sum over compositions `n = n_1 + .. + n_j` of `i_{n_1} .. i_{n_j}`,
/// and likewise for `(r, k)` with `r + k <= max_n`.
pub fn verify_gf(cat: &Catalog) -> Result<bool> {
    cat.check_complete()?;
    let (m, i) = cat.counts_by_size();
    let mut conv = vec![0u64; cat.max_n + 1];
    conv[0] = 1;
    for n in 1..=cat.max_n {
        conv[n] = (1..=n).map(|j| i[j] * conv[n - j]).sum();
    }
    if conv != m {
        return Ok(false);
    }
    let t = cat.counts_by_rank_nullity();
    let size = cat.max_n + 1;
    let mut grid = vec![vec![0u64; size]; size];
    grid[0][0] = 1;
    for total in 1..=cat.max_n {
        for r in 0..=total {
            let k = total - r;
            let mut sum = 0;
            for r1 in 0..=r {
                for k1 in 0..=k {
                    if r1 + k1 > 0 {
                        sum += t.irreducibles[r1][k1] * grid[r - r1][k - k1];
                    }
                }
            }
            grid[r][k] = sum;
        }
    }
    for r in 0..size {
        for k in 0..size - r {
            if grid[r][k] != t.matroids[r][k] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let cat = enumerate_up_to(5).unwrap();
        let (m, i) = cat.counts_by_size();
        assert_eq!(m, vec![1, 2, 4, 8, 17, 38]);
        assert_eq!(i, vec![0, 2, 0, 0, 1, 2]);
        assert!(verify_gf(&cat).unwrap());
    }

    #[test]
    fn brute_force_small_levels() {
        assert_eq!(brute_force_enumerate(3).unwrap().len(), 8);
        assert!(matches!(
            brute_force_enumerate(7),
            Err(MatroidError::SizeTooLarge { .. })
        ));
    }

    #[test]
    fn catalog_round_trip() {
        let cat = enumerate_up_to(4).unwrap();
        let text = cat.write();
        assert!(text.starts_with("MATFP-CATALOG v1 nmax=4\n0:0:1 irr=0 factors=\n"));
        assert_eq!(Catalog::parse(&text).unwrap(), cat);
    }

    #[test]
    fn incomplete_catalog_is_detected() {
        let mut cat = enumerate_up_to(3).unwrap();
        let victim = cat.keys_of_size(2).next().unwrap().clone();
        cat.classes.remove(&victim);
        assert!(matches!(verify_gf(&cat), Err(MatroidError::IncompleteCatalog(_))));
    }
}
