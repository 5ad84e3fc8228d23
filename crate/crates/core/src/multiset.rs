//! Multisets of variable labels and their partitions.
//!
//! A monomial `x_1^2 x_2 x_4` corresponds to the multiset `{1,1,2,4}`; every
//! way of splitting that multiset into blocks is one way of producing the
//! monomial as a product of lower-order monomials. Partitions are enumerated
//! with Knuth's multipartition machine (TAOCP 7.2.1.5, Algorithm M), which
//! visits them in decreasing lexicographic order.
//!
//! Multisets that differ only by a relabeling share their partitions, so
//! [`PartitionCache`] stores one list per canonical form (positive
//! multiplicities sorted in descending order) and relabels on read.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::polyalg::ExponentVector;

/// Multiset of positive integer labels, stored as `(label, multiplicity)` pairs
/// sorted by label. Multiplicities are always at least 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Multiset {
    entries: Vec<(usize, u32)>,
}

impl Multiset {
    pub fn from_elements(elements: &[usize]) -> Self {
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        for &e in elements {
            *counts.entry(e).or_insert(0) += 1;
        }
        Multiset {
            entries: counts.into_iter().collect(),
        }
    }

    /// Label `i + 1` with multiplicity `exponents[i]`.
    pub fn from_exponents(exponents: &[u32]) -> Self {
        Multiset {
            entries: exponents
                .iter()
                .enumerate()
                .filter(|(_, &t)| t > 0)
                .map(|(i, &t)| (i + 1, t))
                .collect(),
        }
    }

    /// Builds from `(label, multiplicity)` pairs; zero multiplicities are dropped
    /// and repeated labels merged.
    pub fn from_counts<I: IntoIterator<Item = (usize, u32)>>(counts: I) -> Self {
        let mut map: BTreeMap<usize, u32> = BTreeMap::new();
        for (label, mult) in counts {
            if mult > 0 {
                *map.entry(label).or_insert(0) += mult;
            }
        }
        Multiset {
            entries: map.into_iter().collect(),
        }
    }

    /// Total element count `n`.
    pub fn len(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct labels `m`.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn counts(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn multiplicity(&self, label: usize) -> u32 {
        self.entries
            .binary_search_by_key(&label, |&(l, _)| l)
            .map_or(0, |i| self.entries[i].1)
    }

    /// Elements in ascending order, repeated by multiplicity.
    pub fn elements(&self) -> Vec<usize> {
        self.entries
            .iter()
            .flat_map(|&(l, m)| std::iter::repeat_n(l, m as usize))
            .collect()
    }

    /// Exponent vector of length `p`; labels must lie in `1..=p`.
    pub fn to_exponents(&self, p: usize) -> Result<ExponentVector> {
        let mut e = vec![0u32; p];
        for &(label, mult) in &self.entries {
            if label == 0 || label > p {
                return Err(Error::invalid(format!(
                    "label {label} outside variables 1..={p}"
                )));
            }
            e[label - 1] = mult;
        }
        Ok(ExponentVector::new(e))
    }

    /// Replaces each label `l` by `relabeling[l - 1]`.
    pub fn relabel(&self, relabeling: &[usize]) -> Result<Multiset> {
        let mut pairs = Vec::with_capacity(self.entries.len());
        for &(label, mult) in &self.entries {
            let to = label
                .checked_sub(1)
                .and_then(|i| relabeling.get(i))
                .ok_or_else(|| {
                    Error::invalid(format!(
                        "label {label} outside relabeling domain 1..={}",
                        relabeling.len()
                    ))
                })?;
            pairs.push((*to, mult));
        }
        Ok(Multiset::from_counts(pairs))
    }

    /// Union with multiplicities added.
    pub fn union(&self, other: &Multiset) -> Multiset {
        Multiset::from_counts(self.entries.iter().chain(&other.entries).copied())
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One partition of a multiset into non-empty blocks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultisetPartition {
    blocks: Vec<Multiset>,
}

impl MultisetPartition {
    pub fn new(blocks: Vec<Multiset>) -> Self {
        MultisetPartition { blocks }
    }

    pub fn blocks(&self) -> &[Multiset] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Size of the largest block.
    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Multiset::len).max().unwrap_or(0)
    }

    /// Multiset union of all blocks.
    pub fn union(&self) -> Multiset {
        self.blocks
            .iter()
            .fold(Multiset::default(), |acc, b| acc.union(b))
    }

    /// Order-insensitive representation for set comparisons.
    pub fn sorted_blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks: Vec<Vec<usize>> = self.blocks.iter().map(Multiset::elements).collect();
        blocks.sort();
        blocks
    }

    /// Distinct blocks with the number of times each occurs, in first-seen order.
    pub fn block_multiplicities(&self) -> Vec<(&Multiset, u32)> {
        let mut out: Vec<(&Multiset, u32)> = Vec::new();
        for b in &self.blocks {
            match out.iter_mut().find(|(seen, _)| *seen == b) {
                Some((_, n)) => *n += 1,
                None => out.push((b, 1)),
            }
        }
        out
    }

    pub fn relabel(&self, relabeling: &[usize]) -> Result<MultisetPartition> {
        Ok(MultisetPartition {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.relabel(relabeling))
                .collect::<Result<_>>()?,
        })
    }

    /// Column-vector form: each block as multiplicities over `labels`, joined by `+`.
    pub fn vector_form(&self, labels: &[usize]) -> String {
        self.blocks
            .iter()
            .map(|b| {
                let v: Vec<String> = labels
                    .iter()
                    .map(|&l| b.multiplicity(l).to_string())
                    .collect();
                format!("({})", v.join(","))
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl fmt::Display for MultisetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(Multiset::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for MultisetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Runs Knuth's Algorithm M over component multiplicities `mults`, calling
/// `visit` with the `(component, amount)` entries of each part. Entries with a
/// zero amount are skipped.
pub fn visit_multipartitions<F>(mults: &[u32], mut visit: F)
where
    F: FnMut(&[Vec<(usize, u32)>]),
{
    let m = mults.len();
    let n: usize = mults.iter().map(|&x| x as usize).sum();
    if m == 0 || n == 0 {
        return;
    }
    let size = m * n + 1;
    let mut c = vec![0usize; size];
    let mut u = vec![0u32; size];
    let mut v = vec![0u32; size];
    let mut f = vec![0usize; n + 1];

    // M1: initialize.
    for j in 0..m {
        c[j] = j;
        u[j] = mults[j];
        v[j] = mults[j];
    }
    let mut a = 0usize;
    let mut b = m;
    let mut l = 0usize;
    f[0] = 0;
    f[1] = m;

    let mut parts: Vec<Vec<(usize, u32)>> = Vec::with_capacity(n);
    loop {
        // M2: subtract v from u.
        let mut j = a;
        let mut k = b;
        let mut x = false;
        while j < b {
            u[k] = u[j] - v[j];
            if u[k] == 0 {
                x = true;
            } else if !x {
                c[k] = c[j];
                v[k] = v[j].min(u[k]);
                x = u[k] < v[j];
                k += 1;
            } else {
                c[k] = c[j];
                v[k] = u[k];
                k += 1;
            }
            j += 1;
        }

        // M3: push if nonzero.
        if k > b {
            a = b;
            b = k;
            l += 1;
            f[l + 1] = b;
            continue;
        }

        // M4: visit.
        parts.clear();
        for s in 0..=l {
            parts.push(
                (f[s]..f[s + 1])
                    .filter(|&i| v[i] > 0)
                    .map(|i| (c[i], v[i]))
                    .collect(),
            );
        }
        visit(&parts);

        // M5: decrease v, backtracking (M6) while the current level is exhausted.
        loop {
            let mut j = b - 1;
            while v[j] == 0 {
                j -= 1;
            }
            if j == a && v[j] == 1 {
                // M6
                if l == 0 {
                    return;
                }
                l -= 1;
                b = a;
                a = f[l];
                continue;
            }
            v[j] -= 1;
            for kk in j + 1..b {
                v[kk] = u[kk];
            }
            break;
        }
    }
}

/// Every partition of `multiset`, in decreasing lexicographic order.
pub fn enumerate_partitions(multiset: &Multiset) -> Vec<MultisetPartition> {
    let labels: Vec<usize> = multiset.counts().iter().map(|&(l, _)| l).collect();
    let mults: Vec<u32> = multiset.counts().iter().map(|&(_, m)| m).collect();
    let mut out = Vec::new();
    visit_multipartitions(&mults, |parts| {
        out.push(MultisetPartition::new(
            parts
                .iter()
                .map(|part| Multiset {
                    entries: part.iter().map(|&(comp, amt)| (labels[comp], amt)).collect(),
                })
                .collect(),
        ));
    });
    out
}

/// Number of partitions of a multiset with the given multiplicities.
pub fn count_partitions(mults: &[u32]) -> usize {
    let mut n = 0;
    visit_multipartitions(mults, |_| n += 1);
    n
}

/// Canonical representative of a monomial's equivalence class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// Positive multiplicities in non-increasing order.
    pub canonical: ExponentVector,
    /// `relabeling[j]` is the original 1-based variable index of canonical label `j + 1`.
    pub relabeling: Vec<usize>,
}

/// Sorts the positive entries of `t` in descending order; equal multiplicities
/// keep ascending original index.
pub fn canonicalize(t: &ExponentVector) -> Result<CanonicalForm> {
    let mut positive: Vec<(usize, u32)> = t
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(i, &m)| (i + 1, m))
        .collect();
    if positive.is_empty() {
        return Err(Error::invalid(
            "the intercept has no multiset to canonicalize",
        ));
    }
    // Stable sort keeps ascending index among ties.
    positive.sort_by(|a, b| b.1.cmp(&a.1));
    Ok(CanonicalForm {
        canonical: ExponentVector::new(positive.iter().map(|&(_, m)| m).collect()),
        relabeling: positive.iter().map(|&(i, _)| i).collect(),
    })
}

/// Applies `relabeling` (canonical label `j + 1` to `relabeling[j]`) to every block.
pub fn map_partitions(
    partitions: &[MultisetPartition],
    relabeling: &[usize],
) -> Result<Vec<MultisetPartition>> {
    partitions.iter().map(|p| p.relabel(relabeling)).collect()
}

/// True when `partition` has exactly `n` blocks, none larger than `q`.
pub fn admissible(partition: &MultisetPartition, n: usize, q: u32) -> bool {
    partition.len() == n && partition.max_block_size() <= q as usize
}

/// Keeps partitions with exactly `n` blocks, each of size at most `q`.
pub fn filter_partitions(
    partitions: &[MultisetPartition],
    n: usize,
    q: u32,
) -> Vec<MultisetPartition> {
    partitions
        .iter()
        .filter(|p| admissible(p, n, q))
        .cloned()
        .collect()
}

/// Integer partitions of `total` as non-increasing part lists, in descending
/// lexicographic order.
pub fn integer_partitions(total: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            cur.push(part);
            rec(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if total > 0 {
        rec(total, total, &mut Vec::new(), &mut out);
    }
    out
}

/// Largest `Q_max` a cache can be built for.
pub const MAX_CACHE_ORDER: u32 = 10;

/// Partitions of every canonical multiset of total size `1..=q_max`.
///
/// Stored partitions use canonical labels `1..=p_0`; [`PartitionCache::lookup`]
/// relabels them to the requested monomial's variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionCache {
    q_max: u32,
    entries: BTreeMap<ExponentVector, Vec<MultisetPartition>>,
}

/// Builds the partition cache for `Q_max`. The key set does not depend on `p`.
pub fn build_cache(p: usize, q_max: u32) -> Result<PartitionCache> {
    if p == 0 {
        return Err(Error::invalid("variable count p must be at least 1"));
    }
    PartitionCache::build(q_max)
}

impl PartitionCache {
    pub fn build(q_max: u32) -> Result<Self> {
        if q_max == 0 {
            return Err(Error::invalid("Q_max must be at least 1"));
        }
        if q_max > MAX_CACHE_ORDER {
            return Err(Error::CacheTooLarge {
                q_max,
                limit: MAX_CACHE_ORDER,
            });
        }
        let mut entries = BTreeMap::new();
        for total in 1..=q_max {
            for shape in integer_partitions(total) {
                let key = ExponentVector::new(shape);
                let multiset = Multiset::from_exponents(key.as_slice());
                entries.insert(key, enumerate_partitions(&multiset));
            }
        }
        Ok(PartitionCache { q_max, entries })
    }

    pub fn q_max(&self) -> u32 {
        self.q_max
    }

    /// Number of canonical classes stored.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &ExponentVector> {
        self.entries.keys()
    }

    pub fn total_partitions(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    /// Rough heap footprint of the stored partitions.
    pub fn approx_bytes(&self) -> usize {
        use std::mem::size_of;
        self.entries
            .iter()
            .map(|(k, parts)| {
                k.len() * size_of::<u32>()
                    + parts
                        .iter()
                        .map(|p| {
                            size_of::<MultisetPartition>()
                                + p.blocks
                                    .iter()
                                    .map(|b| {
                                        size_of::<Multiset>()
                                            + b.entries.len() * size_of::<(usize, u32)>()
                                    })
                                    .sum::<usize>()
                        })
                        .sum::<usize>()
            })
            .sum()
    }

    /// Partitions over canonical labels for a canonical key.
    pub fn get_canonical(&self, canonical: &ExponentVector) -> Result<&[MultisetPartition]> {
        self.entries
            .get(canonical)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::CacheMiss {
                key: join(canonical.as_slice()),
                q_max: self.q_max,
            })
    }

    /// Partitions of the multiset of `t`, over `t`'s own variable labels.
    pub fn lookup(&self, t: &ExponentVector) -> Result<Vec<MultisetPartition>> {
        let form = canonicalize(t)?;
        map_partitions(self.get_canonical(&form.canonical)?, &form.relabeling)
    }

    pub fn to_json(&self) -> Result<String> {
        let map: BTreeMap<String, Vec<Vec<Vec<usize>>>> = self
            .entries
            .iter()
            .map(|(k, parts)| {
                (
                    join(k.as_slice()),
                    parts
                        .iter()
                        .map(|p| p.blocks.iter().map(Multiset::elements).collect())
                        .collect(),
                )
            })
            .collect();
        Ok(serde_json::to_string(&map)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let map: BTreeMap<String, Vec<Vec<Vec<usize>>>> = serde_json::from_str(s)?;
        let mut entries = BTreeMap::new();
        for (key, parts) in map {
            let shape = key
                .split(',')
                .map(|x| x.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::invalid(format!("bad cache key `{key}`: {e}")))?;
            if shape.contains(&0) || shape.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::invalid(format!("cache key `{key}` is not canonical")));
            }
            let key = ExponentVector::new(shape);
            let whole = Multiset::from_exponents(key.as_slice());
            let parts: Vec<MultisetPartition> = parts
                .into_iter()
                .map(|blocks| {
                    MultisetPartition::new(
                        blocks.iter().map(|b| Multiset::from_elements(b)).collect(),
                    )
                })
                .collect();
            if let Some(bad) = parts.iter().find(|p| p.union() != whole) {
                return Err(Error::invalid(format!(
                    "cache entry {key} holds {bad}, which is not a partition of {whole}"
                )));
            }
            entries.insert(key, parts);
        }
        let q_max = entries.keys().map(ExponentVector::degree).max().unwrap_or(0);
        let expected: usize = (1..=q_max).map(|t| integer_partitions(t).len()).sum();
        if q_max == 0 || entries.len() != expected {
            return Err(Error::invalid(format!(
                "cache holds {} classes; a complete cache for Q_max = {q_max} has {expected}",
                entries.len()
            )));
        }
        Ok(PartitionCache { q_max, entries })
    }

    pub fn file_name(q_max: u32) -> String {
        format!("partitions-qmax{q_max}.json")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        PartitionCache::from_json(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Reads `dir/partitions-qmax{Q}.json` when present, otherwise builds and
    /// writes it. Without a directory this is [`PartitionCache::build`].
    pub fn load_or_build(dir: Option<&Path>, q_max: u32) -> Result<Self> {
        let Some(dir) = dir else {
            return PartitionCache::build(q_max);
        };
        let path: PathBuf = dir.join(PartitionCache::file_name(q_max));
        if path.exists() {
            let cache = PartitionCache::load(&path)?;
            if cache.q_max == q_max {
                return Ok(cache);
            }
        }
        let cache = PartitionCache::build(q_max)?;
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        cache.save(&path)?;
        Ok(cache)
    }
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(e: &[usize]) -> Multiset {
        Multiset::from_elements(e)
    }

    fn listing(parts: &[MultisetPartition]) -> Vec<String> {
        parts.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn knuth_order_for_1123() {
        let parts = enumerate_partitions(&ms(&[1, 1, 2, 3]));
        assert_eq!(
            listing(&parts),
            vec![
                "{1,1,2,3}",
                "{1,1,2},{3}",
                "{1,1,3},{2}",
                "{1,1},{2,3}",
                "{1,1},{2},{3}",
                "{1,2,3},{1}",
                "{1,2},{1,3}",
                "{1,2},{1},{3}",
                "{1,3},{1},{2}",
                "{1},{1},{2,3}",
                "{1},{1},{2},{3}",
            ]
        );
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_partitions(&ms(&[1])).len(), 1);
        assert_eq!(enumerate_partitions(&ms(&[1, 1, 1, 1])).len(), 5);
        assert_eq!(enumerate_partitions(&ms(&[1, 2])).len(), 2);
        // Bell numbers for sets.
        assert_eq!(enumerate_partitions(&ms(&[1, 2, 3, 4, 5])).len(), 52);
        assert!(enumerate_partitions(&Multiset::default()).is_empty());
    }

    #[test]
    fn emission_is_strictly_decreasing() {
        for mults in [vec![2, 1, 1], vec![3, 2], vec![1, 1, 1, 1], vec![2, 2, 2]] {
            let m = mults.len();
            let mut seqs: Vec<Vec<u32>> = Vec::new();
            visit_multipartitions(&mults, |parts| {
                let mut flat = Vec::new();
                for part in parts {
                    let mut col = vec![0; m];
                    for &(c, v) in part {
                        col[c] = v;
                    }
                    flat.extend(col);
                }
                seqs.push(flat);
            });
            assert!(seqs.windows(2).all(|w| w[0] > w[1]), "{mults:?}");
        }
    }

    #[test]
    fn canonicalize_examples() {
        let f = canonicalize(&ExponentVector::from([0, 1, 2, 0, 1])).unwrap();
        assert_eq!(f.canonical, ExponentVector::from([2, 1, 1]));
        assert_eq!(f.relabeling, vec![3, 2, 5]);

        let f = canonicalize(&ExponentVector::from([3])).unwrap();
        assert_eq!(f.canonical, ExponentVector::from([3]));
        assert_eq!(f.relabeling, vec![1]);

        let f = canonicalize(&ExponentVector::from([1, 1])).unwrap();
        assert_eq!(f.relabeling, vec![1, 2]);

        assert!(canonicalize(&ExponentVector::from([0, 0])).is_err());
    }

    #[test]
    fn canonical_relabeling_reproduces_original() {
        let t = ExponentVector::from([0, 1, 2, 0, 1]);
        let f = canonicalize(&t).unwrap();
        let back = Multiset::from_exponents(f.canonical.as_slice())
            .relabel(&f.relabeling)
            .unwrap();
        assert_eq!(back, t.to_multiset());
    }

    #[test]
    fn map_partitions_examples() {
        let canon = enumerate_partitions(&ms(&[1, 1, 2, 3]));
        let mapped = map_partitions(&canon, &[3, 2, 5]).unwrap();
        let direct = enumerate_partitions(&ms(&[2, 3, 3, 5]));
        let set = |ps: &[MultisetPartition]| {
            ps.iter()
                .map(MultisetPartition::sorted_blocks)
                .collect::<std::collections::BTreeSet<_>>()
        };
        assert_eq!(mapped.len(), 11);
        assert_eq!(set(&mapped), set(&direct));

        assert_eq!(map_partitions(&canon, &[1, 2, 3]).unwrap(), canon);

        let single = vec![MultisetPartition::new(vec![ms(&[1, 1])])];
        let got = map_partitions(&single, &[7]).unwrap();
        assert_eq!(got[0].blocks()[0], ms(&[7, 7]));

        assert!(map_partitions(&canon, &[1, 2]).is_err());
    }

    #[test]
    fn filter_examples() {
        let parts = enumerate_partitions(&ms(&[1, 1, 2, 3]));
        let two = filter_partitions(&parts, 2, 4);
        assert_eq!(two.len(), 5);
        let two_small = filter_partitions(&parts, 2, 2);
        let mut got: Vec<_> = two_small.iter().map(|p| p.sorted_blocks()).collect();
        got.sort();
        assert_eq!(got, vec![vec![vec![1, 1], vec![2, 3]], vec![vec![1, 2], vec![1, 3]]]);
        let four = filter_partitions(&parts, 4, 2);
        assert_eq!(four.len(), 1);
        assert_eq!(four[0].to_string(), "{1},{1},{2},{3}");
    }

    #[test]
    fn filter_properties() {
        let parts = enumerate_partitions(&ms(&[1, 1, 2, 2, 3]));
        let once = filter_partitions(&parts, 2, 3);
        assert_eq!(filter_partitions(&once, 2, 3), once);
        assert!(once.iter().all(|p| parts.contains(p)));
        let total: usize = (1..=5).map(|n| filter_partitions(&parts, n, 5).len()).sum();
        assert_eq!(total, parts.len());
    }

    #[test]
    fn integer_partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|t| integer_partitions(t).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(integer_partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn cache_keys() {
        let c2 = build_cache(4, 2).unwrap();
        let keys: Vec<_> = c2.keys().cloned().collect();
        assert_eq!(
            keys,
            vec![
                ExponentVector::from([1]),
                ExponentVector::from([1, 1]),
                ExponentVector::from([2])
            ]
        );
        let c3 = build_cache(4, 3).unwrap();
        assert_eq!(c3.len(), 6);
        assert_eq!(build_cache(3, 4).unwrap(), build_cache(10, 4).unwrap());
        assert!(matches!(build_cache(3, 11), Err(Error::CacheTooLarge { .. })));
        assert!(build_cache(0, 2).is_err());
        assert!(build_cache(3, 0).is_err());
    }

    #[test]
    fn cache_lookup_relabels() {
        let cache = build_cache(3, 3).unwrap();
        let t = ExponentVector::from([0, 2, 1]);
        assert_eq!(
            canonicalize(&t).unwrap().canonical,
            ExponentVector::from([2, 1])
        );
        let parts = cache.lookup(&t).unwrap();
        assert_eq!(parts.len(), 4);
        assert!(parts.iter().all(|p| p.union() == ms(&[2, 2, 3])));
        let miss = cache.lookup(&ExponentVector::from([2, 2]));
        assert!(matches!(miss, Err(Error::CacheMiss { .. })));
    }

    #[test]
    fn cache_json_round_trip() {
        let cache = build_cache(2, 4).unwrap();
        let text = cache.to_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["2,1"][0], serde_json::json!([[1, 1, 2]]));
        assert_eq!(PartitionCache::from_json(&text).unwrap(), cache);

        let broken = r#"{"1":[[[1]]],"2":[[[1,1]],[[1],[1]]]}"#;
        assert!(PartitionCache::from_json(broken).is_err());
        let wrong = r#"{"1":[[[2]]]}"#;
        assert!(PartitionCache::from_json(wrong).is_err());
    }

    #[test]
    fn cache_persists_in_directory() {
        let dir = tempfile::tempdir().unwrap();
        let built = PartitionCache::load_or_build(Some(dir.path()), 3).unwrap();
        assert!(dir.path().join(PartitionCache::file_name(3)).exists());
        let loaded = PartitionCache::load_or_build(Some(dir.path()), 3).unwrap();
        assert_eq!(built, loaded);
    }

    #[test]
    fn vector_form_matches_column_layout() {
        let parts = enumerate_partitions(&ms(&[1, 1, 2, 3]));
        assert_eq!(parts[0].vector_form(&[1, 2, 3]), "(2,1,1)");
        assert_eq!(parts[3].vector_form(&[1, 2, 3]), "(2,0,0)+(0,1,1)");
    }
}
