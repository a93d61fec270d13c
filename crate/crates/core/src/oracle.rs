//! Graded dimensions `dim H_m(A, W)` from the short exact sequence
//!
//! ```text
//! 0 → H_m(A, V) → H_m(A, V ⊕ λ) → H_{m-k-1}(K, V_K) → 0
//! ```
//!
//! with `K = ker λ` and `k` the multiplicity of `λ` in `V`. The recursion never
//! touches the presented ring, so it serves as an independent check on
//! [`crate::presentation`].

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::characters::{kernel_quotient, Character, GroupRank};
use crate::error::{Error, Result};
use crate::presentation::{degrees_up_to, dimension_linear, Caps};
use crate::ring::RepDegree;
use rayon::prelude::*;

/// Memo key: rank, integer degree, and the canonical multiset `W` as
/// `(mask, multiplicity)` pairs ascending by mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimKey {
    pub rank: u32,
    pub m: i64,
    pub rep: Vec<(u32, u32)>,
}

impl DimKey {
    pub fn new(rank: GroupRank, d: &RepDegree) -> Self {
        Self { rank: rank.get(), m: d.m(), rep: d.rep().iter().map(|&(c, k)| (c.mask(), k)).collect() }
    }
}

/// A multiset of characters as `(mask, multiplicity)` pairs.
pub type MaskRep = Vec<(u32, u32)>;

/// Splits off one copy of `lambda = rep[pivot]` and returns the two
/// recursion targets `(V, V_K, k)`.
fn split(rep: &[(u32, u32)], pivot: usize) -> (MaskRep, MaskRep, u32) {
    let (lambda, w) = rep[pivot];
    let mut v = rep.to_vec();
    if w == 1 {
        v.remove(pivot);
    } else {
        v[pivot].1 -= 1;
    }
    let k = w - 1;
    let q = kernel_quotient(Character::new(lambda).expect("memo keys hold nonzero masks"));
    let mut vk: Vec<(u32, u32)> =
        rep.iter().filter(|&&(c, _)| c != lambda).map(|&(c, mult)| (q.image_mask(c), mult)).collect();
    vk.sort_unstable();
    let mut merged: Vec<(u32, u32)> = Vec::with_capacity(vk.len());
    for (c, mult) in vk {
        match merged.last_mut() {
            Some(last) if last.0 == c => last.1 += mult,
            _ => merged.push((c, mult)),
        }
    }
    (v, merged, k)
}

fn base_case(m: i64, rep: &[(u32, u32)]) -> Option<u64> {
    let total: i64 = rep.iter().map(|&(_, k)| i64::from(k)).sum();
    if m < 0 || m > total {
        Some(0)
    } else if rep.is_empty() {
        Some(u64::from(m == 0))
    } else {
        None
    }
}

/// Memoizing dimension oracle. Safe to share across threads; concurrent
/// misses on the same key may both compute, and both store the same value.
#[derive(Debug, Default)]
pub struct Oracle {
    memo: DashMap<DimKey, u64>,
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// `dim H_m(A, W)` for `A` of the given rank.
    pub fn dimension(&self, rank: GroupRank, d: &RepDegree) -> Result<u64> {
        d.check_rank(rank)?;
        Ok(self.dim_key(&DimKey::new(rank, d)))
    }

    pub fn dim_key(&self, key: &DimKey) -> u64 {
        if let Some(v) = base_case(key.m, &key.rep) {
            return v;
        }
        if let Some(v) = self.memo.get(key) {
            return *v;
        }
        // Pivot on the smallest mask in the support.
        let (v, vk, k) = split(&key.rep, 0);
        let left = self.dim_key(&DimKey { rank: key.rank, m: key.m, rep: v });
        let right = self.dim_key(&DimKey { rank: key.rank - 1, m: key.m - i64::from(k) - 1, rep: vk });
        let value = left + right;
        self.memo.insert(key.clone(), value);
        value
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// Memo contents sorted by key.
    pub fn entries(&self) -> Vec<(DimKey, u64)> {
        let mut v: Vec<_> = self.memo.iter().map(|e| (e.key().clone(), *e.value())).collect();
        v.sort();
        v
    }

    pub fn insert(&self, key: DimKey, dim: u64) {
        self.memo.insert(key, dim);
    }
}

/// Picks a pivot index into the support.
pub type PivotChoice<'a> = dyn FnMut(&[(u32, u32)]) -> usize + 'a;

/// The same recursion without memoization, pivoting on whichever support
/// character `choose` returns (an index into the support).
pub fn dimension_with_pivot(rank: GroupRank, d: &RepDegree, choose: &mut PivotChoice) -> u64 {
    fn rec(m: i64, rep: &[(u32, u32)], choose: &mut PivotChoice) -> u64 {
        if let Some(v) = base_case(m, rep) {
            return v;
        }
        let pivot = choose(rep);
        assert!(pivot < rep.len(), "pivot index out of range");
        let (v, vk, k) = split(rep, pivot);
        rec(m, &v, choose) + rec(m - i64::from(k) - 1, &vk, choose)
    }
    rec(d.m(), &DimKey::new(rank, d).rep, choose)
}

/// One row of a dimension table: both computations side by side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub rank: u32,
    pub m: i64,
    #[serde(serialize_with = "crate::ring::serialize_rep")]
    pub rep: Vec<(Character, u32)>,
    pub monomials: u64,
    pub relation_rank: u64,
    pub dim_linear: u64,
    pub dim_oracle: u64,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Every degree with `|W| ≤ max_total` and `0 ≤ m ≤ max_m`, computed by both
/// the oracle and [`dimension_linear`]. Rows are evaluated in parallel and
/// returned in canonical order (by `|W|`, then `W`, then `m`).
pub fn dimension_table(
    oracle: &Oracle,
    rank: GroupRank,
    max_total: u32,
    max_m: i64,
    caps: &Caps,
) -> Result<Vec<TableRow>> {
    if max_total > caps.max_rep_dim {
        return Err(crate::error::resource(format!("|W| up to {max_total} exceeds the cap of {}", caps.max_rep_dim)));
    }
    if max_m < 0 {
        return Ok(Vec::new());
    }
    let degrees = degrees_up_to(rank, max_total, max_m);
    degrees.par_iter().map(|d| table_row(oracle, rank, d, caps)).collect()
}

pub fn table_row(oracle: &Oracle, rank: GroupRank, d: &RepDegree, caps: &Caps) -> Result<TableRow> {
    let lin = dimension_linear(rank, d, caps)?;
    let dim_oracle = oracle.dimension(rank, d)?;
    Ok(TableRow {
        rank: rank.get(),
        m: d.m(),
        rep: d.rep().to_vec(),
        monomials: lin.monomials,
        relation_rank: lin.relation_rank,
        dim_linear: lin.dim,
        dim_oracle,
        matches: lin.dim == dim_oracle,
    })
}

/// One line of the on-disk oracle cache.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub r: u32,
    pub m: i64,
    #[serde(rename = "W")]
    pub w: Vec<[u32; 2]>,
    pub dim: u64,
}

impl CacheEntry {
    pub fn from_key(key: &DimKey, dim: u64) -> Self {
        Self { r: key.rank, m: key.m, w: key.rep.iter().map(|&(c, k)| [c, k]).collect(), dim }
    }

    pub fn key(&self) -> Result<DimKey> {
        let mut rep: Vec<(u32, u32)> = self.w.iter().map(|&[c, k]| (c, k)).collect();
        rep.sort_unstable();
        if rep.iter().any(|&(c, k)| c == 0 || k == 0 || c >= (1 << self.r)) || rep.windows(2).any(|p| p[0].0 == p[1].0)
        {
            return Err(Error::Parse(format!("malformed cache entry {self:?}")));
        }
        Ok(DimKey { rank: self.r, m: self.m, rep })
    }
}

/// Outcome of loading a cache file.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CacheLoad {
    pub entries: usize,
    pub verified: usize,
    /// Entries whose stored value disagrees with recomputation.
    pub mismatches: Vec<CacheEntry>,
    #[serde(skip)]
    pub keys: HashSet<DimKey>,
}

/// Reads a JSON-lines cache. Without `verify`, entries are trusted and
/// seeded into the memo; with `verify`, each is recomputed and compared.
pub fn load_cache(oracle: &Oracle, path: &Path, verify: bool) -> Result<CacheLoad> {
    let mut out = CacheLoad::default();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(Error::InvalidInput(format!("cannot open cache {}: {e}", path.display()))),
    };
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::InvalidInput(format!("cannot read cache: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let entry: CacheEntry =
            serde_json::from_str(&line).map_err(|e| Error::Parse(format!("bad cache line {line:?}: {e}")))?;
        let key = entry.key()?;
        out.entries += 1;
        if verify {
            let fresh = Oracle::new().dim_key(&key);
            out.verified += 1;
            if fresh != entry.dim {
                out.mismatches.push(entry);
                continue;
            }
        }
        oracle.insert(key.clone(), entry.dim);
        out.keys.insert(key);
    }
    Ok(out)
}

/// Appends every memo entry not in `known` to the cache, in key order.
pub fn append_cache(oracle: &Oracle, path: &Path, known: &HashSet<DimKey>) -> Result<usize> {
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::InvalidInput(format!("cannot open cache {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    let mut written = 0;
    for (key, dim) in oracle.entries() {
        if known.contains(&key) {
            continue;
        }
        let line = serde_json::to_string(&CacheEntry::from_key(&key, dim)).expect("cache entries serialize");
        writeln!(w, "{line}").map_err(|e| Error::InvalidInput(format!("cannot write cache: {e}")))?;
        written += 1;
    }
    w.flush().map_err(|e| Error::InvalidInput(format!("cannot write cache: {e}")))?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{all_characters, LinearAutomorphism};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rk(r: u32) -> GroupRank {
        GroupRank::new(r).unwrap()
    }

    fn deg(m: i64, spec: &str) -> RepDegree {
        RepDegree::parse_rep(m, spec).unwrap()
    }

    #[test]
    fn base_cases() {
        let o = Oracle::new();
        for r in 0..4 {
            assert_eq!(o.dimension(rk(r), &deg(0, "")).unwrap(), 1);
            assert_eq!(o.dimension(rk(r), &deg(1, "")).unwrap(), 0);
        }
    }

    #[test]
    fn rank_one_is_a_polynomial_ring() {
        let o = Oracle::new();
        for n in 0..8u32 {
            for m in -1..=(n as i64 + 1) {
                let expected = u64::from(m >= 0 && m <= n as i64);
                let spec = if n == 0 { String::new() } else { format!("1^{n}") };
                assert_eq!(o.dimension(rk(1), &deg(m, &spec)).unwrap(), expected, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn rank_two_examples() {
        let o = Oracle::new();
        assert_eq!(o.dimension(rk(2), &deg(2, "1,2,3")).unwrap(), 2);
        assert_eq!(o.dimension(rk(2), &deg(1, "1,2,3")).unwrap(), 3);
        assert_eq!(o.dimension(rk(2), &deg(3, "1,2,3")).unwrap(), 1);
        assert_eq!(o.dimension(rk(2), &deg(0, "1,2,3")).unwrap(), 1);
        // The two summands of the hand-unrolled recursion.
        assert_eq!(o.dimension(rk(2), &deg(2, "1,2")).unwrap(), 1);
        assert_eq!(o.dimension(rk(1), &deg(1, "1^2")).unwrap(), 1);
        assert!(o.dimension(rk(2), &deg(0, "4")).is_err());
    }

    fn random_degree(rng: &mut impl Rng, r: u32, max_total: u32) -> RepDegree {
        let chars = all_characters(rk(r));
        let n = rng.gen_range(0..=max_total);
        let w: Vec<(Character, u32)> = (0..n).map(|_| (chars[rng.gen_range(0..chars.len())], 1)).collect();
        let d = RepDegree::new(0, w);
        let m = rng.gen_range(0..=d.dim() as i64);
        d.with_m(m)
    }

    #[test]
    fn pivot_choice_does_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let o = Oracle::new();
        for _ in 0..300 {
            let r = rng.gen_range(1..=4);
            let d = random_degree(&mut rng, r, 7);
            let mut pick_rng = ChaCha8Rng::seed_from_u64(rng.gen());
            let mut choose = |rep: &[(u32, u32)]| pick_rng.gen_range(0..rep.len());
            assert_eq!(dimension_with_pivot(rk(r), &d, &mut choose), o.dimension(rk(r), &d).unwrap(), "{d}");
        }
    }

    #[test]
    fn automorphism_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let o = Oracle::new();
        for _ in 0..300 {
            let r = rng.gen_range(1..=4);
            let d = random_degree(&mut rng, r, 7);
            let g = LinearAutomorphism::random(rk(r), &mut rng);
            let moved = RepDegree::new(d.m(), d.rep().iter().map(|&(c, k)| (g.apply(c), k)));
            assert_eq!(o.dimension(rk(r), &d).unwrap(), o.dimension(rk(r), &moved).unwrap());
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("oracle-cache-{}", std::process::id()));
        let _ = std::fs::remove_file(&dir);
        let o = Oracle::new();
        o.dimension(rk(3), &deg(2, "1,2,3,4,7")).unwrap();
        let written = append_cache(&o, &dir, &HashSet::new()).unwrap();
        assert_eq!(written, o.len());
        let fresh = Oracle::new();
        let load = load_cache(&fresh, &dir, true).unwrap();
        assert_eq!(load.entries, written);
        assert!(load.mismatches.is_empty());
        assert_eq!(fresh.entries(), o.entries());

        // A corrupted line is caught only under verification.
        let mut text = std::fs::read_to_string(&dir).unwrap();
        text.push_str("{\"r\":2,\"m\":2,\"W\":[[1,1],[2,1],[3,1]],\"dim\":5}\n");
        std::fs::write(&dir, text).unwrap();
        assert_eq!(load_cache(&Oracle::new(), &dir, false).unwrap().mismatches.len(), 0);
        let checked = load_cache(&Oracle::new(), &dir, true).unwrap();
        assert_eq!(checked.mismatches.len(), 1);
        std::fs::remove_file(&dir).unwrap();
    }

    #[test]
    fn cache_line_format() {
        let key = DimKey::new(rk(2), &deg(2, "1,2,3"));
        let line = serde_json::to_string(&CacheEntry::from_key(&key, 2)).unwrap();
        assert_eq!(line, r#"{"r":2,"m":2,"W":[[1,1],[2,1],[3,1]],"dim":2}"#);
    }

    #[test]
    fn table_examples() {
        let o = Oracle::new();
        let caps = Caps::default();
        let t1 = dimension_table(&o, rk(1), 3, 10, &caps).unwrap();
        assert_eq!(t1.len(), 1 + 2 + 3 + 4);
        assert!(t1.iter().all(|r| r.dim_linear == 1 && r.matches));

        let t2 = dimension_table(&o, rk(2), 3, 10, &caps).unwrap();
        let find = |m: i64| t2.iter().find(|r| r.m == m && r.rep == deg(m, "1,2,3").rep()).unwrap().dim_oracle;
        assert_eq!((find(1), find(2), find(3)), (3, 2, 1));
        assert!(t2.iter().all(|r| r.matches));
        assert!(dimension_table(&o, rk(2), 3, -1, &caps).unwrap().is_empty());
        assert!(dimension_table(&o, rk(2), 11, 1, &caps).is_err());
    }

    #[test]
    fn table_row_json() {
        let row = table_row(&Oracle::new(), rk(2), &deg(2, "1,2,3"), &Caps::default()).unwrap();
        assert_eq!(
            serde_json::to_string(&row).unwrap(),
            r#"{"rank":2,"m":2,"rep":[[1,1],[2,1],[3,1]],"monomials":3,"relation_rank":1,"dim_linear":2,"dim_oracle":2,"match":true}"#
        );
    }
}
