//! Minimally dependent sets of nontrivial characters: the circuits of the
//! binary matroid formed by all nonzero vectors of GF(2)^r.
//!
//! A circuit with `k + 1` members arises from a linearly independent `k`-set
//! `S` by adjoining `σ = Σ S`. Each circuit is produced exactly once by
//! requiring `σ` to be larger (as a mask) than every member of `S`, so the
//! enumeration never needs a deduplication table.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{mask_rank, Character, GroupRank, XorBasis, ENUMERATION_RANK_CAP};
use crate::error::{invalid, resource, Result};

/// Ranks up to this bound may be fully materialized with [`all_circuits`].
pub const MATERIALIZE_RANK_CAP: u32 = 5;

/// A circuit, members strictly ascending by mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Circuit {
    members: Vec<Character>,
}

impl Circuit {
    /// Validates and canonicalizes a candidate circuit.
    pub fn new(mut members: Vec<Character>) -> Result<Self> {
        members.sort();
        if !is_minimally_dependent(&members)? {
            return Err(invalid(format!("{members:?} is not minimally dependent")));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[Character] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn masks(&self) -> Vec<u32> {
        self.members.iter().map(|c| c.mask()).collect()
    }
}

/// Whether `set` is a circuit: its rank is one less than its size and its
/// members sum to zero.
pub fn is_minimally_dependent(set: &[Character]) -> Result<bool> {
    if set.is_empty() {
        return Err(invalid("empty character set"));
    }
    let mut sorted = set.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("duplicate characters"));
    }
    let sum = sorted.iter().fold(0, |acc, c| acc ^ c.mask());
    Ok(sum == 0 && mask_rank(sorted.iter().map(|c| c.mask())) as usize + 1 == sorted.len())
}

#[derive(Clone, Copy)]
struct Frame {
    basis: XorBasis,
    sum: u32,
    size: usize,
    next: usize,
}

/// Streaming depth-first enumeration of circuits inside a ground set.
///
/// Circuits come out in lexicographic order of their member lists.
pub struct CircuitIter {
    ground: Vec<u32>,
    max_size: usize,
    stack: Vec<Frame>,
    path: Vec<u32>,
}

impl CircuitIter {
    fn new(ground: Vec<u32>, max_size: usize) -> Self {
        let root = Frame { basis: XorBasis::new(), sum: 0, size: 0, next: 0 };
        Self { ground, max_size, stack: vec![root], path: Vec::new() }
    }

    /// Only circuits whose smallest member is `ground[first]`.
    fn starting_at(ground: Vec<u32>, max_size: usize, first: usize) -> Self {
        let mut it = Self::new(ground, max_size);
        it.stack[0].next = it.ground.len();
        if max_size >= 3 {
            let x = it.ground[first];
            let mut basis = XorBasis::new();
            basis.insert(x);
            it.stack.push(Frame { basis, sum: x, size: 1, next: first + 1 });
            it.path.push(x);
        }
        it
    }
}

impl Iterator for CircuitIter {
    type Item = Circuit;

    fn next(&mut self) -> Option<Circuit> {
        loop {
            let top = self.stack.last_mut()?;
            let Some(&x) = self.ground.get(top.next) else {
                self.stack.pop();
                self.path.pop();
                continue;
            };
            top.next += 1;
            if top.size >= 2 && x == top.sum {
                if top.size < self.max_size {
                    let members = self.path.iter().chain(std::iter::once(&x)).map(|&m| Character::new(m).unwrap());
                    return Some(Circuit { members: members.collect() });
                }
                continue;
            }
            if top.size + 2 <= self.max_size && !top.basis.contains(x) {
                let mut child = *top;
                child.basis.insert(x);
                child.sum ^= x;
                child.size += 1;
                self.stack.push(child);
                self.path.push(x);
            }
        }
    }
}

fn effective_max(rank: GroupRank, max_size: Option<usize>) -> usize {
    let cap = rank.get() as usize + 1;
    max_size.map_or(cap, |s| s.min(cap))
}

/// All circuits of rank `r`, optionally only those of size `<= max_size`.
pub fn enumerate_circuits(rank: GroupRank, max_size: Option<usize>) -> Result<CircuitIter> {
    if rank.get() > ENUMERATION_RANK_CAP {
        return Err(resource(format!("circuit enumeration is capped at rank {ENUMERATION_RANK_CAP}")));
    }
    let ground = (1..(1u32 << rank.get())).collect();
    Ok(CircuitIter::new(ground, effective_max(rank, max_size)))
}

/// Materialized circuit list; only for small ranks.
pub fn all_circuits(rank: GroupRank) -> Result<Vec<Circuit>> {
    if rank.get() > MATERIALIZE_RANK_CAP {
        return Err(resource(format!(
            "materializing circuits is limited to rank {MATERIALIZE_RANK_CAP}; stream with enumerate_circuits"
        )));
    }
    Ok(enumerate_circuits(rank, None)?.collect())
}

/// Circuits whose members all lie in `ground`.
pub fn circuits_within(ground: &[Character], max_size: usize) -> CircuitIter {
    let mut g: Vec<u32> = ground.iter().map(|c| c.mask()).collect();
    g.sort_unstable();
    g.dedup();
    CircuitIter::new(g, max_size)
}

/// Circuit counts indexed by size (entries 0..=r+1).
pub fn count_circuits_enumerated(rank: GroupRank, parallel: bool) -> Result<Vec<u64>> {
    if rank.get() > ENUMERATION_RANK_CAP {
        return Err(resource(format!("circuit enumeration is capped at rank {ENUMERATION_RANK_CAP}")));
    }
    let max = effective_max(rank, None);
    let ground: Vec<u32> = (1..(1u32 << rank.get())).collect();
    let tally = |it: CircuitIter| {
        let mut counts = vec![0u64; max + 1];
        for c in it {
            counts[c.size()] += 1;
        }
        counts
    };
    let merge = |mut a: Vec<u64>, b: Vec<u64>| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    let counts = if parallel {
        (0..ground.len())
            .into_par_iter()
            .map(|i| tally(CircuitIter::starting_at(ground.clone(), max, i)))
            .reduce(|| vec![0u64; max + 1], merge)
    } else {
        tally(CircuitIter::new(ground, max))
    };
    Ok(counts)
}

/// Exact circuit counts from the product formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitCount {
    pub rank: u32,
    #[serde(serialize_with = "big_as_string")]
    pub total: BigUint,
    /// `(size, count)` for sizes `3..=r+1`.
    #[serde(serialize_with = "big_pairs_as_strings")]
    pub by_size: Vec<(usize, BigUint)>,
}

fn big_as_string<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn big_pairs_as_strings<S: serde::Serializer>(v: &[(usize, BigUint)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (k, n) in v {
        seq.serialize_element(&(k, n.to_string()))?;
    }
    seq.end()
}

/// Number of circuits with `k + 1` members is
/// `(2^r - 1)(2^r - 2)...(2^r - 2^(k-1)) / (k+1)!`, summed over `2 <= k <= r`.
pub fn count_circuits_closed_form(rank: GroupRank) -> CircuitCount {
    let r = rank.get();
    let q = BigUint::from(1u8) << r;
    let mut by_size = Vec::new();
    let mut total = BigUint::from(0u8);
    for k in 2..=r {
        let mut numerator = BigUint::from(1u8);
        for i in 1..=k {
            numerator *= &q - (BigUint::from(1u8) << (i - 1));
        }
        let factorial: BigUint = (1..=k + 1).map(BigUint::from).product();
        let count = &numerator / &factorial;
        assert_eq!(&count * &factorial, numerator, "independent sets must split evenly into circuits");
        total += &count;
        by_size.push((k as usize + 1, count));
    }
    CircuitCount { rank: r, total, by_size }
}
