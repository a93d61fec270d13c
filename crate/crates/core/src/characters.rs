//! Characters and subgroups of an elementary abelian 2-group `A = C^r`.
//!
//! Both group elements and characters are vectors in GF(2)^r, packed into the
//! low `r` bits of an integer mask: bit `i` corresponds to the projection
//! `p_{i+1}`. A character `λ` is trivial on an element `b` exactly when the
//! GF(2) inner product `⟨λ, b⟩` vanishes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, resource, Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest rank for which characters and circuits are enumerated.
pub const ENUMERATION_RANK_CAP: u32 = 12;
/// Largest rank accepted by counting-only operations.
pub const COUNTING_RANK_CAP: u32 = 16;

/// Rank `r` of the group `A = C^r`.
///
/// Rank 0 is the trivial group; it shows up as the kernel of the unique
/// nontrivial character of `C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupRank(u32);

impl GroupRank {
    pub fn new(r: u32) -> Result<Self> {
        if r > COUNTING_RANK_CAP {
            return Err(resource(format!("rank {r} exceeds the cap of {COUNTING_RANK_CAP}")));
        }
        Ok(Self(r))
    }

    /// Like [`GroupRank::new`], but also enforces the enumeration cap.
    pub fn enumerable(r: u32) -> Result<Self> {
        if r > ENUMERATION_RANK_CAP {
            return Err(resource(format!("rank {r} exceeds the enumeration cap of {ENUMERATION_RANK_CAP}")));
        }
        Self::new(r)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Number of nontrivial characters, `2^r - 1`.
    pub fn num_characters(self) -> usize {
        (1usize << self.0) - 1
    }

    /// Rank of an index-2 subgroup.
    pub fn kernel_rank(self) -> Option<GroupRank> {
        self.0.checked_sub(1).map(GroupRank)
    }

    pub fn contains(self, c: Character) -> bool {
        c.0 < (1u32 << self.0)
    }

    pub fn check(self, c: Character) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(invalid(format!("character {c} does not belong to rank {}", self.0)))
        }
    }
}

impl fmt::Display for GroupRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A nontrivial character, stored as its nonzero mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Character(u32);

impl Character {
    pub fn new(mask: u32) -> Result<Self> {
        if mask == 0 {
            return Err(invalid("the trivial character is not a generator"));
        }
        Ok(Self(mask))
    }

    /// The projection onto the `i`-th factor (1-based, as `p_i`).
    pub fn projection(i: u32) -> Self {
        assert!((1..=32).contains(&i));
        Self(1 << (i - 1))
    }

    #[inline]
    pub fn mask(self) -> u32 {
        self.0
    }

    /// The product of two characters; `None` when it is trivial.
    #[inline]
    pub fn product(self, other: Character) -> Option<Character> {
        let m = self.0 ^ other.0;
        (m != 0).then_some(Character(m))
    }

    pub fn to_bit_vector(self, rank: GroupRank) -> BitVector {
        BitVector::from_u64(rank.get() as usize, u64::from(self.0))
    }

    /// Evaluates the character on a group element given as a mask.
    #[inline]
    pub fn is_trivial_on(self, element: u32) -> bool {
        (self.0 & element).count_ones().is_multiple_of(2)
    }
}

impl TryFrom<u32> for Character {
    type Error = Error;
    fn try_from(mask: u32) -> Result<Self> {
        Character::new(mask)
    }
}

impl From<Character> for u32 {
    fn from(c: Character) -> u32 {
        c.0
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "χ{}", self.0)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// All nontrivial characters, ascending by mask.
pub fn all_characters(rank: GroupRank) -> Vec<Character> {
    (1..(1u32 << rank.get())).map(Character).collect()
}

/// Sum of masks over GF(2); zero means the product is the trivial character.
pub fn mask_sum<'a>(chars: impl IntoIterator<Item = &'a Character>) -> u32 {
    chars.into_iter().fold(0, |acc, c| acc ^ c.0)
}

/// Linear basis of a set of masks, kept in echelon form keyed by top bit.
#[derive(Clone, Copy, Debug, Default)]
pub struct XorBasis {
    by_top_bit: [u32; 32],
    len: u32,
}

impl XorBasis {
    pub fn new() -> Self {
        Self::default()
    }

    fn reduce(&self, mut x: u32) -> u32 {
        while x != 0 {
            let top = 31 - x.leading_zeros();
            let b = self.by_top_bit[top as usize];
            if b == 0 {
                break;
            }
            x ^= b;
        }
        x
    }

    pub fn contains(&self, x: u32) -> bool {
        self.reduce(x) == 0
    }

    /// Adds `x`; returns `false` if it was already in the span.
    pub fn insert(&mut self, x: u32) -> bool {
        let x = self.reduce(x);
        if x == 0 {
            return false;
        }
        self.by_top_bit[(31 - x.leading_zeros()) as usize] = x;
        self.len += 1;
        true
    }

    pub fn rank(&self) -> u32 {
        self.len
    }
}

/// GF(2) rank of a set of masks.
pub fn mask_rank(masks: impl IntoIterator<Item = u32>) -> u32 {
    let mut b = XorBasis::new();
    for m in masks {
        b.insert(m);
    }
    b.rank()
}

/// A subgroup `B ≤ A`, canonicalized to reduced row-echelon generators.
///
/// Pivots are the lowest set bits and generators are sorted by pivot, so two
/// subgroups are equal exactly when their generator lists are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Subgroup {
    rank: GroupRank,
    generators: Vec<u32>,
}

impl Subgroup {
    /// The subgroup generated by the given element masks.
    pub fn new(rank: GroupRank, elements: &[u32]) -> Result<Self> {
        let r = rank.get() as usize;
        let mut m = BitMatrix::new(r);
        for &e in elements {
            if e >= (1u32 << r) {
                return Err(invalid(format!("element {e} does not belong to rank {r}")));
            }
            m.push_row(&BitVector::from_u64(r, u64::from(e)))?;
        }
        let ech = m.reduced_row_echelon();
        let generators = ech.matrix().rows().map(|row| row.iter_ones().fold(0u32, |acc, i| acc | (1 << i))).collect();
        Ok(Self { rank, generators })
    }

    pub fn trivial(rank: GroupRank) -> Self {
        Self { rank, generators: Vec::new() }
    }

    pub fn whole(rank: GroupRank) -> Self {
        Self { rank, generators: (0..rank.get()).map(|i| 1 << i).collect() }
    }

    /// The kernel of `λ`, obtained as the null space of the 1×r matrix `λ`.
    pub fn kernel_of(rank: GroupRank, lambda: Character) -> Result<Self> {
        rank.check(lambda)?;
        let r = rank.get() as usize;
        let m = BitMatrix::from_rows(r, &[lambda.to_bit_vector(rank)])?;
        let elements: Vec<u32> =
            m.kernel_basis().rows().map(|row| row.iter_ones().fold(0u32, |acc, i| acc | (1 << i))).collect();
        Self::new(rank, &elements)
    }

    /// Every subgroup of `A`, smallest dimension first.
    pub fn all(rank: GroupRank) -> Result<Vec<Self>> {
        if rank.get() > 6 {
            return Err(resource("subgroup enumeration is limited to rank 6"));
        }
        let n = 1u32 << rank.get();
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        // Every subgroup is generated by at most `r` elements; grow from smaller ones.
        let mut frontier = vec![Self::trivial(rank)];
        seen.insert(Vec::new());
        out.push(Self::trivial(rank));
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for b in &frontier {
                for e in 1..n {
                    if b.contains(e) {
                        continue;
                    }
                    let mut gens = b.generators.clone();
                    gens.push(e);
                    let s = Self::new(rank, &gens)?;
                    if seen.insert(s.generators.clone()) {
                        next.push(s.clone());
                        out.push(s);
                    }
                }
            }
            frontier = next;
        }
        out.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.generators.cmp(&b.generators)));
        Ok(out)
    }

    pub fn rank(&self) -> GroupRank {
        self.rank
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn dim(&self) -> u32 {
        self.generators.len() as u32
    }

    pub fn contains(&self, element: u32) -> bool {
        let mut b = XorBasis::new();
        for &g in &self.generators {
            b.insert(g);
        }
        b.contains(element)
    }

    /// For an index-2 subgroup, the unique nontrivial character vanishing on it.
    pub fn annihilating_character(&self) -> Result<Character> {
        if self.dim() + 1 != self.rank.get() {
            return Err(invalid(format!(
                "subgroup of dimension {} is not of index 2 in rank {}",
                self.dim(),
                self.rank
            )));
        }
        all_characters(self.rank)
            .into_iter()
            .find(|&c| restricts_trivially(c, self))
            .ok_or_else(|| invalid("index-2 subgroup without annihilator"))
    }
}

/// Whether `λ|_B` is the trivial character.
pub fn restricts_trivially(lambda: Character, b: &Subgroup) -> bool {
    b.generators.iter().all(|&g| lambda.is_trivial_on(g))
}

/// Identification of characters of `A` modulo `λ` with characters of the
/// index-2 subgroup `K = ker λ`.
///
/// The pivot is the lowest set bit `p` of `λ`. A character `μ` with bit `p`
/// set is first replaced by `μ + λ`; then bit `p` is deleted, leaving an
/// `(r-1)`-bit mask. The fibres over nontrivial `K`-characters are `{μ, μ+λ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    lambda: Character,
    pivot: u32,
}

impl QuotientMap {
    pub fn lambda(&self) -> Character {
        self.lambda
    }

    /// Image of a mask in the `K`-character group (possibly zero).
    #[inline]
    pub fn image_mask(&self, mu: u32) -> u32 {
        let p = self.pivot;
        let mu = if (mu >> p) & 1 == 1 { mu ^ self.lambda.0 } else { mu };
        ((mu >> (p + 1)) << p) | (mu & ((1 << p) - 1))
    }

    /// Image of `μ`; `None` when `μ` restricts trivially to `K`.
    #[inline]
    pub fn image(&self, mu: Character) -> Option<Character> {
        let m = self.image_mask(mu.0);
        (m != 0).then_some(Character(m))
    }
}

pub fn kernel_quotient(lambda: Character) -> QuotientMap {
    QuotientMap { lambda, pivot: lambda.0.trailing_zeros() }
}

/// An automorphism of `GF(2)^r`, given by the images of the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearAutomorphism {
    columns: Vec<u32>,
}

impl LinearAutomorphism {
    pub fn new(rank: GroupRank, columns: Vec<u32>) -> Result<Self> {
        if columns.len() != rank.get() as usize || mask_rank(columns.iter().copied()) != rank.get() {
            return Err(invalid("columns do not form a basis"));
        }
        Ok(Self { columns })
    }

    /// A uniformly random automorphism drawn by rejection sampling.
    pub fn random(rank: GroupRank, rng: &mut impl rand::Rng) -> Self {
        let r = rank.get();
        loop {
            let cols: Vec<u32> = (0..r).map(|_| rng.gen_range(0..(1u32 << r))).collect();
            if mask_rank(cols.iter().copied()) == r {
                return Self { columns: cols };
            }
        }
    }

    pub fn apply_mask(&self, mask: u32) -> u32 {
        self.columns.iter().enumerate().filter(|(i, _)| (mask >> i) & 1 == 1).fold(0, |acc, (_, c)| acc ^ c)
    }

    pub fn apply(&self, c: Character) -> Character {
        Character(self.apply_mask(c.0))
    }
}
