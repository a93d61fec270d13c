//! Bit-packed linear algebra over GF(2).
//!
//! Vectors and matrix rows are packed into `u64` words, bit `i` of a vector
//! living in word `i / 64` at position `i % 64`. Rows of a [`BitMatrix`] are
//! stored contiguously with a fixed word stride.
//!
//! Elimination always pivots on the lowest available column index, so reduced
//! forms and kernel bases come out in a deterministic order.
//!
//! [`SparseEchelon`] covers the case where rows have a handful of nonzero
//! entries but the column space is too wide for dense storage.

use std::collections::HashMap;
use std::fmt;

use crate::error::{resource, Error, Result};

const WORD: usize = 64;

/// Upper bound on the number of bit cells in a dense matrix (about
/// 10^5 rows by 1.1 * 10^4 columns).
pub const MAX_MATRIX_CELLS: u64 = 1_100_000_000;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[inline]
fn tail_mask(len: usize) -> u64 {
    match len % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A vector over GF(2) of fixed length.
///
/// Bits at positions `>= len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; words_for(len)], len }
    }

    /// Builds a vector with ones at the given positions.
    ///
    /// # Panics
    /// Panics if an index is out of range.
    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    /// Builds a vector from the low `len` bits of an integer (bit `i` of the
    /// integer is entry `i`).
    pub fn from_u64(len: usize, bits: u64) -> Self {
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = bits & if len >= WORD { u64::MAX } else { (1u64 << len) - 1 };
        }
        v
    }

    /// Parses a string of `0`/`1` characters; the first character is entry 0.
    pub fn parse(s: &str) -> Result<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            }
        }
        Ok(v)
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { words, len }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        let bit = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= bit;
        } else {
            self.words[i / WORD] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Adds `other` into `self` (entrywise XOR).
    ///
    /// # Panics
    /// Panics if the lengths differ.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        xor_words(&mut self.words, &other.words);
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words.iter().zip(&other.words).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1 == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        first_one(&self.words)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            })
        })
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[inline]
fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

#[inline]
fn first_one(words: &[u64]) -> Option<usize> {
    words.iter().position(|&w| w != 0).map(|wi| wi * WORD + words[wi].trailing_zeros() as usize)
}

#[inline]
fn get_bit(words: &[u64], i: usize) -> bool {
    (words[i / WORD] >> (i % WORD)) & 1 == 1
}

/// A dense matrix over GF(2), stored row-major with packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    nrows: usize,
    ncols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    /// An empty matrix (zero rows) with `ncols` columns.
    pub fn new(ncols: usize) -> Self {
        Self { nrows: 0, ncols, stride: words_for(ncols), data: Vec::new() }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Result<Self> {
        check_cells(nrows, ncols)?;
        let stride = words_for(ncols);
        Ok(Self { nrows, ncols, stride, data: vec![0; nrows * stride] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    pub fn from_rows(ncols: usize, rows: &[BitVector]) -> Result<Self> {
        let mut m = Self::new(ncols);
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    /// Convenience constructor from `0`/`1` strings, one per row.
    pub fn parse_rows(ncols: usize, rows: &[&str]) -> Result<Self> {
        let rows = rows.iter().map(|s| BitVector::parse(s)).collect::<Result<Vec<_>>>()?;
        Self::from_rows(ncols, &rows)
    }

    pub fn push_row(&mut self, row: &BitVector) -> Result<()> {
        if row.len() != self.ncols {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: row.len() });
        }
        self.push_words(row.words())
    }

    pub(crate) fn push_words(&mut self, words: &[u64]) -> Result<()> {
        check_cells(self.nrows + 1, self.ncols)?;
        self.data.extend_from_slice(&words[..self.stride]);
        self.nrows += 1;
        Ok(())
    }

    /// Appends a row given by the positions of its ones.
    pub fn push_indices(&mut self, ones: impl IntoIterator<Item = usize>) -> Result<()> {
        check_cells(self.nrows + 1, self.ncols)?;
        let start = self.data.len();
        self.data.resize(start + self.stride, 0);
        for i in ones {
            if i >= self.ncols {
                return Err(Error::DimensionMismatch { expected: self.ncols, found: i + 1 });
            }
            self.data[start + i / WORD] ^= 1u64 << (i % WORD);
        }
        self.nrows += 1;
        Ok(())
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(c < self.ncols);
        get_bit(self.row_words(r), c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(c < self.ncols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let bit = 1u64 << (c % WORD);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub(crate) fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector::from_words(self.ncols, self.row_words(r).to_vec())
    }

    pub fn rows(&self) -> impl Iterator<Item = BitVector> + '_ {
        (0..self.nrows).map(|r| self.row(r))
    }

    /// Adds row `src` into row `dst`.
    fn add_row(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        xor_words(a, b);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(a.max(b) * s);
        lo[a.min(b) * s..a.min(b) * s + s].swap_with_slice(&mut hi[..s]);
    }

    /// Gaussian elimination in place. Returns the pivot column of each of the
    /// leading `rank` rows. With `reduced`, pivots are cleared above as well.
    fn eliminate(&mut self, reduced: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.ncols {
            if next == self.nrows {
                break;
            }
            let wi = col / WORD;
            let bit = 1u64 << (col % WORD);
            let Some(p) = (next..self.nrows).find(|&r| self.data[r * self.stride + wi] & bit != 0) else {
                continue;
            };
            self.swap_rows(next, p);
            let start = if reduced { 0 } else { next + 1 };
            for r in start..self.nrows {
                if r != next && self.data[r * self.stride + wi] & bit != 0 {
                    self.add_row(r, next);
                }
            }
            pivots.push(col);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(false).len()
    }

    /// Reduced row-echelon form, with zero rows dropped.
    pub fn reduced_row_echelon(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        m.data.truncate(pivots.len() * m.stride);
        m.nrows = pivots.len();
        Echelon { rows: m, pivots }
    }

    /// Whether `v` lies in the row span.
    pub fn in_span(&self, v: &BitVector) -> Result<bool> {
        if v.len() != self.ncols {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: v.len() });
        }
        Ok(self.reduced_row_echelon().reduce(v).is_zero())
    }

    /// A basis of the vectors annihilated by every row, one row per free
    /// column, in ascending order of free column.
    pub fn kernel_basis(&self) -> BitMatrix {
        let ech = self.reduced_row_echelon();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut out = BitMatrix::new(self.ncols);
        for free in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut x = BitVector::zeros(self.ncols);
            x.set(free, true);
            for (i, &p) in ech.pivots.iter().enumerate() {
                if ech.rows.get(i, free) {
                    x.set(p, true);
                }
            }
            out.push_row(&x).expect("kernel basis fits within the source matrix's bounds");
        }
        out
    }

    /// Matrix-vector product, rows acting as functionals on `x`.
    pub fn apply(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: x.len() });
        }
        let mut out = BitVector::zeros(self.nrows);
        for r in 0..self.nrows {
            let parity = self.row_words(r).iter().zip(x.words()).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows, self.ncols)?;
        for r in self.rows() {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

fn check_cells(nrows: usize, ncols: usize) -> Result<()> {
    let cells = nrows as u64 * words_for(ncols).max(1) as u64 * WORD as u64;
    if cells > MAX_MATRIX_CELLS {
        return Err(resource(format!("{nrows}x{ncols} matrix exceeds {MAX_MATRIX_CELLS} cells")));
    }
    Ok(())
}

/// A matrix in reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: BitMatrix,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.rows
    }

    /// The canonical representative of `v` modulo the row span: every pivot
    /// coordinate of the result is zero.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.rows.ncols, "length mismatch in reduce");
        let mut words = v.words().to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if get_bit(&words, p) {
                xor_words(&mut words, self.rows.row_words(i));
            }
        }
        BitVector::from_words(v.len(), words)
    }
}

/// Incremental echelon basis for sparse rows.
///
/// Rows are sorted, duplicate-free lists of column indices. The pivot of a row
/// is its smallest column. Inserting reduces the incoming row against the
/// stored pivots until it either vanishes or exposes a new pivot.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    rows: HashMap<u32, Vec<u32>>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains_pivot(&self, column: u32) -> bool {
        self.rows.contains_key(&column)
    }

    /// Reduces `row` in place until its leading column is not a pivot.
    pub fn reduce_leading(&self, row: &mut Vec<u32>) {
        let mut scratch = Vec::new();
        while let Some(&lead) = row.first() {
            let Some(pivot_row) = self.rows.get(&lead) else { break };
            sym_diff_sorted(row, pivot_row, &mut scratch);
            std::mem::swap(row, &mut scratch);
        }
    }

    /// Inserts a row; returns `true` when it was independent of the basis.
    pub fn insert(&mut self, mut row: Vec<u32>) -> bool {
        debug_assert!(row.windows(2).all(|w| w[0] < w[1]), "sparse row must be strictly ascending");
        self.reduce_leading(&mut row);
        match row.first() {
            Some(&lead) => {
                self.rows.insert(lead, row);
                true
            }
            None => false,
        }
    }

    /// The basis in reduced form: every row is cleared of the other rows'
    /// pivots. Rows come out ascending by pivot.
    pub fn reduced_rows(&self) -> Vec<Vec<u32>> {
        let mut pivots: Vec<u32> = self.rows.keys().copied().collect();
        pivots.sort_unstable();
        let mut out: Vec<Vec<u32>> = Vec::with_capacity(pivots.len());
        let mut scratch = Vec::new();
        // Back substitution from the largest pivot down.
        let mut done: HashMap<u32, Vec<u32>> = HashMap::new();
        for &p in pivots.iter().rev() {
            let mut row = self.rows[&p].clone();
            let mut i = 1;
            while i < row.len() {
                if let Some(r) = done.get(&row[i]) {
                    sym_diff_sorted(&row, r, &mut scratch);
                    std::mem::swap(&mut row, &mut scratch);
                } else {
                    i += 1;
                }
            }
            done.insert(p, row);
        }
        for p in pivots {
            out.push(done.remove(&p).expect("every pivot was reduced"));
        }
        out
    }

    /// Fully reduces a row; zero result means membership in the span.
    pub fn contains(&self, row: &[u32]) -> bool {
        let mut row = row.to_vec();
        let mut scratch = Vec::new();
        let mut i = 0;
        while i < row.len() {
            if let Some(pivot_row) = self.rows.get(&row[i]) {
                sym_diff_sorted(&row, pivot_row, &mut scratch);
                std::mem::swap(&mut row, &mut scratch);
            } else {
                i += 1;
            }
        }
        row.is_empty()
    }
}

/// Writes the symmetric difference of two ascending lists into `out`.
fn sym_diff_sorted(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}
