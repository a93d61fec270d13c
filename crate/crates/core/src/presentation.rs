//! The presented ring `F₂[a, t] / I(A)`, one graded piece at a time.
//!
//! The grading monoid `ℕ × J_A` is free, so each piece has a finite monomial
//! basis and the degree-`d` slice of `I(A)` is spanned by the products
//! `r(T)·M` with `T` a circuit and `M` a monomial of complementary degree.
//! Ideal membership, normal forms and dimensions then reduce to GF(2) rank
//! computations.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::characters::{Character, GroupRank, Subgroup};
use crate::circuits::{circuits_within, Circuit};
use crate::error::{invalid, resource, Result};
use crate::gf2::{BitMatrix, BitVector, Echelon};
use crate::oracle::Oracle;
use crate::ring::{
    count_monomials, monomials_of_degree, relation_polynomial, restrict_degree, restrict_to_kernel, serialize_rep,
    AtPolynomial, Monomial, RepDegree,
};

/// Resource caps for degreewise linear algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_rep_dim: u32,
    pub max_monomials: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Self { max_rep_dim: 10, max_monomials: 200_000 }
    }
}

impl Caps {
    /// Drops the `|W|` cap, keeping the monomial cap. Used for degrees such as
    /// `(m, N·ρ)` where `|W|` is large but `m` keeps the piece small.
    pub fn monomials_only(self) -> Self {
        Self { max_rep_dim: u32::MAX, ..self }
    }

    fn check(&self, d: &RepDegree) -> Result<()> {
        if d.dim() > self.max_rep_dim {
            return Err(resource(format!("|W| = {} exceeds the cap of {}", d.dim(), self.max_rep_dim)));
        }
        let n = count_monomials(d);
        if n > self.max_monomials {
            return Err(resource(format!("{n} monomials in degree {d} exceed the cap of {}", self.max_monomials)));
        }
        Ok(())
    }
}

/// Degree-`d` slice of the relation ideal.
#[derive(Clone, Debug)]
pub struct RelationSpan {
    pub degree: RepDegree,
    pub basis_monomials: Vec<Monomial>,
    /// Rows are coordinates of `r(T)·M` in `basis_monomials`.
    pub relation_matrix: BitMatrix,
    /// The `(T, M)` pair behind each row.
    pub generators: Vec<(Circuit, Monomial)>,
    pub rank: usize,
}

fn index_of(monomials: &[Monomial]) -> HashMap<Monomial, usize> {
    monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

fn coordinates(f: &AtPolynomial, index: &HashMap<Monomial, usize>, n: usize) -> Result<BitVector> {
    let mut v = BitVector::zeros(n);
    for m in f.terms() {
        let i = index.get(m).ok_or_else(|| invalid(format!("monomial {m} is not of the expected degree")))?;
        v.flip(*i);
    }
    Ok(v)
}

/// Circuits `T` that fit in degree `d`: `Σ T ≤ W` and `|T| - 1 ≤ m`.
fn circuits_for(d: &RepDegree) -> Vec<Circuit> {
    if d.m() < 2 {
        return Vec::new();
    }
    circuits_within(&d.support(), d.m() as usize + 1).collect()
}

pub fn relation_span(rank: GroupRank, d: &RepDegree) -> Result<RelationSpan> {
    relation_span_with(rank, d, &Caps::default())
}

pub fn relation_span_with(rank: GroupRank, d: &RepDegree, caps: &Caps) -> Result<RelationSpan> {
    d.check_rank(rank)?;
    caps.check(d)?;
    let basis = monomials_of_degree(d)?;
    let index = index_of(&basis);
    let mut matrix = BitMatrix::new(basis.len());
    let mut generators = Vec::new();
    for t in circuits_for(d) {
        let r = relation_polynomial(t.members())?;
        let rdeg = r.homogeneous_degree()?.expect("relation polynomials are nonzero");
        let Some(rest) = d.checked_sub(&rdeg) else { continue };
        for m in monomials_of_degree(&rest)? {
            let row = r.try_mul(&AtPolynomial::from(m.clone()))?;
            matrix.push_row(&coordinates(&row, &index, basis.len())?)?;
            generators.push((t.clone(), m));
        }
    }
    let rank_ = matrix.rank();
    Ok(RelationSpan { degree: d.clone(), basis_monomials: basis, relation_matrix: matrix, generators, rank: rank_ })
}

/// How a graded dimension was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "linear-algebra")]
    LinearAlgebra,
    #[serde(rename = "oracle")]
    Oracle,
}

/// Dimension of one graded piece with its bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedPieceReport {
    #[serde(skip)]
    pub degree: RepDegree,
    pub m: i64,
    #[serde(serialize_with = "serialize_rep")]
    pub rep: Vec<(Character, u32)>,
    pub monomials: u64,
    pub relation_rank: u64,
    pub dim: u64,
    pub method: Method,
}

impl GradedPieceReport {
    fn new(degree: &RepDegree, monomials: u64, relation_rank: u64, dim: u64, method: Method) -> Self {
        Self {
            degree: degree.clone(),
            m: degree.m(),
            rep: degree.rep().to_vec(),
            monomials,
            relation_rank,
            dim,
            method,
        }
    }
}

/// `dim = #monomials - rank(relation span)`.
pub fn dimension_linear(rank: GroupRank, d: &RepDegree, caps: &Caps) -> Result<GradedPieceReport> {
    let span = relation_span_with(rank, d, caps)?;
    let n = span.basis_monomials.len() as u64;
    Ok(GradedPieceReport::new(d, n, span.rank as u64, n - span.rank as u64, Method::LinearAlgebra))
}

/// The oracle's dimension, packaged in the same report shape.
pub fn dimension_oracle(oracle: &Oracle, rank: GroupRank, d: &RepDegree) -> Result<GradedPieceReport> {
    let dim = oracle.dimension(rank, d)?;
    let n = count_monomials(d) as u64;
    Ok(GradedPieceReport::new(d, n, n.saturating_sub(dim), dim, Method::Oracle))
}

/// A graded piece of the quotient with a reduced basis of its relations.
#[derive(Clone, Debug)]
pub struct QuotientPiece {
    pub degree: RepDegree,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    relations: Echelon,
}

impl QuotientPiece {
    pub fn new(rank: GroupRank, d: &RepDegree, caps: &Caps) -> Result<Self> {
        let span = relation_span_with(rank, d, caps)?;
        let index = index_of(&span.basis_monomials);
        Ok(Self {
            degree: d.clone(),
            relations: span.relation_matrix.reduced_row_echelon(),
            monomials: span.basis_monomials,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.monomials.len() - self.relations.rank()
    }

    pub fn coordinates(&self, f: &AtPolynomial) -> Result<BitVector> {
        coordinates(f, &self.index, self.monomials.len())
    }

    pub fn polynomial(&self, v: &BitVector) -> AtPolynomial {
        AtPolynomial::from_terms(v.iter_ones().map(|i| self.monomials[i].clone()))
    }

    /// Canonical representative: no term sits on a relation pivot.
    pub fn normal_form(&self, f: &AtPolynomial) -> Result<AtPolynomial> {
        Ok(self.polynomial(&self.relations.reduce(&self.coordinates(f)?)))
    }

    pub fn is_zero(&self, f: &AtPolynomial) -> Result<bool> {
        Ok(self.relations.reduce(&self.coordinates(f)?).is_zero())
    }
}

/// Whether a homogeneous polynomial lies in `I(A)`.
pub fn is_in_ideal(f: &AtPolynomial, rank: GroupRank, caps: &Caps) -> Result<bool> {
    let Some(d) = f.homogeneous_degree()? else { return Ok(true) };
    let span = relation_span_with(rank, &d, caps)?;
    let index = index_of(&span.basis_monomials);
    span.relation_matrix.in_span(&coordinates(f, &index, span.basis_monomials.len())?)
}

/// Normal form of a homogeneous polynomial modulo `I(A)`.
pub fn normal_form(f: &AtPolynomial, rank: GroupRank, caps: &Caps) -> Result<AtPolynomial> {
    let Some(d) = f.homogeneous_degree()? else { return Ok(AtPolynomial::zero()) };
    QuotientPiece::new(rank, &d, caps)?.normal_form(f)
}

/// Minimality evidence for one circuit.
#[derive(Clone, Debug, Serialize)]
pub struct MinimalityEntry {
    pub members: Vec<u32>,
    pub monomials: u64,
    pub oracle_dim: u64,
    /// `#monomials - oracle dimension`: the kernel of `ε_A` in this degree.
    pub kernel_dim: u64,
    pub span_rank: usize,
    pub spanned_by_own_relation: bool,
    /// Rank of the span of `r(T')·M` for `T' ≠ T`.
    pub rank_without: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalityReport {
    pub rank: u32,
    pub entries: Vec<MinimalityEntry>,
    pub all_pass: bool,
}

/// Default rank bound for [`verify_minimality`].
pub const MINIMALITY_RANK_CAP: u32 = 5;

/// For every circuit `T`: in the degree of `r(T)` the kernel of `ε_A` is
/// one-dimensional and spanned by `r(T)`, and the other generators alone
/// span strictly less.
pub fn verify_minimality(rank: GroupRank, oracle: &Oracle, caps: &Caps) -> Result<MinimalityReport> {
    if rank.get() > MINIMALITY_RANK_CAP {
        return Err(resource(format!("minimality verification is capped at rank {MINIMALITY_RANK_CAP}")));
    }
    let mut entries = Vec::new();
    for t in crate::circuits::enumerate_circuits(rank, None)? {
        let r = relation_polynomial(t.members())?;
        let d = r.homogeneous_degree()?.expect("nonzero");
        let span = relation_span_with(rank, &d, caps)?;
        let n = span.basis_monomials.len() as u64;
        let oracle_dim = oracle.dimension(rank, &d)?;
        let index = index_of(&span.basis_monomials);
        let own = coordinates(&r, &index, span.basis_monomials.len())?;
        let spanned = span.rank == 1 && span.relation_matrix.in_span(&own)?;
        let mut others = BitMatrix::new(span.basis_monomials.len());
        for (row, (t2, _)) in span.relation_matrix.rows().zip(&span.generators) {
            if t2 != &t {
                others.push_row(&row)?;
            }
        }
        let rank_without = others.rank();
        let kernel_dim = n - oracle_dim;
        let pass = kernel_dim == 1 && spanned && rank_without < span.rank;
        entries.push(MinimalityEntry {
            members: t.masks(),
            monomials: n,
            oracle_dim,
            kernel_dim,
            span_rank: span.rank,
            spanned_by_own_relation: spanned,
            rank_without,
            pass,
        });
    }
    let all_pass = entries.iter().all(|e| e.pass);
    Ok(MinimalityReport { rank: rank.get(), entries, all_pass })
}

/// Result of sampling products of nonzero cosets.
#[derive(Clone, Debug, Serialize)]
pub struct DomainReport {
    pub trials: usize,
    /// Pairs `(x, y)` with `x, y ≢ 0` but `x·y ≡ 0`; any entry is a defect.
    pub counterexamples: Vec<(String, String)>,
}

impl DomainReport {
    pub fn pass(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Uniformly random nonzero coset representative of a piece, or `None` if
/// the piece is zero.
pub fn random_nonzero_element(piece: &QuotientPiece, rng: &mut impl Rng) -> Option<AtPolynomial> {
    if piece.dim() == 0 {
        return None;
    }
    loop {
        let n = piece.monomials.len();
        let v = BitVector::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)));
        if !piece.relations.reduce(&v).is_zero() {
            return Some(piece.polynomial(&v));
        }
    }
}

/// Multiplies random nonzero classes of degrees `d1` and `d2` and checks the
/// product is nonzero in degree `d1 + d2`.
pub fn product_nonzero_check(
    rank: GroupRank,
    d1: &RepDegree,
    d2: &RepDegree,
    trials: usize,
    seed: u64,
    caps: &Caps,
) -> Result<DomainReport> {
    let p1 = QuotientPiece::new(rank, d1, caps)?;
    let p2 = QuotientPiece::new(rank, d2, caps)?;
    if p1.dim() == 0 || p2.dim() == 0 {
        return Err(invalid("cannot sample nonzero classes from a zero piece"));
    }
    let target = QuotientPiece::new(rank, &d1.add(d2), &caps.monomials_only())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counterexamples = Vec::new();
    for _ in 0..trials {
        let x = random_nonzero_element(&p1, &mut rng).expect("nonzero piece");
        let y = random_nonzero_element(&p2, &mut rng).expect("nonzero piece");
        if target.is_zero(&x.try_mul(&y)?)? {
            counterexamples.push((x.to_string(), y.to_string()));
        }
    }
    Ok(DomainReport { trials, counterexamples })
}

/// Restriction to an index-2 subgroup on one graded piece.
#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityReport {
    pub lambda: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub image_dim: usize,
    /// Relations restrict into relations, so the map is defined on quotients.
    pub well_defined: bool,
    pub surjective: bool,
}

/// Builds `res: H_m(A, W) → H_{m-k}(K, W_K)` for `K = B` of index 2 and
/// checks it is onto.
pub fn restriction_surjectivity_check(
    rank: GroupRank,
    b: &Subgroup,
    d: &RepDegree,
    caps: &Caps,
) -> Result<SurjectivityReport> {
    if b.rank() != rank {
        return Err(invalid("subgroup rank does not match"));
    }
    let lambda = b.annihilating_character()?;
    let krank = rank.kernel_rank().expect("an index-2 subgroup exists only for r ≥ 1");
    let source = QuotientPiece::new(rank, d, caps)?;
    let td = restrict_degree(d, lambda);
    let target = QuotientPiece::new(krank, &td, caps)?;
    let tn = target.monomials.len();

    let image_of = |f: &AtPolynomial| -> Result<BitVector> { target.coordinates(&restrict_to_kernel(f, lambda)?) };

    let mut well_defined = true;
    for row in source.relations.matrix().rows() {
        let image = image_of(&source.polynomial(&row))?;
        if !target.relations.reduce(&image).is_zero() {
            well_defined = false;
        }
    }

    let mut stacked = target.relations.matrix().clone();
    for m in &source.monomials {
        stacked.push_row(&image_of(&AtPolynomial::from(m.clone()))?)?;
    }
    let image_dim = if tn == 0 { 0 } else { stacked.rank() - target.relations.rank() };
    let target_dim = target.dim();
    Ok(SurjectivityReport {
        lambda: lambda.mask(),
        source_dim: source.dim(),
        target_dim,
        image_dim,
        well_defined,
        surjective: image_dim == target_dim,
    })
}

/// The three terms of `0 → H_m(A,V) → H_m(A,V⊕λ) → H_{m-k-1}(K,V_K) → 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessRow {
    pub m: i64,
    pub left: u64,
    pub middle: u64,
    pub right: u64,
}

impl ExactnessRow {
    pub fn holds(&self) -> bool {
        self.middle == self.left + self.right
    }
}

/// Evaluates the exact sequence for `(V, λ)` in integer degree `m`, all
/// three dimensions from [`dimension_linear`].
pub fn exactness_row(rank: GroupRank, v: &RepDegree, lambda: Character, m: i64, caps: &Caps) -> Result<ExactnessRow> {
    rank.check(lambda)?;
    let v = v.with_m(m);
    let w = v.add(&RepDegree::new(0, [(lambda, 1)]));
    let k = v.multiplicity(lambda);
    let krank = rank.kernel_rank().ok_or_else(|| invalid("rank 0 has no characters"))?;
    let vk = restrict_degree(&v, lambda).with_m(m - i64::from(k) - 1);
    Ok(ExactnessRow {
        m,
        left: dimension_linear(rank, &v, caps)?.dim,
        middle: dimension_linear(rank, &w, caps)?.dim,
        right: dimension_linear(krank, &vk, caps)?.dim,
    })
}

/// Both polynomial identities used to show larger circuits are redundant
/// after localization, for a circuit `T` and distinct `α, β ∈ T` with
/// `γ = α + β ∉ T`, `S = T ∖ {α, β}`:
///
/// `t_γ·r(T) = t_α t_β·r(S∪γ) + r(α,β,γ)·Π_S t`
///
/// `a_γ·r(T) = (a_α t_β + t_α a_β)·r(S∪γ) + r(α,β,γ)·r(S)`
pub fn redundancy_identities(t: &[Character], alpha: Character, beta: Character) -> Result<(bool, bool)> {
    if alpha == beta || !t.contains(&alpha) || !t.contains(&beta) {
        return Err(invalid("α and β must be distinct members of T"));
    }
    let gamma = alpha.product(beta).ok_or_else(|| invalid("α·β is trivial"))?;
    if t.contains(&gamma) {
        return Err(invalid("α·β must not belong to T"));
    }
    let s: Vec<Character> = t.iter().copied().filter(|&c| c != alpha && c != beta).collect();
    let mut s_gamma = s.clone();
    s_gamma.push(gamma);
    let r_t = relation_polynomial(t)?;
    let r_sg = relation_polynomial(&s_gamma)?;
    let r_abg = relation_polynomial(&[alpha, beta, gamma])?;
    let (a, tt) = (AtPolynomial::a, AtPolynomial::t);

    let lhs1 = tt(gamma).try_mul(&r_t)?;
    let rhs1 = tt(alpha).try_mul(&tt(beta))?.try_mul(&r_sg)?.add(&r_abg.try_mul(&AtPolynomial::t_product(&s)?)?);

    let lhs2 = a(gamma).try_mul(&r_t)?;
    let mixed = a(alpha).try_mul(&tt(beta))?.add(&tt(alpha).try_mul(&a(beta))?);
    let r_s = if s.is_empty() { AtPolynomial::zero() } else { relation_polynomial(&s)? };
    let rhs2 = mixed.try_mul(&r_sg)?.add(&r_abg.try_mul(&r_s)?);
    Ok((lhs1 == rhs1, lhs2 == rhs2))
}

/// Every degree `(m, W)` of the given rank with `|W| ≤ max_total` and
/// `0 ≤ m ≤ min(|W|, max_m)`, ordered by `|W|`, then `W`, then `m`.
pub fn degrees_up_to(rank: GroupRank, max_total: u32, max_m: i64) -> Vec<RepDegree> {
    let chars = crate::characters::all_characters(rank);
    let mut reps = Vec::new();
    fn rec(start: usize, left: u32, chars: &[Character], cur: &mut Vec<(Character, u32)>, out: &mut Vec<RepDegree>) {
        out.push(RepDegree::new(0, cur.iter().copied()));
        if left == 0 {
            return;
        }
        for i in start..chars.len() {
            for k in 1..=left {
                cur.push((chars[i], k));
                rec(i + 1, left - k, chars, cur, out);
                cur.pop();
            }
        }
    }
    rec(0, max_total, &chars, &mut Vec::new(), &mut reps);
    reps.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.rep().cmp(b.rep())));
    reps.into_iter().flat_map(|w| (0..=i64::from(w.dim()).min(max_m)).map(move |m| w.with_m(m))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::all_characters;

    fn rk(r: u32) -> GroupRank {
        GroupRank::new(r).unwrap()
    }

    fn deg(m: i64, spec: &str) -> RepDegree {
        RepDegree::parse_rep(m, spec).unwrap()
    }

    fn ch(m: u32) -> Character {
        Character::new(m).unwrap()
    }

    fn p(s: &str) -> AtPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn relation_span_examples() {
        let s = relation_span(rk(2), &deg(2, "1,2,3")).unwrap();
        assert_eq!((s.relation_matrix.nrows(), s.basis_monomials.len(), s.rank), (1, 3, 1));
        let s = relation_span(rk(2), &deg(1, "1,2,3")).unwrap();
        assert_eq!(s.relation_matrix.nrows(), 0);
        for m in 0..5 {
            assert_eq!(relation_span(rk(1), &deg(m, "1^4")).unwrap().rank, 0);
        }
    }

    #[test]
    fn dimension_examples() {
        let caps = Caps::default();
        for spec in ["", "1", "1^3,2", "1,2,3,3"] {
            let w = deg(0, spec);
            assert_eq!(dimension_linear(rk(2), &w, &caps).unwrap().dim, 1);
            assert_eq!(dimension_linear(rk(2), &w.with_m(w.dim() as i64), &caps).unwrap().dim, 1);
            assert_eq!(dimension_linear(rk(2), &w.with_m(w.dim() as i64 + 1), &caps).unwrap().dim, 0);
        }
        assert_eq!(dimension_linear(rk(2), &deg(2, "1,2,3"), &caps).unwrap().dim, 2);
        assert_eq!(dimension_linear(rk(2), &deg(1, "1,2,3"), &caps).unwrap().dim, 3);
    }

    #[test]
    fn report_json_shape() {
        let r = dimension_linear(rk(2), &deg(2, "1,2,3"), &Caps::default()).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"m":2,"rep":[[1,1],[2,1],[3,1]],"monomials":3,"relation_rank":1,"dim":2,"method":"linear-algebra"}"#
        );
    }

    #[test]
    fn caps_are_enforced() {
        let err = dimension_linear(rk(2), &deg(3, "1^11"), &Caps::default());
        assert!(matches!(err, Err(crate::Error::Resource(_))));
        let tight = Caps { max_rep_dim: 10, max_monomials: 2 };
        assert!(dimension_linear(rk(2), &deg(1, "1,2,3"), &tight).is_err());
    }

    #[test]
    fn ideal_membership_examples() {
        let caps = Caps::default();
        assert!(is_in_ideal(&relation_polynomial(&[ch(1), ch(2), ch(3)]).unwrap(), rk(2), &caps).unwrap());
        assert!(!is_in_ideal(&p("a[1]t[2]t[3]"), rk(2), &caps).unwrap());
        assert!(is_in_ideal(&AtPolynomial::zero(), rk(2), &caps).unwrap());
        assert!(is_in_ideal(&p("a[1]+t[2]"), rk(2), &caps).is_err());
        // Product-one sets that are not minimal still give relations.
        let s = [ch(1), ch(2), ch(3), ch(4), ch(5), ch(6), ch(7)];
        assert!(is_in_ideal(&relation_polynomial(&s).unwrap(), rk(3), &caps).unwrap());
        let s = [ch(1), ch(2), ch(4), ch(8), ch(3), ch(12)];
        assert!(is_in_ideal(&relation_polynomial(&s).unwrap(), rk(4), &caps).unwrap());
        // ... but a set with nontrivial product does not.
        assert!(!is_in_ideal(&relation_polynomial(&[ch(1), ch(2), ch(4)]).unwrap(), rk(3), &caps).unwrap());
    }

    #[test]
    fn normal_forms_are_canonical() {
        let caps = Caps::default();
        let f = p("a[1]t[2]t[3]");
        let g = f.add(&relation_polynomial(&[ch(1), ch(2), ch(3)]).unwrap());
        assert_eq!(normal_form(&f, rk(2), &caps).unwrap(), normal_form(&g, rk(2), &caps).unwrap());
        assert!(normal_form(&relation_polynomial(&[ch(1), ch(2), ch(3)]).unwrap(), rk(2), &caps).unwrap().is_zero());
    }

    #[test]
    fn minimality_small_ranks() {
        let o = Oracle::new();
        let caps = Caps::default();
        assert!(verify_minimality(rk(1), &o, &caps).unwrap().entries.is_empty());
        let r2 = verify_minimality(rk(2), &o, &caps).unwrap();
        assert_eq!(r2.entries.len(), 1);
        assert!(r2.all_pass);
    }

    #[test]
    fn domain_examples() {
        let caps = Caps::default();
        let x = AtPolynomial::a(ch(1));
        let y = p("a[1]t[2]t[3]+t[1]a[2]t[3]");
        let d = x.homogeneous_degree().unwrap().unwrap().add(&y.homogeneous_degree().unwrap().unwrap());
        let piece = QuotientPiece::new(rk(2), &d, &caps).unwrap();
        assert!(!piece.is_zero(&(&x * &y)).unwrap());
        let r = product_nonzero_check(rk(2), &deg(0, ""), &deg(1, "1,2,3"), 20, 1, &caps).unwrap();
        assert!(r.pass());
        assert!(product_nonzero_check(rk(2), &deg(4, "1,2,3"), &deg(0, ""), 1, 1, &caps).is_err());
    }

    #[test]
    fn surjectivity_examples() {
        let caps = Caps::default();
        let b = Subgroup::kernel_of(rk(2), ch(3)).unwrap();
        let r = restriction_surjectivity_check(rk(2), &b, &deg(1, "1,2,3"), &caps).unwrap();
        assert_eq!((r.source_dim, r.target_dim), (3, 1));
        assert!(r.surjective && r.well_defined);
        let r = restriction_surjectivity_check(rk(2), &b, &deg(0, "1,2,3"), &caps).unwrap();
        assert_eq!(r.target_dim, 0);
        assert!(r.surjective);
        let b = Subgroup::kernel_of(rk(3), ch(1)).unwrap();
        let r = restriction_surjectivity_check(rk(3), &b, &deg(2, "1,2,4"), &caps).unwrap();
        assert!(r.surjective && r.well_defined);
        assert!(restriction_surjectivity_check(rk(3), &Subgroup::trivial(rk(3)), &deg(0, ""), &caps).is_err());
    }

    #[test]
    fn exactness_small() {
        let caps = Caps::default();
        for lambda in all_characters(rk(2)) {
            for m in 0..4 {
                assert!(exactness_row(rk(2), &deg(0, "1,2,3"), lambda, m, &caps).unwrap().holds());
            }
        }
    }

    #[test]
    fn identities_for_rank_3_quadruples() {
        for t in crate::circuits::enumerate_circuits(rk(3), None).unwrap().filter(|c| c.size() == 4) {
            for &a in t.members() {
                for &b in t.members() {
                    if a < b {
                        assert_eq!(redundancy_identities(t.members(), a, b).unwrap(), (true, true));
                    }
                }
            }
        }
        assert!(redundancy_identities(&[ch(1), ch(2), ch(3)], ch(1), ch(2)).is_err());
    }

    #[test]
    fn degree_enumeration() {
        // Multisets of size ≤ 2 over one character: 0, 1, 2 copies.
        let ds = degrees_up_to(rk(1), 2, 10);
        let shown: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
        assert_eq!(shown, vec!["(0, [])", "(0, [1])", "(1, [1])", "(0, [1^2])", "(1, [1^2])", "(2, [1^2])"]);
        // Rank 2, |W| ≤ 2: 1 + 3 + 6 multisets.
        let ws: std::collections::BTreeSet<_> = degrees_up_to(rk(2), 2, 0).into_iter().collect();
        assert_eq!(ws.len(), 10);
    }
}
