//! The localized rings `H(A|B)`: `a_λ` is inverted for characters
//! nontrivial on `B`, `t_λ` for characters trivial on `B`.
//!
//! Generators are `x_λ = t_λ/a_λ` (degree +1) and `e_λ = a_λ/t_λ` (degree
//! -1), and each triple `α + β + γ = 0` contributes one relation whose shape
//! depends on how many of its members are trivial on `B`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::characters::{all_characters, restricts_trivially, Character, GroupRank, Subgroup};
use crate::circuits::{enumerate_circuits, Circuit};
use crate::error::{invalid, resource, Error, Result};
use crate::gf2::SparseEchelon;
use crate::presentation::{dimension_linear, is_in_ideal, redundancy_identities, Caps};
use crate::ring::{AtPolynomial, Monomial, RepDegree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocalVar {
    X(Character),
    E(Character),
}

impl LocalVar {
    pub fn character(self) -> Character {
        match self {
            LocalVar::X(c) | LocalVar::E(c) => c,
        }
    }

    fn degree(self) -> i64 {
        match self {
            LocalVar::X(_) => 1,
            LocalVar::E(_) => -1,
        }
    }
}

impl fmt::Display for LocalVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalVar::X(c) => write!(f, "x[{c}]"),
            LocalVar::E(c) => write!(f, "e[{c}]"),
        }
    }
}

/// Monomial in the `x` and `e` variables; exponents are positive. Ordered by
/// number of factors first, so polynomials print short terms first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LocalMonomial(BTreeMap<LocalVar, u32>);

impl Ord for LocalMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.factors().cmp(&other.factors()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for LocalMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl LocalMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: LocalVar) -> Self {
        Self(BTreeMap::from([(v, 1)]))
    }

    pub fn product(vars: &[LocalVar]) -> Self {
        let mut m = Self::one();
        for &v in vars {
            *m.0.entry(v).or_default() += 1;
        }
        m
    }

    pub fn exponents(&self) -> impl Iterator<Item = (LocalVar, u32)> + '_ {
        self.0.iter().map(|(&v, &k)| (v, k))
    }

    fn factors(&self) -> u32 {
        self.0.values().sum()
    }

    /// `#x factors - #e factors`.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(v, &k)| v.degree() * i64::from(k)).sum()
    }
}

impl fmt::Display for LocalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (v, &k) in &self.0 {
            write!(f, "{v}")?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

/// GF(2) polynomial in the localized generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalPolynomial(BTreeSet<LocalMonomial>);

impl LocalPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = LocalMonomial>) -> Self {
        let mut p = Self::zero();
        for m in terms {
            if !p.0.remove(&m) {
                p.0.insert(m);
            }
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = &LocalMonomial> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The common integer degree of all terms; `None` for zero.
    pub fn homogeneous_degree(&self) -> Result<Option<i64>> {
        let mut degrees = self.0.iter().map(LocalMonomial::degree);
        let Some(d) = degrees.next() else { return Ok(None) };
        if degrees.all(|e| e == d) {
            Ok(Some(d))
        } else {
            Err(invalid(format!("{self} is not homogeneous")))
        }
    }
}

impl fmt::Display for LocalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl Serialize for LocalPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Relation shape, named by the generator types of the triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Xxx,
    Xxe,
    Eee,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Xxx => "xxx",
            Family::Xxe => "xxe",
            Family::Eee => "eee",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalRelation {
    pub family: Family,
    /// Ascending, except for `xxe` where the `e`-character comes last.
    pub triple: [Character; 3],
    #[serde(skip)]
    pub polynomial: LocalPolynomial,
}

#[derive(Clone, Debug)]
pub struct LocalPresentation {
    pub rank: GroupRank,
    pub b: Subgroup,
    pub x_gens: Vec<Character>,
    pub e_gens: Vec<Character>,
    pub relations: Vec<LocalRelation>,
}

impl Serialize for LocalPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dump<'a> {
            rank: u32,
            #[serde(rename = "B")]
            b: &'a [u32],
            x: &'a [Character],
            e: &'a [Character],
            relations: &'a [LocalRelation],
        }
        Dump {
            rank: self.rank.get(),
            b: self.b.generators(),
            x: &self.x_gens,
            e: &self.e_gens,
            relations: &self.relations,
        }
        .serialize(s)
    }
}

/// Unordered triples `{α, β, γ}` of distinct characters with `α + β + γ = 0`,
/// as ascending arrays.
pub fn character_triples(rank: GroupRank) -> Vec<[Character; 3]> {
    let chars = all_characters(rank);
    let mut out = Vec::new();
    for (i, &a) in chars.iter().enumerate() {
        for &b in &chars[i + 1..] {
            let g = Character::new(a.mask() ^ b.mask()).expect("distinct characters");
            if g > b {
                out.push([a, b, g]);
            }
        }
    }
    out
}

/// `(2^r - 1)(2^r - 2) / 6`.
pub fn expected_relation_count(rank: GroupRank) -> u64 {
    let n = (1u64 << rank.get()) - 1;
    n * n.saturating_sub(1) / 6
}

fn local_relation(triple: [Character; 3], b: &Subgroup) -> LocalRelation {
    use LocalVar::{E, X};
    let trivial: Vec<Character> = triple.iter().copied().filter(|&c| restricts_trivially(c, b)).collect();
    let m = LocalMonomial::product;
    match trivial.len() {
        0 => {
            let [a, bb, g] = triple;
            LocalRelation {
                family: Family::Xxx,
                triple,
                polynomial: LocalPolynomial::from_terms([m(&[X(a), X(bb)]), m(&[X(a), X(g)]), m(&[X(bb), X(g)])]),
            }
        }
        1 => {
            let g = trivial[0];
            let mut xs = triple.iter().copied().filter(|&c| c != g);
            let (a, bb) = (xs.next().unwrap(), xs.next().unwrap());
            LocalRelation {
                family: Family::Xxe,
                triple: [a, bb, g],
                polynomial: LocalPolynomial::from_terms([m(&[X(a)]), m(&[X(bb)]), m(&[X(a), X(bb), E(g)])]),
            }
        }
        3 => {
            let [a, bb, g] = triple;
            LocalRelation {
                family: Family::Eee,
                triple,
                polynomial: LocalPolynomial::from_terms([m(&[E(a)]), m(&[E(bb)]), m(&[E(g)])]),
            }
        }
        _ => unreachable!("two members trivial on B force the third to be trivial"),
    }
}

/// Generators and relations of `H(A|B)`.
pub fn build_local_presentation(rank: GroupRank, b: &Subgroup) -> Result<LocalPresentation> {
    if b.rank() != rank {
        return Err(invalid("subgroup rank does not match"));
    }
    if rank.get() > crate::characters::ENUMERATION_RANK_CAP {
        return Err(resource("rank exceeds the enumeration cap"));
    }
    let (e_gens, x_gens): (Vec<Character>, Vec<Character>) =
        all_characters(rank).into_iter().partition(|&c| restricts_trivially(c, b));
    let relations = character_triples(rank).into_iter().map(|t| local_relation(t, b)).collect();
    Ok(LocalPresentation { rank, b: b.clone(), x_gens, e_gens, relations })
}

/// Multiplies `p` by the smallest `Π a_λ^{X_λ} t_λ^{E_λ}` that turns every
/// term into an honest `a/t` monomial, with `x_λ ↦ t_λ/a_λ` and
/// `e_λ ↦ a_λ/t_λ`. Returns the product and its bidegree.
pub fn clear_denominators(p: &LocalPolynomial) -> Result<(AtPolynomial, RepDegree)> {
    let Some(_) = p.homogeneous_degree()? else {
        return Ok((AtPolynomial::zero(), RepDegree::default()));
    };
    // Largest x- and e-exponent of each character across the terms.
    let mut bound: BTreeMap<Character, (u32, u32)> = BTreeMap::new();
    for m in p.terms() {
        for (v, k) in m.exponents() {
            let e = bound.entry(v.character()).or_default();
            match v {
                LocalVar::X(_) => e.0 = e.0.max(k),
                LocalVar::E(_) => e.1 = e.1.max(k),
            }
        }
    }
    let mut out = AtPolynomial::zero();
    for m in p.terms() {
        let mut exps: HashMap<Character, (u32, u32)> = HashMap::new();
        for (v, k) in m.exponents() {
            let e = exps.entry(v.character()).or_default();
            match v {
                LocalVar::X(_) => e.0 += k,
                LocalVar::E(_) => e.1 += k,
            }
        }
        let factors = bound.iter().map(|(&c, &(xmax, emax))| {
            let (i, j) = exps.get(&c).copied().unwrap_or_default();
            (c, xmax - i + j, emax - j + i)
        });
        out.add_monomial(Monomial::from_exponents(factors)?);
    }
    let d = out.homogeneous_degree()?.expect("clearing keeps distinct terms distinct");
    Ok((out, d))
}

/// Validity report for one localized presentation.
#[derive(Clone, Debug, Serialize)]
pub struct LocalRelationReport {
    #[serde(rename = "B")]
    pub b: Vec<u32>,
    pub relations: usize,
    pub expected_relations: u64,
    pub family_mismatches: Vec<[u32; 3]>,
    /// Relations whose cleared form lies outside `I(A)`.
    pub not_in_ideal: Vec<[u32; 3]>,
    pub identities_checked: usize,
    pub identity_failures: Vec<IdentityFailure>,
}

impl LocalRelationReport {
    pub fn pass(&self) -> bool {
        self.relations as u64 == self.expected_relations
            && self.family_mismatches.is_empty()
            && self.not_in_ideal.is_empty()
            && self.identity_failures.is_empty()
    }
}

/// Circuit masks and the pair `(α, β)` for which an identity failed.
pub type IdentityFailure = (Vec<u32>, u32, u32);

/// Both redundancy identities for every circuit of size at least 4 and every
/// ordered-free choice `α < β` in it. Returns `(checked, failures)`.
pub fn check_redundancy_identities(rank: GroupRank) -> Result<(usize, Vec<IdentityFailure>)> {
    let circuits: Vec<Circuit> = enumerate_circuits(rank, None)?.filter(|c| c.size() >= 4).collect();
    let mut checked = 0;
    let mut failures = Vec::new();
    for t in &circuits {
        let members = t.members();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                checked += 1;
                let (first, second) = redundancy_identities(members, a, b)?;
                if !(first && second) {
                    failures.push((t.masks(), a.mask(), b.mask()));
                }
            }
        }
    }
    Ok((checked, failures))
}

/// Checks the relation count, the family tags, that every relation clears
/// into `I(A)`, and (optionally) the identities that make larger circuits
/// redundant after localization.
pub fn verify_local_relations(
    rank: GroupRank,
    b: &Subgroup,
    with_identities: bool,
    caps: &Caps,
) -> Result<LocalRelationReport> {
    let pres = build_local_presentation(rank, b)?;
    let masks = |t: &[Character; 3]| t.map(|c| c.mask());
    let mut family_mismatches = Vec::new();
    let mut not_in_ideal = Vec::new();
    for rel in &pres.relations {
        let trivial = rel.triple.iter().filter(|&&c| restricts_trivially(c, b)).count();
        let expected = match trivial {
            0 => Some(Family::Xxx),
            1 => Some(Family::Xxe),
            3 => Some(Family::Eee),
            _ => None,
        };
        let sum = rel.triple.iter().fold(0, |acc, c| acc ^ c.mask());
        if expected != Some(rel.family) || sum != 0 {
            family_mismatches.push(masks(&rel.triple));
        }
        let (cleared, _) = clear_denominators(&rel.polynomial)?;
        if !is_in_ideal(&cleared, rank, caps)? {
            not_in_ideal.push(masks(&rel.triple));
        }
    }
    let (identities_checked, identity_failures) =
        if with_identities { check_redundancy_identities(rank)? } else { (0, Vec::new()) };
    Ok(LocalRelationReport {
        b: b.generators().to_vec(),
        relations: pres.relations.len(),
        expected_relations: expected_relation_count(rank),
        family_mismatches,
        not_in_ideal,
        identities_checked,
        identity_failures,
    })
}

/// Dimension of the degree-`d` piece of `F₂[v_0, ..., v_{n-1}] / (g_1, ...)`
/// for generators homogeneous of a common degree, by linear algebra over the
/// degree-`d` monomials.
///
/// Generators are given as lists of exponent vectors.
pub fn quotient_dimension(nvars: usize, generators: &[Vec<Vec<u32>>], d: u32, max_monomials: u128) -> Result<u64> {
    if nvars == 0 {
        return Ok(u64::from(d == 0));
    }
    let total = binomial(u64::from(d) + nvars as u64 - 1, nvars as u64 - 1);
    if total > max_monomials {
        return Err(resource(format!("{total} monomials exceed the cap of {max_monomials}")));
    }
    let mut g_degree = None;
    for g in generators {
        for e in g {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: e.len() });
            }
            let deg: u32 = e.iter().sum();
            if *g_degree.get_or_insert(deg) != deg {
                return Err(invalid("generators must share one degree"));
            }
        }
    }
    let basis = monomials_in(nvars, d);
    let Some(g) = g_degree.filter(|&g| g <= d) else { return Ok(basis.len() as u64) };

    // Reduce the generators first so every row below has a distinct-leading
    // factor and stays short.
    let low = monomials_in(nvars, g);
    let low_index: HashMap<&[u32], u32> = low.iter().enumerate().map(|(i, m)| (m.as_slice(), i as u32)).collect();
    let mut gens = SparseEchelon::new();
    for gen in generators {
        let mut row: Vec<u32> = Vec::new();
        for e in gen {
            row.push(low_index[e.as_slice()]);
        }
        row.sort_unstable();
        let mut dedup: Vec<u32> = Vec::new();
        for c in row {
            if dedup.last() == Some(&c) {
                dedup.pop();
            } else {
                dedup.push(c);
            }
        }
        gens.insert(dedup);
    }
    let reduced = gens.reduced_rows();

    let index: HashMap<&[u32], u32> = basis.iter().enumerate().map(|(i, m)| (m.as_slice(), i as u32)).collect();
    let mut rows = Vec::new();
    let mut buf = vec![0u32; nvars];
    for cofactor in monomials_in(nvars, d - g) {
        for gen in &reduced {
            let mut row: Vec<u32> = gen
                .iter()
                .map(|&c| {
                    for (k, slot) in buf.iter_mut().enumerate() {
                        *slot = low[c as usize][k] + cofactor[k];
                    }
                    index[buf.as_slice()]
                })
                .collect();
            row.sort_unstable();
            rows.push(row);
        }
    }
    // One row per leading monomial goes in first. Those rows are short and
    // never need reducing, so later rows reduce against short pivots instead
    // of against accumulated remainders.
    let mut span = SparseEchelon::new();
    let mut rest = Vec::new();
    for row in rows {
        if span.contains_pivot(row[0]) {
            rest.push(row);
        } else {
            span.insert(row);
        }
    }
    for row in rest {
        span.insert(row);
    }
    Ok(basis.len() as u64 - span.rank() as u64)
}

/// Exponent vectors of total degree `d` in `n` variables, lexicographically
/// descending (`v_0^d` first).
fn monomials_in(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(0, d, &mut vec![0; n], &mut out);
    }
    out
}

/// `C(n, k)` as `u128`, exact for the sizes used here.
pub fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

fn exponent_vector(n: usize, vars: &[usize]) -> Vec<u32> {
    let mut e = vec![0; n];
    for &v in vars {
        e[v] += 1;
    }
    e
}

/// Degree-`d` piece of the quadric ring `F₂[x_λ : λ ∈ A°] / (xxx relations)`,
/// the localization at `B = A`.
pub fn gfp_dimension(rank: GroupRank, d: u32, max_monomials: u128) -> Result<u64> {
    let n = rank.num_characters();
    let pos = |c: Character| c.mask() as usize - 1;
    let quadrics: Vec<Vec<Vec<u32>>> = character_triples(rank)
        .into_iter()
        .map(|[a, b, g]| {
            vec![
                exponent_vector(n, &[pos(a), pos(b)]),
                exponent_vector(n, &[pos(a), pos(g)]),
                exponent_vector(n, &[pos(b), pos(g)]),
            ]
        })
        .collect();
    quotient_dimension(n, &quadrics, d, max_monomials)
}

/// Degree `-d` piece of `F₂[e_λ : λ ∈ A°] / (eee relations)`, the
/// localization at `B = 1`. Fails with a mismatch error unless it equals
/// `C(d + r - 1, r - 1)`.
pub fn trivial_b_dimension(rank: GroupRank, d: u32, max_monomials: u128) -> Result<u64> {
    let n = rank.num_characters();
    let pos = |c: Character| c.mask() as usize - 1;
    let linear: Vec<Vec<Vec<u32>>> = character_triples(rank)
        .into_iter()
        .map(|t| t.iter().map(|&c| exponent_vector(n, &[pos(c)])).collect())
        .collect();
    let dim = quotient_dimension(n, &linear, d, max_monomials)?;
    let r = u64::from(rank.get());
    let expected = if r == 0 { u128::from(d == 0) } else { binomial(u64::from(d) + r - 1, r - 1) };
    if u128::from(dim) != expected {
        return Err(Error::Mismatch(format!("degree -{d} at rank {r}: found {dim}, expected {expected}")));
    }
    Ok(dim)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stabilization {
    /// `dim(m, Nρ) = dim(m, (N+1)ρ) = gfp`.
    Stable,
    /// The two multigraded dimensions differ, so `N` is too small to tell.
    Inconclusive,
    /// Stable multigraded dimension differs from the quadric ring.
    Mismatch,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizationReport {
    pub rank: u32,
    pub m: i64,
    pub n: u32,
    pub dim_n: u64,
    pub dim_n_plus_1: u64,
    pub gfp: u64,
    pub status: Stabilization,
}

/// Default multiple of `ρ` for [`gfp_stabilization_check`].
pub fn default_stabilization_n(m: i64) -> u32 {
    (m.max(0) + 1) as u32
}

/// Compares `dim H_m(A, Nρ)` and `dim H_m(A, (N+1)ρ)` against the quadric
/// ring in degree `m`, with `ρ` the sum of all nontrivial characters.
///
/// `|Nρ|` grows like `N·2^r`, so only the monomial cap is enforced here.
pub fn gfp_stabilization_check(rank: GroupRank, m: i64, n: u32, caps: &Caps) -> Result<StabilizationReport> {
    if m < 0 {
        return Err(invalid("integer degree must be nonnegative"));
    }
    let caps = caps.monomials_only();
    let rho = |k: u32| RepDegree::new(m, all_characters(rank).into_iter().map(|c| (c, k)));
    let dim_n = dimension_linear(rank, &rho(n), &caps)?.dim;
    let dim_n_plus_1 = dimension_linear(rank, &rho(n + 1), &caps)?.dim;
    let gfp = gfp_dimension(rank, m as u32, caps.max_monomials)?;
    let status = if dim_n != dim_n_plus_1 {
        Stabilization::Inconclusive
    } else if dim_n == gfp {
        Stabilization::Stable
    } else {
        Stabilization::Mismatch
    };
    Ok(StabilizationReport { rank: rank.get(), m, n, dim_n, dim_n_plus_1, gfp, status })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rk(r: u32) -> GroupRank {
        GroupRank::new(r).unwrap()
    }

    fn ch(m: u32) -> Character {
        Character::new(m).unwrap()
    }

    const CAP: u128 = 200_000;

    #[test]
    fn rank_two_presentations() {
        let whole = build_local_presentation(rk(2), &Subgroup::whole(rk(2))).unwrap();
        assert!(whole.e_gens.is_empty());
        assert_eq!(whole.relations.len(), 1);
        assert_eq!(whole.relations[0].family, Family::Xxx);
        assert_eq!(whole.relations[0].polynomial.to_string(), "x[1]x[2]+x[1]x[3]+x[2]x[3]");

        let b = Subgroup::new(rk(2), &[1]).unwrap();
        let mixed = build_local_presentation(rk(2), &b).unwrap();
        assert_eq!(
            serde_json::to_string(&mixed).unwrap(),
            r#"{"rank":2,"B":[1],"x":[1,3],"e":[2],"relations":[{"family":"xxe","triple":[1,3,2]}]}"#
        );
        assert_eq!(mixed.relations[0].polynomial.to_string(), "x[1]+x[3]+x[1]x[3]e[2]");

        let trivial = build_local_presentation(rk(2), &Subgroup::trivial(rk(2))).unwrap();
        assert!(trivial.x_gens.is_empty());
        assert_eq!(trivial.relations[0].polynomial.to_string(), "e[1]+e[2]+e[3]");
    }

    #[test]
    fn relation_counts_for_every_subgroup() {
        for r in 1..=4 {
            for b in Subgroup::all(rk(r)).unwrap() {
                let p = build_local_presentation(rk(r), &b).unwrap();
                assert_eq!(p.relations.len() as u64, expected_relation_count(rk(r)));
                for rel in &p.relations {
                    let d = rel.polynomial.homogeneous_degree().unwrap().unwrap();
                    let want = match rel.family {
                        Family::Xxx => 2,
                        Family::Xxe => 1,
                        Family::Eee => -1,
                    };
                    assert_eq!(d, want);
                }
            }
        }
        assert_eq!(expected_relation_count(rk(3)), 7);
    }

    #[test]
    fn clearing_examples() {
        let whole = build_local_presentation(rk(2), &Subgroup::whole(rk(2))).unwrap();
        let (f, d) = clear_denominators(&whole.relations[0].polynomial).unwrap();
        assert_eq!(f, crate::ring::relation_polynomial(&[ch(1), ch(2), ch(3)]).unwrap());
        assert_eq!(d, RepDegree::parse_rep(2, "1,2,3").unwrap());

        let (f, d) =
            clear_denominators(&LocalPolynomial::from_terms([LocalMonomial::var(LocalVar::X(ch(5)))])).unwrap();
        assert_eq!(f.to_string(), "t[5]");
        assert_eq!(d, RepDegree::parse_rep(1, "5").unwrap());

        let b = Subgroup::new(rk(2), &[1]).unwrap();
        let mixed = build_local_presentation(rk(2), &b).unwrap();
        let (f, _) = clear_denominators(&mixed.relations[0].polynomial).unwrap();
        assert_eq!(f, crate::ring::relation_polynomial(&[ch(1), ch(2), ch(3)]).unwrap());

        let x = |c| LocalMonomial::var(LocalVar::X(ch(c)));
        let e = |c| LocalMonomial::var(LocalVar::E(ch(c)));
        assert!(clear_denominators(&LocalPolynomial::from_terms([x(1), e(2)])).is_err());
    }

    #[test]
    fn local_relations_verify_rank_3() {
        let caps = Caps::default();
        for b in Subgroup::all(rk(3)).unwrap() {
            let r = verify_local_relations(rk(3), &b, false, &caps).unwrap();
            assert!(r.pass(), "{r:?}");
        }
        let (checked, failures) = check_redundancy_identities(rk(3)).unwrap();
        assert_eq!(checked, 7 * 6);
        assert!(failures.is_empty());
    }

    #[test]
    fn gfp_examples() {
        for r in 1..=3 {
            assert_eq!(gfp_dimension(rk(r), 0, CAP).unwrap(), 1);
            assert_eq!(gfp_dimension(rk(r), 1, CAP).unwrap(), (1 << r) - 1);
        }
        assert_eq!(gfp_dimension(rk(2), 2, CAP).unwrap(), 5);
        for d in 0..6 {
            assert_eq!(gfp_dimension(rk(1), d, CAP).unwrap(), 1);
        }
    }

    /// Coefficients of `Π_{i<r} (1 + 2^i·s)` evaluated at `s = u/(1-u)`, i.e.
    /// the Hilbert function of the reciprocal plane of all hyperplanes of
    /// `F₂^r`, up to degree `max`.
    fn reciprocal_plane_hilbert(r: u32, max: usize) -> Vec<u64> {
        let mut poly = vec![1u64];
        for i in 0..r {
            let mut next = vec![0u64; poly.len() + 1];
            for (k, &c) in poly.iter().enumerate() {
                next[k] += c;
                next[k + 1] += c << i;
            }
            poly = next;
        }
        // s^k = u^k (1-u)^{-k} contributes C(d-1, k-1) to degree d ≥ k.
        (0..=max)
            .map(|d| {
                poly.iter()
                    .enumerate()
                    .map(|(k, &c)| {
                        if k == 0 {
                            u64::from(d == 0) * c
                        } else if d >= k {
                            c * binomial(d as u64 - 1, k as u64 - 1) as u64
                        } else {
                            0
                        }
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn gfp_matches_reciprocal_plane_hilbert_function() {
        assert_eq!(reciprocal_plane_hilbert(3, 4), vec![1, 7, 21, 43, 73]);
        for r in 1..=4 {
            let want = reciprocal_plane_hilbert(r, 4);
            for (d, &w) in want.iter().enumerate() {
                assert_eq!(gfp_dimension(rk(r), d as u32, CAP).unwrap(), w, "r={r} d={d}");
            }
        }
    }

    #[test]
    fn stabilization_examples() {
        let caps = Caps::default();
        let r = gfp_stabilization_check(rk(2), 1, 2, &caps).unwrap();
        assert_eq!((r.dim_n, r.gfp, r.status), (3, 3, Stabilization::Stable));
        let r = gfp_stabilization_check(rk(2), 0, 1, &caps).unwrap();
        assert_eq!((r.dim_n, r.gfp), (1, 1));
        let r = gfp_stabilization_check(rk(2), 2, 3, &caps).unwrap();
        assert_eq!((r.dim_n, r.gfp, r.status), (5, 5, Stabilization::Stable));
        // Too few copies of ρ to reach the stable range.
        let r = gfp_stabilization_check(rk(2), 3, 1, &caps).unwrap();
        assert_eq!((r.dim_n, r.status), (1, Stabilization::Inconclusive));
    }

    #[test]
    fn trivial_b_examples() {
        assert_eq!(trivial_b_dimension(rk(2), 2, CAP).unwrap(), 3);
        assert_eq!(trivial_b_dimension(rk(3), 1, CAP).unwrap(), 3);
        for r in 1..=3 {
            assert_eq!(trivial_b_dimension(rk(r), 0, CAP).unwrap(), 1);
        }
    }

    #[test]
    fn quotient_dimension_basics() {
        // F₂[x, y] / (x² + y²) in degree 3: four monomials, two relations.
        let g = vec![vec![vec![2, 0], vec![0, 2]]];
        assert_eq!(quotient_dimension(2, &g, 3, CAP).unwrap(), 2);
        assert_eq!(quotient_dimension(2, &g, 1, CAP).unwrap(), 2);
        assert!(quotient_dimension(2, &[vec![vec![1, 0], vec![0, 2]]], 3, CAP).is_err());
        assert!(quotient_dimension(3, &g, 3, CAP).is_err());
        assert_eq!(monomials_in(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(binomial(20, 6), 38760);
    }
}
