//! The bigraded polynomial ring `F₂[a_μ, t_μ : μ ∈ A°]`.
//!
//! A monomial `Π a_λ^{α_λ} t_λ^{τ_λ}` has integer degree `Σ τ_λ` and
//! representation degree `Σ (α_λ + τ_λ)·λ`. The ring carries the formal
//! Bockstein derivation (`β(a_λ) = 0`, `β(t_λ) = a_λ`) and, for each nontrivial
//! `λ`, the restriction to the ring of `K = ker λ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::characters::{kernel_quotient, Character, GroupRank};
use crate::error::{invalid, resource, Error, Result};

/// Per-variable exponent cap.
pub const MAX_EXPONENT: u32 = u8::MAX as u32;

/// A bidegree `(m, W)`: integer degree and a multiset of characters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RepDegree {
    m: i64,
    rep: Vec<(Character, u32)>,
}

impl RepDegree {
    /// Builds a degree from `(character, multiplicity)` pairs; repeated
    /// characters accumulate and zero multiplicities are dropped.
    pub fn new(m: i64, rep: impl IntoIterator<Item = (Character, u32)>) -> Self {
        let mut map: BTreeMap<Character, u32> = BTreeMap::new();
        for (c, k) in rep {
            *map.entry(c).or_default() += k;
        }
        Self { m, rep: map.into_iter().filter(|&(_, k)| k > 0).collect() }
    }

    /// One copy of each listed character.
    pub fn from_characters(m: i64, chars: &[Character]) -> Self {
        Self::new(m, chars.iter().map(|&c| (c, 1)))
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn with_m(&self, m: i64) -> Self {
        Self { m, rep: self.rep.clone() }
    }

    /// `(character, multiplicity)` pairs ascending by mask.
    pub fn rep(&self) -> &[(Character, u32)] {
        &self.rep
    }

    pub fn support(&self) -> Vec<Character> {
        self.rep.iter().map(|&(c, _)| c).collect()
    }

    pub fn multiplicity(&self, c: Character) -> u32 {
        self.rep.iter().find(|&&(d, _)| d == c).map_or(0, |&(_, k)| k)
    }

    /// Total dimension `|W|`.
    pub fn dim(&self) -> u32 {
        self.rep.iter().map(|&(_, k)| k).sum()
    }

    pub fn add(&self, other: &RepDegree) -> RepDegree {
        RepDegree::new(self.m + other.m, self.rep.iter().chain(other.rep.iter()).copied())
    }

    /// Componentwise difference in the representation part, if `other.W ≤ self.W`.
    pub fn checked_sub(&self, other: &RepDegree) -> Option<RepDegree> {
        let mut map: BTreeMap<Character, u32> = self.rep.iter().copied().collect();
        for &(c, k) in &other.rep {
            let e = map.get_mut(&c)?;
            *e = e.checked_sub(k)?;
        }
        Some(RepDegree::new(self.m - other.m, map))
    }

    /// Whether every character of `W` lies in the given rank.
    pub fn check_rank(&self, rank: GroupRank) -> Result<()> {
        for &(c, _) in &self.rep {
            rank.check(c)?;
        }
        Ok(())
    }

    /// Parses the comma list grammar `item (',' item)*`, `item := mask ('^' mult)?`.
    /// The empty string is the zero representation.
    pub fn parse_rep(m: i64, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(Self::new(m, []));
        }
        let mut items = Vec::new();
        for item in spec.split(',') {
            let item = item.trim();
            let (mask, mult) = match item.split_once('^') {
                Some((a, b)) => (a, b),
                None => (item, "1"),
            };
            let mask: u32 = mask.trim().parse().map_err(|_| Error::Parse(format!("bad character mask {mask:?}")))?;
            let mult: u32 = mult.trim().parse().map_err(|_| Error::Parse(format!("bad multiplicity {mult:?}")))?;
            let c = Character::new(mask).map_err(|_| Error::Parse("character mask must be nonzero".into()))?;
            items.push((c, mult));
        }
        Ok(Self::new(m, items))
    }

    /// Rendering in the `mask^mult` comma grammar.
    pub fn rep_string(&self) -> String {
        self.rep
            .iter()
            .map(|&(c, k)| if k == 1 { c.to_string() } else { format!("{c}^{k}") })
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Debug for RepDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, [{}])", self.m, self.rep_string())
    }
}

impl fmt::Display for RepDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Serializes the representation part as `[[mask, multiplicity], ...]`.
pub fn serialize_rep<S: Serializer>(rep: &[(Character, u32)], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(rep.len()))?;
    for &(c, k) in rep {
        seq.serialize_element(&[c.mask(), k])?;
    }
    seq.end()
}

/// A monomial `Π a_λ^{α} t_λ^{τ}`, stored sparsely by character.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    exps: Vec<(u32, u8, u8)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn a(c: Character) -> Self {
        Self { exps: vec![(c.mask(), 1, 0)] }
    }

    pub fn t(c: Character) -> Self {
        Self { exps: vec![(c.mask(), 0, 1)] }
    }

    /// Builds a monomial from `(character, a-exponent, t-exponent)` triples.
    pub fn from_exponents(exps: impl IntoIterator<Item = (Character, u32, u32)>) -> Result<Self> {
        let mut map: BTreeMap<u32, (u32, u32)> = BTreeMap::new();
        for (c, a, t) in exps {
            let e = map.entry(c.mask()).or_default();
            e.0 += a;
            e.1 += t;
        }
        let mut out = Vec::with_capacity(map.len());
        for (m, (a, t)) in map {
            if a > MAX_EXPONENT || t > MAX_EXPONENT {
                return Err(resource(format!("exponent exceeds {MAX_EXPONENT}")));
            }
            if a + t > 0 {
                out.push((m, a as u8, t as u8));
            }
        }
        Ok(Self { exps: out })
    }

    /// `(character, a-exponent, t-exponent)` ascending by character.
    pub fn exponents(&self) -> impl Iterator<Item = (Character, u32, u32)> + '_ {
        self.exps.iter().map(|&(m, a, t)| (Character::new(m).unwrap(), u32::from(a), u32::from(t)))
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> RepDegree {
        let m = self.exps.iter().map(|&(_, _, t)| i64::from(t)).sum();
        RepDegree::new(m, self.exponents().map(|(c, a, t)| (c, a + t)))
    }

    pub fn try_mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() || j < other.exps.len() {
            let x = self.exps.get(i);
            let y = other.exps.get(j);
            match (x, y) {
                (Some(&a), Some(&b)) if a.0 == b.0 => {
                    let ea = a.1.checked_add(b.1);
                    let et = a.2.checked_add(b.2);
                    match (ea, et) {
                        (Some(ea), Some(et)) => out.push((a.0, ea, et)),
                        _ => return Err(resource(format!("exponent exceeds {MAX_EXPONENT}"))),
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&a), Some(&b)) if a.0 < b.0 => {
                    out.push(a);
                    i += 1;
                }
                (Some(_), Some(&b)) => {
                    out.push(b);
                    j += 1;
                }
                (Some(&a), None) => {
                    out.push(a);
                    i += 1;
                }
                (None, Some(&b)) => {
                    out.push(b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Ok(Monomial { exps: out })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        for &(m, a, t) in &self.exps {
            for (name, e) in [("a", a), ("t", t)] {
                match e {
                    0 => {}
                    1 => write!(f, "{name}[{m}]")?,
                    e => write!(f, "{name}[{m}]^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A polynomial with GF(2) coefficients: a set of monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AtPolynomial {
    terms: BTreeSet<Monomial>,
}

impl AtPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Monomial::one().into()
    }

    pub fn a(c: Character) -> Self {
        Monomial::a(c).into()
    }

    pub fn t(c: Character) -> Self {
        Monomial::t(c).into()
    }

    /// Product of `t_λ` over the given characters.
    pub fn t_product(chars: &[Character]) -> Result<Self> {
        Ok(Monomial::from_exponents(chars.iter().map(|&c| (c, 0, 1)))?.into())
    }

    /// Product of `a_λ` over the given characters.
    pub fn a_product(chars: &[Character]) -> Result<Self> {
        Ok(Monomial::from_exponents(chars.iter().map(|&c| (c, 1, 0)))?.into())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Self::zero();
        for m in terms {
            p.add_monomial(m);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    /// Adds a single monomial (cancelling if already present).
    pub fn add_monomial(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &AtPolynomial) {
        for m in &other.terms {
            self.add_monomial(m.clone());
        }
    }

    pub fn add(&self, other: &AtPolynomial) -> AtPolynomial {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn try_mul(&self, other: &AtPolynomial) -> Result<AtPolynomial> {
        let mut out = AtPolynomial::zero();
        for x in &self.terms {
            for y in &other.terms {
                out.add_monomial(x.try_mul(y)?);
            }
        }
        Ok(out)
    }

    /// The common degree of all terms; `None` for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<RepDegree>> {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else { return Ok(None) };
        let d = first.degree();
        for m in it {
            if m.degree() != d {
                return Err(invalid(format!("polynomial is not homogeneous: {d} vs {}", m.degree())));
            }
        }
        Ok(Some(d))
    }

    /// Largest character mask occurring in the polynomial.
    pub fn max_mask(&self) -> u32 {
        self.terms.iter().flat_map(|m| m.exps.iter().map(|e| e.0)).max().unwrap_or(0)
    }
}

impl From<Monomial> for AtPolynomial {
    fn from(m: Monomial) -> Self {
        Self { terms: BTreeSet::from([m]) }
    }
}

impl std::ops::Add for &AtPolynomial {
    type Output = AtPolynomial;
    fn add(self, rhs: &AtPolynomial) -> AtPolynomial {
        AtPolynomial::add(self, rhs)
    }
}

impl std::ops::Mul for &AtPolynomial {
    type Output = AtPolynomial;

    /// # Panics
    /// Panics if an exponent exceeds [`MAX_EXPONENT`]; use
    /// [`AtPolynomial::try_mul`] to handle that case.
    fn mul(self, rhs: &AtPolynomial) -> AtPolynomial {
        self.try_mul(rhs).expect("exponent cap exceeded")
    }
}

impl fmt::Display for AtPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AtPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for AtPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::one());
        }
        let bytes = s.as_bytes();
        let mut i = 0;
        let mut factors = Vec::new();
        let bad = |msg: &str| Error::Parse(format!("{msg} in term {s:?}"));
        let number = |i: &mut usize| -> Result<u32> {
            let start = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            s[start..*i].parse().map_err(|_| bad("expected a number"))
        };
        while i < bytes.len() {
            let is_a = match bytes[i] {
                b'a' => true,
                b't' => false,
                _ => return Err(bad("expected 'a' or 't'")),
            };
            i += 1;
            if bytes.get(i) != Some(&b'[') {
                return Err(bad("expected '['"));
            }
            i += 1;
            let mask = number(&mut i)?;
            if bytes.get(i) != Some(&b']') {
                return Err(bad("expected ']'"));
            }
            i += 1;
            let mut e = 1;
            if bytes.get(i) == Some(&b'^') {
                i += 1;
                e = number(&mut i)?;
            }
            let c = Character::new(mask).map_err(|_| bad("character mask must be nonzero"))?;
            factors.push(if is_a { (c, e, 0) } else { (c, 0, e) });
        }
        if factors.is_empty() {
            return Err(bad("empty term"));
        }
        Monomial::from_exponents(factors)
    }
}

impl FromStr for AtPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(AtPolynomial::zero());
        }
        let mut p = AtPolynomial::zero();
        for term in s.split('+') {
            p.add_monomial(term.parse()?);
        }
        Ok(p)
    }
}

/// Number of monomials of degree `d`: the coefficient of `x^m` in
/// `Π_λ (1 + x + ... + x^{w_λ})`.
pub fn count_monomials(d: &RepDegree) -> u128 {
    if d.m < 0 || d.m > i64::from(d.dim()) {
        return 0;
    }
    let m = d.m as usize;
    let mut coeffs = vec![0u128; m + 1];
    coeffs[0] = 1;
    for &(_, w) in &d.rep {
        let w = w as usize;
        let mut next = vec![0u128; m + 1];
        // Sliding window sum over the last w + 1 coefficients.
        let mut window = 0u128;
        for j in 0..=m {
            window += coeffs[j];
            if j > w {
                window -= coeffs[j - w - 1];
            }
            next[j] = window;
        }
        coeffs = next;
    }
    coeffs[m]
}

/// All monomials `Π a_λ^{w_λ - s_λ} t_λ^{s_λ}` of degree `d`, in
/// lexicographic order of the vector `(s_λ)` over the support of `W`.
pub fn monomials_of_degree(d: &RepDegree) -> Result<Vec<Monomial>> {
    if d.rep.iter().any(|&(_, w)| w > MAX_EXPONENT) {
        return Err(resource(format!("multiplicity exceeds {MAX_EXPONENT}")));
    }
    let mut out = Vec::new();
    if d.m < 0 || d.m > i64::from(d.dim()) {
        return Ok(out);
    }
    let ws: Vec<u32> = d.rep.iter().map(|&(_, w)| w).collect();
    // suffix[i] = Σ_{j ≥ i} w_j bounds what the remaining characters can absorb.
    let mut suffix = vec![0u32; ws.len() + 1];
    for i in (0..ws.len()).rev() {
        suffix[i] = suffix[i + 1] + ws[i];
    }
    let mut s = vec![0u32; ws.len()];
    fn rec(i: usize, left: u32, ws: &[u32], suffix: &[u32], s: &mut [u32], d: &RepDegree, out: &mut Vec<Monomial>) {
        if i == ws.len() {
            if left == 0 {
                let exps =
                    d.rep.iter().zip(s.iter()).map(|(&(c, w), &si)| (c.mask(), (w - si) as u8, si as u8)).collect();
                out.push(Monomial { exps });
            }
            return;
        }
        let lo = left.saturating_sub(suffix[i + 1]);
        for si in lo..=ws[i].min(left) {
            s[i] = si;
            rec(i + 1, left - si, ws, suffix, s, d, out);
        }
    }
    rec(0, d.m as u32, &ws, &suffix, &mut s, d, &mut out);
    Ok(out)
}

/// `r(T) = Σ_{λ∈T} a_λ Π_{μ∈T∖λ} t_μ`.
pub fn relation_polynomial(set: &[Character]) -> Result<AtPolynomial> {
    if set.is_empty() {
        return Err(invalid("relation polynomial of an empty set"));
    }
    let mut sorted = set.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("duplicate characters in relation set"));
    }
    let terms = sorted.iter().map(|&lambda| {
        Monomial::from_exponents(sorted.iter().map(|&mu| if mu == lambda { (mu, 1, 0) } else { (mu, 0, 1) }))
            .expect("exponents are at most one")
    });
    Ok(AtPolynomial::from_terms(terms))
}

/// The derivation with `β(a_λ) = 0` and `β(t_λ) = a_λ`.
pub fn bockstein(f: &AtPolynomial) -> Result<AtPolynomial> {
    let mut out = AtPolynomial::zero();
    for m in &f.terms {
        for (i, &(mask, a, t)) in m.exps.iter().enumerate() {
            // β(t^τ) = τ·t^{τ-1}·a, which vanishes for even τ.
            if t % 2 == 1 {
                let a = a.checked_add(1).ok_or_else(|| resource(format!("exponent exceeds {MAX_EXPONENT}")))?;
                let mut exps = m.exps.clone();
                exps[i] = (mask, a, t - 1);
                out.add_monomial(Monomial { exps });
            }
        }
    }
    Ok(out)
}

/// Restriction to `K = ker λ`: `a_λ ↦ 0`, `t_λ ↦ 1`, and `a_μ ↦ a_{q(μ)}`,
/// `t_μ ↦ t_{q(μ)}` for the quotient map `q` onto `K`-characters.
pub fn restrict_to_kernel(f: &AtPolynomial, lambda: Character) -> Result<AtPolynomial> {
    let q = kernel_quotient(lambda);
    let mut out = AtPolynomial::zero();
    'terms: for m in &f.terms {
        let mut factors = Vec::with_capacity(m.exps.len());
        for &(mask, a, t) in &m.exps {
            if mask == lambda.mask() {
                if a > 0 {
                    continue 'terms;
                }
                continue;
            }
            let image = q.image(Character::new(mask)?).expect("only λ itself becomes trivial on K");
            factors.push((image, u32::from(a), u32::from(t)));
        }
        out.add_monomial(Monomial::from_exponents(factors)?);
    }
    Ok(out)
}

/// Degree of the restriction of a degree-`d` class to `ker λ`: the integer
/// degree drops by the multiplicity of `λ`, and the remaining characters map
/// through the quotient.
pub fn restrict_degree(d: &RepDegree, lambda: Character) -> RepDegree {
    let q = kernel_quotient(lambda);
    let k = d.multiplicity(lambda);
    RepDegree::new(
        d.m - i64::from(k),
        d.rep.iter().filter(|&&(c, _)| c != lambda).map(|&(c, w)| (q.image(c).unwrap(), w)),
    )
}
