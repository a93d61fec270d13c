//! Named verification suites. Each suite runs a family of checks at one rank
//! and returns a [`SuiteReport`]; a time budget can stop a suite early, in
//! which case the report is marked incomplete.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{all_characters, mask_sum, Character, GroupRank, Subgroup};
use crate::error::{invalid, Error, Result};
use crate::localization::{
    check_redundancy_identities, default_stabilization_n, gfp_stabilization_check, trivial_b_dimension,
    verify_local_relations, Stabilization,
};
use crate::oracle::{table_row, Oracle};
use crate::presentation::{
    degrees_up_to, exactness_row, product_nonzero_check, relation_span_with, restriction_surjectivity_check,
    verify_minimality, Caps, QuotientPiece,
};
use crate::ring::{bockstein, relation_polynomial, AtPolynomial, Monomial, RepDegree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Presentation,
    Minimality,
    Identities,
    Localization,
    Bockstein,
    Restriction,
    Domain,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Presentation,
        Suite::Minimality,
        Suite::Identities,
        Suite::Localization,
        Suite::Bockstein,
        Suite::Restriction,
        Suite::Domain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Presentation => "presentation",
            Suite::Minimality => "minimality",
            Suite::Identities => "identities",
            Suite::Localization => "localization",
            Suite::Bockstein => "bockstein",
            Suite::Restriction => "restriction",
            Suite::Domain => "domain",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Wall-clock limit shared by the checks of one suite run.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self { deadline: None }
    }

    pub fn seconds(secs: f64) -> Self {
        Self { deadline: Some(Instant::now() + Duration::from_secs_f64(secs)) }
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Failures kept verbatim in a report; the count is always exact.
const MAX_LISTED_FAILURES: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub rank: u32,
    pub seed: u64,
    pub checks: u64,
    pub failed: u64,
    pub failures: Vec<String>,
    /// False when the budget ran out before every check was run.
    pub complete: bool,
}

impl SuiteReport {
    fn new(suite: Suite, rank: GroupRank, seed: u64) -> Self {
        Self { suite, rank: rank.get(), seed, checks: 0, failed: 0, failures: Vec::new(), complete: true }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_LISTED_FAILURES {
                self.failures.push(what());
            }
        }
    }

    pub fn pass(&self) -> bool {
        self.complete && self.failed == 0
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SuiteOptions {
    pub seed: u64,
    pub caps: Caps,
}

pub fn run_suite(suite: Suite, rank: GroupRank, opts: &SuiteOptions, budget: &Budget) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(suite, rank, opts.seed);
    match suite {
        Suite::Presentation => presentation_suite(rank, opts, budget, &mut report)?,
        Suite::Minimality => {
            let m = verify_minimality(rank, &Oracle::new(), &opts.caps)?;
            for e in m.entries {
                report.record(e.pass, || format!("circuit {:?}", e.members));
            }
        }
        Suite::Identities => {
            let (checked, failures) = check_redundancy_identities(rank)?;
            report.checks = checked as u64;
            report.failed = failures.len() as u64;
            report.failures = failures.iter().take(MAX_LISTED_FAILURES).map(|f| format!("{f:?}")).collect();
        }
        Suite::Localization => localization_suite(rank, opts, budget, &mut report)?,
        Suite::Bockstein => bockstein_suite(rank, opts, budget, &mut report)?,
        Suite::Restriction => restriction_suite(rank, opts, budget, &mut report)?,
        Suite::Domain => domain_suite(rank, opts, budget, &mut report)?,
    }
    Ok(report)
}

/// Largest `|W|` swept exhaustively by the presentation suite at this rank.
pub fn sweep_total(rank: GroupRank) -> u32 {
    match rank.get() {
        0..=3 => 6,
        _ => 5,
    }
}

/// Degrees sampled at ranks where the full sweep is too large.
pub const PRESENTATION_SAMPLE: usize = 500;

/// Every degree of the sweep at ranks up to 3, a seeded sample of
/// [`PRESENTATION_SAMPLE`] degrees above that.
pub fn presentation_degrees(rank: GroupRank, seed: u64) -> Vec<RepDegree> {
    let total = sweep_total(rank);
    let mut degrees = degrees_up_to(rank, total, i64::from(total));
    if rank.get() > 3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        degrees.shuffle(&mut rng);
        degrees.truncate(PRESENTATION_SAMPLE);
        degrees.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.rep().cmp(b.rep())).then(a.m().cmp(&b.m())));
    }
    degrees
}

/// Runs `check` over `items` in parallel chunks, stopping between chunks when
/// the budget expires. Results are recorded in input order.
fn chunked<T: Sync, F>(items: &[T], budget: &Budget, report: &mut SuiteReport, check: F) -> Result<()>
where
    F: Fn(&T) -> Result<(bool, String)> + Sync,
{
    for chunk in items.chunks(256) {
        if budget.expired() {
            report.complete = false;
            return Ok(());
        }
        let results: Vec<(bool, String)> = chunk.par_iter().map(&check).collect::<Result<_>>()?;
        for (ok, what) in results {
            report.record(ok, || what);
        }
    }
    Ok(())
}

fn presentation_suite(rank: GroupRank, opts: &SuiteOptions, budget: &Budget, report: &mut SuiteReport) -> Result<()> {
    let oracle = Oracle::new();
    let degrees = presentation_degrees(rank, opts.seed);
    chunked(&degrees, budget, report, |d| {
        let row = table_row(&oracle, rank, d, &opts.caps)?;
        Ok((row.matches, format!("{d}: linear {} oracle {}", row.dim_linear, row.dim_oracle)))
    })?;
    if rank.get() == 0 || !report.complete {
        return Ok(());
    }
    // The exact sequence, evaluated on the presented ring alone.
    let mut cases = Vec::new();
    for v in degrees_up_to(rank, sweep_total(rank) - 1, 0) {
        if rank.get() > 3 && cases.len() >= PRESENTATION_SAMPLE {
            break;
        }
        for lambda in all_characters(rank) {
            cases.push((v.clone(), lambda));
        }
    }
    chunked(&cases, budget, report, |(v, lambda)| {
        for m in 0..=i64::from(v.dim()) + 1 {
            let row = exactness_row(rank, v, *lambda, m, &opts.caps)?;
            if !row.holds() {
                return Ok((false, format!("V={v} λ={lambda} m={m}: {row:?}")));
            }
        }
        Ok((true, String::new()))
    })
}

/// Every `T ⊆ A°` with `|T| ≤ max_size` and `Σ T = 0`.
pub fn product_one_sets(rank: GroupRank, max_size: usize) -> Vec<Vec<Character>> {
    let chars = all_characters(rank);
    let mut out = Vec::new();
    fn rec(start: usize, chars: &[Character], cur: &mut Vec<Character>, max: usize, out: &mut Vec<Vec<Character>>) {
        if !cur.is_empty() && mask_sum(cur.iter()) == 0 {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for i in start..chars.len() {
            cur.push(chars[i]);
            rec(i + 1, chars, cur, max, out);
            cur.pop();
        }
    }
    rec(0, &chars, &mut Vec::new(), max_size, &mut out);
    out
}

/// A random polynomial with up to `terms` terms and small exponents.
pub fn random_polynomial(rank: GroupRank, terms: usize, rng: &mut impl Rng) -> AtPolynomial {
    let chars = all_characters(rank);
    AtPolynomial::from_terms((0..rng.gen_range(0..=terms)).map(|_| {
        let factors = (0..rng.gen_range(0..=3)).map(|_| {
            let c = chars[rng.gen_range(0..chars.len())];
            (c, rng.gen_range(0..=2), rng.gen_range(0..=2))
        });
        Monomial::from_exponents(factors).expect("small exponents")
    }))
}

/// Number of random pairs in the derivation check.
pub const DERIVATION_TRIALS: usize = 1000;

fn bockstein_suite(rank: GroupRank, opts: &SuiteOptions, budget: &Budget, report: &mut SuiteReport) -> Result<()> {
    if rank.get() == 0 {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..DERIVATION_TRIALS {
        let f = random_polynomial(rank, 4, &mut rng);
        let g = random_polynomial(rank, 4, &mut rng);
        let lhs = bockstein(&f.try_mul(&g)?)?;
        let rhs = bockstein(&f)?.try_mul(&g)?.add(&f.try_mul(&bockstein(&g)?)?);
        report.record(lhs == rhs, || format!("Leibniz fails for f={f}, g={g}"));
    }
    for t in product_one_sets(rank, 5) {
        let ok = bockstein(&AtPolynomial::t_product(&t)?)? == relation_polynomial(&t)?;
        report.record(ok, || format!("β(t_T) ≠ r(T) for T={t:?}"));
    }
    if rank.get() > 3 {
        return Ok(());
    }
    let degrees: Vec<RepDegree> = degrees_up_to(rank, 5, 5).into_iter().filter(|d| d.m() >= 2).collect();
    chunked(&degrees, budget, report, |d| {
        let span = relation_span_with(rank, d, &opts.caps)?;
        if span.relation_matrix.nrows() == 0 {
            return Ok((true, String::new()));
        }
        let target = QuotientPiece::new(rank, &d.with_m(d.m() - 1), &opts.caps)?;
        for row in span.relation_matrix.rows() {
            let f = AtPolynomial::from_terms(row.iter_ones().map(|i| span.basis_monomials[i].clone()));
            if !target.is_zero(&bockstein(&f)?)? {
                return Ok((false, format!("β({f}) not in the ideal")));
            }
        }
        Ok((true, String::new()))
    })
}

fn localization_suite(rank: GroupRank, opts: &SuiteOptions, budget: &Budget, report: &mut SuiteReport) -> Result<()> {
    if rank.get() > 4 {
        return Err(invalid("the localization suite enumerates subgroups and is capped at rank 4"));
    }
    for b in Subgroup::all(rank)? {
        if budget.expired() {
            report.complete = false;
            return Ok(());
        }
        let r = verify_local_relations(rank, &b, false, &opts.caps)?;
        report.record(r.pass(), || format!("B={:?}: {r:?}", b.generators()));
    }
    let (checked, failures) = check_redundancy_identities(rank)?;
    report.record(failures.is_empty(), || format!("{} of {checked} redundancy identities fail", failures.len()));
    for d in 0..=6 {
        match trivial_b_dimension(rank, d, opts.caps.max_monomials) {
            Ok(_) => report.record(true, String::new),
            Err(Error::Mismatch(msg)) => report.record(false, || msg),
            Err(e) => return Err(e),
        }
    }
    if rank.get() <= 3 {
        for m in 0..=4 {
            let n0 = default_stabilization_n(m);
            for n in [n0, n0 + 1] {
                if budget.expired() {
                    report.complete = false;
                    return Ok(());
                }
                let s = gfp_stabilization_check(rank, m, n, &opts.caps)?;
                report.record(s.status == Stabilization::Stable, || format!("{s:?}"));
            }
        }
    }
    Ok(())
}

fn restriction_suite(rank: GroupRank, opts: &SuiteOptions, budget: &Budget, report: &mut SuiteReport) -> Result<()> {
    let degrees = degrees_up_to(rank, 4, 4);
    for lambda in all_characters(rank) {
        let b = Subgroup::kernel_of(rank, lambda)?;
        chunked(&degrees, budget, report, |d| {
            let r = restriction_surjectivity_check(rank, &b, d, &opts.caps)?;
            Ok((r.surjective && r.well_defined, format!("λ={lambda} {d}: {r:?}")))
        })?;
        if !report.complete {
            break;
        }
    }
    Ok(())
}

/// Random pairs in the domain spot check.
pub const DOMAIN_TRIALS: usize = 200;

fn domain_suite(rank: GroupRank, opts: &SuiteOptions, budget: &Budget, report: &mut SuiteReport) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let nonzero: Vec<RepDegree> = degrees_up_to(rank, 4, 4)
        .into_iter()
        .filter(|d| QuotientPiece::new(rank, d, &opts.caps).map(|p| p.dim() > 0).unwrap_or(false))
        .collect();
    for _ in 0..DOMAIN_TRIALS {
        if budget.expired() {
            report.complete = false;
            return Ok(());
        }
        let d1 = nonzero.choose(&mut rng).expect("degree zero is always nonzero");
        let d2 = nonzero.choose(&mut rng).expect("degree zero is always nonzero");
        let r = product_nonzero_check(rank, d1, d2, 1, rng.gen(), &opts.caps)?;
        report.record(r.pass(), || format!("{d1} × {d2}: {:?}", r.counterexamples));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rk(r: u32) -> GroupRank {
        GroupRank::new(r).unwrap()
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let opts = SuiteOptions::default();
        for s in Suite::ALL {
            let r = run_suite(s, rk(2), &opts, &Budget::unlimited()).unwrap();
            assert!(r.pass(), "{r:?}");
        }
    }

    #[test]
    fn expired_budget_marks_incomplete() {
        let r = run_suite(Suite::Presentation, rk(2), &SuiteOptions::default(), &Budget::seconds(0.0)).unwrap();
        assert!(!r.complete && !r.pass());
    }

    #[test]
    fn product_one_sets_rank_2() {
        let sets = product_one_sets(rk(2), 5);
        assert_eq!(sets.len(), 1);
    }
}
