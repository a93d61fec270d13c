//! `bredon`: dimension tables, circuit enumeration and counting, verification
//! suites and localization reports.
//!
//! Exit codes: 0 success, 1 mismatch between independent computations (or a
//! failed check), 2 usage or cap error, 3 budget exhausted.

use std::collections::HashSet;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bredon_core::characters::{GroupRank, Subgroup};
use bredon_core::circuits::{count_circuits_closed_form, count_circuits_enumerated, enumerate_circuits};
use bredon_core::localization::{
    build_local_presentation, default_stabilization_n, gfp_dimension, gfp_stabilization_check, trivial_b_dimension,
    verify_local_relations, Stabilization,
};
use bredon_core::oracle::{append_cache, dimension_table, load_cache, DimKey, Oracle, TableRow};
use bredon_core::presentation::{dimension_linear, dimension_oracle, Caps};
use bredon_core::ring::RepDegree;
use bredon_core::verify::{run_suite, Budget, Suite, SuiteOptions};
use bredon_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bredon", version, about = "Graded Bredon homology of elementary abelian 2-groups")]
struct Cli {
    /// Worker threads for sweeps and partitioned enumeration.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Add wall-clock time to the output envelope.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate minimally dependent character sets, or count them.
    Circuits(CircuitsArgs),
    /// Circuit counts from the closed formula, optionally cross-checked.
    Count(CountArgs),
    /// Dimension of one graded piece, by linear algebra and by the oracle.
    Dim(DimArgs),
    /// Dimensions of every degree in a range.
    Table(TableArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Degree pieces of the localization at the whole group.
    Gfp(GfpArgs),
    /// Presentation of a localized ring.
    Localize(LocalizeArgs),
    /// Load, verify or fill an oracle cache file.
    Cache(CacheArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CircuitsArgs {
    #[arg(long)]
    rank: u32,
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long)]
    count_only: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    rank: u32,
    /// Also count by full enumeration and compare.
    #[arg(long)]
    enumerate: bool,
}

#[derive(Args)]
struct CacheOpts {
    /// JSON-lines oracle cache; misses are appended.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Recompute every cached entry instead of trusting it.
    #[arg(long)]
    verify_cache: bool,
}

#[derive(Args)]
struct DimArgs {
    #[arg(long)]
    rank: u32,
    #[arg(long, allow_hyphen_values = true)]
    m: i64,
    /// Comma list of `mask[^mult]`, e.g. `1,2,3` or `1^2,3`.
    #[arg(long, default_value = "")]
    rep: String,
    #[command(flatten)]
    cache: CacheOpts,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    rank: u32,
    #[arg(long)]
    max_total: u32,
    /// Defaults to `--max-total`.
    #[arg(long)]
    max_m: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    cache: CacheOpts,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: Suite,
    #[arg(long)]
    rank: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    budget: Option<f64>,
}

#[derive(Args)]
struct GfpArgs {
    #[arg(long)]
    rank: u32,
    #[arg(long)]
    degree: u32,
    /// Compare against `H_m(A, Nρ)` and `H_m(A, (N+1)ρ)`.
    #[arg(long)]
    stabilize: bool,
    /// Multiple of `ρ` for `--stabilize`; defaults to degree + 1.
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Args)]
struct LocalizeArgs {
    #[arg(long)]
    rank: u32,
    /// Generators of B as element masks (`1,2`), or `whole` / `trivial`.
    #[arg(long)]
    subgroup: String,
    /// Check that relations clear into the ideal, plus the redundancy identities.
    #[arg(long)]
    verify: bool,
    /// Dimension in this integer degree; only for B = A or B = 1.
    #[arg(long, allow_hyphen_values = true)]
    degree: Option<i64>,
}

#[derive(Args)]
struct CacheArgs {
    #[arg(long)]
    cache: PathBuf,
    #[arg(long)]
    verify_cache: bool,
    /// Fill the cache with every degree of this rank up to `--max-total`.
    #[arg(long, requires = "max_total")]
    rank: Option<u32>,
    #[arg(long)]
    max_total: Option<u32>,
}

/// Why a command did not succeed.
enum Failure {
    Mismatch(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Mismatch(msg) => Failure::Mismatch(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("output error: {e}"))
    }
}

/// What a command produced: a payload for the envelope (or raw text) and
/// the exit code it asks for.
struct Output {
    payload: Option<Value>,
    seed: Option<u64>,
    text: Option<String>,
    code: u8,
}

impl Output {
    fn json(payload: Value, code: u8) -> Self {
        Self { payload: Some(payload), seed: None, text: None, code }
    }

    fn text(text: String, code: u8) -> Self {
        Self { payload: None, seed: None, text: Some(text), code }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match run(&cli.command) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let written = match (out.payload, out.text) {
                (Some(payload), _) => {
                    let mut env = json!({
                        "version": env!("CARGO_PKG_VERSION"),
                        "command": std::env::args().skip(1).collect::<Vec<_>>(),
                        "seed": out.seed,
                        "payload": payload,
                    });
                    if cli.timing {
                        env["timing_ms"] = json!(start.elapsed().as_millis() as u64);
                    }
                    writeln!(stdout, "{env}")
                }
                (None, Some(text)) => stdout.write_all(text.as_bytes()),
                (None, None) => Ok(()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("MISMATCH: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Circuits(a) => circuits(a),
        Command::Count(a) => count(a),
        Command::Dim(a) => dim(a),
        Command::Table(a) => table(a),
        Command::Verify(a) => verify(a),
        Command::Gfp(a) => gfp(a),
        Command::Localize(a) => localize(a),
        Command::Cache(a) => cache(a),
    }
}

fn circuits(a: &CircuitsArgs) -> Result<Output, Failure> {
    if a.count_only {
        let rank = GroupRank::new(a.rank)?;
        let mut counts = count_circuits_closed_form(rank);
        if let Some(s) = a.max_size {
            counts.by_size.retain(|&(k, _)| k <= s);
            counts.total = counts.by_size.iter().map(|(_, n)| n).sum();
        }
        return Ok(match a.format {
            Format::Json => Output::json(to_value(&counts), 0),
            Format::Csv => {
                let mut s = String::from("size,count\n");
                for (k, n) in &counts.by_size {
                    s.push_str(&format!("{k},{n}\n"));
                }
                s.push_str(&format!("total,{}\n", counts.total));
                Output::text(s, 0)
            }
        });
    }
    let rank = GroupRank::enumerable(a.rank)?;
    let iter = enumerate_circuits(rank, a.max_size)?;
    // Streamed straight to stdout: the full list is far too large to hold at
    // the upper ranks.
    let mut out = BufWriter::new(io::stdout().lock());
    if a.format == Format::Csv {
        writeln!(out, "size,members")?;
    }
    for c in iter {
        match a.format {
            Format::Json => writeln!(out, "{}", serde_json::to_string(&c).expect("circuits serialize"))?,
            Format::Csv => {
                let members: Vec<String> = c.masks().iter().map(u32::to_string).collect();
                writeln!(out, "{},{}", c.size(), members.join(" "))?
            }
        }
    }
    out.flush()?;
    Ok(Output { payload: None, seed: None, text: None, code: 0 })
}

fn count(a: &CountArgs) -> Result<Output, Failure> {
    let rank = GroupRank::new(a.rank)?;
    let counts = count_circuits_closed_form(rank);
    let mut payload = to_value(&counts);
    if a.enumerate {
        let by_size = count_circuits_enumerated(GroupRank::enumerable(a.rank)?, true)?;
        let agree = counts.by_size.iter().all(|(k, n)| n.to_string() == by_size[*k].to_string())
            && by_size.iter().sum::<u64>().to_string() == counts.total.to_string();
        let enumerated: Vec<(usize, u64)> = by_size.iter().copied().enumerate().filter(|&(k, _)| k >= 3).collect();
        payload["enumerated"] = json!(enumerated);
        payload["match"] = json!(agree);
        if !agree {
            return Ok(Output::json(payload, 1));
        }
    }
    Ok(Output::json(payload, 0))
}

/// An oracle seeded from the cache file, if one was given.
struct CachedOracle<'a> {
    oracle: Oracle,
    path: Option<&'a Path>,
    known: HashSet<DimKey>,
    mismatches: usize,
}

impl<'a> CachedOracle<'a> {
    fn open(opts: &'a CacheOpts) -> Result<Self, Failure> {
        let oracle = Oracle::new();
        let (known, mismatches) = match &opts.cache {
            Some(p) => {
                let load = load_cache(&oracle, p, opts.verify_cache)?;
                (load.keys, load.mismatches.len())
            }
            None => (HashSet::new(), 0),
        };
        Ok(Self { oracle, path: opts.cache.as_deref(), known, mismatches })
    }

    fn close(self) -> Result<usize, Failure> {
        if self.mismatches > 0 {
            return Err(Failure::Mismatch(format!("{} cache entries disagree with recomputation", self.mismatches)));
        }
        match self.path {
            Some(p) => Ok(append_cache(&self.oracle, p, &self.known)?),
            None => Ok(0),
        }
    }
}

fn dim(a: &DimArgs) -> Result<Output, Failure> {
    let rank = GroupRank::enumerable(a.rank)?;
    let d = RepDegree::parse_rep(a.m, &a.rep)?;
    d.check_rank(rank)?;
    let cached = CachedOracle::open(&a.cache)?;
    let linear = dimension_linear(rank, &d, &Caps::default())?;
    let oracle = dimension_oracle(&cached.oracle, rank, &d)?;
    cached.close()?;
    let matched = linear.dim == oracle.dim;
    let payload = json!({
        "rank": a.rank,
        "dim": linear.dim,
        "linear": to_value(&linear),
        "oracle": to_value(&oracle),
        "match": matched,
    });
    if !matched {
        eprintln!("MISMATCH: linear algebra gives {}, oracle gives {}", linear.dim, oracle.dim);
    }
    Ok(Output::json(payload, if matched { 0 } else { 1 }))
}

/// Frozen CSV column order.
const TABLE_HEADER: &str = "rank,m,rep,monomials,relation_rank,dim_linear,dim_oracle,match";

fn table_csv(rows: &[TableRow]) -> String {
    let mut s = format!("{TABLE_HEADER}\n");
    for r in rows {
        let rep = RepDegree::new(r.m, r.rep.iter().copied()).rep_string();
        s.push_str(&format!(
            "{},{},\"{}\",{},{},{},{},{}\n",
            r.rank, r.m, rep, r.monomials, r.relation_rank, r.dim_linear, r.dim_oracle, r.matches
        ));
    }
    s
}

fn table(a: &TableArgs) -> Result<Output, Failure> {
    let rank = GroupRank::enumerable(a.rank)?;
    let cached = CachedOracle::open(&a.cache)?;
    let rows = dimension_table(
        &cached.oracle,
        rank,
        a.max_total,
        a.max_m.unwrap_or(i64::from(a.max_total)),
        &Caps::default(),
    )?;
    cached.close()?;
    let mismatches = rows.iter().filter(|r| !r.matches).count();
    if mismatches > 0 {
        eprintln!("MISMATCH: {mismatches} degrees disagree");
    }
    let code = if mismatches == 0 { 0 } else { 1 };
    Ok(match a.format {
        Format::Json => Output::json(json!({ "rows": to_value(&rows), "mismatches": mismatches }), code),
        Format::Csv => Output::text(table_csv(&rows), code),
    })
}

fn verify(a: &VerifyArgs) -> Result<Output, Failure> {
    let rank = GroupRank::enumerable(a.rank)?;
    let budget = a.budget.map_or(Budget::unlimited(), Budget::seconds);
    let report = run_suite(a.suite, rank, &SuiteOptions { seed: a.seed, caps: Caps::default() }, &budget)?;
    let code = if !report.complete {
        3
    } else if report.failed > 0 {
        1
    } else {
        0
    };
    let mut out = Output::json(to_value(&report), code);
    out.seed = Some(a.seed);
    Ok(out)
}

fn gfp(a: &GfpArgs) -> Result<Output, Failure> {
    let rank = GroupRank::enumerable(a.rank)?;
    let caps = Caps::default();
    let dim = gfp_dimension(rank, a.degree, caps.max_monomials)?;
    let mut payload = json!({ "rank": a.rank, "degree": a.degree, "dim": dim });
    let mut code = 0;
    if a.stabilize {
        let m = i64::from(a.degree);
        let n = a.n.unwrap_or_else(|| default_stabilization_n(m));
        let report = gfp_stabilization_check(rank, m, n, &caps)?;
        if report.status == Stabilization::Mismatch {
            eprintln!("MISMATCH: stable multigraded dimension {} differs from {}", report.dim_n, report.gfp);
            code = 1;
        }
        payload["stabilization"] = to_value(&report);
    }
    Ok(Output::json(payload, code))
}

fn parse_subgroup(rank: GroupRank, spec: &str) -> Result<Subgroup, Failure> {
    match spec.trim() {
        "whole" => Ok(Subgroup::whole(rank)),
        "trivial" | "" => Ok(Subgroup::trivial(rank)),
        list => {
            let elems = list
                .split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| Failure::Usage(format!("bad subgroup element {x:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Subgroup::new(rank, &elems)?)
        }
    }
}

fn localize(a: &LocalizeArgs) -> Result<Output, Failure> {
    let rank = GroupRank::enumerable(a.rank)?;
    let b = parse_subgroup(rank, &a.subgroup)?;
    let pres = build_local_presentation(rank, &b)?;
    let mut payload = to_value(&pres);
    let mut code = 0;
    if a.verify {
        let report = verify_local_relations(rank, &b, true, &Caps::default())?;
        if !report.pass() {
            code = 1;
        }
        payload["verification"] = to_value(&report);
    }
    if let Some(d) = a.degree {
        let cap = Caps::default().max_monomials;
        let dim = if pres.e_gens.is_empty() {
            if d < 0 {
                0
            } else {
                gfp_dimension(rank, d as u32, cap)?
            }
        } else if pres.x_gens.is_empty() {
            if d > 0 {
                0
            } else {
                trivial_b_dimension(rank, d.unsigned_abs() as u32, cap)?
            }
        } else {
            return Err(Failure::Usage(
                "graded dimensions are only computed for B = A and B = 1; mixed B has infinite monomial bases".into(),
            ));
        };
        payload["degree"] = json!(d);
        payload["dim"] = json!(dim);
    }
    Ok(Output::json(payload, code))
}

fn cache(a: &CacheArgs) -> Result<Output, Failure> {
    let oracle = Oracle::new();
    let load = load_cache(&oracle, &a.cache, a.verify_cache)?;
    let mut appended = 0;
    if let (Some(r), Some(total)) = (a.rank, a.max_total) {
        let rank = GroupRank::enumerable(r)?;
        for d in bredon_core::presentation::degrees_up_to(rank, total, i64::from(total)) {
            oracle.dimension(rank, &d)?;
        }
        appended = append_cache(&oracle, &a.cache, &load.keys)?;
    }
    let code = if load.mismatches.is_empty() { 0 } else { 1 };
    if code == 1 {
        eprintln!("MISMATCH: {} cache entries disagree with recomputation", load.mismatches.len());
    }
    let payload = json!({
        "entries": load.entries,
        "verified": load.verified,
        "mismatches": to_value(&load.mismatches),
        "appended": appended,
    });
    Ok(Output::json(payload, code))
}
